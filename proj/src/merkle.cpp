#include <contour/merkle.hpp>

namespace contour {

digest32 statement_leaf_hash(const digest32& digest) {
    sha256_ctx ctx;
    uint8_t prefix = 0x00;
    ctx.update(byte_span(&prefix, 1));
    ctx.update(digest.span());
    return ctx.finish();
}

digest32 statement_node_hash(const digest32& left, const digest32& right) {
    sha256_ctx ctx;
    uint8_t prefix = 0x01;
    ctx.update(byte_span(&prefix, 1));
    ctx.update(left.span());
    ctx.update(right.span());
    return ctx.finish();
}

statement_tree::statement_tree(std::vector<digest32> digests) {
    if (digests.empty()) fail(errc::empty_batch, "statement tree needs at least one digest");
    std::vector<digest32> level;
    level.reserve(digests.size());
    for (const digest32& d : digests) level.push_back(statement_leaf_hash(d));
    levels_.push_back(std::move(level));
    while (levels_.back().size() > 1) {
        const std::vector<digest32>& prev = levels_.back();
        std::vector<digest32> next;
        next.reserve((prev.size() + 1) / 2);
        for (size_t i = 0; i + 1 < prev.size(); i += 2)
            next.push_back(statement_node_hash(prev[i], prev[i + 1]));
        if (prev.size() % 2 == 1) next.push_back(prev.back());
        levels_.push_back(std::move(next));
    }
}

merkle_branch statement_tree::branch(size_t index) const {
    if (index >= leaf_count()) fail(errc::range, "leaf index out of range");
    merkle_branch out;
    size_t pos = index;
    int bit = 0;
    for (size_t lvl = 0; lvl + 1 < levels_.size(); ++lvl) {
        const std::vector<digest32>& nodes = levels_[lvl];
        if (pos % 2 == 1) {
            out.siblings.push_back(nodes[pos - 1]);
            out.leaf_index |= uint64_t(1) << bit++;
        } else if (pos + 1 < nodes.size()) {
            out.siblings.push_back(nodes[pos + 1]);
            ++bit;
        }
        pos /= 2;
    }
    return out;
}

digest32 statement_root(const std::vector<digest32>& digests) {
    return statement_tree(digests).root();
}

bool verify_statement_branch(const digest32& digest, const merkle_branch& branch,
                             const digest32& root) {
    if (branch.siblings.size() >= 64) return false;
    if (branch.leaf_index >> branch.siblings.size() != 0) return false;
    digest32 node = statement_leaf_hash(digest);
    for (size_t i = 0; i < branch.siblings.size(); ++i) {
        const digest32& sib = branch.siblings[i];
        node = (branch.leaf_index >> i & 1) ? statement_node_hash(sib, node)
                                            : statement_node_hash(node, sib);
    }
    return node == root;
}

namespace {

digest32 btc_node_hash(const digest32& left, const digest32& right) {
    sha256_ctx ctx;
    ctx.update(left.span());
    ctx.update(right.span());
    digest32 first = ctx.finish();
    return sha256(first.span());
}

std::vector<std::vector<digest32>> btc_levels(const std::vector<digest32>& txids) {
    if (txids.empty()) fail(errc::empty_batch, "block needs at least one transaction");
    std::vector<std::vector<digest32>> levels{txids};
    while (levels.back().size() > 1) {
        const std::vector<digest32>& prev = levels.back();
        std::vector<digest32> next;
        next.reserve((prev.size() + 1) / 2);
        for (size_t i = 0; i < prev.size(); i += 2) {
            const digest32& right = i + 1 < prev.size() ? prev[i + 1] : prev[i];
            next.push_back(btc_node_hash(prev[i], right));
        }
        levels.push_back(std::move(next));
    }
    return levels;
}

} // namespace

digest32 bitcoin_tx_root(const std::vector<digest32>& txids) {
    return btc_levels(txids).back().front();
}

merkle_branch bitcoin_tx_branch(const std::vector<digest32>& txids, size_t index) {
    if (index >= txids.size()) fail(errc::range, "tx index out of range");
    std::vector<std::vector<digest32>> levels = btc_levels(txids);
    merkle_branch out;
    out.leaf_index = index;
    size_t pos = index;
    for (size_t lvl = 0; lvl + 1 < levels.size(); ++lvl) {
        const std::vector<digest32>& nodes = levels[lvl];
        size_t sib = pos % 2 == 1 ? pos - 1 : pos + 1;
        if (sib >= nodes.size()) sib = pos;
        out.siblings.push_back(nodes[sib]);
        pos /= 2;
    }
    return out;
}

bool verify_bitcoin_tx_branch(const digest32& txid, const merkle_branch& branch,
                              const digest32& root) {
    if (branch.siblings.size() >= 64) return false;
    if (branch.leaf_index >> branch.siblings.size() != 0) return false;
    digest32 node = txid;
    for (size_t i = 0; i < branch.siblings.size(); ++i) {
        const digest32& sib = branch.siblings[i];
        node = (branch.leaf_index >> i & 1) ? btc_node_hash(sib, node) : btc_node_hash(node, sib);
    }
    return node == root;
}

} // namespace contour
