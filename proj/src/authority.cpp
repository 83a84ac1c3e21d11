#include <contour/authority.hpp>

#include <json.hpp>

#include <fstream>

namespace contour {

std::string format_manifest(const std::vector<manifest_entry>& entries) {
    std::string out;
    for (const manifest_entry& e : entries) {
        out += e.digest.hex();
        out += ' ';
        out += e.filename;
        out += '\n';
    }
    return out;
}

std::vector<manifest_entry> parse_manifest(std::string_view text) {
    std::vector<manifest_entry> out;
    size_t pos = 0;
    while (pos < text.size()) {
        size_t eol = text.find('\n', pos);
        if (eol == std::string_view::npos) fail(errc::format, "manifest line missing newline");
        std::string_view line = text.substr(pos, eol - pos);
        pos = eol + 1;
        if (line.size() < 66 || line[64] != ' ')
            fail(errc::format, "manifest line must be digest, space, filename");
        manifest_entry e;
        e.digest = digest32::from_hex(line.substr(0, 64));
        e.filename = std::string(line.substr(65));
        out.push_back(std::move(e));
    }
    return out;
}

void batch::add(const digest32& digest, const std::string& filename) {
    if (status_ != batch_status::open) fail(errc::sealed, "batch already committed");
    if (filename.empty() || filename.find('\n') != std::string::npos)
        fail(errc::format, "filename must be non-empty and newline-free");
    if (!seen_.insert(digest).second) fail(errc::duplicate, "digest already in batch");
    entries_.push_back({digest, filename});
}

digest32 batch::root() const {
    std::vector<digest32> digests;
    digests.reserve(entries_.size());
    for (const manifest_entry& e : entries_) digests.push_back(e.digest);
    return statement_root(digests);
}

const digest32& batch::commit_txid() const {
    if (status_ == batch_status::open) fail(errc::not_committed, "batch not committed");
    return txid_;
}

const digest32& batch::block_hash() const {
    if (status_ != batch_status::confirmed) fail(errc::not_confirmed, "batch not confirmed");
    return block_hash_;
}

uint32_t batch::height() const {
    if (status_ != batch_status::confirmed) fail(errc::not_confirmed, "batch not confirmed");
    return height_;
}

size_t batch::tx_index() const {
    if (status_ != batch_status::confirmed) fail(errc::not_confirmed, "batch not confirmed");
    return tx_index_;
}

bool batch_due(const batch& b, int64_t opened_at, int64_t now, const batch_policy& policy) {
    if (b.size() == 0) return false;
    return b.size() >= policy.max_entries || now - opened_at >= policy.max_age_secs;
}

namespace {

nlohmann::json wallet_to_json(const ec_key& key, const std::vector<wallet_utxo>& utxos) {
    nlohmann::json j;
    j["privkey"] = to_hex(byte_span(key.secret().data(), 32));
    j["utxos"] = nlohmann::json::array();
    for (const wallet_utxo& u : utxos)
        j["utxos"].push_back({{"txid", u.prevout.txid.hex()},
                              {"vout", u.prevout.vout},
                              {"value_sat", u.value}});
    return j;
}

} // namespace

wallet wallet::load(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in.good()) fail(errc::io, "cannot open wallet file: " + path.string());
    nlohmann::json j;
    try {
        in >> j;
        wallet w(ec_key::from_hex(j.at("privkey").get<std::string>()));
        for (const auto& u : j.at("utxos"))
            w.add_utxo({digest32::from_hex(u.at("txid").get<std::string>()),
                        u.at("vout").get<uint32_t>()},
                       u.at("value_sat").get<int64_t>());
        return w;
    } catch (const nlohmann::json::exception& e) {
        fail(errc::format, std::string("malformed wallet file: ") + e.what());
    }
}

void wallet::save(const std::filesystem::path& path) const {
    std::string text = wallet_to_json(key_, utxos_).dump(2);
    text += '\n';
    atomic_write_file(path, str_span(text));
}

int64_t wallet::balance() const {
    int64_t sum = 0;
    for (const wallet_utxo& u : utxos_) sum += u.value;
    return sum;
}

void wallet::add_utxo(const outpoint& op, int64_t value) {
    for (const wallet_utxo& u : utxos_)
        if (u.prevout == op) fail(errc::duplicate, "outpoint already in wallet");
    utxos_.push_back({op, value});
}

funding_source wallet::take_funding(int64_t min_value) {
    for (size_t i = 0; i < utxos_.size(); ++i) {
        if (utxos_[i].value >= min_value) {
            wallet_utxo u = utxos_[i];
            utxos_.erase(utxos_.begin() + i);
            return funding_source(u.prevout, u.value, key_);
        }
    }
    fail(errc::not_found, "no wallet output covers the requested value");
}

void wallet::return_funding(const funding_source& funding) {
    add_utxo(funding.prevout, funding.value);
}

void wallet::receive(const transaction& tx) {
    digest32 txid = tx.txid();
    for (uint32_t i = 0; i < tx.outputs.size(); ++i) {
        auto dest = p2pkh_destination(as_span(tx.outputs[i].script_pubkey));
        if (dest && *dest == address_.pubkey_hash()) add_utxo({txid, i}, tx.outputs[i].value);
    }
}

void add_statement(batch& b, const digest32& digest, const std::string& filename) {
    b.add(digest, filename);
}

struct authority_ops {
    static void mark_committed(batch& b, const digest32& txid) {
        b.status_ = batch_status::committed;
        b.txid_ = txid;
    }
    static void mark_confirmed(batch& b, const digest32& block_hash, uint32_t height,
                               size_t tx_index) {
        b.status_ = batch_status::confirmed;
        b.block_hash_ = block_hash;
        b.height_ = height;
        b.tx_index_ = tx_index;
    }
};

commitment commit(batch& b, tx_submitter& chain, wallet& funds, int64_t fee) {
    if (b.status() != batch_status::open) fail(errc::sealed, "batch already committed");
    if (b.size() == 0) fail(errc::empty_batch, "cannot commit an empty batch");
    if (fee < 0) fail(errc::range, "fee must be non-negative");

    digest32 root = b.root();
    funding_source funding = funds.take_funding(fee + 1);
    transaction tx;
    digest32 txid;
    try {
        tx = build_commit_tx(root, funding, fee);
        txid = chain.submit(tx);
    } catch (const error&) {
        funds.return_funding(funding);
        throw error(errc::rejected, "chain rejected the commitment; batch stays open");
    }
    funds.receive(tx);
    authority_ops::mark_committed(b, txid);
    return {root, txid, tx.serialize()};
}

void restore_commitment(batch& b, const digest32& txid) {
    if (b.status() != batch_status::open) fail(errc::sealed, "batch already committed");
    if (b.size() == 0) fail(errc::empty_batch, "cannot restore an empty batch");
    authority_ops::mark_committed(b, txid);
}

void confirm(batch& b, const block& blk, uint32_t height) {
    if (b.status() == batch_status::open) fail(errc::not_committed, "batch not committed");
    for (size_t i = 0; i < blk.txs.size(); ++i) {
        if (blk.txs[i].txid() == b.commit_txid()) {
            authority_ops::mark_confirmed(b, blk.header.hash(), height, i);
            return;
        }
    }
    fail(errc::not_committed, "commitment transaction not in block");
}

inclusion_proof prove_inclusion(const batch& b, const block& blk, size_t digest_index,
                                std::optional<uint32_t> tip_height, uint32_t k_confirmations) {
    if (b.status() != batch_status::confirmed)
        fail(errc::not_committed, "batch has no confirmed commitment");
    if (blk.header.hash() != b.block_hash())
        fail(errc::not_committed, "block does not hold this commitment");
    if (digest_index >= b.size()) fail(errc::not_committed, "digest not in batch");
    if (tip_height && (*tip_height < b.height() || *tip_height - b.height() < k_confirmations))
        fail(errc::not_confirmed, "commitment not yet buried k blocks deep");

    size_t tx_index = b.tx_index();
    if (tx_index >= blk.txs.size() || blk.txs[tx_index].txid() != b.commit_txid())
        fail(errc::not_committed, "commitment transaction not in block");

    std::vector<digest32> txids;
    txids.reserve(blk.txs.size());
    for (const transaction& tx : blk.txs) txids.push_back(tx.txid());

    std::vector<digest32> digests;
    digests.reserve(b.size());
    for (const manifest_entry& e : b.entries()) digests.push_back(e.digest);

    inclusion_proof proof;
    proof.header = blk.header;
    proof.tx = blk.txs[tx_index];
    proof.tx_branch = bitcoin_tx_branch(txids, tx_index);
    proof.stmt_branch = statement_tree(digests).branch(digest_index);
    return proof;
}

namespace {

constexpr uint8_t proof_version = 0x01;
const char proof_magic[4] = {'C', 'N', 'T', 'R'};

void write_branch(byte_writer& w, const merkle_branch& br) {
    w.varint(br.leaf_index);
    w.varint(br.siblings.size());
    for (const digest32& s : br.siblings) w.raw(s.span());
}

merkle_branch read_branch(byte_reader& r) {
    merkle_branch br;
    br.leaf_index = r.varint();
    uint64_t count = r.varint();
    if (count > r.remaining() / 32) fail(errc::format, "sibling count exceeds buffer");
    br.siblings.reserve(count);
    for (uint64_t i = 0; i < count; ++i) br.siblings.push_back(digest32::from_span(r.raw(32)));
    return br;
}

} // namespace

bytes inclusion_proof::serialize() const {
    byte_writer w;
    w.raw(byte_span(reinterpret_cast<const uint8_t*>(proof_magic), 4));
    w.u8(proof_version);
    auto h = header.serialize();
    w.raw(byte_span(h.data(), h.size()));
    bytes tx_raw = tx.serialize();
    w.varint(tx_raw.size());
    w.raw(as_span(tx_raw));
    write_branch(w, tx_branch);
    write_branch(w, stmt_branch);
    return w.take();
}

inclusion_proof inclusion_proof::parse(byte_span data) {
    byte_reader r(data);
    byte_span magic = r.raw(4);
    if (!std::equal(magic.begin(), magic.end(), proof_magic))
        fail(errc::format, "bad proof magic");
    if (r.u8() != proof_version) fail(errc::format, "unsupported proof version");
    inclusion_proof proof;
    proof.header = block_header::parse(r);
    uint64_t tx_len = r.varint();
    if (tx_len > r.remaining()) fail(errc::format, "tx length exceeds buffer");
    proof.tx = transaction::parse(r.raw(tx_len));
    proof.tx_branch = read_branch(r);
    proof.stmt_branch = read_branch(r);
    r.expect_done();
    return proof;
}

std::optional<std::filesystem::path> write_manifest(const batch& b,
                                                    const std::filesystem::path& out_dir,
                                                    bool selective_disclosure,
                                                    std::optional<uint32_t> tip_height,
                                                    uint32_t k_confirmations) {
    if (b.status() == batch_status::open) fail(errc::not_committed, "batch not committed");
    if (selective_disclosure) {
        if (!tip_height || b.status() != batch_status::confirmed ||
            *tip_height < b.height() || *tip_height - b.height() < k_confirmations)
            return std::nullopt;
    }
    std::filesystem::path path = out_dir / (b.root().hex() + ".manifest");
    std::string text = format_manifest(b.entries());
    atomic_write_file(path, str_span(text));
    return path;
}

void atomic_write_file(const std::filesystem::path& path, byte_span content) {
    std::filesystem::path tmp = path;
    tmp += ".tmp";
    {
        std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
        if (!out.good()) fail(errc::io, "cannot open for write: " + tmp.string());
        out.write(reinterpret_cast<const char*>(content.data()),
                  static_cast<std::streamsize>(content.size()));
        if (!out.good()) fail(errc::io, "write failed: " + tmp.string());
    }
    std::error_code ec;
    std::filesystem::rename(tmp, path, ec);
    if (ec) fail(errc::io, "rename failed: " + path.string());
}

} // namespace contour
