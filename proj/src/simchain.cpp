#include <contour/simchain.hpp>

namespace contour {

namespace {

constexpr int64_t block_subsidy = 5000000000;

std::array<uint8_t, 32> seed_secret(uint64_t seed) {
    byte_writer w;
    w.raw(str_span("sim-miner-"));
    w.u64le(seed);
    return sha256(as_span(w.data())).v;
}

} // namespace

sim_chain::sim_chain(const sim_config& cfg)
    : cfg_(cfg), miner_key_(ec_key::from_bytes(seed_secret(cfg.seed))), rng_(cfg.seed) {
    branches_.emplace_back();
    mine_block(cfg_.genesis_time, 0);
}

sim_chain::branch_state& sim_chain::at(branch_id br) {
    if (br >= branches_.size()) fail(errc::range, "unknown branch");
    return branches_[br];
}

const sim_chain::branch_state& sim_chain::at(branch_id br) const {
    if (br >= branches_.size()) fail(errc::range, "unknown branch");
    return branches_[br];
}

sim_chain::branch_id sim_chain::fork_at(uint32_t height) {
    const branch_state& src = at(0);
    if (height >= src.hashes.size()) fail(errc::range, "fork height beyond tip");

    branch_state st;
    st.hashes.assign(src.hashes.begin(), src.hashes.begin() + height + 1);
    for (uint32_t h = 0; h < st.hashes.size(); ++h) st.height_index[st.hashes[h]] = h;
    for (const digest32& hash : st.hashes) {
        const block& blk = blocks_.at(hash);
        for (const transaction& tx : blk.txs) {
            for (const tx_in& in : tx.inputs)
                if (!in.prevout.txid.is_zero()) st.utxo.erase(in.prevout);
            digest32 txid = tx.txid();
            for (uint32_t i = 0; i < tx.outputs.size(); ++i)
                st.utxo[{txid, i}] = tx.outputs[i];
        }
        const transaction& cb = blk.txs.front();
        st.miner_outputs.push_back({cb.txid(), 0});
    }
    branches_.push_back(std::move(st));
    return branches_.size() - 1;
}

digest32 sim_chain::submit_tx(const transaction& tx, branch_id br) {
    branch_state& st = at(br);
    digest32 txid = tx.txid();
    if (st.mempool_txids.count(txid)) fail(errc::duplicate, "transaction already in mempool");
    if (tx.inputs.empty() || tx.outputs.empty()) fail(errc::rejected, "empty input or output set");

    std::vector<outpoint> seen;
    int64_t in_sum = 0;
    for (const tx_in& in : tx.inputs) {
        auto it = st.utxo.find(in.prevout);
        if (it == st.utxo.end()) fail(errc::rejected, "input not in UTXO set");
        for (const transaction& pending : st.mempool)
            for (const tx_in& pin : pending.inputs)
                if (pin.prevout == in.prevout) fail(errc::rejected, "input spent by mempool");
        for (const outpoint& prior : seen)
            if (prior == in.prevout) fail(errc::rejected, "duplicate input within transaction");
        seen.push_back(in.prevout);
        in_sum += it->second.value;
    }
    int64_t out_sum = 0;
    for (const tx_out& out : tx.outputs) {
        if (out.value < 0) fail(errc::rejected, "negative output value");
        out_sum += out.value;
    }
    if (out_sum > in_sum) fail(errc::rejected, "outputs exceed inputs");

    st.mempool.push_back(tx);
    st.mempool_txids.insert(txid);
    return txid;
}

transaction sim_chain::make_coinbase(uint32_t height, int64_t fees) {
    transaction cb;
    tx_in in;
    in.prevout = {digest32{}, 0xffffffff};
    byte_writer script;
    byte_writer height_bytes;
    height_bytes.u32le(height);
    script.raw(as_span(push_data(as_span(height_bytes.data()))));
    byte_writer extra;
    extra.u64le(rng_());
    script.raw(as_span(push_data(as_span(extra.data()))));
    in.script_sig = script.take();
    cb.inputs.push_back(std::move(in));
    cb.outputs.push_back({block_subsidy + fees, p2pkh_script(miner_key_.pubkey_hash())});
    return cb;
}

void sim_chain::connect(branch_state& st, const block& blk) {
    for (const transaction& tx : blk.txs) {
        for (const tx_in& in : tx.inputs)
            if (!in.prevout.txid.is_zero()) st.utxo.erase(in.prevout);
        digest32 txid = tx.txid();
        for (uint32_t i = 0; i < tx.outputs.size(); ++i) st.utxo[{txid, i}] = tx.outputs[i];
    }
    st.miner_outputs.push_back({blk.txs.front().txid(), 0});
}

const block& sim_chain::mine_block(int64_t timestamp, branch_id br) {
    branch_state& st = at(br);
    uint32_t height = st.hashes.empty() ? 0 : static_cast<uint32_t>(st.hashes.size());

    int64_t fees = 0;
    for (const transaction& tx : st.mempool) {
        int64_t in_sum = 0;
        for (const tx_in& in : tx.inputs) in_sum += st.utxo.at(in.prevout).value;
        int64_t out_sum = 0;
        for (const tx_out& out : tx.outputs) out_sum += out.value;
        fees += in_sum - out_sum;
    }

    block blk;
    blk.txs.push_back(make_coinbase(height, fees));
    blk.txs.insert(blk.txs.end(), st.mempool.begin(), st.mempool.end());
    st.mempool.clear();
    st.mempool_txids.clear();

    std::vector<digest32> txids;
    txids.reserve(blk.txs.size());
    for (const transaction& tx : blk.txs) txids.push_back(tx.txid());

    blk.header.version = 2;
    blk.header.prev_hash = st.hashes.empty() ? digest32{} : st.hashes.back();
    blk.header.merkle_root = bitcoin_tx_root(txids);
    blk.header.timestamp = static_cast<uint32_t>(timestamp);
    blk.header.bits = cfg_.bits;
    compact_target target = decode_compact(cfg_.bits);
    if (!target.valid) fail(errc::invalid_target, "sim difficulty bits are unusable");
    for (uint32_t nonce = 0;; ++nonce) {
        blk.header.nonce = nonce;
        if (hash_meets_target(blk.header.hash(), target)) break;
        if (nonce == 0xffffffff) fail(errc::range, "nonce space exhausted");
    }

    digest32 hash = blk.header.hash();
    connect(st, blk);
    st.hashes.push_back(hash);
    st.height_index[hash] = height;
    auto [it, inserted] = blocks_.emplace(hash, std::move(blk));
    (void)inserted;
    return it->second;
}

std::vector<block_header> sim_chain::header_stream(const digest32& from, branch_id br) const {
    const branch_state& st = at(br);
    auto it = st.height_index.find(from);
    if (it == st.height_index.end()) fail(errc::not_found, "starting block not on branch");
    std::vector<block_header> out;
    for (uint32_t h = it->second + 1; h < st.hashes.size(); ++h)
        out.push_back(blocks_.at(st.hashes[h]).header);
    return out;
}

const block& sim_chain::get_block(const digest32& hash) const {
    auto it = blocks_.find(hash);
    if (it == blocks_.end()) fail(errc::not_found, "unknown block hash");
    return it->second;
}

uint32_t sim_chain::tip_height(branch_id br) const {
    return static_cast<uint32_t>(at(br).hashes.size() - 1);
}

digest32 sim_chain::tip_hash(branch_id br) const { return at(br).hashes.back(); }

digest32 sim_chain::block_hash_at(uint32_t height, branch_id br) const {
    const branch_state& st = at(br);
    if (height >= st.hashes.size()) fail(errc::range, "height beyond tip");
    return st.hashes[height];
}

const block& sim_chain::block_at(uint32_t height, branch_id br) const {
    return blocks_.at(block_hash_at(height, br));
}

funding_source sim_chain::take_miner_funds(branch_id br) {
    branch_state& st = at(br);
    while (st.next_miner_output < st.miner_outputs.size()) {
        outpoint op = st.miner_outputs[st.next_miner_output++];
        auto it = st.utxo.find(op);
        if (it != st.utxo.end()) return funding_source(op, it->second.value, miner_key_);
    }
    fail(errc::not_found, "no unspent miner output on branch");
}

transaction build_payment(const funding_source& from, const authority_address& to, int64_t amount,
                          int64_t fee) {
    if (amount <= 0 || fee < 0 || amount + fee > from.value)
        fail(errc::range, "payment exceeds funding value");
    transaction tx;
    tx.inputs.push_back({from.prevout, {}, 0xffffffff});
    tx.outputs.push_back({amount, p2pkh_script(to.pubkey_hash())});
    int64_t change = from.value - amount - fee;
    if (change > 0) tx.outputs.push_back({change, p2pkh_script(from.key.pubkey_hash())});
    bytes prev_spk = p2pkh_script(from.key.pubkey_hash());
    digest32 z = legacy_sighash_all(tx, 0, as_span(prev_spk));
    tx.inputs[0].script_sig = p2pkh_script_sig(from.key, z);
    return tx;
}

} // namespace contour
