#pragma once

#include <contour/merkle.hpp>
#include <contour/wire.hpp>

#include <map>
#include <random>
#include <unordered_map>
#include <unordered_set>
#include <vector>

namespace contour {

struct sim_config {
    uint32_t bits = 0x1f7fffff;
    int64_t genesis_time = 1500000000;
    uint64_t seed = 1;
};

// Deterministic regtest-style chain. Blocks are mined on demand with the
// caller's clock; identical call sequences produce identical chains.
// Transactions are checked for UTXO discipline, not script validity.
class sim_chain {
  public:
    using branch_id = size_t;

    explicit sim_chain(const sim_config& cfg = {});

    branch_id main_branch() const { return 0; }
    // New branch sharing blocks [0, height]; mining and submission then
    // proceed independently per branch.
    branch_id fork_at(uint32_t height);

    const ec_key& miner_key() const { return miner_key_; }
    const sim_config& config() const { return cfg_; }

    digest32 submit_tx(const transaction& tx, branch_id br = 0);
    const block& mine_block(int64_t timestamp, branch_id br = 0);

    // Headers strictly after `from` up to the branch tip; `from` must be on
    // the branch.
    std::vector<block_header> header_stream(const digest32& from, branch_id br = 0) const;
    const block& get_block(const digest32& hash) const;
    bool has_block(const digest32& hash) const { return blocks_.count(hash) != 0; }

    uint32_t tip_height(branch_id br = 0) const;
    digest32 tip_hash(branch_id br = 0) const;
    digest32 block_hash_at(uint32_t height, branch_id br = 0) const;
    const block& block_at(uint32_t height, branch_id br = 0) const;

    // Unspent miner-owned coinbase output, consumed from oldest first.
    funding_source take_miner_funds(branch_id br = 0);

  private:
    struct branch_state {
        std::vector<digest32> hashes;
        std::unordered_map<digest32, uint32_t, digest32_hash> height_index;
        std::map<outpoint, tx_out> utxo;
        std::vector<transaction> mempool;
        std::unordered_set<digest32, digest32_hash> mempool_txids;
        std::vector<outpoint> miner_outputs;
        size_t next_miner_output = 0;
    };

    branch_state& at(branch_id br);
    const branch_state& at(branch_id br) const;
    transaction make_coinbase(uint32_t height, int64_t fees);
    void connect(branch_state& st, const block& blk);

    sim_config cfg_;
    ec_key miner_key_;
    std::mt19937_64 rng_;
    std::vector<branch_state> branches_;
    std::unordered_map<digest32, block, digest32_hash> blocks_;
};

// One-input payment with change back to the sender, signed for P2PKH.
transaction build_payment(const funding_source& from, const authority_address& to, int64_t amount,
                          int64_t fee);

} // namespace contour
