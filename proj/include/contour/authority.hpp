#pragma once

#include <contour/merkle.hpp>
#include <contour/simchain.hpp>
#include <contour/wire.hpp>

#include <filesystem>
#include <optional>
#include <string>
#include <vector>

namespace contour {

struct manifest_entry {
    digest32 digest;
    std::string filename;
};

// Manifest text: one `<64-hex-digest><space><filename>` line per entry,
// in leaf order. Filenames must be non-empty and newline-free.
std::string format_manifest(const std::vector<manifest_entry>& entries);
std::vector<manifest_entry> parse_manifest(std::string_view text);

enum class batch_status { open, committed, confirmed };

// Orders statement digests for one commitment. Status only moves forward;
// entries are immutable once committed.
class batch {
  public:
    void add(const digest32& digest, const std::string& filename);

    batch_status status() const { return status_; }
    size_t size() const { return entries_.size(); }
    const std::vector<manifest_entry>& entries() const { return entries_; }
    digest32 root() const;

    const digest32& commit_txid() const;
    const digest32& block_hash() const;
    uint32_t height() const;
    size_t tx_index() const;

  private:
    friend struct authority_ops;

    std::vector<manifest_entry> entries_;
    std::unordered_set<digest32, digest32_hash> seen_;
    batch_status status_ = batch_status::open;
    digest32 txid_{};
    digest32 block_hash_{};
    uint32_t height_ = 0;
    size_t tx_index_ = 0;
};

struct batch_policy {
    size_t max_entries = 1040;
    int64_t max_age_secs = 21600;
};

// A batch closes when it reaches max_entries or max_age_secs elapses since
// its first statement, whichever comes first.
bool batch_due(const batch& b, int64_t opened_at, int64_t now, const batch_policy& policy);

struct tx_submitter {
    virtual ~tx_submitter() = default;
    virtual digest32 submit(const transaction& tx) = 0;
};

class sim_submitter : public tx_submitter {
  public:
    sim_submitter(sim_chain& chain, sim_chain::branch_id branch) : chain_(chain), branch_(branch) {}
    digest32 submit(const transaction& tx) override { return chain_.submit_tx(tx, branch_); }

  private:
    sim_chain& chain_;
    sim_chain::branch_id branch_;
};

struct wallet_utxo {
    outpoint prevout;
    int64_t value = 0;
};

class wallet {
  public:
    explicit wallet(const ec_key& key) : key_(key), address_(authority_address::from_key(key)) {}

    static wallet load(const std::filesystem::path& path);
    void save(const std::filesystem::path& path) const;

    const ec_key& key() const { return key_; }
    const authority_address& address() const { return address_; }
    const std::vector<wallet_utxo>& utxos() const { return utxos_; }
    int64_t balance() const;

    void add_utxo(const outpoint& op, int64_t value);
    // Oldest output covering min_value; removed from the wallet until
    // return_funding puts it back.
    funding_source take_funding(int64_t min_value);
    void return_funding(const funding_source& funding);
    // Claims any output of tx paying this wallet's address.
    void receive(const transaction& tx);

  private:
    ec_key key_;
    authority_address address_;
    std::vector<wallet_utxo> utxos_;
};

struct commitment {
    digest32 root;
    digest32 txid;
    bytes raw_tx;
};

// The (header, tx, tx path, statement path) tuple an auditor verifies
// offline. Binary format: "CNTR" magic, version 0x01, 80-byte header,
// varint tx length + tx, varint leaf index + varint count + 32-byte
// siblings for the tx path, then the same for the statement path.
struct inclusion_proof {
    block_header header;
    transaction tx;
    merkle_branch tx_branch;
    merkle_branch stmt_branch;

    bytes serialize() const;
    static inclusion_proof parse(byte_span data);
};

void add_statement(batch& b, const digest32& digest, const std::string& filename);
commitment commit(batch& b, tx_submitter& chain, wallet& funds, int64_t fee);
void confirm(batch& b, const block& blk, uint32_t height);

// Rehydrates a batch committed by an earlier process from its persisted
// txid; confirm still requires the transaction to appear in a block.
void restore_commitment(batch& b, const digest32& txid);

// tip_height, when supplied, enforces confirmation depth >= k.
inclusion_proof prove_inclusion(const batch& b, const block& blk, size_t digest_index,
                                std::optional<uint32_t> tip_height = std::nullopt,
                                uint32_t k_confirmations = 6);

// Returns the manifest path, or nullopt when selective disclosure is on
// and the commitment is not yet k deep.
std::optional<std::filesystem::path> write_manifest(
    const batch& b, const std::filesystem::path& out_dir, bool selective_disclosure = false,
    std::optional<uint32_t> tip_height = std::nullopt, uint32_t k_confirmations = 6);

void atomic_write_file(const std::filesystem::path& path, byte_span content);

} // namespace contour
