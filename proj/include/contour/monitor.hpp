#pragma once

#include <contour/authority.hpp>
#include <contour/simchain.hpp>

#include <filesystem>
#include <map>
#include <optional>
#include <string>
#include <vector>

namespace contour {

enum class availability { unchecked, available, missing_data, root_mismatch };

const char* availability_name(availability a);

// One authority OP_RETURN commitment found on chain. entries is filled
// by the availability check once a manifest matching root is fetched.
struct commitment_record {
    digest32 root;
    digest32 txid;
    digest32 block_hash;
    uint32_t height = 0;
    size_t tx_index = 0;
    availability status = availability::unchecked;
    std::vector<manifest_entry> entries;
};

struct block_source {
    virtual ~block_source() = default;
    virtual std::optional<block> fetch_block(uint32_t height) = 0;
};

class sim_block_source : public block_source {
  public:
    explicit sim_block_source(const sim_chain& chain, sim_chain::branch_id branch = 0)
        : chain_(chain), branch_(branch) {}
    std::optional<block> fetch_block(uint32_t height) override;

  private:
    const sim_chain& chain_;
    sim_chain::branch_id branch_;
};

// Reads `<height>.blk` files holding serialized blocks.
class dir_block_source : public block_source {
  public:
    explicit dir_block_source(std::filesystem::path dir) : dir_(std::move(dir)) {}
    std::optional<block> fetch_block(uint32_t height) override;

  private:
    std::filesystem::path dir_;
};

struct scan_result {
    std::vector<commitment_record> records;
    bool complete = true;
    // First height not scanned; to_height + 1 on a complete scan. A resumed
    // scan picks up here.
    uint32_t next_height = 0;
};

// Chain-ordered commitments spending from addr in [from_height, to_height].
// A missing block halts the scan and flags the partial result.
scan_result get_commits(block_source& blocks, const authority_address& addr,
                        uint32_t from_height, uint32_t to_height);

struct data_source {
    virtual ~data_source() = default;
    virtual std::optional<std::string> fetch_manifest(const digest32& root) = 0;
    virtual std::optional<bytes> fetch_file(const std::string& filename) = 0;
};

// Serves `<root-hex>.manifest` and statement files from one directory tree.
class dir_data_source : public data_source {
  public:
    explicit dir_data_source(std::filesystem::path dir) : dir_(std::move(dir)) {}
    std::optional<std::string> fetch_manifest(const digest32& root) override;
    std::optional<bytes> fetch_file(const std::string& filename) override;

  private:
    std::filesystem::path dir_;
};

// GET <base>/manifest/<root-hex> and GET <base>/file/<filename>.
class http_data_source : public data_source {
  public:
    explicit http_data_source(const std::string& base_url);
    std::optional<std::string> fetch_manifest(const digest32& root) override;
    std::optional<bytes> fetch_file(const std::string& filename) override;

  private:
    std::optional<std::string> get(const std::string& path);

    std::string host_port_;
    std::string prefix_;
};

// Resolves the record to available, missing_data, or root_mismatch.
void check_availability(commitment_record& rec, data_source& data);

struct update_event {
    uint32_t height = 0;
    digest32 digest;
};

// filename -> heights at which a client actually saw an update land.
using client_view = std::map<std::string, std::vector<uint32_t>>;

struct update_gap {
    std::string filename;
    uint32_t height = 0;
    digest32 digest;
};

struct monitor_report {
    std::vector<commitment_record> records;
    std::map<std::string, std::vector<update_event>> history;
    std::vector<update_gap> gaps;

    // Unavailable commitments plus update gaps.
    size_t alert_count() const;
    // One record per line: height, txid hex, root hex, status. Gap alerts
    // follow, prefixed "gap".
    std::string render() const;
};

// A gap is a committed update the client never saw at a height below that
// filename's newest client-seen update.
monitor_report report(std::vector<commitment_record> records, const client_view& seen = {});

} // namespace contour
