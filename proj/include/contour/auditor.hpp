#pragma once

#include <contour/authority.hpp>
#include <contour/wire.hpp>

#include <filesystem>
#include <optional>
#include <span>
#include <unordered_map>
#include <vector>

namespace contour {

struct header_record {
    uint32_t height = 0;
    digest32 hash;
    int64_t arrival = 0;
};

// Verified header set kept by an auditor. Records hold only height, hash,
// and local arrival time; the 80-byte headers are discarded after sync.
// Heights run contiguously from the trusted checkpoint.
class header_store {
  public:
    static header_store with_checkpoint(const digest32& hash, uint32_t height, int64_t arrival);
    static header_store load(const std::filesystem::path& path);
    void save(const std::filesystem::path& path) const;

    bool contains(const digest32& hash) const { return index_.count(hash) != 0; }
    std::optional<uint32_t> height_of(const digest32& hash) const;
    const header_record& tip() const { return records_.back(); }
    const header_record& checkpoint() const { return records_.front(); }
    size_t size() const { return records_.size(); }
    size_t synced_count() const { return records_.size() - 1; }
    const std::vector<header_record>& records() const { return records_; }

    void append(const digest32& hash, int64_t arrival);

  private:
    header_store() = default;

    std::vector<header_record> records_;
    std::unordered_map<digest32, uint32_t, digest32_hash> index_;
};

struct auditor_policy {
    uint32_t k_confirmations = 6;
    int64_t max_block_interval = 10800;
    authority_address authority;
};

// Appends each header after checking linkage to the current tip and its
// proof of work; on the first bad header the good prefix stays appended
// and the error is raised. Returns the number appended.
size_t sync(header_store& store, std::span<const block_header> headers, int64_t arrival_now);

enum class reject_reason {
    none,
    unknown_header,
    bad_statement_path,
    bad_tx_path,
    wrong_authority,
    unconfirmed,
};

struct verify_result {
    bool accepted = false;
    reject_reason reason = reject_reason::none;
};

const char* reject_reason_name(reject_reason reason);

// Offline, in order: header membership, statement path, tx path, authority
// linkage, confirmation depth. The first failure names the reject reason.
verify_result check_inclusion(const header_store& store, const auditor_policy& policy,
                              const digest32& digest, const inclusion_proof& proof);

enum class staleness { ok, eclipse_suspected };

// Fires strictly beyond max_block_interval; the boundary itself is ok.
staleness staleness_alarm(const header_store& store, const auditor_policy& policy, int64_t now);

struct arch_state {
    digest32 block_hash;
    uint32_t height = 0;

    // Wire form: "<block-hash-hex> <height>\n".
    std::string serialize() const;
    static arch_state parse(std::string_view text);
};

enum class coverage { covered, not_covered };

coverage check_arch_state(const header_store& store, const arch_state& state,
                          const inclusion_proof& proof);

} // namespace contour
