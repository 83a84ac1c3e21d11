#pragma once

#include <contour/auditor.hpp>
#include <contour/monitor.hpp>

#include <filesystem>
#include <map>
#include <optional>
#include <string>
#include <thread>
#include <vector>

namespace httplib {
class Server;
}

namespace contour {

enum class ingest_outcome { stored, rejected_root_mismatch, rejected_bad_file, rejected_unreachable };

const char* ingest_outcome_name(ingest_outcome outcome);

class archivist;

struct archivist_sync_result {
    uint32_t covered_before = 0;
    uint32_t covered_after = 0;
    size_t stored = 0;
    std::vector<std::pair<commitment_record, ingest_outcome>> attempts;
    // False when a block was unavailable before to_height.
    bool complete = true;
};

// Walks heights above the covered tip, ingesting every authority
// commitment found. The tip advances through a height only once all of
// its commitments are stored; the first failure freezes it there.
archivist_sync_result sync_archivist(archivist& arch, block_source& blocks,
                                     const authority_address& addr, uint32_t to_height,
                                     data_source& data);

// Availability layer. Mirrors manifests and statement files, verifying
// every byte against the committed root before acceptance. Layout under
// root_dir: objects/<first 2 hex>/<digest hex>, manifests/<root>.manifest,
// a `state` file holding the covered tip, and an append-only `ledger` of
// per-commitment outcomes. Stored content is never deleted.
class archivist {
  public:
    archivist(std::filesystem::path root_dir, const arch_state& checkpoint);

    // Covered tip: every commitment at or below this height is stored.
    const arch_state& state() const { return covered_; }
    std::optional<ingest_outcome> outcome_of(const digest32& root) const;

    bool has_object(const digest32& digest) const;
    // Bytes are rehashed on read; a damaged store raises integrity.
    bytes load_object(const digest32& digest) const;
    std::optional<std::string> load_manifest(const digest32& root) const;

    ingest_outcome ingest(const commitment_record& rec, data_source& data);

  private:
    friend archivist_sync_result sync_archivist(archivist& arch, block_source& blocks,
                                                const authority_address& addr, uint32_t to_height,
                                                data_source& data);

    void store_object(const digest32& digest, byte_span content);
    void persist_state();
    void record_outcome(const digest32& root, ingest_outcome outcome);
    std::filesystem::path object_path(const digest32& digest) const;

    std::filesystem::path root_;
    arch_state covered_;
    std::map<std::string, ingest_outcome> ledger_;
};

// GET /state, GET /manifest/<root-hex>, GET /object/<digest-hex>.
class archivist_server {
  public:
    explicit archivist_server(archivist& arch);
    ~archivist_server();

    // Binds host:port (port 0 picks one) and serves until stop().
    int start(const std::string& host, int port);
    void stop();

  private:
    archivist& arch_;
    std::unique_ptr<httplib::Server> server_;
    std::thread thread_;
};

} // namespace contour
