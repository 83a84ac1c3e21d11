#include <contour/archivist.hpp>

#include <httplib.h>

#include <fstream>
#include <sstream>

namespace contour {

const char* ingest_outcome_name(ingest_outcome outcome) {
    switch (outcome) {
        case ingest_outcome::stored: return "stored";
        case ingest_outcome::rejected_root_mismatch: return "root_mismatch";
        case ingest_outcome::rejected_bad_file: return "bad_file";
        case ingest_outcome::rejected_unreachable: return "unreachable";
    }
    return "unreachable";
}

namespace {

std::optional<ingest_outcome> outcome_from_name(std::string_view name) {
    if (name == "stored") return ingest_outcome::stored;
    if (name == "root_mismatch") return ingest_outcome::rejected_root_mismatch;
    if (name == "bad_file") return ingest_outcome::rejected_bad_file;
    if (name == "unreachable") return ingest_outcome::rejected_unreachable;
    return std::nullopt;
}

} // namespace

archivist::archivist(std::filesystem::path root_dir, const arch_state& checkpoint)
    : root_(std::move(root_dir)) {
    std::filesystem::create_directories(root_ / "objects");
    std::filesystem::create_directories(root_ / "manifests");

    covered_ = checkpoint;
    std::ifstream state_in(root_ / "state");
    if (state_in.good()) {
        std::string line((std::istreambuf_iterator<char>(state_in)),
                         std::istreambuf_iterator<char>());
        arch_state persisted = arch_state::parse(line);
        if (persisted.height >= checkpoint.height) covered_ = persisted;
    }
    persist_state();

    std::ifstream ledger_in(root_ / "ledger");
    std::string line;
    while (std::getline(ledger_in, line)) {
        size_t space = line.find(' ');
        if (space != 64) fail(errc::format, "ledger line must be root, space, outcome");
        std::optional<ingest_outcome> outcome = outcome_from_name(line.substr(space + 1));
        if (!outcome) fail(errc::format, "unknown ledger outcome");
        ledger_[line.substr(0, space)] = *outcome;
    }
}

std::optional<ingest_outcome> archivist::outcome_of(const digest32& root) const {
    auto it = ledger_.find(root.hex());
    if (it == ledger_.end()) return std::nullopt;
    return it->second;
}

std::filesystem::path archivist::object_path(const digest32& digest) const {
    std::string hex = digest.hex();
    return root_ / "objects" / hex.substr(0, 2) / hex;
}

bool archivist::has_object(const digest32& digest) const {
    return std::filesystem::exists(object_path(digest));
}

bytes archivist::load_object(const digest32& digest) const {
    std::ifstream in(object_path(digest), std::ios::binary);
    if (!in.good()) fail(errc::not_found, "object not stored: " + digest.hex());
    bytes content((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
    if (sha256(as_span(content)) != digest)
        fail(errc::integrity, "stored object does not hash to its name: " + digest.hex());
    return content;
}

std::optional<std::string> archivist::load_manifest(const digest32& root) const {
    std::ifstream in(root_ / "manifests" / (root.hex() + ".manifest"), std::ios::binary);
    if (!in.good()) return std::nullopt;
    return std::string(std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>());
}

void archivist::store_object(const digest32& digest, byte_span content) {
    if (has_object(digest)) return;
    std::filesystem::create_directories(object_path(digest).parent_path());
    atomic_write_file(object_path(digest), content);
}

void archivist::persist_state() {
    std::string line = covered_.serialize();
    atomic_write_file(root_ / "state",
                      byte_span(reinterpret_cast<const uint8_t*>(line.data()), line.size()));
}

void archivist::record_outcome(const digest32& root, ingest_outcome outcome) {
    ledger_[root.hex()] = outcome;
    std::ofstream out(root_ / "ledger", std::ios::app);
    out << root.hex() << ' ' << ingest_outcome_name(outcome) << '\n';
}

ingest_outcome archivist::ingest(const commitment_record& rec, data_source& data) {
    std::optional<std::string> text = data.fetch_manifest(rec.root);
    if (!text) {
        record_outcome(rec.root, ingest_outcome::rejected_unreachable);
        return ingest_outcome::rejected_unreachable;
    }

    std::vector<manifest_entry> entries;
    try {
        entries = parse_manifest(*text);
    } catch (const error&) {
        record_outcome(rec.root, ingest_outcome::rejected_root_mismatch);
        return ingest_outcome::rejected_root_mismatch;
    }
    std::vector<digest32> digests;
    digests.reserve(entries.size());
    for (const manifest_entry& e : entries) digests.push_back(e.digest);
    if (digests.empty() || statement_root(digests) != rec.root) {
        record_outcome(rec.root, ingest_outcome::rejected_root_mismatch);
        return ingest_outcome::rejected_root_mismatch;
    }

    for (const manifest_entry& e : entries) {
        if (has_object(e.digest)) continue;
        std::optional<bytes> content = data.fetch_file(e.filename);
        if (!content) {
            record_outcome(rec.root, ingest_outcome::rejected_unreachable);
            return ingest_outcome::rejected_unreachable;
        }
        if (sha256(as_span(*content)) != e.digest) {
            record_outcome(rec.root, ingest_outcome::rejected_bad_file);
            return ingest_outcome::rejected_bad_file;
        }
        store_object(e.digest, as_span(*content));
    }

    atomic_write_file(root_ / "manifests" / (rec.root.hex() + ".manifest"),
                      byte_span(reinterpret_cast<const uint8_t*>(text->data()), text->size()));
    record_outcome(rec.root, ingest_outcome::stored);
    return ingest_outcome::stored;
}

archivist_sync_result sync_archivist(archivist& arch, block_source& blocks,
                                     const authority_address& addr, uint32_t to_height,
                                     data_source& data) {
    archivist_sync_result result;
    result.covered_before = arch.covered_.height;
    result.covered_after = result.covered_before;

    for (uint32_t h = arch.covered_.height + 1; h <= to_height; ++h) {
        std::optional<block> blk = blocks.fetch_block(h);
        if (!blk) {
            result.complete = false;
            break;
        }
        scan_result scan = get_commits(blocks, addr, h, h);

        bool all_stored = true;
        for (const commitment_record& rec : scan.records) {
            ingest_outcome outcome = arch.ingest(rec, data);
            result.attempts.emplace_back(rec, outcome);
            if (outcome == ingest_outcome::stored)
                ++result.stored;
            else
                all_stored = false;
        }
        if (!all_stored) break;

        arch.covered_ = {blk->header.hash(), h};
        arch.persist_state();
        result.covered_after = h;
    }
    return result;
}

archivist_server::archivist_server(archivist& arch)
    : arch_(arch), server_(std::make_unique<httplib::Server>()) {}

archivist_server::~archivist_server() { stop(); }

int archivist_server::start(const std::string& host, int port) {
    server_->Get("/state", [this](const httplib::Request&, httplib::Response& res) {
        res.set_content(arch_.state().serialize(), "text/plain");
    });
    server_->Get("/manifest/:root", [this](const httplib::Request& req, httplib::Response& res) {
        digest32 root;
        try {
            root = digest32::from_hex(req.path_params.at("root"));
        } catch (const error&) {
            res.status = 404;
            return;
        }
        std::optional<std::string> text = arch_.load_manifest(root);
        if (!text) {
            res.status = 404;
            return;
        }
        res.set_content(*text, "text/plain");
    });
    server_->Get("/object/:digest", [this](const httplib::Request& req, httplib::Response& res) {
        digest32 digest;
        try {
            digest = digest32::from_hex(req.path_params.at("digest"));
        } catch (const error&) {
            res.status = 404;
            return;
        }
        try {
            bytes content = arch_.load_object(digest);
            res.set_content(std::string(content.begin(), content.end()),
                            "application/octet-stream");
        } catch (const error& e) {
            res.status = e.code() == errc::not_found ? 404 : 500;
        }
    });

    int bound = port == 0 ? server_->bind_to_any_port(host)
                          : (server_->bind_to_port(host, port) ? port : -1);
    if (bound <= 0) fail(errc::io, "cannot bind archivist server");
    thread_ = std::thread([this] { server_->listen_after_bind(); });
    server_->wait_until_ready();
    return bound;
}

void archivist_server::stop() {
    if (!thread_.joinable()) return;
    server_->stop();
    thread_.join();
}

} // namespace contour
