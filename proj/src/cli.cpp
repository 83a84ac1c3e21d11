#include <contour/cli.hpp>

#include <contour/archivist.hpp>
#include <contour/costmodel.hpp>
#include <contour/debfeed.hpp>
#include <contour/scenario.hpp>
#include <contour/simserver.hpp>

#include <CLI11.hpp>
#include <httplib.h>
#include <json.hpp>

#include <charconv>
#include <chrono>
#include <csignal>
#include <ctime>
#include <fstream>
#include <iostream>
#include <memory>
#include <sstream>
#include <thread>

namespace contour {

namespace {

namespace fs = std::filesystem;
using nlohmann::json;

// Rejections of chain data or mirrored state exit 2; staleness exits 3
// (handled where the alarm fires); everything else is a usage, I/O, or
// config failure.
int exit_code_for(errc code) {
    switch (code) {
        case errc::chain_mismatch:
        case errc::invalid_header:
        case errc::invalid_target:
        case errc::untrusted_state:
        case errc::integrity:
        case errc::not_a_commitment:
            return 2;
        default:
            return 1;
    }
}

std::string slurp(const fs::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) fail(errc::io, "cannot read " + path.string());
    std::ostringstream buf;
    buf << in.rdbuf();
    return buf.str();
}

bytes slurp_bytes(const fs::path& path) {
    std::string text = slurp(path);
    return bytes(text.begin(), text.end());
}

uint64_t parse_number(std::string_view text, const std::string& what) {
    uint64_t value = 0;
    auto [end, ec] = std::from_chars(text.data(), text.data() + text.size(), value);
    if (ec != std::errc() || end != text.data() + text.size())
        fail(errc::config, what + " is not a number: " + std::string(text));
    return value;
}

struct endpoint {
    std::string host;
    uint16_t port = 0;
};

endpoint parse_endpoint(const std::string& text) {
    size_t colon = text.rfind(':');
    if (colon == std::string::npos || colon == 0)
        fail(errc::config, "expected host:port, got '" + text + "'");
    uint64_t port = parse_number(std::string_view(text).substr(colon + 1), "port");
    if (port > 65535) fail(errc::config, "port out of range: " + text);
    return {text.substr(0, colon), static_cast<uint16_t>(port)};
}

struct checkpoint_opt {
    digest32 hash;
    uint32_t height = 0;
};

checkpoint_opt parse_checkpoint(const std::string& text) {
    size_t colon = text.rfind(':');
    if (colon == std::string::npos)
        fail(errc::config, "expected <block-hash-hex>:<height>, got '" + text + "'");
    checkpoint_opt out;
    out.hash = digest32::from_hex(text.substr(0, colon));
    uint64_t height = parse_number(std::string_view(text).substr(colon + 1), "checkpoint height");
    if (height > UINT32_MAX) fail(errc::config, "checkpoint height out of range");
    out.height = static_cast<uint32_t>(height);
    return out;
}

std::string trimmed(std::string text) {
    while (!text.empty() && (text.back() == '\n' || text.back() == '\r' || text.back() == ' '))
        text.pop_back();
    return text;
}

std::string http_get(const std::string& url) {
    if (url.rfind("http://", 0) != 0) fail(errc::config, "url must start with http://");
    std::string rest = url.substr(7);
    size_t slash = rest.find('/');
    std::string host_port = slash == std::string::npos ? rest : rest.substr(0, slash);
    std::string path = slash == std::string::npos ? "/" : rest.substr(slash);
    httplib::Client client(host_port);
    client.set_connection_timeout(5, 0);
    client.set_read_timeout(5, 0);
    auto res = client.Get(path);
    if (!res || res->status != 200) fail(errc::io, "GET " + url + " failed");
    return res->body;
}

struct client_submitter : tx_submitter {
    explicit client_submitter(sim_client& client) : client_(client) {}
    digest32 submit(const transaction& tx) override { return client_.submit_tx(tx); }
    sim_client& client_;
};

// Serves blocks fetched from a node by height, anchored at a trusted
// checkpoint so heights are well defined.
class node_block_source : public block_source {
  public:
    node_block_source(sim_client& client, const checkpoint_opt& anchor)
        : client_(client), base_(anchor.height) {
        hashes_.push_back(anchor.hash);
        for (const block_header& h : client_.headers_from(anchor.hash))
            hashes_.push_back(h.hash());
    }

    uint32_t tip() const { return base_ + static_cast<uint32_t>(hashes_.size()) - 1; }

    std::optional<block> fetch_block(uint32_t height) override {
        if (height < base_ || height - base_ >= hashes_.size()) return std::nullopt;
        try {
            return client_.get_block(hashes_[height - base_]);
        } catch (const error&) {
            return std::nullopt;
        }
    }

  private:
    sim_client& client_;
    uint32_t base_;
    std::vector<digest32> hashes_;
};

uint32_t dir_tip_height(const fs::path& dir) {
    if (!fs::is_directory(dir)) fail(errc::io, dir.string() + " is not a directory");
    bool any = false;
    uint32_t best = 0;
    for (const fs::directory_entry& entry : fs::directory_iterator(dir)) {
        fs::path p = entry.path();
        if (p.extension() != ".blk") continue;
        std::string stem = p.stem().string();
        if (stem.empty() || stem.find_first_not_of("0123456789") != std::string::npos) continue;
        best = std::max(best, static_cast<uint32_t>(parse_number(stem, "block height")));
        any = true;
    }
    if (!any) fail(errc::io, "no <height>.blk files in " + dir.string());
    return best;
}

struct chain_access {
    std::unique_ptr<sim_client> client;
    std::unique_ptr<block_source> source;
    uint32_t base = 0;
    uint32_t tip = 0;
};

// Shared chain flags: an exported blocks directory or a live node plus
// the checkpoint that anchors its heights.
struct chain_options {
    std::string blocks_dir;
    std::string node;
    std::string checkpoint;

    void add_to(CLI::App* cmd) {
        cmd->add_option("--blocks", blocks_dir, "Directory of <height>.blk block files");
        cmd->add_option("--node", node, "Sim node host:port");
        cmd->add_option("--checkpoint", checkpoint,
                        "Trusted <block-hash-hex>:<height> anchor (with --node)");
    }

    bool configured() const { return !blocks_dir.empty() || !node.empty(); }

    chain_access open() const {
        chain_access out;
        if (!blocks_dir.empty()) {
            out.tip = dir_tip_height(blocks_dir);
            out.source = std::make_unique<dir_block_source>(blocks_dir);
        } else if (!node.empty()) {
            if (checkpoint.empty()) fail(errc::config, "--node requires --checkpoint");
            endpoint ep = parse_endpoint(node);
            out.client = std::make_unique<sim_client>(ep.host, ep.port);
            checkpoint_opt anchor = parse_checkpoint(checkpoint);
            auto src = std::make_unique<node_block_source>(*out.client, anchor);
            out.base = anchor.height;
            out.tip = src->tip();
            out.source = std::move(src);
        } else {
            fail(errc::config, "need --blocks or --node");
        }
        return out;
    }
};

struct data_options {
    std::string dir;
    std::string url;

    void add_to(CLI::App* cmd) {
        cmd->add_option("--data-dir", dir, "Directory holding manifests and statement files");
        cmd->add_option("--data-url", url, "Base URL serving /manifest/<root> and /file/<name>");
    }

    bool configured() const { return !dir.empty() || !url.empty(); }

    std::unique_ptr<data_source> open() const {
        if (!dir.empty()) return std::make_unique<dir_data_source>(dir);
        if (!url.empty()) return std::make_unique<http_data_source>(url);
        fail(errc::config, "need --data-dir or --data-url");
    }
};

batch load_batch(const fs::path& file) {
    batch b;
    for (const manifest_entry& e : parse_manifest(slurp(file))) add_statement(b, e.digest, e.filename);
    return b;
}

void save_commit_record(const fs::path& path, const commitment& cmt) {
    std::string text = "root " + cmt.root.hex() + "\ntxid " + cmt.txid.hex() + "\n";
    atomic_write_file(path, str_span(text));
}

digest32 load_commit_txid(const fs::path& path) {
    std::istringstream in(slurp(path));
    std::string key, value;
    while (in >> key >> value)
        if (key == "txid") return digest32::from_hex(value);
    fail(errc::format, "no txid line in " + path.string());
}

struct located_block {
    block blk;
    uint32_t height = 0;
};

located_block find_commit_block(chain_access& chain, const digest32& txid) {
    for (uint32_t h = chain.base; h <= chain.tip; ++h) {
        std::optional<block> blk = chain.source->fetch_block(h);
        if (!blk) break;
        for (const transaction& tx : blk->txs)
            if (tx.txid() == txid) return {std::move(*blk), h};
    }
    fail(errc::not_found, "commitment transaction not found on chain");
}

availability availability_from_name(const std::string& name) {
    for (availability a : {availability::unchecked, availability::available,
                           availability::missing_data, availability::root_mismatch})
        if (name == availability_name(a)) return a;
    fail(errc::format, "unknown availability status: " + name);
}

json record_to_json(const commitment_record& rec) {
    json entries = json::array();
    for (const manifest_entry& e : rec.entries)
        entries.push_back({{"digest", e.digest.hex()}, {"filename", e.filename}});
    return {{"root", rec.root.hex()},       {"txid", rec.txid.hex()},
            {"block_hash", rec.block_hash.hex()}, {"height", rec.height},
            {"tx_index", rec.tx_index},     {"status", availability_name(rec.status)},
            {"entries", entries}};
}

commitment_record record_from_json(const json& j) {
    commitment_record rec;
    rec.root = digest32::from_hex(j.at("root").get<std::string>());
    rec.txid = digest32::from_hex(j.at("txid").get<std::string>());
    rec.block_hash = digest32::from_hex(j.at("block_hash").get<std::string>());
    rec.height = j.at("height").get<uint32_t>();
    rec.tx_index = j.at("tx_index").get<size_t>();
    rec.status = availability_from_name(j.at("status").get<std::string>());
    for (const json& e : j.at("entries"))
        rec.entries.push_back({digest32::from_hex(e.at("digest").get<std::string>()),
                               e.at("filename").get<std::string>()});
    return rec;
}

client_view load_client_view(const fs::path& path) {
    client_view seen;
    std::istringstream in(slurp(path));
    std::string line;
    size_t lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        if (line.empty()) continue;
        size_t space = line.rfind(' ');
        if (space == std::string::npos || space == 0)
            fail(errc::format, path.string() + ": line " + std::to_string(lineno) +
                                   " is not '<filename> <height>'");
        uint64_t height = parse_number(std::string_view(line).substr(space + 1), "seen height");
        seen[line.substr(0, space)].push_back(static_cast<uint32_t>(height));
    }
    return seen;
}

void emit(const std::string& text, const std::string& out_file) {
    if (out_file.empty())
        std::cout << text;
    else
        atomic_write_file(out_file, str_span(text));
}

// ---- authority ----------------------------------------------------------

void add_authority(CLI::App& app, int& rc) {
    CLI::App* authority =
        app.add_subcommand("authority", "Commit statement batches and produce proofs");
    authority->require_subcommand(1);

    {
        struct opts {
            std::string wallet, batch_file, node, commit_out;
            int64_t fee = 40000;
            bool js = false;
        };
        auto o = std::make_shared<opts>();
        CLI::App* cmd = authority->add_subcommand("commit", "Anchor a statement batch on chain");
        cmd->add_option("--wallet", o->wallet, "Wallet state file (updated in place)")->required();
        cmd->add_option("--from-batch-file", o->batch_file,
                        "Statements, one '<digest-hex> <filename>' per line")
            ->required();
        cmd->add_option("--node", o->node, "Sim node host:port")->required();
        cmd->add_option("--fee", o->fee, "Commitment fee in satoshis")->capture_default_str();
        cmd->add_option("--commit-out", o->commit_out,
                        "Commit record path (default: <batch-file>.commit)");
        cmd->add_flag("--json", o->js, "Machine-readable output");
        cmd->callback([o, &rc] {
            wallet funds = wallet::load(o->wallet);
            batch b = load_batch(o->batch_file);
            endpoint ep = parse_endpoint(o->node);
            sim_client client(ep.host, ep.port);
            client_submitter submitter(client);
            commitment cmt = commit(b, submitter, funds, o->fee);
            funds.save(o->wallet);
            fs::path record =
                o->commit_out.empty() ? fs::path(o->batch_file + ".commit") : fs::path(o->commit_out);
            save_commit_record(record, cmt);
            if (o->js)
                std::cout << json{{"root", cmt.root.hex()},
                                  {"txid", cmt.txid.hex()},
                                  {"statements", b.size()},
                                  {"commit_record", record.string()}}
                                 .dump()
                          << "\n";
            else
                std::cout << "root " << cmt.root.hex() << "\ntxid " << cmt.txid.hex()
                          << "\nstatements " << b.size() << "\n";
            rc = 0;
        });
    }

    {
        struct opts {
            std::string batch_file, commit_file, out, digest;
            size_t index = 0;
            uint32_t k = 6;
            chain_options chain;
        };
        auto o = std::make_shared<opts>();
        CLI::App* cmd = authority->add_subcommand("prove", "Write an inclusion proof file");
        cmd->add_option("--from-batch-file", o->batch_file, "Statements of the committed batch")
            ->required();
        cmd->add_option("--commit-file", o->commit_file,
                        "Commit record (default: <batch-file>.commit)");
        cmd->add_option("--out", o->out, "Proof output path")->required();
        cmd->add_option("--index", o->index, "Statement index to prove")->capture_default_str();
        cmd->add_option("--digest", o->digest, "Statement digest hex (overrides --index)");
        cmd->add_option("--confirmations", o->k, "Required burial depth")->capture_default_str();
        o->chain.add_to(cmd);
        cmd->callback([o, &rc] {
            batch b = load_batch(o->batch_file);
            fs::path record =
                o->commit_file.empty() ? fs::path(o->batch_file + ".commit") : fs::path(o->commit_file);
            restore_commitment(b, load_commit_txid(record));
            chain_access chain = o->chain.open();
            located_block loc = find_commit_block(chain, b.commit_txid());
            confirm(b, loc.blk, loc.height);
            size_t index = o->index;
            if (!o->digest.empty()) {
                digest32 digest = digest32::from_hex(trimmed(o->digest));
                index = b.size();
                for (size_t i = 0; i < b.size(); ++i)
                    if (b.entries()[i].digest == digest) index = i;
                if (index == b.size()) fail(errc::not_found, "digest not in batch");
            }
            inclusion_proof proof = prove_inclusion(b, loc.blk, index, chain.tip, o->k);
            bytes raw = proof.serialize();
            atomic_write_file(o->out, as_span(raw));
            std::cout << "digest " << b.entries()[index].digest.hex() << "\nheight " << loc.height
                      << "\nproof " << o->out << "\n";
            rc = 0;
        });
    }

    {
        struct opts {
            std::string batch_file, commit_file, out_dir;
            bool selective = false;
            uint32_t k = 6;
            chain_options chain;
        };
        auto o = std::make_shared<opts>();
        CLI::App* cmd = authority->add_subcommand("manifest", "Publish the batch manifest");
        cmd->add_option("--from-batch-file", o->batch_file, "Statements of the committed batch")
            ->required();
        cmd->add_option("--commit-file", o->commit_file,
                        "Commit record (default: <batch-file>.commit)");
        cmd->add_option("--out-dir", o->out_dir, "Directory receiving <root>.manifest")->required();
        cmd->add_flag("--selective", o->selective, "Withhold until the commitment is k deep");
        cmd->add_option("--confirmations", o->k, "Required burial depth")->capture_default_str();
        o->chain.add_to(cmd);
        cmd->callback([o, &rc] {
            batch b = load_batch(o->batch_file);
            fs::path record =
                o->commit_file.empty() ? fs::path(o->batch_file + ".commit") : fs::path(o->commit_file);
            restore_commitment(b, load_commit_txid(record));
            chain_access chain = o->chain.open();
            located_block loc = find_commit_block(chain, b.commit_txid());
            confirm(b, loc.blk, loc.height);
            fs::create_directories(o->out_dir);
            std::optional<fs::path> written =
                write_manifest(b, o->out_dir, o->selective, chain.tip, o->k);
            if (written)
                std::cout << "manifest " << written->string() << "\n";
            else
                std::cout << "withheld: commitment not yet " << o->k << " deep\n";
            rc = 0;
        });
    }
}

// ---- auditor ------------------------------------------------------------

void add_auditor(CLI::App& app, int& rc) {
    CLI::App* auditor = app.add_subcommand("auditor", "Sync headers and verify proofs");
    auditor->require_subcommand(1);

    {
        struct opts {
            std::string store, checkpoint;
            int64_t now = -1;
            int64_t max_interval = 10800;
            chain_options chain;
        };
        auto o = std::make_shared<opts>();
        CLI::App* cmd = auditor->add_subcommand("sync", "Extend the verified header store");
        cmd->add_option("--store", o->store, "Header store file")->required();
        cmd->add_option("--trust", o->checkpoint,
                        "Checkpoint <block-hash-hex>:<height> for a fresh store");
        cmd->add_option("--now", o->now, "Local arrival clock (default: wall clock)");
        cmd->add_option("--max-block-interval-secs", o->max_interval,
                        "Staleness threshold in seconds")
            ->capture_default_str();
        o->chain.add_to(cmd);
        cmd->callback([o, &rc] {
            int64_t now = o->now >= 0 ? o->now : static_cast<int64_t>(::time(nullptr));
            header_store store = [&] {
                if (fs::exists(o->store)) return header_store::load(o->store);
                if (o->checkpoint.empty())
                    fail(errc::config, "fresh store needs --trust <block-hash-hex>:<height>");
                checkpoint_opt cp = parse_checkpoint(o->checkpoint);
                return header_store::with_checkpoint(cp.hash, cp.height, now);
            }();

            std::vector<block_header> headers;
            if (!o->chain.node.empty()) {
                endpoint ep = parse_endpoint(o->chain.node);
                sim_client client(ep.host, ep.port);
                headers = client.headers_from(store.tip().hash);
            } else if (!o->chain.blocks_dir.empty()) {
                dir_block_source blocks(o->chain.blocks_dir);
                for (uint32_t h = store.tip().height + 1;; ++h) {
                    std::optional<block> blk = blocks.fetch_block(h);
                    if (!blk) break;
                    headers.push_back(blk->header);
                }
            } else {
                fail(errc::config, "need --blocks or --node");
            }

            try {
                size_t added = sync(store, headers, now);
                store.save(o->store);
                std::cout << "synced " << added << "\ntip " << store.tip().height << " "
                          << store.tip().hash.hex() << "\n";
            } catch (const error& e) {
                store.save(o->store);
                std::cerr << "contour: header rejected: " << e.what() << " (good prefix kept, tip "
                          << store.tip().height << ")\n";
                rc = exit_code_for(e.code());
                return;
            }

            auditor_policy policy;
            policy.max_block_interval = o->max_interval;
            if (staleness_alarm(store, policy, now) == staleness::eclipse_suspected) {
                std::cout << "staleness eclipse_suspected\n";
                rc = 3;
            } else {
                std::cout << "staleness ok\n";
                rc = 0;
            }
        });
    }

    {
        struct opts {
            std::string store, proof, digest, digest_file, authority;
            uint32_t k = 6;
            bool js = false;
        };
        auto o = std::make_shared<opts>();
        CLI::App* cmd = auditor->add_subcommand("verify", "Check an inclusion proof");
        cmd->add_option("--store", o->store, "Header store file")->required();
        cmd->add_option("--proof", o->proof, "Inclusion proof file")->required();
        cmd->add_option("--digest", o->digest, "Statement digest hex");
        cmd->add_option("--digest-file", o->digest_file, "File holding the digest hex");
        cmd->add_option("--authority-addr", o->authority, "Expected authority address")->required();
        cmd->add_option("--confirmations", o->k, "Required burial depth")->capture_default_str();
        cmd->add_flag("--json", o->js, "Machine-readable output");
        cmd->callback([o, &rc] {
            if (o->digest.empty() == o->digest_file.empty())
                fail(errc::config, "need exactly one of --digest or --digest-file");
            digest32 digest = digest32::from_hex(
                o->digest.empty() ? trimmed(slurp(o->digest_file)) : trimmed(o->digest));
            header_store store = header_store::load(o->store);
            inclusion_proof proof = inclusion_proof::parse(as_span(slurp_bytes(o->proof)));
            auditor_policy policy;
            policy.k_confirmations = o->k;
            policy.authority = authority_address::from_string(o->authority);
            verify_result v = check_inclusion(store, policy, digest, proof);
            if (o->js)
                std::cout << json{{"accepted", v.accepted},
                                  {"reason", reject_reason_name(v.reason)}}
                                 .dump()
                          << "\n";
            else
                std::cout << (v.accepted ? std::string("accepted")
                                         : "rejected " + std::string(reject_reason_name(v.reason)))
                          << "\n";
            rc = v.accepted ? 0 : 2;
        });
    }

    {
        struct opts {
            std::string store, proof, state_file, state_url;
            bool js = false;
        };
        auto o = std::make_shared<opts>();
        CLI::App* cmd =
            auditor->add_subcommand("archcheck", "Check archivist coverage of a proof");
        cmd->add_option("--store", o->store, "Header store file")->required();
        cmd->add_option("--proof", o->proof, "Inclusion proof file")->required();
        cmd->add_option("--state-file", o->state_file, "Archivist state file");
        cmd->add_option("--state-url", o->state_url, "Archivist /state URL");
        cmd->add_flag("--json", o->js, "Machine-readable output");
        cmd->callback([o, &rc] {
            if (o->state_file.empty() == o->state_url.empty())
                fail(errc::config, "need exactly one of --state-file or --state-url");
            std::string text =
                o->state_file.empty() ? http_get(o->state_url) : slurp(o->state_file);
            arch_state state = arch_state::parse(text);
            header_store store = header_store::load(o->store);
            inclusion_proof proof = inclusion_proof::parse(as_span(slurp_bytes(o->proof)));
            coverage c = check_arch_state(store, state, proof);
            if (o->js)
                std::cout << json{{"covered", c == coverage::covered},
                                  {"arch_height", state.height}}
                                 .dump()
                          << "\n";
            else
                std::cout << (c == coverage::covered ? "covered" : "not_covered") << "\n";
            rc = c == coverage::covered ? 0 : 2;
        });
    }
}

// ---- monitor ------------------------------------------------------------

void add_monitor(CLI::App& app, int& rc) {
    CLI::App* monitor = app.add_subcommand("monitor", "Watch the chain for commitments");
    monitor->require_subcommand(1);

    {
        struct opts {
            std::string authority, out, records_out, seen;
            uint32_t from = 0;
            uint32_t to = UINT32_MAX;
            bool js = false, strict = false;
            chain_options chain;
            data_options data;
        };
        auto o = std::make_shared<opts>();
        CLI::App* cmd = monitor->add_subcommand("scan", "List commitments and check their data");
        cmd->add_option("--authority-addr", o->authority, "Authority address to watch")->required();
        cmd->add_option("--from", o->from, "First height to scan")->capture_default_str();
        cmd->add_option("--to", o->to, "Last height to scan (default: chain tip)");
        cmd->add_option("--out", o->out, "Write the report here instead of stdout");
        cmd->add_option("--records-out", o->records_out, "Write scanned records as JSON");
        cmd->add_option("--seen", o->seen, "Client view: '<filename> <height>' per line");
        cmd->add_flag("--json", o->js, "Machine-readable output");
        cmd->add_flag("--strict", o->strict, "Exit 2 when any alert is raised");
        o->chain.add_to(cmd);
        o->data.add_to(cmd);
        cmd->callback([o, &rc] {
            chain_access chain = o->chain.open();
            uint32_t to = o->to == UINT32_MAX ? chain.tip : o->to;
            scan_result scan = get_commits(*chain.source, authority_address::from_string(o->authority),
                                           o->from, to);
            if (o->data.configured()) {
                std::unique_ptr<data_source> data = o->data.open();
                for (commitment_record& rec : scan.records) check_availability(rec, *data);
            }
            client_view seen;
            if (!o->seen.empty()) seen = load_client_view(o->seen);
            monitor_report rep = report(scan.records, seen);

            if (!o->records_out.empty()) {
                json records = json::array();
                for (const commitment_record& rec : rep.records) records.push_back(record_to_json(rec));
                std::string text = json{{"records", records},
                                        {"complete", scan.complete},
                                        {"next_height", scan.next_height}}
                                       .dump(2) +
                                   "\n";
                atomic_write_file(o->records_out, str_span(text));
            }

            if (o->js) {
                json records = json::array();
                for (const commitment_record& rec : rep.records) records.push_back(record_to_json(rec));
                json gaps = json::array();
                for (const update_gap& gap : rep.gaps)
                    gaps.push_back({{"filename", gap.filename},
                                    {"height", gap.height},
                                    {"digest", gap.digest.hex()}});
                emit(json{{"records", records},
                          {"gaps", gaps},
                          {"alerts", rep.alert_count()},
                          {"complete", scan.complete},
                          {"next_height", scan.next_height}}
                             .dump(2) +
                         "\n",
                     o->out);
            } else {
                emit(rep.render(), o->out);
            }

            if (!scan.complete) {
                std::cerr << "contour: scan incomplete, no block at height " << scan.next_height
                          << "\n";
                rc = 1;
            } else {
                rc = o->strict && rep.alert_count() > 0 ? 2 : 0;
            }
        });
    }

    {
        struct opts {
            std::string records, seen, out;
            bool js = false, strict = false;
        };
        auto o = std::make_shared<opts>();
        CLI::App* cmd =
            monitor->add_subcommand("report", "Render alerts and update gaps from saved records");
        cmd->add_option("--records", o->records, "Records JSON from 'monitor scan --records-out'")
            ->required();
        cmd->add_option("--seen", o->seen, "Client view: '<filename> <height>' per line");
        cmd->add_option("--out", o->out, "Write the report here instead of stdout");
        cmd->add_flag("--json", o->js, "Machine-readable output");
        cmd->add_flag("--strict", o->strict, "Exit 2 when any alert is raised");
        cmd->callback([o, &rc] {
            json parsed = json::parse(slurp(o->records), nullptr, false);
            if (parsed.is_discarded()) fail(errc::format, o->records + " is not valid JSON");
            std::vector<commitment_record> records;
            for (const json& j : parsed.at("records")) records.push_back(record_from_json(j));
            client_view seen;
            if (!o->seen.empty()) seen = load_client_view(o->seen);
            monitor_report rep = report(std::move(records), seen);
            if (o->js) {
                json gaps = json::array();
                for (const update_gap& gap : rep.gaps)
                    gaps.push_back({{"filename", gap.filename},
                                    {"height", gap.height},
                                    {"digest", gap.digest.hex()}});
                emit(json{{"gaps", gaps}, {"alerts", rep.alert_count()}}.dump(2) + "\n", o->out);
            } else {
                emit(rep.render(), o->out);
            }
            rc = o->strict && rep.alert_count() > 0 ? 2 : 0;
        });
    }
}

// ---- archivist ----------------------------------------------------------

void wait_for_signal() {
    sigset_t set;
    sigemptyset(&set);
    sigaddset(&set, SIGINT);
    sigaddset(&set, SIGTERM);
    pthread_sigmask(SIG_BLOCK, &set, nullptr);
    int sig = 0;
    sigwait(&set, &sig);
}

void add_archivist(CLI::App& app, int& rc) {
    CLI::App* archivist_cmd = app.add_subcommand("archivist", "Mirror committed data");
    archivist_cmd->require_subcommand(1);

    struct opts {
        std::string root_dir, checkpoint, authority, listen = "127.0.0.1:0";
        uint32_t sync_to = UINT32_MAX;
        int64_t serve_for_ms = 0;
        bool exit_after_sync = false;
        chain_options chain;
        data_options data;
    };
    auto o = std::make_shared<opts>();
    CLI::App* cmd = archivist_cmd->add_subcommand(
        "serve", "Sync the mirror, then serve /state, /manifest, /object");
    cmd->add_option("--root-dir", o->root_dir, "Archive directory")->required();
    cmd->add_option("--trust", o->checkpoint,
                    "Checkpoint <block-hash-hex>:<height> for a fresh archive");
    cmd->add_option("--authority-addr", o->authority, "Authority address to mirror");
    cmd->add_option("--listen", o->listen, "Bind address host:port (port 0 picks one)")
        ->capture_default_str();
    cmd->add_option("--sync-to", o->sync_to, "Sync up to this height (default: chain tip)");
    cmd->add_option("--serve-for-ms", o->serve_for_ms,
                    "Serve this long then exit (default: until SIGINT/SIGTERM)");
    cmd->add_flag("--exit-after-sync", o->exit_after_sync, "Skip serving; exit after the sync");
    o->chain.add_to(cmd);
    o->data.add_to(cmd);
    cmd->callback([o, &rc] {
        arch_state checkpoint{};
        if (!o->checkpoint.empty()) {
            checkpoint_opt cp = parse_checkpoint(o->checkpoint);
            checkpoint = {cp.hash, cp.height};
        } else if (!fs::exists(fs::path(o->root_dir) / "state")) {
            fail(errc::config, "fresh archive needs --trust <block-hash-hex>:<height>");
        }
        archivist arch(o->root_dir, checkpoint);

        if (o->chain.configured()) {
            if (o->authority.empty() || !o->data.configured())
                fail(errc::config, "syncing needs --authority-addr and a data source");
            chain_access chain = o->chain.open();
            uint32_t to = o->sync_to == UINT32_MAX ? chain.tip : o->sync_to;
            std::unique_ptr<data_source> data = o->data.open();
            archivist_sync_result synced = sync_archivist(
                arch, *chain.source, authority_address::from_string(o->authority), to, *data);
            for (const auto& [rec, outcome] : synced.attempts)
                std::cout << rec.root.hex() << " " << ingest_outcome_name(outcome) << "\n";
            std::cout << "covered " << synced.covered_before << " -> " << synced.covered_after
                      << "\n";
        }
        std::cout << "state " << arch.state().height << " " << arch.state().block_hash.hex()
                  << "\n";

        if (!o->exit_after_sync) {
            archivist_server server(arch);
            endpoint ep = parse_endpoint(o->listen);
            int port = server.start(ep.host, ep.port);
            if (port <= 0) fail(errc::io, "cannot bind " + o->listen);
            std::cout << "listening " << ep.host << ":" << port << "\n" << std::flush;
            if (o->serve_for_ms > 0)
                std::this_thread::sleep_for(std::chrono::milliseconds(o->serve_for_ms));
            else
                wait_for_signal();
            server.stop();
        }
        rc = 0;
    });
}

// ---- cost ---------------------------------------------------------------

void add_cost(CLI::App& app, int& rc) {
    CLI::App* cost = app.add_subcommand("cost", "Attack economics from mining parameters");
    cost->require_subcommand(1);

    struct opts {
        mining_params p = december_2017_params();
        uint32_t k = 6;
        double window = 725760;
        double network_hashrate = 1.1918845e19;
        bool js = false;
    };
    auto o = std::make_shared<opts>();
    CLI::App* cmd = cost->add_subcommand("report", "Mining, split-view, and majority costs");
    cmd->add_option("--difficulty", o->p.difficulty, "Bitcoin difficulty")->capture_default_str();
    cmd->add_option("--joules-per-hash", o->p.joules_per_hash, "Rig efficiency")
        ->capture_default_str();
    cmd->add_option("--usd-per-joule", o->p.usd_per_joule, "Electricity price")
        ->capture_default_str();
    cmd->add_option("--rig-hashrate", o->p.rig_hashrate, "Hashes per second per rig")
        ->capture_default_str();
    cmd->add_option("--rig-cost", o->p.rig_cost, "Rig price in USD")->capture_default_str();
    cmd->add_option("--block-reward", o->p.block_reward, "Block reward in BTC")
        ->capture_default_str();
    cmd->add_option("--btc-usd", o->p.btc_usd, "BTC price in USD")->capture_default_str();
    cmd->add_option("--confirmations", o->k, "Blocks the attacker must mine")
        ->capture_default_str();
    cmd->add_option("--window-secs", o->window, "Attack window in seconds")->capture_default_str();
    cmd->add_option("--network-hashrate", o->network_hashrate,
                    "Total network hashes per second")
        ->capture_default_str();
    cmd->add_flag("--json", o->js, "Machine-readable output");
    cmd->callback([o, &rc] {
        double hashes = expected_hashes_per_block(o->p.difficulty);
        double per_block = electricity_cost_per_block(o->p);
        splitview_cost sv = eclipse_splitview_cost(o->p, o->k, o->window);
        majority_cost mj = majority_attack_cost(o->p, o->network_hashrate);
        if (o->js) {
            std::cout << json{{"note", "historical December 2017 defaults; prices volatile"},
                              {"expected_hashes_per_block", hashes},
                              {"electricity_per_block_usd", per_block},
                              {"electricity_k_blocks_usd", per_block * o->k},
                              {"k", o->k},
                              {"window_secs", o->window},
                              {"splitview",
                               {{"rigs", sv.rigs},
                                {"hardware_usd", sv.hardware_usd},
                                {"electricity_usd", sv.electricity_usd},
                                {"forfeited_usd", sv.forfeited_usd},
                                {"total_usd", sv.total_usd}}},
                              {"majority",
                               {{"network_hashrate", o->network_hashrate},
                                {"electricity_usd_per_hour", mj.electricity_usd_per_hour},
                                {"rigs", mj.rigs},
                                {"hardware_usd", mj.hardware_usd}}}}
                             .dump(2)
                      << "\n";
        } else {
            std::cout << "note historical December 2017 defaults; prices volatile\n";
            char line[160];
            std::snprintf(line, sizeof line, "expected_hashes_per_block %.6g\n", hashes);
            std::cout << line;
            std::snprintf(line, sizeof line, "electricity_per_block_usd %.2f\n", per_block);
            std::cout << line;
            std::snprintf(line, sizeof line, "electricity_k_blocks_usd %.2f\n", per_block * o->k);
            std::cout << line;
            std::snprintf(line, sizeof line,
                          "splitview_rigs %llu\nsplitview_hardware_usd %.2f\n"
                          "splitview_electricity_usd %.2f\nsplitview_forfeited_usd %.2f\n"
                          "splitview_total_usd %.2f\n",
                          static_cast<unsigned long long>(sv.rigs), sv.hardware_usd,
                          sv.electricity_usd, sv.forfeited_usd, sv.total_usd);
            std::cout << line;
            std::snprintf(line, sizeof line,
                          "majority_electricity_usd_per_hour %.2f\nmajority_rigs %llu\n"
                          "majority_hardware_usd %.2f\n",
                          mj.electricity_usd_per_hour, static_cast<unsigned long long>(mj.rigs),
                          mj.hardware_usd);
            std::cout << line;
        }
        rc = 0;
    });
}

// ---- sim ----------------------------------------------------------------

void add_sim(CLI::App& app, int& rc) {
    CLI::App* sim = app.add_subcommand("sim", "Deterministic chain simulation");
    sim->require_subcommand(1);

    {
        struct opts {
            std::string scenario, out;
            bool js = false;
        };
        auto o = std::make_shared<opts>();
        CLI::App* cmd = sim->add_subcommand("run", "Play a scripted scenario and judge it");
        cmd->add_option("scenario", o->scenario, "honest | s1-splitview | s2-withholding")
            ->required();
        cmd->add_option("--out", o->out, "Work directory (default: contour-sim-<scenario>)");
        cmd->add_flag("--json", o->js, "Machine-readable output");
        cmd->callback([o, &rc] {
            fs::path work = o->out.empty() ? fs::path("contour-sim-" + o->scenario) : fs::path(o->out);
            bool passed = false;
            if (o->scenario == "honest") {
                honest_result r = run_honest_scenario(work);
                passed = r.passed();
                if (!o->js)
                    std::cout << "scenario honest\ntip " << r.tip_height << " " << r.tip_hash.hex()
                              << "\nbatches " << r.batches << " statements " << r.statements
                              << " proofs_accepted " << r.proofs_accepted << "\nmonitor "
                              << (r.monitor_clean ? "clean" : "alerting") << "\narchivist "
                              << (r.archivist_covered_tip ? "covered" : "behind") << "\n";
            } else if (o->scenario == "s1-splitview") {
                splitview_result r = run_splitview_scenario(work);
                passed = r.passed();
                if (!o->js)
                    std::cout << "scenario s1-splitview\nfork_height " << r.fork_height
                              << " rogue_commit_height " << r.rogue_commit_height
                              << "\nhonest_auditor "
                              << (r.honest_verdict.accepted
                                      ? std::string("accept")
                                      : "reject " +
                                            std::string(reject_reason_name(r.honest_verdict.reason)))
                              << "\neclipsed_auditor "
                              << (r.eclipsed_verdict.accepted ? "accept" : "reject")
                              << "\nstaleness boundary "
                              << (r.eclipsed_at_boundary == staleness::ok ? "ok" : "eclipse_suspected")
                              << " past_boundary "
                              << (r.eclipsed_past_boundary == staleness::eclipse_suspected
                                      ? "eclipse_suspected"
                                      : "ok")
                              << " honest_view "
                              << (r.honest_past_boundary == staleness::ok ? "ok" : "eclipse_suspected")
                              << "\n";
            } else if (o->scenario == "s2-withholding") {
                withholding_result r = run_withholding_scenario(work);
                passed = r.passed();
                if (!o->js)
                    std::cout << "scenario s2-withholding\npublished " << r.published_height << " "
                              << availability_name(r.published_status) << "\nwithheld "
                              << r.withheld_height << " " << availability_name(r.withheld_status)
                              << "\nmonitor_alerts " << r.monitor_alerts << "\ncovered_tip "
                              << r.covered_tip << "\nwithheld_coverage "
                              << (r.withheld_coverage == coverage::covered ? "covered"
                                                                           : "not_covered")
                              << "\nwithheld_inclusion "
                              << (r.withheld_inclusion.accepted ? "accepted" : "rejected") << "\n";
            } else {
                fail(errc::config,
                     "unknown scenario '" + o->scenario +
                         "' (expected honest, s1-splitview, or s2-withholding)");
            }
            if (o->js)
                std::cout << slurp(work / "summary.json");
            else
                std::cout << "verdict " << (passed ? "pass" : "fail") << "\n";
            rc = passed ? 0 : 2;
        });
    }

    {
        struct opts {
            std::string listen = "127.0.0.1:0", wallet_out, stop_file;
            std::string wallet_key =
                "00000000000000000000000000000000000000000000000000000000000a0701";
            uint32_t blocks = 8;
            int64_t fund = 4000000000;
            int64_t serve_for_ms = 0;
        };
        auto o = std::make_shared<opts>();
        CLI::App* cmd = sim->add_subcommand("serve", "Run a sim chain node over TCP");
        cmd->add_option("--listen", o->listen, "Bind address host:port (port 0 picks one)")
            ->capture_default_str();
        cmd->add_option("--height", o->blocks, "Blocks to mine before serving")
            ->capture_default_str();
        cmd->add_option("--wallet-out", o->wallet_out,
                        "Create a funded authority wallet at this path");
        cmd->add_option("--wallet-key", o->wallet_key, "Private key hex for --wallet-out");
        cmd->add_option("--fund", o->fund, "Satoshis the faucet pays the wallet")
            ->capture_default_str();
        cmd->add_option("--stop-file", o->stop_file, "Exit once this file exists");
        cmd->add_option("--serve-for-ms", o->serve_for_ms,
                        "Serve this long then exit (default: until SIGINT/SIGTERM)");
        cmd->callback([o, &rc] {
            sim_chain chain;
            int64_t clock = 1500000000;
            std::optional<wallet> funds;
            if (!o->wallet_out.empty()) {
                funds.emplace(ec_key::from_hex(o->wallet_key));
                funding_source miner = chain.take_miner_funds();
                transaction pay = build_payment(miner, funds->address(), o->fund, 10000);
                chain.submit_tx(pay);
                clock += 600;
                chain.mine_block(clock);
                funds->receive(pay);
                funds->save(o->wallet_out);
            }
            while (chain.tip_height() < o->blocks) {
                clock += 600;
                chain.mine_block(clock);
            }
            endpoint ep = parse_endpoint(o->listen);
            sim_server server(chain, chain.main_branch(), ep.port);
            std::cout << "port " << server.port() << "\ngenesis " << chain.block_hash_at(0).hex()
                      << "\ntip " << chain.tip_height() << " " << chain.tip_hash().hex() << "\n";
            if (funds) std::cout << "authority " << funds->address().str() << "\n";
            std::cout << std::flush;
            if (!o->stop_file.empty()) {
                while (!fs::exists(o->stop_file))
                    std::this_thread::sleep_for(std::chrono::milliseconds(50));
            } else if (o->serve_for_ms > 0) {
                std::this_thread::sleep_for(std::chrono::milliseconds(o->serve_for_ms));
            } else {
                wait_for_signal();
            }
            server.stop();
            rc = 0;
        });
    }

    {
        struct opts {
            std::string node;
            uint32_t count = 1;
            int64_t timestamp = -1;
            int64_t interval = 600;
        };
        auto o = std::make_shared<opts>();
        CLI::App* cmd = sim->add_subcommand("mine", "Ask a sim node to mine blocks");
        cmd->add_option("--node", o->node, "Sim node host:port")->required();
        cmd->add_option("--count", o->count, "Blocks to mine")->capture_default_str();
        cmd->add_option("--timestamp", o->timestamp,
                        "First block timestamp (default: wall clock)");
        cmd->add_option("--interval", o->interval, "Seconds between block timestamps")
            ->capture_default_str();
        cmd->callback([o, &rc] {
            endpoint ep = parse_endpoint(o->node);
            sim_client client(ep.host, ep.port);
            int64_t ts = o->timestamp >= 0 ? o->timestamp : static_cast<int64_t>(::time(nullptr));
            for (uint32_t i = 0; i < o->count; ++i) {
                auto [hash, height] = client.mine(ts + static_cast<int64_t>(i) * o->interval);
                std::cout << "mined " << height << " " << hash.hex() << "\n";
            }
            rc = 0;
        });
    }
}

// ---- debfeed ------------------------------------------------------------

void add_debfeed(CLI::App& app, int& rc) {
    CLI::App* debfeed = app.add_subcommand("debfeed", "Debian Packages index ingestion");
    debfeed->require_subcommand(1);

    {
        struct opts {
            std::string packages, out;
            bool js = false;
        };
        auto o = std::make_shared<opts>();
        CLI::App* cmd = debfeed->add_subcommand("parse", "Parse a Packages index into statements");
        cmd->add_option("packages", o->packages, "Packages index file")->required();
        cmd->add_option("--out", o->out, "Write a batch file for 'authority commit'");
        cmd->add_flag("--json", o->js, "Machine-readable output");
        cmd->callback([o, &rc] {
            std::vector<package_entry> entries = parse_packages(slurp(o->packages));
            std::vector<manifest_entry> statements = as_statements(entries);
            std::vector<digest32> digests;
            for (const manifest_entry& e : statements) digests.push_back(e.digest);
            if (!o->out.empty()) atomic_write_file(o->out, str_span(format_manifest(statements)));
            if (o->js) {
                json packages = json::array();
                for (const package_entry& e : entries)
                    packages.push_back({{"package", e.package_name},
                                        {"filename", e.filename},
                                        {"sha256", e.sha256.hex()},
                                        {"size", e.size_bytes}});
                std::cout << json{{"packages", packages},
                                  {"count", entries.size()},
                                  {"statement_root", statement_root(digests).hex()}}
                                 .dump()
                          << "\n";
            } else {
                std::cout << "packages " << entries.size() << "\nstatement_root "
                          << statement_root(digests).hex() << "\n";
            }
            rc = 0;
        });
    }

    {
        struct opts {
            std::string old_file, new_file, out;
            bool js = false;
        };
        auto o = std::make_shared<opts>();
        CLI::App* cmd = debfeed->add_subcommand("diff", "Statements new or changed between snapshots");
        cmd->add_option("--old", o->old_file, "Previous Packages index")->required();
        cmd->add_option("--new", o->new_file, "Current Packages index")->required();
        cmd->add_option("--out", o->out, "Write a batch file for 'authority commit'");
        cmd->add_flag("--json", o->js, "Machine-readable output");
        cmd->callback([o, &rc] {
            std::vector<package_entry> changed =
                diff_batches(parse_packages(slurp(o->old_file)), parse_packages(slurp(o->new_file)));
            std::vector<manifest_entry> statements = as_statements(changed);
            if (!o->out.empty()) atomic_write_file(o->out, str_span(format_manifest(statements)));
            if (o->js) {
                json out = json::array();
                for (const package_entry& e : changed)
                    out.push_back({{"package", e.package_name},
                                   {"filename", e.filename},
                                   {"sha256", e.sha256.hex()},
                                   {"size", e.size_bytes}});
                std::cout << json{{"changed", out}, {"count", changed.size()}}.dump() << "\n";
            } else {
                std::cout << "changed " << changed.size() << "\n";
                for (const package_entry& e : changed)
                    std::cout << e.filename << " " << e.sha256.hex() << "\n";
            }
            rc = 0;
        });
    }
}

const CLI::App& deepest_parsed(const CLI::App& app) {
    for (const CLI::App* sub : app.get_subcommands())
        if (sub->parsed()) return deepest_parsed(*sub);
    return app;
}

} // namespace

int run_cli(int argc, const char* const* argv) {
    CLI::App app{"contour: chain-anchored binary transparency"};
    app.require_subcommand(1);
    app.set_config("--config", "", "Read defaults from an INI/TOML file (flags win)");

    int rc = 0;
    add_authority(app, rc);
    add_auditor(app, rc);
    add_monitor(app, rc);
    add_archivist(app, rc);
    add_cost(app, rc);
    add_sim(app, rc);
    add_debfeed(app, rc);

    try {
        app.parse(argc, const_cast<char**>(argv));
    } catch (const CLI::CallForHelp&) {
        std::cout << deepest_parsed(app).help();
        return 0;
    } catch (const CLI::CallForAllHelp&) {
        std::cout << app.help("", CLI::AppFormatMode::All);
        return 0;
    } catch (const CLI::ParseError& e) {
        std::cerr << "contour: " << e.what() << "\n\n" << deepest_parsed(app).help();
        return 1;
    } catch (const error& e) {
        std::cerr << "contour: " << e.what() << "\n";
        return exit_code_for(e.code());
    }
    return rc;
}

} // namespace contour
