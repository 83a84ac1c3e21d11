#include <contour/monitor.hpp>

#include <httplib.h>

#include <algorithm>
#include <fstream>
#include <set>

namespace contour {

const char* availability_name(availability a) {
    switch (a) {
        case availability::unchecked: return "unchecked";
        case availability::available: return "available";
        case availability::missing_data: return "missing_data";
        case availability::root_mismatch: return "root_mismatch";
    }
    return "unchecked";
}

std::optional<block> sim_block_source::fetch_block(uint32_t height) {
    if (height > chain_.tip_height(branch_)) return std::nullopt;
    return chain_.block_at(height, branch_);
}

std::optional<block> dir_block_source::fetch_block(uint32_t height) {
    std::ifstream in(dir_ / (std::to_string(height) + ".blk"), std::ios::binary);
    if (!in.good()) return std::nullopt;
    bytes raw((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
    return block::parse(as_span(raw));
}

scan_result get_commits(block_source& blocks, const authority_address& addr,
                        uint32_t from_height, uint32_t to_height) {
    if (from_height > to_height) fail(errc::range, "scan range is inverted");

    scan_result out;
    out.next_height = from_height;
    for (uint32_t h = from_height; h <= to_height; ++h) {
        std::optional<block> blk = blocks.fetch_block(h);
        if (!blk) {
            out.complete = false;
            return out;
        }
        for (size_t i = 0; i < blk->txs.size(); ++i) {
            const transaction& tx = blk->txs[i];
            if (!tx_spends_from(tx, addr) || !is_commitment(tx)) continue;
            commitment_record rec;
            rec.root = extract_commit_root(tx);
            rec.txid = tx.txid();
            rec.block_hash = blk->header.hash();
            rec.height = h;
            rec.tx_index = i;
            out.records.push_back(std::move(rec));
        }
        out.next_height = h + 1;
        if (h == to_height) break;
    }
    return out;
}

std::optional<std::string> dir_data_source::fetch_manifest(const digest32& root) {
    std::ifstream in(dir_ / (root.hex() + ".manifest"), std::ios::binary);
    if (!in.good()) return std::nullopt;
    return std::string(std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>());
}

namespace {

// Fetched names come from manifests the authority wrote; a hostile one must
// not escape the data directory.
bool path_escapes(const std::string& filename) {
    if (filename.empty() || filename.front() == '/') return true;
    size_t pos = 0;
    while (pos <= filename.size()) {
        size_t next = filename.find('/', pos);
        if (next == std::string::npos) next = filename.size();
        std::string_view part(filename.data() + pos, next - pos);
        if (part.empty() || part == "." || part == "..") return true;
        pos = next + 1;
    }
    return false;
}

} // namespace

std::optional<bytes> dir_data_source::fetch_file(const std::string& filename) {
    if (path_escapes(filename)) return std::nullopt;
    std::ifstream in(dir_ / filename, std::ios::binary);
    if (!in.good()) return std::nullopt;
    return bytes((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
}

http_data_source::http_data_source(const std::string& base_url) {
    const std::string scheme = "http://";
    if (base_url.rfind(scheme, 0) != 0) fail(errc::config, "data url must start with http://");
    size_t slash = base_url.find('/', scheme.size());
    if (slash == std::string::npos) {
        host_port_ = base_url;
    } else {
        host_port_ = base_url.substr(0, slash);
        prefix_ = base_url.substr(slash);
        while (!prefix_.empty() && prefix_.back() == '/') prefix_.pop_back();
    }
}

std::optional<std::string> http_data_source::get(const std::string& path) {
    httplib::Client client(host_port_);
    client.set_connection_timeout(5, 0);
    client.set_read_timeout(5, 0);
    httplib::Result res = client.Get(prefix_ + path);
    if (!res || res->status != 200) return std::nullopt;
    return res->body;
}

std::optional<std::string> http_data_source::fetch_manifest(const digest32& root) {
    return get("/manifest/" + root.hex());
}

std::optional<bytes> http_data_source::fetch_file(const std::string& filename) {
    if (path_escapes(filename)) return std::nullopt;
    std::optional<std::string> body = get("/file/" + filename);
    if (!body) return std::nullopt;
    return bytes(body->begin(), body->end());
}

void check_availability(commitment_record& rec, data_source& data) {
    rec.entries.clear();
    std::optional<std::string> text = data.fetch_manifest(rec.root);
    if (!text) {
        rec.status = availability::missing_data;
        return;
    }
    std::vector<manifest_entry> entries;
    try {
        entries = parse_manifest(*text);
    } catch (const error&) {
        rec.status = availability::root_mismatch;
        return;
    }
    if (entries.empty()) {
        rec.status = availability::root_mismatch;
        return;
    }
    std::vector<digest32> digests;
    digests.reserve(entries.size());
    for (const manifest_entry& e : entries) digests.push_back(e.digest);
    if (statement_root(digests) != rec.root) {
        rec.status = availability::root_mismatch;
        return;
    }
    rec.status = availability::available;
    rec.entries = std::move(entries);
}

size_t monitor_report::alert_count() const {
    size_t unavailable = 0;
    for (const commitment_record& rec : records)
        if (rec.status == availability::missing_data || rec.status == availability::root_mismatch)
            ++unavailable;
    return unavailable + gaps.size();
}

std::string monitor_report::render() const {
    std::string out;
    for (const commitment_record& rec : records) {
        out += std::to_string(rec.height);
        out += ' ';
        out += rec.txid.hex();
        out += ' ';
        out += rec.root.hex();
        out += ' ';
        out += availability_name(rec.status);
        out += '\n';
    }
    for (const update_gap& gap : gaps) {
        out += "gap ";
        out += gap.filename;
        out += ' ';
        out += std::to_string(gap.height);
        out += ' ';
        out += gap.digest.hex();
        out += '\n';
    }
    return out;
}

monitor_report report(std::vector<commitment_record> records, const client_view& seen) {
    monitor_report out;
    out.records = std::move(records);

    for (const commitment_record& rec : out.records) {
        if (rec.status != availability::available) continue;
        for (const manifest_entry& e : rec.entries)
            out.history[e.filename].push_back({rec.height, e.digest});
    }

    for (const auto& [filename, events] : out.history) {
        auto it = seen.find(filename);
        if (it == seen.end() || it->second.empty()) continue;
        uint32_t newest_seen = *std::max_element(it->second.begin(), it->second.end());
        std::set<uint32_t> seen_heights(it->second.begin(), it->second.end());
        for (const update_event& ev : events) {
            if (ev.height < newest_seen && seen_heights.count(ev.height) == 0)
                out.gaps.push_back({filename, ev.height, ev.digest});
        }
    }
    return out;
}

} // namespace contour
