#include <contour/debfeed.hpp>

#include <charconv>
#include <map>
#include <unordered_set>

namespace contour {

namespace {

struct stanza_fields {
    std::map<std::string, std::string, std::less<>> values;
    bool any = false;
};

[[noreturn]] void bad_stanza(size_t index, const std::string& what) {
    fail(errc::malformed_stanza, "stanza " + std::to_string(index) + ": " + what);
}

package_entry finish_stanza(const stanza_fields& fields, size_t index) {
    package_entry entry;
    for (const char* name : {"Package", "Filename", "Size", "SHA256"})
        if (fields.values.find(name) == fields.values.end())
            bad_stanza(index, std::string("missing ") + name);

    entry.package_name = fields.values.at("Package");
    entry.filename = fields.values.at("Filename");
    if (entry.filename.empty()) bad_stanza(index, "empty Filename");

    const std::string& size = fields.values.at("Size");
    auto [ptr, ec] = std::from_chars(size.data(), size.data() + size.size(), entry.size_bytes);
    if (ec != std::errc() || ptr != size.data() + size.size())
        bad_stanza(index, "Size is not a number");

    const std::string& hex = fields.values.at("SHA256");
    if (hex.size() != 64) bad_stanza(index, "SHA256 is not 64 hex chars");
    try {
        entry.sha256 = digest32::from_hex(hex);
    } catch (const error&) {
        bad_stanza(index, "SHA256 is not hex");
    }
    return entry;
}

} // namespace

std::vector<package_entry> parse_packages(std::string_view text) {
    std::vector<package_entry> out;
    stanza_fields fields;
    size_t stanza_index = 1;
    std::string last_key;

    size_t pos = 0;
    while (pos <= text.size()) {
        size_t eol = text.find('\n', pos);
        if (eol == std::string_view::npos) eol = text.size();
        std::string_view line = text.substr(pos, eol - pos);
        pos = eol + 1;
        if (!line.empty() && line.back() == '\r') line.remove_suffix(1);

        if (line.empty()) {
            if (fields.any) {
                out.push_back(finish_stanza(fields, stanza_index));
                ++stanza_index;
                fields = {};
                last_key.clear();
            }
            if (pos > text.size()) break;
            continue;
        }

        if (line.front() == ' ' || line.front() == '\t') {
            if (last_key.empty()) bad_stanza(stanza_index, "continuation before any field");
            continue;
        }

        size_t colon = line.find(':');
        if (colon == std::string_view::npos || colon == 0)
            bad_stanza(stanza_index, "line is not a field");
        std::string key(line.substr(0, colon));
        std::string_view value = line.substr(colon + 1);
        while (!value.empty() && (value.front() == ' ' || value.front() == '\t'))
            value.remove_prefix(1);

        fields.any = true;
        last_key = key;
        if (!fields.values.emplace(std::move(key), std::string(value)).second)
            bad_stanza(stanza_index, "duplicate field " + std::string(line.substr(0, colon)));
    }
    if (fields.any) out.push_back(finish_stanza(fields, stanza_index));
    return out;
}

std::vector<package_entry> diff_batches(const std::vector<package_entry>& previous,
                                        const std::vector<package_entry>& current) {
    std::unordered_set<std::string> known;
    known.reserve(previous.size());
    for (const package_entry& e : previous) known.insert(e.filename + "\n" + e.sha256.hex());

    std::vector<package_entry> out;
    for (const package_entry& e : current)
        if (known.count(e.filename + "\n" + e.sha256.hex()) == 0) out.push_back(e);
    return out;
}

std::vector<manifest_entry> as_statements(const std::vector<package_entry>& entries) {
    std::vector<manifest_entry> out;
    out.reserve(entries.size());
    for (const package_entry& e : entries) out.push_back({e.sha256, e.filename});
    return out;
}

} // namespace contour
