#pragma once

#include <contour/authority.hpp>
#include <contour/hash.hpp>

#include <string>
#include <string_view>
#include <vector>

namespace contour {

struct package_entry {
    std::string package_name;
    std::string filename;
    digest32 sha256;
    uint64_t size_bytes = 0;
};

// Parses RFC-822-style Packages stanzas separated by blank lines. Package,
// Filename, Size, and SHA256 are required per stanza; other fields and
// continuation lines are skipped. A broken stanza raises malformed_stanza
// naming its 1-based index.
std::vector<package_entry> parse_packages(std::string_view text);

// Entries of current whose (filename, sha256) pair is absent from
// previous, in current order. Removals yield nothing: the log is
// append-only evidence of publication.
std::vector<package_entry> diff_batches(const std::vector<package_entry>& previous,
                                        const std::vector<package_entry>& current);

// Statement view of a package list, ready for a batch.
std::vector<manifest_entry> as_statements(const std::vector<package_entry>& entries);

} // namespace contour
