#pragma once

#include <contour/bytes.hpp>
#include <contour/hash.hpp>

#include <json.hpp>

#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>

namespace testsupport {

inline std::filesystem::path fixtures_dir() { return CONTOUR_FIXTURES_DIR; }

inline std::string slurp(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    REQUIRE_MESSAGE(in.good(), "cannot open ", path.string());
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

inline nlohmann::json load_fixture(const std::string& name) {
    return nlohmann::json::parse(slurp(fixtures_dir() / name));
}

inline contour::digest32 d32(const std::string& hex) { return contour::digest32::from_hex(hex); }

inline contour::bytes hexb(const std::string& hex) { return contour::from_hex(hex); }

} // namespace testsupport
