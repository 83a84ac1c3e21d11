#pragma once

#include <contour/bytes.hpp>

#include <array>
#include <compare>
#include <cstdint>

namespace contour {

// 32-byte digest in internal (hashing) byte order. hex_be() gives the
// reversed display order used for block hashes and txids.
struct digest32 {
    std::array<uint8_t, 32> v{};

    auto operator<=>(const digest32&) const = default;

    byte_span span() const { return byte_span(v.data(), v.size()); }
    std::string hex() const { return to_hex(span()); }
    std::string hex_be() const;
    bool is_zero() const;

    static digest32 from_hex(std::string_view hex);
    static digest32 from_hex_be(std::string_view hex);
    static digest32 from_span(byte_span data);
};

struct digest32_hash {
    size_t operator()(const digest32& d) const {
        size_t out;
        std::memcpy(&out, d.v.data(), sizeof(out));
        return out;
    }
};

class sha256_ctx {
  public:
    sha256_ctx();
    void update(byte_span data);
    digest32 finish();

  private:
    void compress(const uint8_t* block);

    std::array<uint32_t, 8> state_;
    std::array<uint8_t, 64> buf_;
    uint64_t total_ = 0;
};

digest32 sha256(byte_span data);
digest32 sha256d(byte_span data);
std::array<uint8_t, 20> ripemd160(byte_span data);
std::array<uint8_t, 20> hash160(byte_span data);
digest32 hmac_sha256(byte_span key, byte_span msg);

} // namespace contour
