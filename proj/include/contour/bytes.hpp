#pragma once

#include <contour/errors.hpp>

#include <cstdint>
#include <cstring>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace contour {

using bytes = std::vector<uint8_t>;
using byte_span = std::span<const uint8_t>;

std::string to_hex(byte_span data);
bytes from_hex(std::string_view hex);

inline byte_span as_span(const bytes& b) { return byte_span(b.data(), b.size()); }

inline byte_span str_span(std::string_view s) {
    return byte_span(reinterpret_cast<const uint8_t*>(s.data()), s.size());
}

// Little-endian serializer. Append-only; varints use the 0xfd/0xfe/0xff scheme.
class byte_writer {
  public:
    void u8(uint8_t v) { out_.push_back(v); }
    void u16le(uint16_t v);
    void u32le(uint32_t v);
    void u64le(uint64_t v);
    void i32le(int32_t v) { u32le(static_cast<uint32_t>(v)); }
    void i64le(int64_t v) { u64le(static_cast<uint64_t>(v)); }
    void varint(uint64_t v);
    void raw(byte_span data) { out_.insert(out_.end(), data.begin(), data.end()); }

    const bytes& data() const { return out_; }
    bytes take() { return std::move(out_); }

  private:
    bytes out_;
};

// Strict cursor over an immutable buffer. Reads past the end throw errc::format.
class byte_reader {
  public:
    explicit byte_reader(byte_span data) : data_(data) {}

    uint8_t u8();
    uint16_t u16le();
    uint32_t u32le();
    uint64_t u64le();
    int32_t i32le() { return static_cast<int32_t>(u32le()); }
    int64_t i64le() { return static_cast<int64_t>(u64le()); }
    uint64_t varint();
    byte_span raw(size_t n);

    size_t remaining() const { return data_.size() - pos_; }
    bool done() const { return pos_ == data_.size(); }
    void expect_done() const;

  private:
    byte_span data_;
    size_t pos_ = 0;
};

} // namespace contour
