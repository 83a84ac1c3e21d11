#include <contour/bytes.hpp>

namespace contour {

namespace {

int hex_nibble(char c) {
    if (c >= '0' && c <= '9') return c - '0';
    if (c >= 'a' && c <= 'f') return c - 'a' + 10;
    if (c >= 'A' && c <= 'F') return c - 'A' + 10;
    return -1;
}

} // namespace

std::string to_hex(byte_span data) {
    static const char digits[] = "0123456789abcdef";
    std::string out;
    out.reserve(data.size() * 2);
    for (uint8_t b : data) {
        out.push_back(digits[b >> 4]);
        out.push_back(digits[b & 0x0f]);
    }
    return out;
}

bytes from_hex(std::string_view hex) {
    if (hex.size() % 2 != 0) fail(errc::format, "hex string has odd length");
    bytes out;
    out.reserve(hex.size() / 2);
    for (size_t i = 0; i < hex.size(); i += 2) {
        int hi = hex_nibble(hex[i]);
        int lo = hex_nibble(hex[i + 1]);
        if (hi < 0 || lo < 0) fail(errc::format, "invalid hex digit");
        out.push_back(static_cast<uint8_t>(hi << 4 | lo));
    }
    return out;
}

void byte_writer::u16le(uint16_t v) {
    out_.push_back(static_cast<uint8_t>(v));
    out_.push_back(static_cast<uint8_t>(v >> 8));
}

void byte_writer::u32le(uint32_t v) {
    for (int i = 0; i < 4; ++i) out_.push_back(static_cast<uint8_t>(v >> (8 * i)));
}

void byte_writer::u64le(uint64_t v) {
    for (int i = 0; i < 8; ++i) out_.push_back(static_cast<uint8_t>(v >> (8 * i)));
}

void byte_writer::varint(uint64_t v) {
    if (v < 0xfd) {
        u8(static_cast<uint8_t>(v));
    } else if (v <= 0xffff) {
        u8(0xfd);
        u16le(static_cast<uint16_t>(v));
    } else if (v <= 0xffffffff) {
        u8(0xfe);
        u32le(static_cast<uint32_t>(v));
    } else {
        u8(0xff);
        u64le(v);
    }
}

uint8_t byte_reader::u8() {
    if (remaining() < 1) fail(errc::format, "read past end of buffer");
    return data_[pos_++];
}

uint16_t byte_reader::u16le() {
    uint16_t lo = u8();
    uint16_t hi = u8();
    return static_cast<uint16_t>(lo | hi << 8);
}

uint32_t byte_reader::u32le() {
    uint32_t v = 0;
    for (int i = 0; i < 4; ++i) v |= static_cast<uint32_t>(u8()) << (8 * i);
    return v;
}

uint64_t byte_reader::u64le() {
    uint64_t v = 0;
    for (int i = 0; i < 8; ++i) v |= static_cast<uint64_t>(u8()) << (8 * i);
    return v;
}

// Rejects non-minimal encodings so a value has exactly one serialization.
uint64_t byte_reader::varint() {
    uint8_t tag = u8();
    if (tag < 0xfd) return tag;
    if (tag == 0xfd) {
        uint64_t v = u16le();
        if (v < 0xfd) fail(errc::format, "non-minimal varint");
        return v;
    }
    if (tag == 0xfe) {
        uint64_t v = u32le();
        if (v <= 0xffff) fail(errc::format, "non-minimal varint");
        return v;
    }
    uint64_t v = u64le();
    if (v <= 0xffffffff) fail(errc::format, "non-minimal varint");
    return v;
}

byte_span byte_reader::raw(size_t n) {
    if (remaining() < n) fail(errc::format, "read past end of buffer");
    byte_span out = data_.subspan(pos_, n);
    pos_ += n;
    return out;
}

void byte_reader::expect_done() const {
    if (!done()) fail(errc::format, "trailing bytes after message");
}

} // namespace contour
