#include <contour/hash.hpp>

#include <algorithm>
#include <bit>

namespace contour {

std::string digest32::hex_be() const {
    std::array<uint8_t, 32> rev = v;
    std::reverse(rev.begin(), rev.end());
    return to_hex(byte_span(rev.data(), rev.size()));
}

bool digest32::is_zero() const {
    return std::all_of(v.begin(), v.end(), [](uint8_t b) { return b == 0; });
}

digest32 digest32::from_hex(std::string_view hex) {
    bytes raw = contour::from_hex(hex);
    if (raw.size() != 32) fail(errc::format, "digest hex must be 64 chars");
    digest32 d;
    std::copy(raw.begin(), raw.end(), d.v.begin());
    return d;
}

digest32 digest32::from_hex_be(std::string_view hex) {
    digest32 d = from_hex(hex);
    std::reverse(d.v.begin(), d.v.end());
    return d;
}

digest32 digest32::from_span(byte_span data) {
    if (data.size() != 32) fail(errc::format, "digest must be 32 bytes");
    digest32 d;
    std::copy(data.begin(), data.end(), d.v.begin());
    return d;
}

namespace {

constexpr std::array<uint32_t, 64> k256 = {
    0x428a2f98, 0x71374491, 0xb5c0fbcf, 0xe9b5dba5, 0x3956c25b, 0x59f111f1, 0x923f82a4, 0xab1c5ed5,
    0xd807aa98, 0x12835b01, 0x243185be, 0x550c7dc3, 0x72be5d74, 0x80deb1fe, 0x9bdc06a7, 0xc19bf174,
    0xe49b69c1, 0xefbe4786, 0x0fc19dc6, 0x240ca1cc, 0x2de92c6f, 0x4a7484aa, 0x5cb0a9dc, 0x76f988da,
    0x983e5152, 0xa831c66d, 0xb00327c8, 0xbf597fc7, 0xc6e00bf3, 0xd5a79147, 0x06ca6351, 0x14292967,
    0x27b70a85, 0x2e1b2138, 0x4d2c6dfc, 0x53380d13, 0x650a7354, 0x766a0abb, 0x81c2c92e, 0x92722c85,
    0xa2bfe8a1, 0xa81a664b, 0xc24b8b70, 0xc76c51a3, 0xd192e819, 0xd6990624, 0xf40e3585, 0x106aa070,
    0x19a4c116, 0x1e376c08, 0x2748774c, 0x34b0bcb5, 0x391c0cb3, 0x4ed8aa4a, 0x5b9cca4f, 0x682e6ff3,
    0x748f82ee, 0x78a5636f, 0x84c87814, 0x8cc70208, 0x90befffa, 0xa4506ceb, 0xbef9a3f7, 0xc67178f2,
};

uint32_t rd32be(const uint8_t* p) {
    return static_cast<uint32_t>(p[0]) << 24 | static_cast<uint32_t>(p[1]) << 16 |
           static_cast<uint32_t>(p[2]) << 8 | static_cast<uint32_t>(p[3]);
}

void wr32be(uint8_t* p, uint32_t v) {
    p[0] = static_cast<uint8_t>(v >> 24);
    p[1] = static_cast<uint8_t>(v >> 16);
    p[2] = static_cast<uint8_t>(v >> 8);
    p[3] = static_cast<uint8_t>(v);
}

} // namespace

sha256_ctx::sha256_ctx()
    : state_{0x6a09e667, 0xbb67ae85, 0x3c6ef372, 0xa54ff53a,
             0x510e527f, 0x9b05688c, 0x1f83d9ab, 0x5be0cd19} {}

void sha256_ctx::compress(const uint8_t* block) {
    uint32_t w[64];
    for (int i = 0; i < 16; ++i) w[i] = rd32be(block + 4 * i);
    for (int i = 16; i < 64; ++i) {
        uint32_t s0 = std::rotr(w[i - 15], 7) ^ std::rotr(w[i - 15], 18) ^ (w[i - 15] >> 3);
        uint32_t s1 = std::rotr(w[i - 2], 17) ^ std::rotr(w[i - 2], 19) ^ (w[i - 2] >> 10);
        w[i] = w[i - 16] + s0 + w[i - 7] + s1;
    }
    uint32_t a = state_[0], b = state_[1], c = state_[2], d = state_[3];
    uint32_t e = state_[4], f = state_[5], g = state_[6], h = state_[7];
    for (int i = 0; i < 64; ++i) {
        uint32_t s1 = std::rotr(e, 6) ^ std::rotr(e, 11) ^ std::rotr(e, 25);
        uint32_t ch = (e & f) ^ (~e & g);
        uint32_t t1 = h + s1 + ch + k256[i] + w[i];
        uint32_t s0 = std::rotr(a, 2) ^ std::rotr(a, 13) ^ std::rotr(a, 22);
        uint32_t maj = (a & b) ^ (a & c) ^ (b & c);
        uint32_t t2 = s0 + maj;
        h = g;
        g = f;
        f = e;
        e = d + t1;
        d = c;
        c = b;
        b = a;
        a = t1 + t2;
    }
    state_[0] += a;
    state_[1] += b;
    state_[2] += c;
    state_[3] += d;
    state_[4] += e;
    state_[5] += f;
    state_[6] += g;
    state_[7] += h;
}

void sha256_ctx::update(byte_span data) {
    size_t fill = total_ % 64;
    total_ += data.size();
    size_t off = 0;
    if (fill > 0) {
        size_t take = std::min(data.size(), 64 - fill);
        std::copy_n(data.begin(), take, buf_.begin() + fill);
        off = take;
        if (fill + take < 64) return;
        compress(buf_.data());
    }
    while (off + 64 <= data.size()) {
        compress(data.data() + off);
        off += 64;
    }
    std::copy(data.begin() + off, data.end(), buf_.begin());
}

digest32 sha256_ctx::finish() {
    uint64_t bit_len = total_ * 8;
    uint8_t pad[72] = {0x80};
    size_t pad_len = 1 + (119 - total_ % 64) % 64;
    for (int i = 0; i < 8; ++i) pad[pad_len + i] = static_cast<uint8_t>(bit_len >> (56 - 8 * i));
    update(byte_span(pad, pad_len + 8));
    digest32 out;
    for (int i = 0; i < 8; ++i) wr32be(out.v.data() + 4 * i, state_[i]);
    return out;
}

digest32 sha256(byte_span data) {
    sha256_ctx ctx;
    ctx.update(data);
    return ctx.finish();
}

digest32 sha256d(byte_span data) {
    digest32 first = sha256(data);
    return sha256(first.span());
}

namespace {

// RIPEMD-160 per the original Dobbertin/Bosselaers/Preneel definition.
constexpr int rmd_r[80] = {
    0, 1, 2, 3, 4, 5, 6, 7, 8, 9, 10, 11, 12, 13, 14, 15,
    7, 4, 13, 1, 10, 6, 15, 3, 12, 0, 9, 5, 2, 14, 11, 8,
    3, 10, 14, 4, 9, 15, 8, 1, 2, 7, 0, 6, 13, 11, 5, 12,
    1, 9, 11, 10, 0, 8, 12, 4, 13, 3, 7, 15, 14, 5, 6, 2,
    4, 0, 5, 9, 7, 12, 2, 10, 14, 1, 3, 8, 11, 6, 15, 13,
};
constexpr int rmd_rp[80] = {
    5, 14, 7, 0, 9, 2, 11, 4, 13, 6, 15, 8, 1, 10, 3, 12,
    6, 11, 3, 7, 0, 13, 5, 10, 14, 15, 8, 12, 4, 9, 1, 2,
    15, 5, 1, 3, 7, 14, 6, 9, 11, 8, 12, 2, 10, 0, 4, 13,
    8, 6, 4, 1, 3, 11, 15, 0, 5, 12, 2, 13, 9, 7, 10, 14,
    12, 15, 10, 4, 1, 5, 8, 7, 6, 2, 13, 14, 0, 3, 9, 11,
};
constexpr int rmd_s[80] = {
    11, 14, 15, 12, 5, 8, 7, 9, 11, 13, 14, 15, 6, 7, 9, 8,
    7, 6, 8, 13, 11, 9, 7, 15, 7, 12, 15, 9, 11, 7, 13, 12,
    11, 13, 6, 7, 14, 9, 13, 15, 14, 8, 13, 6, 5, 12, 7, 5,
    11, 12, 14, 15, 14, 15, 9, 8, 9, 14, 5, 6, 8, 6, 5, 12,
    9, 15, 5, 11, 6, 8, 13, 12, 5, 12, 13, 14, 11, 8, 5, 6,
};
constexpr int rmd_sp[80] = {
    8, 9, 9, 11, 13, 15, 15, 5, 7, 7, 8, 11, 14, 14, 12, 6,
    9, 13, 15, 7, 12, 8, 9, 11, 7, 7, 12, 7, 6, 15, 13, 11,
    9, 7, 15, 11, 8, 6, 6, 14, 12, 13, 5, 14, 13, 13, 7, 5,
    15, 5, 8, 11, 14, 14, 6, 14, 6, 9, 12, 9, 12, 5, 15, 8,
    8, 5, 12, 9, 12, 5, 14, 6, 8, 13, 6, 5, 15, 13, 11, 11,
};

uint32_t rmd_f(int j, uint32_t x, uint32_t y, uint32_t z) {
    if (j < 16) return x ^ y ^ z;
    if (j < 32) return (x & y) | (~x & z);
    if (j < 48) return (x | ~y) ^ z;
    if (j < 64) return (x & z) | (y & ~z);
    return x ^ (y | ~z);
}

uint32_t rmd_k(int j) {
    if (j < 16) return 0x00000000;
    if (j < 32) return 0x5a827999;
    if (j < 48) return 0x6ed9eba1;
    if (j < 64) return 0x8f1bbcdc;
    return 0xa953fd4e;
}

uint32_t rmd_kp(int j) {
    if (j < 16) return 0x50a28be6;
    if (j < 32) return 0x5c4dd124;
    if (j < 48) return 0x6d703ef3;
    if (j < 64) return 0x7a6d76e9;
    return 0x00000000;
}

void rmd_compress(uint32_t h[5], const uint8_t* block) {
    uint32_t x[16];
    for (int i = 0; i < 16; ++i) {
        x[i] = static_cast<uint32_t>(block[4 * i]) | static_cast<uint32_t>(block[4 * i + 1]) << 8 |
               static_cast<uint32_t>(block[4 * i + 2]) << 16 |
               static_cast<uint32_t>(block[4 * i + 3]) << 24;
    }
    uint32_t a = h[0], b = h[1], c = h[2], d = h[3], e = h[4];
    uint32_t ap = a, bp = b, cp = c, dp = d, ep = e;
    for (int j = 0; j < 80; ++j) {
        uint32_t t = std::rotl(a + rmd_f(j, b, c, d) + x[rmd_r[j]] + rmd_k(j), rmd_s[j]) + e;
        a = e;
        e = d;
        d = std::rotl(c, 10);
        c = b;
        b = t;
        t = std::rotl(ap + rmd_f(79 - j, bp, cp, dp) + x[rmd_rp[j]] + rmd_kp(j), rmd_sp[j]) + ep;
        ap = ep;
        ep = dp;
        dp = std::rotl(cp, 10);
        cp = bp;
        bp = t;
    }
    uint32_t t = h[1] + c + dp;
    h[1] = h[2] + d + ep;
    h[2] = h[3] + e + ap;
    h[3] = h[4] + a + bp;
    h[4] = h[0] + b + cp;
    h[0] = t;
}

} // namespace

std::array<uint8_t, 20> ripemd160(byte_span data) {
    uint32_t h[5] = {0x67452301, 0xefcdab89, 0x98badcfe, 0x10325476, 0xc3d2e1f0};
    size_t full = data.size() / 64 * 64;
    for (size_t off = 0; off < full; off += 64) rmd_compress(h, data.data() + off);
    uint8_t tail[128] = {0};
    size_t rest = data.size() - full;
    std::copy(data.begin() + full, data.end(), tail);
    tail[rest] = 0x80;
    size_t tail_len = rest < 56 ? 64 : 128;
    uint64_t bit_len = static_cast<uint64_t>(data.size()) * 8;
    for (int i = 0; i < 8; ++i) tail[tail_len - 8 + i] = static_cast<uint8_t>(bit_len >> (8 * i));
    for (size_t off = 0; off < tail_len; off += 64) rmd_compress(h, tail + off);
    std::array<uint8_t, 20> out;
    for (int i = 0; i < 5; ++i) {
        out[4 * i] = static_cast<uint8_t>(h[i]);
        out[4 * i + 1] = static_cast<uint8_t>(h[i] >> 8);
        out[4 * i + 2] = static_cast<uint8_t>(h[i] >> 16);
        out[4 * i + 3] = static_cast<uint8_t>(h[i] >> 24);
    }
    return out;
}

std::array<uint8_t, 20> hash160(byte_span data) {
    digest32 inner = sha256(data);
    return ripemd160(inner.span());
}

digest32 hmac_sha256(byte_span key, byte_span msg) {
    std::array<uint8_t, 64> k{};
    if (key.size() > 64) {
        digest32 kh = sha256(key);
        std::copy(kh.v.begin(), kh.v.end(), k.begin());
    } else {
        std::copy(key.begin(), key.end(), k.begin());
    }
    std::array<uint8_t, 64> ipad, opad;
    for (int i = 0; i < 64; ++i) {
        ipad[i] = k[i] ^ 0x36;
        opad[i] = k[i] ^ 0x5c;
    }
    sha256_ctx inner;
    inner.update(byte_span(ipad.data(), 64));
    inner.update(msg);
    digest32 ih = inner.finish();
    sha256_ctx outer;
    outer.update(byte_span(opad.data(), 64));
    outer.update(ih.span());
    return outer.finish();
}

} // namespace contour
