#include <contour/ec.hpp>

#include <boost/multiprecision/cpp_int.hpp>

namespace contour {

namespace {

using int_t = boost::multiprecision::cpp_int;

const int_t& fp() {
    static const int_t p(
        "0xfffffffffffffffffffffffffffffffffffffffffffffffffffffffefffffc2f");
    return p;
}

const int_t& fn() {
    static const int_t n(
        "0xfffffffffffffffffffffffffffffffebaaedce6af48a03bbfd25e8cd0364141");
    return n;
}

int_t mod(const int_t& a, const int_t& m) {
    int_t r = a % m;
    if (r < 0) r += m;
    return r;
}

int_t inv_mod(const int_t& a, const int_t& m) { return powm(mod(a, m), m - 2, m); }

int_t from_be(byte_span data) {
    int_t v = 0;
    for (uint8_t b : data) v = (v << 8) | b;
    return v;
}

std::array<uint8_t, 32> to_be32(const int_t& v) {
    std::array<uint8_t, 32> out{};
    int_t t = v;
    for (int i = 31; i >= 0; --i) {
        out[i] = static_cast<uint8_t>(t & 0xff);
        t >>= 8;
    }
    return out;
}

// Jacobian coordinates (X, Y, Z) for (X/Z^2, Y/Z^3); Z == 0 is infinity.
struct jpoint {
    int_t x, y, z;
    bool infinite() const { return z == 0; }
};

const jpoint& generator() {
    static const jpoint g{
        int_t("0x79be667ef9dcbbac55a06295ce870b07029bfcdb2dce28d959f2815b16f81798"),
        int_t("0x483ada7726a3c4655da4fbfc0e1108a8fd17b448a68554199c47d08ffb10d4b8"), 1};
    return g;
}

jpoint jdouble(const jpoint& pt) {
    const int_t& p = fp();
    if (pt.infinite() || pt.y == 0) return {0, 1, 0};
    int_t a = mod(pt.x * pt.x, p);
    int_t b = mod(pt.y * pt.y, p);
    int_t c = mod(b * b, p);
    int_t d = mod(2 * (mod((pt.x + b) * (pt.x + b), p) - a - c), p);
    int_t e = mod(3 * a, p);
    int_t f = mod(e * e, p);
    int_t x3 = mod(f - 2 * d, p);
    int_t y3 = mod(e * (d - x3) - 8 * c, p);
    int_t z3 = mod(2 * pt.y * pt.z, p);
    return {x3, y3, z3};
}

jpoint jadd(const jpoint& a, const jpoint& b) {
    const int_t& p = fp();
    if (a.infinite()) return b;
    if (b.infinite()) return a;
    int_t z1z1 = mod(a.z * a.z, p);
    int_t z2z2 = mod(b.z * b.z, p);
    int_t u1 = mod(a.x * z2z2, p);
    int_t u2 = mod(b.x * z1z1, p);
    int_t s1 = mod(a.y * b.z * z2z2, p);
    int_t s2 = mod(b.y * a.z * z1z1, p);
    if (u1 == u2) {
        if (s1 != s2) return {0, 1, 0};
        return jdouble(a);
    }
    int_t h = mod(u2 - u1, p);
    int_t i = mod(4 * h * h, p);
    int_t j = mod(h * i, p);
    int_t r = mod(2 * (s2 - s1), p);
    int_t v = mod(u1 * i, p);
    int_t x3 = mod(r * r - j - 2 * v, p);
    int_t y3 = mod(r * (v - x3) - 2 * s1 * j, p);
    int_t z3 = mod((mod((a.z + b.z) * (a.z + b.z), p) - z1z1 - z2z2) * h, p);
    return {x3, y3, z3};
}

jpoint jmul(const int_t& k, const jpoint& pt) {
    jpoint acc{0, 1, 0};
    if (k == 0) return acc;
    for (int bit = static_cast<int>(msb(k)); bit >= 0; --bit) {
        acc = jdouble(acc);
        if (bit_test(k, static_cast<unsigned>(bit))) acc = jadd(acc, pt);
    }
    return acc;
}

struct affine {
    int_t x, y;
};

affine to_affine(const jpoint& pt) {
    const int_t& p = fp();
    int_t zi = inv_mod(pt.z, p);
    int_t zi2 = mod(zi * zi, p);
    return {mod(pt.x * zi2, p), mod(pt.y * zi2 * zi, p)};
}

std::array<uint8_t, 33> compress(const affine& pt) {
    std::array<uint8_t, 33> out{};
    out[0] = bit_test(pt.y, 0) ? 0x03 : 0x02;
    std::array<uint8_t, 32> xb = to_be32(pt.x);
    std::copy(xb.begin(), xb.end(), out.begin() + 1);
    return out;
}

int_t rfc6979_nonce(const std::array<uint8_t, 32>& secret, const digest32& z) {
    const int_t& n = fn();
    std::array<uint8_t, 32> h1 = to_be32(mod(from_be(z.span()), n));
    bytes v(32, 0x01);
    bytes k(32, 0x00);
    auto feed = [&](uint8_t sep) {
        byte_writer w;
        w.raw(as_span(v));
        w.u8(sep);
        w.raw(byte_span(secret.data(), 32));
        w.raw(byte_span(h1.data(), 32));
        digest32 d = hmac_sha256(as_span(k), as_span(w.data()));
        k.assign(d.v.begin(), d.v.end());
        d = hmac_sha256(as_span(k), as_span(v));
        v.assign(d.v.begin(), d.v.end());
    };
    feed(0x00);
    feed(0x01);
    while (true) {
        digest32 d = hmac_sha256(as_span(k), as_span(v));
        v.assign(d.v.begin(), d.v.end());
        int_t cand = from_be(as_span(v));
        if (cand >= 1 && cand < n) return cand;
        byte_writer w;
        w.raw(as_span(v));
        w.u8(0x00);
        d = hmac_sha256(as_span(k), as_span(w.data()));
        k.assign(d.v.begin(), d.v.end());
        d = hmac_sha256(as_span(k), as_span(v));
        v.assign(d.v.begin(), d.v.end());
    }
}

void der_put_int(byte_writer& w, const int_t& v) {
    bytes raw;
    int_t t = v;
    while (t > 0) {
        raw.push_back(static_cast<uint8_t>(t & 0xff));
        t >>= 8;
    }
    if (raw.empty()) raw.push_back(0);
    if (raw.back() & 0x80) raw.push_back(0);
    w.u8(0x02);
    w.u8(static_cast<uint8_t>(raw.size()));
    for (size_t i = raw.size(); i > 0; --i) w.u8(raw[i - 1]);
}

int_t der_get_int(byte_reader& r) {
    if (r.u8() != 0x02) fail(errc::format, "expected DER integer");
    size_t len = r.u8();
    if (len == 0) fail(errc::format, "empty DER integer");
    byte_span raw = r.raw(len);
    if (raw[0] & 0x80) fail(errc::format, "negative DER integer");
    if (len > 1 && raw[0] == 0x00 && !(raw[1] & 0x80)) fail(errc::format, "non-minimal DER integer");
    return from_be(raw);
}

} // namespace

ec_key ec_key::from_bytes(const std::array<uint8_t, 32>& secret) {
    int_t d = from_be(byte_span(secret.data(), 32));
    if (d == 0 || d >= fn()) fail(errc::range, "secret key out of range");
    ec_key key;
    key.secret_ = secret;
    key.pubkey_ = compress(to_affine(jmul(d, generator())));
    return key;
}

ec_key ec_key::from_hex(std::string_view hex) {
    bytes raw = contour::from_hex(hex);
    if (raw.size() != 32) fail(errc::format, "secret key hex must be 64 chars");
    std::array<uint8_t, 32> secret;
    std::copy(raw.begin(), raw.end(), secret.begin());
    return from_bytes(secret);
}

std::array<uint8_t, 20> ec_key::pubkey_hash() const {
    return hash160(byte_span(pubkey_.data(), pubkey_.size()));
}

bytes ec_key::sign_der(const digest32& z) const {
    const int_t& n = fn();
    int_t d = from_be(byte_span(secret_.data(), 32));
    int_t zi = from_be(z.span());
    int_t r, s;
    digest32 msg = z;
    while (true) {
        int_t k = rfc6979_nonce(secret_, msg);
        affine rp = to_affine(jmul(k, generator()));
        r = mod(rp.x, n);
        s = mod(inv_mod(k, n) * (zi + r * d), n);
        if (r != 0 && s != 0) break;
        msg = sha256(msg.span());
    }
    if (s > n / 2) s = n - s;
    byte_writer body;
    der_put_int(body, r);
    der_put_int(body, s);
    byte_writer out;
    out.u8(0x30);
    out.u8(static_cast<uint8_t>(body.data().size()));
    out.raw(as_span(body.data()));
    return out.take();
}

bool ecdsa_verify(byte_span pubkey33, const digest32& z, byte_span der_sig) {
    const int_t& p = fp();
    const int_t& n = fn();
    if (pubkey33.size() != 33 || (pubkey33[0] != 0x02 && pubkey33[0] != 0x03)) return false;
    int_t x = from_be(pubkey33.subspan(1));
    if (x >= p) return false;
    int_t y2 = mod(x * x * x + 7, p);
    int_t y = powm(y2, (p + 1) / 4, p);
    if (mod(y * y, p) != y2) return false;
    if (bit_test(y, 0) != (pubkey33[0] == 0x03)) y = p - y;

    int_t r, s;
    try {
        byte_reader rd(der_sig);
        if (rd.u8() != 0x30) return false;
        size_t len = rd.u8();
        if (len != rd.remaining()) return false;
        r = der_get_int(rd);
        s = der_get_int(rd);
        rd.expect_done();
    } catch (const error&) {
        return false;
    }
    if (r < 1 || r >= n || s < 1 || s >= n) return false;

    int_t zi = mod(from_be(z.span()), n);
    int_t w = inv_mod(s, n);
    int_t u1 = mod(zi * w, n);
    int_t u2 = mod(r * w, n);
    jpoint pub{x, y, 1};
    jpoint sum = jadd(jmul(u1, generator()), jmul(u2, pub));
    if (sum.infinite()) return false;
    affine a = to_affine(sum);
    return mod(a.x, n) == r;
}

} // namespace contour
