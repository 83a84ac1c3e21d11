#include <contour/wire.hpp>

#include <algorithm>

namespace contour {

namespace {

constexpr size_t min_input_wire_size = 32 + 4 + 1 + 4;
constexpr size_t min_output_wire_size = 8 + 1;

void check_count(uint64_t count, size_t remaining, size_t min_size, const char* what) {
    if (count > remaining / min_size) fail(errc::format, std::string(what) + " count exceeds buffer");
}

} // namespace

bytes transaction::serialize() const {
    byte_writer w;
    w.i32le(version);
    w.varint(inputs.size());
    for (const tx_in& in : inputs) {
        w.raw(in.prevout.txid.span());
        w.u32le(in.prevout.vout);
        w.varint(in.script_sig.size());
        w.raw(as_span(in.script_sig));
        w.u32le(in.sequence);
    }
    w.varint(outputs.size());
    for (const tx_out& out : outputs) {
        w.i64le(out.value);
        w.varint(out.script_pubkey.size());
        w.raw(as_span(out.script_pubkey));
    }
    w.u32le(locktime);
    return w.take();
}

digest32 transaction::txid() const { return sha256d(as_span(serialize())); }

transaction transaction::parse(byte_reader& r) {
    transaction tx;
    tx.version = r.i32le();
    uint64_t n_in = r.varint();
    check_count(n_in, r.remaining(), min_input_wire_size, "input");
    if (n_in == 0) fail(errc::format, "transaction has no inputs");
    tx.inputs.reserve(n_in);
    for (uint64_t i = 0; i < n_in; ++i) {
        tx_in in;
        in.prevout.txid = digest32::from_span(r.raw(32));
        in.prevout.vout = r.u32le();
        uint64_t script_len = r.varint();
        if (script_len > r.remaining()) fail(errc::format, "scriptSig length exceeds buffer");
        byte_span script = r.raw(script_len);
        in.script_sig.assign(script.begin(), script.end());
        in.sequence = r.u32le();
        tx.inputs.push_back(std::move(in));
    }
    uint64_t n_out = r.varint();
    check_count(n_out, r.remaining(), min_output_wire_size, "output");
    if (n_out == 0) fail(errc::format, "transaction has no outputs");
    tx.outputs.reserve(n_out);
    for (uint64_t i = 0; i < n_out; ++i) {
        tx_out out;
        out.value = r.i64le();
        uint64_t script_len = r.varint();
        if (script_len > r.remaining()) fail(errc::format, "scriptPubKey length exceeds buffer");
        byte_span script = r.raw(script_len);
        out.script_pubkey.assign(script.begin(), script.end());
        tx.outputs.push_back(std::move(out));
    }
    tx.locktime = r.u32le();
    return tx;
}

transaction transaction::parse(byte_span data) {
    byte_reader r(data);
    transaction tx = parse(r);
    r.expect_done();
    return tx;
}

std::array<uint8_t, 80> block_header::serialize() const {
    byte_writer w;
    w.i32le(version);
    w.raw(prev_hash.span());
    w.raw(merkle_root.span());
    w.u32le(timestamp);
    w.u32le(bits);
    w.u32le(nonce);
    std::array<uint8_t, 80> out;
    std::copy(w.data().begin(), w.data().end(), out.begin());
    return out;
}

digest32 block_header::hash() const {
    std::array<uint8_t, 80> raw = serialize();
    return sha256d(byte_span(raw.data(), raw.size()));
}

block_header block_header::parse(byte_reader& r) {
    block_header h;
    h.version = r.i32le();
    h.prev_hash = digest32::from_span(r.raw(32));
    h.merkle_root = digest32::from_span(r.raw(32));
    h.timestamp = r.u32le();
    h.bits = r.u32le();
    h.nonce = r.u32le();
    return h;
}

block_header block_header::parse(byte_span data) {
    if (data.size() != 80) fail(errc::format, "header must be exactly 80 bytes");
    byte_reader r(data);
    return parse(r);
}

bytes block::serialize() const {
    byte_writer w;
    std::array<uint8_t, 80> h = header.serialize();
    w.raw(byte_span(h.data(), h.size()));
    w.varint(txs.size());
    for (const transaction& tx : txs) w.raw(as_span(tx.serialize()));
    return w.take();
}

block block::parse(byte_span data) {
    byte_reader r(data);
    block b;
    b.header = block_header::parse(r);
    uint64_t n = r.varint();
    check_count(n, r.remaining(), min_input_wire_size + min_output_wire_size + 8, "transaction");
    if (n == 0) fail(errc::format, "block has no transactions");
    b.txs.reserve(n);
    for (uint64_t i = 0; i < n; ++i) b.txs.push_back(transaction::parse(r));
    r.expect_done();
    return b;
}

namespace {

const char b58_alphabet[] = "123456789ABCDEFGHJKLMNPQRSTUVWXYZabcdefghijkmnopqrstuvwxyz";

int b58_value(char c) {
    const char* pos = std::char_traits<char>::find(b58_alphabet, 58, c);
    return pos ? static_cast<int>(pos - b58_alphabet) : -1;
}

} // namespace

std::string base58check_encode(byte_span payload) {
    digest32 check = sha256d(payload);
    bytes data(payload.begin(), payload.end());
    data.insert(data.end(), check.v.begin(), check.v.begin() + 4);

    size_t zeros = 0;
    while (zeros < data.size() && data[zeros] == 0) ++zeros;

    std::string out;
    bytes num(data.begin() + zeros, data.end());
    while (!num.empty()) {
        uint32_t rem = 0;
        bytes quot;
        for (uint8_t b : num) {
            uint32_t acc = rem << 8 | b;
            uint8_t q = static_cast<uint8_t>(acc / 58);
            rem = acc % 58;
            if (!quot.empty() || q != 0) quot.push_back(q);
        }
        out.push_back(b58_alphabet[rem]);
        num = std::move(quot);
    }
    out.append(zeros, '1');
    std::reverse(out.begin(), out.end());
    return out;
}

bytes base58check_decode(const std::string& encoded) {
    size_t ones = 0;
    while (ones < encoded.size() && encoded[ones] == '1') ++ones;

    bytes num;
    for (size_t i = ones; i < encoded.size(); ++i) {
        int v = b58_value(encoded[i]);
        if (v < 0) fail(errc::format, "invalid base58 character");
        uint32_t carry = static_cast<uint32_t>(v);
        for (auto it = num.rbegin(); it != num.rend(); ++it) {
            uint32_t acc = static_cast<uint32_t>(*it) * 58 + carry;
            *it = static_cast<uint8_t>(acc & 0xff);
            carry = acc >> 8;
        }
        while (carry > 0) {
            num.insert(num.begin(), static_cast<uint8_t>(carry & 0xff));
            carry >>= 8;
        }
    }
    bytes data(ones, 0x00);
    data.insert(data.end(), num.begin(), num.end());

    if (data.size() < 5) fail(errc::format, "base58check payload too short");
    byte_span body(data.data(), data.size() - 4);
    digest32 check = sha256d(body);
    if (!std::equal(check.v.begin(), check.v.begin() + 4, data.end() - 4))
        fail(errc::format, "base58check checksum mismatch");
    return bytes(body.begin(), body.end());
}

authority_address authority_address::from_pubkey_hash(const std::array<uint8_t, 20>& h160) {
    authority_address a;
    a.h160_ = h160;
    bytes payload{0x00};
    payload.insert(payload.end(), h160.begin(), h160.end());
    a.encoded_ = base58check_encode(as_span(payload));
    return a;
}

authority_address authority_address::from_string(const std::string& encoded) {
    bytes payload = base58check_decode(encoded);
    if (payload.size() != 21) fail(errc::format, "address payload must be 21 bytes");
    if (payload[0] != 0x00) fail(errc::format, "unexpected address version byte");
    std::array<uint8_t, 20> h160;
    std::copy(payload.begin() + 1, payload.end(), h160.begin());
    authority_address a = from_pubkey_hash(h160);
    return a;
}

authority_address authority_address::from_key(const ec_key& key) {
    return from_pubkey_hash(key.pubkey_hash());
}

bytes push_data(byte_span data) {
    if (data.empty() || data.size() >= 0x4c) fail(errc::range, "push size unsupported");
    bytes out{static_cast<uint8_t>(data.size())};
    out.insert(out.end(), data.begin(), data.end());
    return out;
}

bytes p2pkh_script(const std::array<uint8_t, 20>& h160) {
    bytes out{0x76, 0xa9, 0x14};
    out.insert(out.end(), h160.begin(), h160.end());
    out.push_back(0x88);
    out.push_back(0xac);
    return out;
}

bytes op_return_script(byte_span payload) {
    bytes out{0x6a};
    bytes push = push_data(payload);
    out.insert(out.end(), push.begin(), push.end());
    return out;
}

std::optional<std::vector<bytes>> parse_pushes(byte_span script) {
    std::vector<bytes> out;
    size_t pos = 0;
    while (pos < script.size()) {
        uint8_t op = script[pos++];
        if (op < 0x01 || op > 0x4b) return std::nullopt;
        if (pos + op > script.size()) return std::nullopt;
        out.emplace_back(script.begin() + pos, script.begin() + pos + op);
        pos += op;
    }
    return out;
}

std::optional<std::array<uint8_t, 20>> p2pkh_destination(byte_span script_pubkey) {
    if (script_pubkey.size() != 25) return std::nullopt;
    if (script_pubkey[0] != 0x76 || script_pubkey[1] != 0xa9 || script_pubkey[2] != 0x14 ||
        script_pubkey[23] != 0x88 || script_pubkey[24] != 0xac)
        return std::nullopt;
    std::array<uint8_t, 20> h160;
    std::copy(script_pubkey.begin() + 3, script_pubkey.begin() + 23, h160.begin());
    return h160;
}

compact_target decode_compact(uint32_t bits) {
    compact_target out;
    uint32_t exp = bits >> 24;
    uint32_t mant = bits & 0x007fffff;
    bool negative = (bits & 0x00800000) != 0 && mant != 0;
    bool overflow =
        mant != 0 && (exp > 34 || (mant > 0xff && exp > 33) || (mant > 0xffff && exp > 32));
    if (negative || overflow) return out;

    // Big-endian placement: mantissa byte i (low first) sits at weight
    // 256^(exp-3+i), array index 31 minus that weight.
    uint32_t m = exp <= 3 ? mant >> (8 * (3 - exp)) : mant;
    int shift_bytes = exp <= 3 ? 0 : static_cast<int>(exp) - 3;
    bool nonzero = false;
    for (int i = 0; i < 3; ++i) {
        uint8_t b = static_cast<uint8_t>(m >> (8 * i));
        if (b == 0) continue;
        int idx = 31 - shift_bytes - i;
        if (idx < 0 || idx > 31) continue;
        out.value[static_cast<size_t>(idx)] = b;
        nonzero = true;
    }
    out.valid = nonzero;
    return out;
}

bool hash_meets_target(const digest32& block_hash, const compact_target& target) {
    if (!target.valid) return false;
    std::array<uint8_t, 32> be = block_hash.v;
    std::reverse(be.begin(), be.end());
    return !std::lexicographical_compare(target.value.begin(), target.value.end(), be.begin(),
                                         be.end());
}

bool check_pow(const block_header& header) {
    compact_target target = decode_compact(header.bits);
    if (!target.valid) fail(errc::invalid_target, "header bits decode to unusable target");
    return hash_meets_target(header.hash(), target);
}

digest32 legacy_sighash_all(const transaction& tx, size_t input_index,
                            byte_span prev_script_pubkey) {
    if (input_index >= tx.inputs.size()) fail(errc::range, "input index out of range");
    transaction copy = tx;
    for (size_t i = 0; i < copy.inputs.size(); ++i) {
        if (i == input_index)
            copy.inputs[i].script_sig.assign(prev_script_pubkey.begin(), prev_script_pubkey.end());
        else
            copy.inputs[i].script_sig.clear();
    }
    bytes preimage = copy.serialize();
    byte_writer w;
    w.raw(as_span(preimage));
    w.u32le(1);
    return sha256d(as_span(w.data()));
}

bytes p2pkh_script_sig(const ec_key& key, const digest32& sighash) {
    bytes sig = key.sign_der(sighash);
    sig.push_back(0x01);
    bytes out = push_data(as_span(sig));
    bytes pub = push_data(byte_span(key.pubkey().data(), key.pubkey().size()));
    out.insert(out.end(), pub.begin(), pub.end());
    return out;
}

transaction build_commit_tx(const digest32& root, const funding_source& funding, int64_t fee) {
    if (fee < 0 || fee >= funding.value) fail(errc::range, "fee must be within funding value");
    transaction tx;
    tx.inputs.push_back({funding.prevout, {}, 0xffffffff});
    tx.outputs.push_back({0, op_return_script(root.span())});
    tx.outputs.push_back({funding.value - fee, p2pkh_script(funding.key.pubkey_hash())});
    bytes prev_spk = p2pkh_script(funding.key.pubkey_hash());
    digest32 z = legacy_sighash_all(tx, 0, as_span(prev_spk));
    tx.inputs[0].script_sig = p2pkh_script_sig(funding.key, z);
    return tx;
}

bool is_commitment(const transaction& tx) {
    for (const tx_out& out : tx.outputs) {
        const bytes& s = out.script_pubkey;
        if (s.size() == 34 && s[0] == 0x6a && s[1] == 0x20) return true;
    }
    return false;
}

digest32 extract_commit_root(const transaction& tx) {
    for (const tx_out& out : tx.outputs) {
        const bytes& s = out.script_pubkey;
        if (s.size() == 34 && s[0] == 0x6a && s[1] == 0x20)
            return digest32::from_span(byte_span(s.data() + 2, 32));
    }
    fail(errc::not_a_commitment, "transaction carries no 32-byte OP_RETURN payload");
}

bool tx_spends_from(const transaction& tx, const authority_address& addr) {
    if (tx.inputs.empty()) return false;
    std::optional<std::vector<bytes>> pushes = parse_pushes(as_span(tx.inputs[0].script_sig));
    if (!pushes || pushes->empty()) return false;
    const bytes& pub = pushes->back();
    if (pub.size() != 33) return false;
    return hash160(as_span(pub)) == addr.pubkey_hash();
}

} // namespace contour
