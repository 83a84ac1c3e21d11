#pragma once

#include <contour/ec.hpp>
#include <contour/hash.hpp>

#include <array>
#include <optional>
#include <string>
#include <vector>

namespace contour {

struct outpoint {
    digest32 txid;
    uint32_t vout = 0;

    auto operator<=>(const outpoint&) const = default;
};

struct tx_in {
    outpoint prevout;
    bytes script_sig;
    uint32_t sequence = 0xffffffff;
};

struct tx_out {
    int64_t value = 0;
    bytes script_pubkey;
};

// Legacy (pre-segwit) transaction. txid = sha256d over the serialization,
// displayed byte-reversed.
struct transaction {
    int32_t version = 1;
    std::vector<tx_in> inputs;
    std::vector<tx_out> outputs;
    uint32_t locktime = 0;

    bytes serialize() const;
    digest32 txid() const;
    static transaction parse(byte_span data);
    static transaction parse(byte_reader& r);
};

struct block_header {
    int32_t version = 1;
    digest32 prev_hash;
    digest32 merkle_root;
    uint32_t timestamp = 0;
    uint32_t bits = 0;
    uint32_t nonce = 0;

    std::array<uint8_t, 80> serialize() const;
    digest32 hash() const;
    static block_header parse(byte_span data);
    static block_header parse(byte_reader& r);
};

struct block {
    block_header header;
    std::vector<transaction> txs;

    bytes serialize() const;
    static block parse(byte_span data);
};

// Base58Check P2PKH address, version byte 0x00.
class authority_address {
  public:
    authority_address() = default;

    static authority_address from_pubkey_hash(const std::array<uint8_t, 20>& h160);
    static authority_address from_string(const std::string& encoded);
    static authority_address from_key(const ec_key& key);

    const std::array<uint8_t, 20>& pubkey_hash() const { return h160_; }
    const std::string& str() const { return encoded_; }
    bool operator==(const authority_address& other) const { return h160_ == other.h160_; }

  private:
    std::array<uint8_t, 20> h160_{};
    std::string encoded_;
};

std::string base58check_encode(byte_span payload);
bytes base58check_decode(const std::string& encoded);

bytes push_data(byte_span data);
bytes p2pkh_script(const std::array<uint8_t, 20>& h160);
bytes op_return_script(byte_span payload);
// Decomposes a script made only of direct pushes (0x01..0x4b); nullopt otherwise.
std::optional<std::vector<bytes>> parse_pushes(byte_span script);
std::optional<std::array<uint8_t, 20>> p2pkh_destination(byte_span script_pubkey);

struct compact_target {
    std::array<uint8_t, 32> value{};
    bool valid = false;
};

// Bits decoding follows consensus rules: 23-bit mantissa, sign bit and
// overflow make the target invalid, as does a zero value.
compact_target decode_compact(uint32_t bits);
bool hash_meets_target(const digest32& block_hash, const compact_target& target);
// Throws errc::invalid_target when bits decode to an unusable target.
bool check_pow(const block_header& header);

struct funding_source {
    outpoint prevout;
    int64_t value = 0;
    ec_key key;

    funding_source(const outpoint& p, int64_t v, const ec_key& k)
        : prevout(p), value(v), key(k) {}
};

digest32 legacy_sighash_all(const transaction& tx, size_t input_index, byte_span prev_script_pubkey);
bytes p2pkh_script_sig(const ec_key& key, const digest32& sighash);

// Single-input commitment: output 0 carries OP_RETURN <root>, output 1
// returns change to the funding key's own address.
transaction build_commit_tx(const digest32& root, const funding_source& funding, int64_t fee);
digest32 extract_commit_root(const transaction& tx);
bool is_commitment(const transaction& tx);
bool tx_spends_from(const transaction& tx, const authority_address& addr);

} // namespace contour
