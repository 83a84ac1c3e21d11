#pragma once

#include <contour/hash.hpp>

#include <array>

namespace contour {

// secp256k1 signing key. Signatures are deterministic (RFC 6979 nonces),
// low-S normalized, DER encoded without a sighash byte.
class ec_key {
  public:
    static ec_key from_bytes(const std::array<uint8_t, 32>& secret);
    static ec_key from_hex(std::string_view hex);

    const std::array<uint8_t, 32>& secret() const { return secret_; }
    const std::array<uint8_t, 33>& pubkey() const { return pubkey_; }
    std::array<uint8_t, 20> pubkey_hash() const;
    bytes sign_der(const digest32& z) const;

  private:
    ec_key() = default;

    std::array<uint8_t, 32> secret_{};
    std::array<uint8_t, 33> pubkey_{};
};

bool ecdsa_verify(byte_span pubkey33, const digest32& z, byte_span der_sig);

} // namespace contour
