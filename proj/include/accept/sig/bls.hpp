// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <accept/core/params.hpp>
#include <accept/sig/claim.hpp>

#include <memory>
#include <span>
#include <vector>

namespace accept {

/// Scalars of the BLS12-381 group order, big-endian.
using BlsScalar = FixedBytes<32>;
/// Compressed G1 point (signatures).
using G1Bytes = FixedBytes<48>;
/// Compressed G2 point (public keys).
using G2Bytes = FixedBytes<96>;

/// Hash-to-curve domain tag: the standard min-signature-size ciphersuite.
inline constexpr std::string_view bls_dst = "BLS_SIG_BLS12381G1_XMD:SHA-256_SSWU_RO_NUL_";

/// Threshold key material from a trusted dealer. Validator i holds the
/// evaluation at x = i+1 of a degree quorum-1 polynomial whose constant term
/// is the master secret (not retained).
struct BlsKeyMaterial {
    SystemParams params;
    std::vector<BlsScalar> secret_shares;
    std::vector<G2Bytes> public_shares;
    G2Bytes master_public_key{};
};

/// Deterministic in `seed`; threshold = params.quorum.
BlsKeyMaterial trusted_keygen(const SystemParams &params, ByteSpan seed);

struct BlsShareSignature {
    std::uint16_t validator_index = 0;
    G1Bytes sig{};

    bool operator==(const BlsShareSignature &) const = default;
};

struct MasterSignature {
    G1Bytes sig{};

    bool operator==(const MasterSignature &) const = default;
};

G2Bytes bls_public_key(const BlsScalar &secret);

BlsShareSignature sign_share(std::uint16_t validator_index, const BlsScalar &share, ByteSpan claim);
bool verify_share(const G2Bytes &public_share, ByteSpan claim, const BlsShareSignature &sig);

/// Lagrange interpolation at x = 0 in the exponent over the first `quorum`
/// shares by validator index. Shares must already be verified.
/// Throws InsufficientShares (< quorum) or InvalidInput (repeated or out-of-range index).
MasterSignature aggregate_master(const SystemParams &params, std::span<const BlsShareSignature> shares);

bool verify_master(const G2Bytes &master_public_key, ByteSpan claim, const MasterSignature &sig);

/// Shamir reconstruction of the secret at x = 0 from (validator_index, share) pairs.
BlsScalar interpolate_secret(std::span<const std::pair<std::uint16_t, BlsScalar>> shares);

/// Decompressed and subgroup-checked public key, for repeated verification.
class BlsVerifier {
public:
    explicit BlsVerifier(const G2Bytes &public_key);
    ~BlsVerifier();
    BlsVerifier(BlsVerifier &&) noexcept;
    BlsVerifier &operator=(BlsVerifier &&) noexcept;
    BlsVerifier(const BlsVerifier &);
    BlsVerifier &operator=(const BlsVerifier &);

    bool valid_key() const;
    bool verify(ByteSpan claim, const G1Bytes &sig) const;

private:
    struct Impl;
    std::unique_ptr<Impl> _impl;
};

} // namespace accept
