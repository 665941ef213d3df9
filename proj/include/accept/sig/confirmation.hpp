// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <accept/sig/bls.hpp>
#include <accept/sig/merkle.hpp>
#include <accept/sig/naive.hpp>

#include <memory>
#include <optional>
#include <string_view>
#include <variant>

namespace accept {

enum class Scheme : std::uint8_t { naive = 1, merkle = 2, bls = 3 };

std::string_view to_string(Scheme s);
std::optional<Scheme> parse_scheme(std::string_view name);

/// Public knowledge about the validators: parameters, Ed25519 keys and the
/// BLS public shares with their master key.
class ValidatorSet {
public:
    ValidatorSet() = default;
    ValidatorSet(SystemParams params, std::vector<PublicKey> keys, std::vector<G2Bytes> bls_public_shares = {},
                 std::optional<G2Bytes> bls_master_key = std::nullopt);

    const SystemParams &params() const { return _params; }
    std::size_t size() const { return _params.n; }
    const std::vector<PublicKey> &keys() const { return _keys; }
    const PublicKey &key(std::size_t i) const { return _keys.at(i); }

    bool has_bls() const { return _bls != nullptr; }
    const G2Bytes &bls_public_share(std::size_t i) const;
    const G2Bytes &bls_master_key() const;
    const BlsVerifier &bls_share_verifier(std::size_t i) const;
    const BlsVerifier &bls_master_verifier() const;

private:
    struct BlsPublic {
        std::vector<G2Bytes> shares;
        G2Bytes master{};
        std::vector<BlsVerifier> share_verifiers;
        BlsVerifier master_verifier;
    };

    SystemParams _params;
    std::vector<PublicKey> _keys;
    std::shared_ptr<const BlsPublic> _bls;
};

/// One validator's secrets.
struct ValidatorSecrets {
    KeyPair ed25519;
    BlsScalar bls_share{};
};

/// Deterministic validator keys for tests, simulation and benchmarks.
struct Committee {
    ValidatorSet validators;
    std::vector<ValidatorSecrets> secrets;
};

Committee make_committee(std::size_t n, std::uint64_t seed, bool with_bls = true);

// ---------------------------------------------------------------------------

struct BlsConfirmation {
    MasterSignature master;

    bool operator==(const BlsConfirmation &) const = default;
};

/// Proof that a quorum signed one output claim.
struct Confirmation {
    std::variant<NaiveConfirmation, MerkleConfirmation, BlsConfirmation> payload;

    Scheme scheme() const;
    bool operator==(const Confirmation &) const = default;
};

/// Blob: scheme tag u8 | scheme payload.
void write_confirmation(ByteWriter &w, const Confirmation &conf);
Confirmation read_confirmation(ByteReader &r);
Bytes encode_confirmation(const Confirmation &conf);
Confirmation decode_confirmation(ByteSpan data);

bool verify_confirmation(const ValidatorSet &validators, const OutputId &id, const Output &output,
                         const Confirmation &conf, RootCache *cache = nullptr);

// ---------------------------------------------------------------------------

/// A single validator's signature over one output claim, in any scheme.
struct OutputSignature {
    std::variant<NaiveSignature, MerkleSignature, BlsShareSignature> payload;

    Scheme scheme() const;
    std::uint16_t validator_index() const;
    bool operator==(const OutputSignature &) const = default;
};

void write_output_signature(ByteWriter &w, const OutputSignature &sig);
OutputSignature read_output_signature(ByteReader &r);

/// Checks one validator's signature against its own key (the share key for BLS).
bool verify_output_signature(const ValidatorSet &validators, ByteSpan claim, const OutputSignature &sig,
                             RootCache *cache = nullptr);

/// Builds a confirmation from verified signatures of distinct validators, all
/// in one scheme. Uses exactly the first quorum signatures by validator index.
/// Throws InsufficientShares or InvalidInput.
Confirmation assemble_confirmation(const ValidatorSet &validators, std::span<const OutputSignature> signatures);

} // namespace accept
