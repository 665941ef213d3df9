// SPDX-License-Identifier: Apache-2.0
#include <accept/sig/confirmation.hpp>

#include <algorithm>

namespace accept {

std::string_view to_string(Scheme s)
{
    switch (s) {
    case Scheme::naive: return "naive";
    case Scheme::merkle: return "merkle";
    case Scheme::bls: return "bls";
    }
    return "unknown";
}

std::optional<Scheme> parse_scheme(std::string_view name)
{
    if (name == "naive")
        return Scheme::naive;
    if (name == "merkle")
        return Scheme::merkle;
    if (name == "bls")
        return Scheme::bls;
    return std::nullopt;
}

ValidatorSet::ValidatorSet(SystemParams params, std::vector<PublicKey> keys, std::vector<G2Bytes> bls_public_shares,
                           std::optional<G2Bytes> bls_master_key)
    : _params(params), _keys(std::move(keys))
{
    if (_keys.size() != _params.n)
        throw InvalidParameter("validator key count does not match n");
    if (bls_master_key) {
        if (bls_public_shares.size() != _params.n)
            throw InvalidParameter("BLS public share count does not match n");
        std::vector<BlsVerifier> verifiers;
        verifiers.reserve(bls_public_shares.size());
        for (const G2Bytes &s : bls_public_shares)
            verifiers.emplace_back(s);
        _bls = std::make_shared<const BlsPublic>(
            BlsPublic{std::move(bls_public_shares), *bls_master_key, std::move(verifiers), BlsVerifier(*bls_master_key)});
    }
}

const G2Bytes &ValidatorSet::bls_public_share(std::size_t i) const
{
    if (!_bls)
        throw InvalidParameter("validator set has no BLS keys");
    return _bls->shares.at(i);
}

const G2Bytes &ValidatorSet::bls_master_key() const
{
    if (!_bls)
        throw InvalidParameter("validator set has no BLS keys");
    return _bls->master;
}

const BlsVerifier &ValidatorSet::bls_share_verifier(std::size_t i) const
{
    if (!_bls)
        throw InvalidParameter("validator set has no BLS keys");
    return _bls->share_verifiers.at(i);
}

const BlsVerifier &ValidatorSet::bls_master_verifier() const
{
    if (!_bls)
        throw InvalidParameter("validator set has no BLS keys");
    return _bls->master_verifier;
}

Committee make_committee(std::size_t n, std::uint64_t seed, bool with_bls)
{
    const SystemParams params = quorum_params(n);
    Committee c;
    std::vector<PublicKey> keys;
    c.secrets.resize(n);
    for (std::size_t i = 0; i < n; ++i) {
        c.secrets[i].ed25519 = derive_keypair("validator-" + std::to_string(seed), i);
        keys.push_back(c.secrets[i].ed25519.public_key);
    }
    if (!with_bls) {
        c.validators = ValidatorSet(params, std::move(keys));
        return c;
    }
    ByteWriter w;
    w.u64(seed);
    BlsKeyMaterial km = trusted_keygen(params, w.view());
    for (std::size_t i = 0; i < n; ++i)
        c.secrets[i].bls_share = km.secret_shares[i];
    c.validators = ValidatorSet(params, std::move(keys), std::move(km.public_shares), km.master_public_key);
    return c;
}

// ---------------------------------------------------------------------------

Scheme Confirmation::scheme() const
{
    return static_cast<Scheme>(payload.index() + 1);
}

void write_confirmation(ByteWriter &w, const Confirmation &conf)
{
    w.u8(static_cast<std::uint8_t>(conf.scheme()));
    std::visit(
        [&](const auto &p) {
            using T = std::decay_t<decltype(p)>;
            if constexpr (std::is_same_v<T, NaiveConfirmation>)
                write_naive_confirmation(w, p);
            else if constexpr (std::is_same_v<T, MerkleConfirmation>)
                write_merkle_confirmation(w, p);
            else
                w.bytes(p.master.sig);
        },
        conf.payload);
}

Confirmation read_confirmation(ByteReader &r)
{
    switch (r.u8()) {
    case static_cast<std::uint8_t>(Scheme::naive): return Confirmation{read_naive_confirmation(r)};
    case static_cast<std::uint8_t>(Scheme::merkle): return Confirmation{read_merkle_confirmation(r)};
    case static_cast<std::uint8_t>(Scheme::bls): return Confirmation{BlsConfirmation{MasterSignature{r.fixed<48>()}}};
    default: throw DecodeError("unknown confirmation scheme tag");
    }
}

Bytes encode_confirmation(const Confirmation &conf)
{
    ByteWriter w;
    write_confirmation(w, conf);
    return w.take();
}

Confirmation decode_confirmation(ByteSpan data)
{
    ByteReader r(data);
    Confirmation c = read_confirmation(r);
    r.expect_done();
    return c;
}

bool verify_confirmation(const ValidatorSet &validators, const OutputId &id, const Output &output,
                         const Confirmation &conf, RootCache *cache)
{
    const ClaimMessage claim = output_claim_message(id, output);
    return std::visit(
        [&](const auto &p) -> bool {
            using T = std::decay_t<decltype(p)>;
            if constexpr (std::is_same_v<T, NaiveConfirmation>)
                return verify_naive_confirmation(validators.params(), validators.keys(), claim, p);
            else if constexpr (std::is_same_v<T, MerkleConfirmation>)
                return verify_merkle_confirmation(validators.params(), validators.keys(), claim, p, cache);
            else
                return validators.has_bls() && validators.bls_master_verifier().verify(claim, p.master.sig);
        },
        conf.payload);
}

// ---------------------------------------------------------------------------

Scheme OutputSignature::scheme() const
{
    return static_cast<Scheme>(payload.index() + 1);
}

std::uint16_t OutputSignature::validator_index() const
{
    return std::visit([](const auto &p) { return p.validator_index; }, payload);
}

void write_output_signature(ByteWriter &w, const OutputSignature &sig)
{
    w.u8(static_cast<std::uint8_t>(sig.scheme()));
    std::visit(
        [&](const auto &p) {
            using T = std::decay_t<decltype(p)>;
            if constexpr (std::is_same_v<T, NaiveSignature>) {
                w.u16(p.validator_index);
                w.bytes(p.sig);
            } else if constexpr (std::is_same_v<T, MerkleSignature>) {
                write_merkle_signature(w, p);
            } else {
                w.u16(p.validator_index);
                w.bytes(p.sig);
            }
        },
        sig.payload);
}

OutputSignature read_output_signature(ByteReader &r)
{
    switch (r.u8()) {
    case static_cast<std::uint8_t>(Scheme::naive): {
        NaiveSignature s;
        s.validator_index = r.u16();
        s.sig = r.fixed<64>();
        return OutputSignature{s};
    }
    case static_cast<std::uint8_t>(Scheme::merkle): return OutputSignature{read_merkle_signature(r)};
    case static_cast<std::uint8_t>(Scheme::bls): {
        BlsShareSignature s;
        s.validator_index = r.u16();
        s.sig = r.fixed<48>();
        return OutputSignature{s};
    }
    default: throw DecodeError("unknown signature scheme tag");
    }
}

bool verify_output_signature(const ValidatorSet &validators, ByteSpan claim, const OutputSignature &sig,
                             RootCache *cache)
{
    const std::uint16_t idx = sig.validator_index();
    if (idx >= validators.size())
        return false;
    return std::visit(
        [&](const auto &p) -> bool {
            using T = std::decay_t<decltype(p)>;
            if constexpr (std::is_same_v<T, NaiveSignature>)
                return verify_naive(validators.key(idx), claim, p);
            else if constexpr (std::is_same_v<T, MerkleSignature>)
                return verify_merkle_sig(cache, validators.key(idx), idx, claim, p);
            else
                return validators.has_bls() && validators.bls_share_verifier(idx).verify(claim, p.sig);
        },
        sig.payload);
}

Confirmation assemble_confirmation(const ValidatorSet &validators, std::span<const OutputSignature> signatures)
{
    const SystemParams &params = validators.params();
    if (signatures.size() < params.quorum)
        throw InsufficientShares("fewer than quorum signatures");
    std::vector<OutputSignature> sorted(signatures.begin(), signatures.end());
    std::sort(sorted.begin(), sorted.end(),
              [](const auto &a, const auto &b) { return a.validator_index() < b.validator_index(); });
    const Scheme scheme = sorted.front().scheme();
    for (std::size_t i = 0; i < sorted.size(); ++i) {
        if (sorted[i].scheme() != scheme)
            throw InvalidInput("signatures from different schemes");
        if (sorted[i].validator_index() >= params.n)
            throw InvalidInput("signature from unknown validator");
        if (i > 0 && sorted[i].validator_index() == sorted[i - 1].validator_index())
            throw InvalidInput("duplicate validator among signatures");
    }
    sorted.resize(params.quorum);

    switch (scheme) {
    case Scheme::naive: {
        NaiveConfirmation c;
        for (const auto &s : sorted)
            c.signatures.push_back(std::get<NaiveSignature>(s.payload));
        return Confirmation{std::move(c)};
    }
    case Scheme::merkle: {
        MerkleConfirmation c;
        for (auto &s : sorted)
            c.signatures.push_back(std::move(std::get<MerkleSignature>(s.payload)));
        return Confirmation{std::move(c)};
    }
    case Scheme::bls: {
        std::vector<BlsShareSignature> shares;
        for (const auto &s : sorted)
            shares.push_back(std::get<BlsShareSignature>(s.payload));
        return Confirmation{BlsConfirmation{aggregate_master(params, shares)}};
    }
    }
    throw InvalidInput("unknown scheme");
}

} // namespace accept
