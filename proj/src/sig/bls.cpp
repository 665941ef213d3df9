// SPDX-License-Identifier: Apache-2.0
#include <accept/core/hash.hpp>
#include <accept/sig/bls.hpp>

#include <blst.h>

#include <algorithm>

namespace accept {

namespace {

const byte *dst_ptr() { return reinterpret_cast<const byte *>(bls_dst.data()); }

blst_fr fr_from_u64(std::uint64_t v)
{
    const std::uint64_t limbs[4] = {v, 0, 0, 0};
    blst_fr out;
    blst_fr_from_uint64(&out, limbs);
    return out;
}

blst_fr fr_from_bytes(const BlsScalar &s)
{
    blst_scalar sc;
    blst_scalar_from_bendian(&sc, s.data());
    blst_fr out;
    blst_fr_from_scalar(&out, &sc);
    return out;
}

BlsScalar bytes_from_fr(const blst_fr &f)
{
    blst_scalar sc;
    blst_scalar_from_fr(&sc, &f);
    BlsScalar out{};
    blst_bendian_from_scalar(out.data(), &sc);
    return out;
}

blst_scalar scalar_from_bytes(const BlsScalar &s)
{
    blst_scalar sc;
    blst_scalar_from_bendian(&sc, s.data());
    return sc;
}

bool fr_is_zero(const blst_fr &f)
{
    const BlsScalar b = bytes_from_fr(f);
    return std::all_of(b.begin(), b.end(), [](std::uint8_t v) { return v == 0; });
}

/// Lagrange basis values at x = 0 for x-coordinates xs.
std::vector<blst_fr> lagrange_at_zero(std::span<const std::uint64_t> xs)
{
    std::vector<blst_fr> out(xs.size());
    for (std::size_t j = 0; j < xs.size(); ++j) {
        blst_fr num = fr_from_u64(1);
        blst_fr den = fr_from_u64(1);
        const blst_fr xj = fr_from_u64(xs[j]);
        for (std::size_t m = 0; m < xs.size(); ++m) {
            if (m == j)
                continue;
            const blst_fr xm = fr_from_u64(xs[m]);
            blst_fr diff;
            blst_fr_sub(&diff, &xm, &xj);
            blst_fr_mul(&num, &num, &xm);
            blst_fr_mul(&den, &den, &diff);
        }
        blst_fr inv;
        blst_fr_inverse(&inv, &den);
        blst_fr_mul(&out[j], &num, &inv);
    }
    return out;
}

bool decode_g1(const G1Bytes &bytes, blst_p1_affine &out)
{
    return blst_p1_uncompress(&out, bytes.data()) == BLST_SUCCESS && blst_p1_affine_in_g1(&out);
}

bool decode_g2(const G2Bytes &bytes, blst_p2_affine &out)
{
    return blst_p2_uncompress(&out, bytes.data()) == BLST_SUCCESS && blst_p2_affine_in_g2(&out) &&
           !blst_p2_affine_is_inf(&out);
}

bool core_verify(const blst_p2_affine &pk, ByteSpan claim, const G1Bytes &sig_bytes)
{
    blst_p1_affine sig;
    if (!decode_g1(sig_bytes, sig))
        return false;
    return blst_core_verify_pk_in_g2(&pk, &sig, true, claim.data(), claim.size(), dst_ptr(), bls_dst.size(),
                                     nullptr, 0) == BLST_SUCCESS;
}

} // namespace

G2Bytes bls_public_key(const BlsScalar &secret)
{
    const blst_scalar sk = scalar_from_bytes(secret);
    blst_p2 pk;
    blst_sk_to_pk_in_g2(&pk, &sk);
    G2Bytes out{};
    blst_p2_compress(out.data(), &pk);
    return out;
}

BlsKeyMaterial trusted_keygen(const SystemParams &params, ByteSpan seed)
{
    if (params.n == 0 || params.quorum == 0 || params.quorum > params.n)
        throw InvalidParameter("inconsistent system parameters for key generation");

    // Coefficients a_0 .. a_{t-1}, each reduced from 64 hashed bytes.
    std::vector<blst_fr> coeffs;
    coeffs.reserve(params.quorum);
    for (std::uint64_t j = 0, counter = 0; coeffs.size() < params.quorum; ++counter) {
        std::uint8_t wide[64];
        for (std::uint8_t half = 0; half < 2; ++half) {
            ByteWriter w;
            w.bytes(ByteSpan(reinterpret_cast<const std::uint8_t *>("ACCEPT-BLS-DEALER"), 17));
            w.bytes(seed);
            w.u64(counter);
            w.u8(half);
            const Hash32 h = sha256(w.view());
            std::memcpy(wide + 32 * half, h.data(), 32);
        }
        blst_scalar sc;
        blst_scalar_from_be_bytes(&sc, wide, sizeof(wide));
        blst_fr f;
        blst_fr_from_scalar(&f, &sc);
        if (j == 0 && fr_is_zero(f))
            continue;
        coeffs.push_back(f);
        ++j;
    }

    BlsKeyMaterial km;
    km.params = params;
    km.secret_shares.reserve(params.n);
    km.public_shares.reserve(params.n);
    for (std::size_t i = 0; i < params.n; ++i) {
        const blst_fr x = fr_from_u64(i + 1);
        blst_fr acc = coeffs.back();
        for (std::size_t k = coeffs.size() - 1; k-- > 0;) {
            blst_fr_mul(&acc, &acc, &x);
            blst_fr_add(&acc, &acc, &coeffs[k]);
        }
        km.secret_shares.push_back(bytes_from_fr(acc));
        km.public_shares.push_back(bls_public_key(km.secret_shares.back()));
    }
    km.master_public_key = bls_public_key(bytes_from_fr(coeffs[0]));
    return km;
}

BlsShareSignature sign_share(std::uint16_t validator_index, const BlsScalar &share, ByteSpan claim)
{
    blst_p1 h;
    blst_hash_to_g1(&h, claim.data(), claim.size(), dst_ptr(), bls_dst.size(), nullptr, 0);
    const blst_scalar sk = scalar_from_bytes(share);
    blst_p1 sig;
    blst_sign_pk_in_g2(&sig, &h, &sk);
    BlsShareSignature out;
    out.validator_index = validator_index;
    blst_p1_compress(out.sig.data(), &sig);
    return out;
}

bool verify_share(const G2Bytes &public_share, ByteSpan claim, const BlsShareSignature &sig)
{
    return BlsVerifier(public_share).verify(claim, sig.sig);
}

MasterSignature aggregate_master(const SystemParams &params, std::span<const BlsShareSignature> shares)
{
    if (shares.size() < params.quorum)
        throw InsufficientShares("need at least quorum share signatures");
    std::vector<BlsShareSignature> sorted(shares.begin(), shares.end());
    std::sort(sorted.begin(), sorted.end(),
              [](const auto &a, const auto &b) { return a.validator_index < b.validator_index; });
    for (std::size_t i = 0; i < sorted.size(); ++i) {
        if (sorted[i].validator_index >= params.n)
            throw InvalidInput("share from unknown validator index");
        if (i > 0 && sorted[i].validator_index == sorted[i - 1].validator_index)
            throw InvalidInput("duplicate validator index among shares");
    }
    sorted.resize(params.quorum);

    std::vector<std::uint64_t> xs;
    xs.reserve(sorted.size());
    for (const auto &s : sorted)
        xs.push_back(std::uint64_t{s.validator_index} + 1);
    const std::vector<blst_fr> lambdas = lagrange_at_zero(xs);

    blst_p1 acc{};
    bool first = true;
    for (std::size_t j = 0; j < sorted.size(); ++j) {
        blst_p1_affine aff;
        if (blst_p1_uncompress(&aff, sorted[j].sig.data()) != BLST_SUCCESS)
            throw InvalidInput("malformed share signature encoding");
        blst_p1 point;
        blst_p1_from_affine(&point, &aff);
        blst_scalar sc;
        blst_scalar_from_fr(&sc, &lambdas[j]);
        std::uint8_t le[32];
        blst_lendian_from_scalar(le, &sc);
        blst_p1 term;
        blst_p1_mult(&term, &point, le, 255);
        if (first) {
            acc = term;
            first = false;
        } else {
            blst_p1_add_or_double(&acc, &acc, &term);
        }
    }
    MasterSignature out;
    blst_p1_compress(out.sig.data(), &acc);
    return out;
}

bool verify_master(const G2Bytes &master_public_key, ByteSpan claim, const MasterSignature &sig)
{
    return BlsVerifier(master_public_key).verify(claim, sig.sig);
}

BlsScalar interpolate_secret(std::span<const std::pair<std::uint16_t, BlsScalar>> shares)
{
    if (shares.empty())
        throw InsufficientShares("no shares to interpolate");
    std::vector<std::uint64_t> xs;
    for (const auto &[idx, _] : shares) {
        if (std::find(xs.begin(), xs.end(), std::uint64_t{idx} + 1) != xs.end())
            throw InvalidInput("duplicate share index");
        xs.push_back(std::uint64_t{idx} + 1);
    }
    const std::vector<blst_fr> lambdas = lagrange_at_zero(xs);
    blst_fr acc = fr_from_u64(0);
    for (std::size_t j = 0; j < shares.size(); ++j) {
        const blst_fr y = fr_from_bytes(shares[j].second);
        blst_fr term;
        blst_fr_mul(&term, &lambdas[j], &y);
        blst_fr_add(&acc, &acc, &term);
    }
    return bytes_from_fr(acc);
}

// ---------------------------------------------------------------------------

struct BlsVerifier::Impl {
    blst_p2_affine pk{};
    bool valid = false;
};

BlsVerifier::BlsVerifier(const G2Bytes &public_key) : _impl(std::make_unique<Impl>())
{
    _impl->valid = decode_g2(public_key, _impl->pk);
}

BlsVerifier::~BlsVerifier() = default;
BlsVerifier::BlsVerifier(BlsVerifier &&) noexcept = default;
BlsVerifier &BlsVerifier::operator=(BlsVerifier &&) noexcept = default;
BlsVerifier::BlsVerifier(const BlsVerifier &other) : _impl(std::make_unique<Impl>(*other._impl)) {}

BlsVerifier &BlsVerifier::operator=(const BlsVerifier &other)
{
    if (this != &other)
        _impl = std::make_unique<Impl>(*other._impl);
    return *this;
}

bool BlsVerifier::valid_key() const { return _impl->valid; }

bool BlsVerifier::verify(ByteSpan claim, const G1Bytes &sig) const
{
    return _impl->valid && core_verify(_impl->pk, claim, sig);
}

} // namespace accept
