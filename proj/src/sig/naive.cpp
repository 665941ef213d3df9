// SPDX-License-Identifier: Apache-2.0
#include <accept/sig/naive.hpp>

namespace accept {

NaiveSignature sign_naive(const KeyPair &validator_key, std::uint16_t validator_index, ByteSpan claim)
{
    return NaiveSignature{validator_index, ed25519_sign(validator_key, claim)};
}

bool verify_naive(const PublicKey &validator_key, ByteSpan claim, const NaiveSignature &sig)
{
    return ed25519_verify(validator_key, claim, sig.sig);
}

// libsodium has no multi-signature batch equation; items are checked one by
// one so the per-item contract holds trivially.
std::vector<bool> verify_naive_batch(std::span<const NaiveBatchItem> items)
{
    std::vector<bool> out;
    out.reserve(items.size());
    for (const NaiveBatchItem &item : items)
        out.push_back(ed25519_verify(item.key, item.message, item.sig));
    return out;
}

bool verify_naive_confirmation(const SystemParams &params, std::span<const PublicKey> validator_keys,
                               ByteSpan claim, const NaiveConfirmation &conf)
{
    if (validator_keys.size() != params.n)
        return false;
    std::size_t valid = 0;
    int prev = -1;
    for (const NaiveSignature &s : conf.signatures) {
        if (s.validator_index >= params.n || static_cast<int>(s.validator_index) <= prev)
            return false;
        prev = s.validator_index;
        if (verify_naive(validator_keys[s.validator_index], claim, s))
            ++valid;
    }
    return valid >= params.quorum;
}

void write_naive_confirmation(ByteWriter &w, const NaiveConfirmation &conf)
{
    if (conf.signatures.size() > 0xffff)
        throw EncodingError("too many signatures in confirmation");
    w.u16(static_cast<std::uint16_t>(conf.signatures.size()));
    for (const NaiveSignature &s : conf.signatures) {
        w.u16(s.validator_index);
        w.bytes(s.sig);
    }
}

NaiveConfirmation read_naive_confirmation(ByteReader &r)
{
    NaiveConfirmation conf;
    const std::uint16_t count = r.u16();
    if (r.remaining() < count * std::size_t{66})
        throw DecodeError("signature count exceeds available bytes");
    conf.signatures.resize(count);
    for (NaiveSignature &s : conf.signatures) {
        s.validator_index = r.u16();
        s.sig = r.fixed<64>();
    }
    return conf;
}

} // namespace accept
