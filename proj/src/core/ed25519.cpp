// SPDX-License-Identifier: Apache-2.0
#include <accept/core/ed25519.hpp>
#include <accept/core/hash.hpp>

#include <sodium.h>

namespace accept {

namespace {

void ensure_sodium()
{
    static const bool ready = [] {
        if (sodium_init() < 0)
            throw Error("libsodium initialisation failed");
        return true;
    }();
    (void)ready;
}

} // namespace

KeyPair KeyPair::from_seed(const Hash32 &seed)
{
    ensure_sodium();
    KeyPair kp;
    crypto_sign_seed_keypair(kp.public_key.data(), kp.secret_key.data(), seed.data());
    return kp;
}

KeyPair KeyPair::generate()
{
    ensure_sodium();
    KeyPair kp;
    crypto_sign_keypair(kp.public_key.data(), kp.secret_key.data());
    return kp;
}

Ed25519Signature ed25519_sign(const KeyPair &key, ByteSpan message)
{
    Ed25519Signature sig{};
    crypto_sign_detached(sig.data(), nullptr, message.data(), message.size(), key.secret_key.data());
    return sig;
}

bool ed25519_verify(const PublicKey &pk, ByteSpan message, const Ed25519Signature &sig)
{
    ensure_sodium();
    return crypto_sign_verify_detached(sig.data(), message.data(), message.size(), pk.data()) == 0;
}

KeyPair derive_keypair(std::string_view label, std::uint64_t index)
{
    ByteWriter w;
    w.bytes(ByteSpan(reinterpret_cast<const std::uint8_t *>(label.data()), label.size()));
    w.u64(index);
    return KeyPair::from_seed(sha256(w.view()));
}

} // namespace accept
