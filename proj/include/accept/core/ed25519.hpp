// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <accept/core/bytes.hpp>

namespace accept {

using PublicKey = FixedBytes<32>;
using Ed25519Signature = FixedBytes<64>;

/// Ed25519 key pair (libsodium layout: the secret key embeds the public key).
struct KeyPair {
    PublicKey public_key{};
    FixedBytes<64> secret_key{};

    static KeyPair from_seed(const Hash32 &seed);
    static KeyPair generate();
};

Ed25519Signature ed25519_sign(const KeyPair &key, ByteSpan message);
bool ed25519_verify(const PublicKey &pk, ByteSpan message, const Ed25519Signature &sig);

/// Derives a key pair from a label and a counter; used for test fixtures and the simulator.
KeyPair derive_keypair(std::string_view label, std::uint64_t index);

} // namespace accept
