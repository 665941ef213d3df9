// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <accept/core/bytes.hpp>

#include <sodium.h>

#include <initializer_list>

namespace accept {

/// Incremental SHA-256, the only hash primitive used by the protocol.
class Sha256 {
public:
    Sha256() { crypto_hash_sha256_init(&_state); }

    Sha256 &update(ByteSpan data)
    {
        crypto_hash_sha256_update(&_state, data.data(), data.size());
        return *this;
    }

    Sha256 &update(std::uint8_t byte) { return update(ByteSpan(&byte, 1)); }

    Hash32 finish()
    {
        Hash32 out{};
        crypto_hash_sha256_final(&_state, out.data());
        return out;
    }

private:
    crypto_hash_sha256_state _state;
};

inline Hash32 sha256(ByteSpan data)
{
    Hash32 out{};
    crypto_hash_sha256(out.data(), data.data(), data.size());
    return out;
}

inline Hash32 sha256(std::initializer_list<ByteSpan> parts)
{
    Sha256 h;
    for (const ByteSpan p : parts)
        h.update(p);
    return h.finish();
}

} // namespace accept
