// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <accept/core/params.hpp>
#include <accept/sig/claim.hpp>

#include <span>
#include <vector>

namespace accept {

struct NaiveSignature {
    std::uint16_t validator_index = 0;
    Ed25519Signature sig{};

    bool operator==(const NaiveSignature &) const = default;
};

/// Signatures sorted by strictly increasing validator index.
struct NaiveConfirmation {
    std::vector<NaiveSignature> signatures;

    bool operator==(const NaiveConfirmation &) const = default;
};

NaiveSignature sign_naive(const KeyPair &validator_key, std::uint16_t validator_index, ByteSpan claim);
bool verify_naive(const PublicKey &validator_key, ByteSpan claim, const NaiveSignature &sig);

struct NaiveBatchItem {
    PublicKey key;
    ByteSpan message;
    Ed25519Signature sig;
};

/// Per-item results, identical to verifying each item on its own.
std::vector<bool> verify_naive_batch(std::span<const NaiveBatchItem> items);

/// True iff the confirmation holds at least `quorum` valid signatures from
/// distinct validators. Unsorted or repeated indices, or an index >= n, make
/// the whole confirmation invalid.
bool verify_naive_confirmation(const SystemParams &params, std::span<const PublicKey> validator_keys,
                               ByteSpan claim, const NaiveConfirmation &conf);

void write_naive_confirmation(ByteWriter &w, const NaiveConfirmation &conf);
NaiveConfirmation read_naive_confirmation(ByteReader &r);

} // namespace accept
