// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <accept/core/bytes.hpp>
#include <accept/core/ed25519.hpp>

#include <optional>
#include <vector>

namespace accept {

/// An unspent transaction output: funds and the key allowed to spend them.
struct Output {
    std::uint64_t amount = 0;
    PublicKey owner{};

    bool operator==(const Output &) const = default;
};

/// Names an output by the digest of the transaction (or genesis) that created
/// it and its position there.
struct OutputId {
    Hash32 source_digest{};
    std::uint16_t index = 0;

    /// sha256(source_digest || index as u16 LE). This is the spent-set key.
    Hash32 key() const;

    bool operator==(const OutputId &) const = default;
    auto operator<=>(const OutputId &) const = default;
};

struct Input {
    OutputId id;
    Output body;

    bool operator==(const Input &) const = default;
};

struct Transaction {
    std::vector<Input> inputs;
    std::vector<Output> outputs;
    Ed25519Signature sender_signature{};

    bool operator==(const Transaction &) const = default;
};

/// The initial set of outputs. Entry i is OutputId{digest(), i}.
class Genesis {
public:
    Genesis() = default;
    explicit Genesis(std::vector<Output> entries);

    const std::vector<Output> &entries() const { return _entries; }
    const Hash32 &digest() const { return _digest; }
    OutputId id_of(std::size_t i) const;
    std::optional<Output> find(const OutputId &id) const;
    std::uint64_t total() const;

private:
    std::vector<Output> _entries;
    Hash32 _digest{};
};

} // namespace accept
