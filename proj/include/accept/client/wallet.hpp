// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <accept/validator/messages.hpp>

#include <filesystem>
#include <memory>
#include <mutex>
#include <span>
#include <string>

namespace accept {

/// An output the wallet can spend. A missing confirmation means the output
/// comes straight from genesis.
struct OwnedOutput {
    OutputId id;
    Output body;
    std::optional<Confirmation> confirmation;

    bool operator==(const OwnedOutput &) const = default;
};

struct Recipient {
    PublicKey owner{};
    std::uint64_t amount = 0;
};

/// Payer-to-payee handoff: everything the payee needs to verify and later
/// spend one output.
struct TransferBundle {
    OutputId id;
    Output body;
    Confirmation confirmation;

    bool operator==(const TransferBundle &) const = default;
};

/// source 32B | index u16 | amount u64 | owner 32B | u32 length | confirmation blob
Bytes encode_transfer_bundle(const TransferBundle &bundle);
TransferBundle decode_transfer_bundle(ByteSpan data);

class Wallet {
public:
    Wallet(KeyPair key, ValidatorSet validators, std::shared_ptr<const Genesis> genesis, std::uint32_t shard_count = 1);
    Wallet(const Wallet &other);
    Wallet &operator=(const Wallet &other);

    const PublicKey &public_key() const { return _key.public_key; }
    const KeyPair &key() const { return _key; }
    const ValidatorSet &validators() const { return _validators; }
    const Genesis &genesis() const { return *_genesis; }
    std::uint32_t shard_count() const { return _shard_count; }
    /// The validator shard this wallet's transactions go to.
    std::uint32_t shard() const;

    const std::vector<OwnedOutput> &outputs() const { return _outputs; }
    std::uint64_t balance() const;

    /// Adopts every genesis entry owned by this key; returns how many were added.
    std::size_t claim_genesis();

    /// Largest-first selection; pays each recipient and returns any surplus
    /// to this wallet as a final change output. Signed. The wallet itself is
    /// not modified. Throws InsufficientFunds.
    Transaction create_transaction(std::span<const Recipient> recipients) const;

    SignRequest make_request(const Transaction &tx) const;

    /// Verifies ownership and the confirmation; stores the output on success.
    bool accept_payment(const OutputId &id, const Output &body, const Confirmation &conf);
    bool accept_payment(const TransferBundle &bundle) { return accept_payment(bundle.id, bundle.body, bundle.confirmation); }

    /// Records a confirmed transaction: drops its inputs and keeps outputs
    /// addressed to this wallet. `confirmations` is aligned with tx.outputs.
    void settle(const Transaction &tx, std::span<const Confirmation> confirmations);

    /// Recomputes the balance from stored (output, confirmation) pairs alone,
    /// counting only those that verify.
    std::uint64_t verified_balance() const;

    /// Held for the duration of a submission so one wallet never races itself.
    std::mutex &submission_mutex() const { return *_submit_mutex; }

    std::string to_json() const;
    static Wallet from_json(std::string_view text, ValidatorSet validators, std::shared_ptr<const Genesis> genesis);
    void save(const std::filesystem::path &path) const;
    static Wallet load(const std::filesystem::path &path, ValidatorSet validators, std::shared_ptr<const Genesis> genesis);

private:
    KeyPair _key;
    ValidatorSet _validators;
    std::shared_ptr<const Genesis> _genesis;
    std::uint32_t _shard_count;
    std::vector<OwnedOutput> _outputs;
    std::unique_ptr<std::mutex> _submit_mutex = std::make_unique<std::mutex>();
};

} // namespace accept
