// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <accept/client/wallet.hpp>

#include <map>

namespace accept {

/// Gathers validator responses for one transaction until a quorum of
/// distinct validators has returned valid signatures for every output.
class ConfirmationCollector {
public:
    enum class Outcome : std::uint8_t {
        accepted,
        duplicate,
        invalid,
        rejected,
        pending,
        irrelevant,
    };

    ConfirmationCollector(ValidatorSet validators, Transaction tx, std::shared_ptr<RootCache> cache = nullptr);

    const Transaction &tx() const { return _tx; }
    const Hash32 &digest() const { return _digest; }

    /// Every signature in an ok response is checked against the sender's own
    /// key; a response with any bad signature is discarded as a whole.
    Outcome add_response(const SignResponse &resp);

    bool complete() const { return _signatures.size() >= _validators.params().quorum; }
    std::size_t valid_responders() const { return _signatures.size(); }
    std::size_t invalid_responses(std::uint16_t validator) const;
    std::size_t total_invalid() const;
    const std::map<std::uint16_t, SignResponse> &rejections() const { return _rejections; }

    /// One confirmation per output. Requires complete().
    std::vector<Confirmation> confirmations() const;

    /// Sorted state summary for simulator fingerprints.
    void fingerprint(ByteWriter &w) const;

private:
    ValidatorSet _validators;
    Transaction _tx;
    Hash32 _digest{};
    std::vector<ClaimMessage> _claims;
    std::shared_ptr<RootCache> _cache;
    std::map<std::uint16_t, std::vector<OutputSignature>> _signatures;
    std::map<std::uint16_t, std::size_t> _invalid;
    std::map<std::uint16_t, SignResponse> _rejections;
};

/// Delivery of sign requests to validator shards and of their responses back.
class Transport {
public:
    virtual ~Transport() = default;
    virtual void send(std::size_t validator, std::uint32_t shard, const SignRequest &req) = 0;
    /// Blocks for the next response; nullopt once the transport is closed.
    virtual std::optional<SignResponse> receive() = 0;
};

/// Sends the request to the wallet's shard of every validator and waits for
/// a quorum. On success the wallet is settled and the per-output
/// confirmations are returned; nullopt only if the transport closes first.
std::optional<std::vector<Confirmation>> submit_and_collect(Wallet &wallet, const Transaction &tx, Transport &transport);

} // namespace accept
