// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <accept/client/collector.hpp>
#include <accept/simnet/world.hpp>
#include <accept/validator/validator.hpp>

#include <deque>
#include <map>

namespace accept::sim {

struct ByzantineBehavior {
    /// Signs any well-formed request, ignoring the spent set.
    bool sign_everything = false;
    /// Behaves honestly but signs the conflicting transaction instead of rejecting it.
    bool equivocate = false;
    /// Answers ok with corrupted signatures.
    bool garbage = false;
    /// Never answers.
    bool silent = false;

    bool operator==(const ByzantineBehavior &) const = default;
};

/// Which validators misbehave and how. At most f entries unless built with unchecked().
class ByzantineSpec {
public:
    ByzantineSpec() = default;
    ByzantineSpec(const SystemParams &params, std::map<std::uint16_t, ByzantineBehavior> members);

    /// Skips the |B| <= f bound. Only for negative controls.
    static ByzantineSpec unchecked(std::map<std::uint16_t, ByzantineBehavior> members);

    /// The first `count` validators, all with `behavior`.
    static ByzantineSpec first(const SystemParams &params, std::size_t count, ByzantineBehavior behavior);

    std::optional<ByzantineBehavior> behavior_of(std::uint16_t validator) const;
    std::size_t size() const { return _members.size(); }
    const std::map<std::uint16_t, ByzantineBehavior> &members() const { return _members; }

private:
    std::map<std::uint16_t, ByzantineBehavior> _members;
};

/// One validator shard, optionally wrapped in byzantine behaviour. Merkle
/// batches are flushed by a self-addressed timer message.
class ValidatorActor : public Actor {
public:
    ValidatorActor(Validator validator, ByzantineBehavior behavior = {});

    void on_message(const SimMessage &msg, SimContext &ctx) override;
    std::unique_ptr<Actor> clone() const override { return std::make_unique<ValidatorActor>(*this); }
    void fingerprint(ByteWriter &w) const override;

    const Validator &validator() const { return _validator; }
    const ByzantineBehavior &behavior() const { return _behavior; }

private:
    SignResponse handle(const SignRequest &req);
    void respond(ActorId to, SignResponse resp, SimContext &ctx);
    void drain(SimContext &ctx);

    Validator _validator;
    ByzantineBehavior _behavior;
    std::map<Hash32, std::vector<ActorId>> _waiting;
    bool _timer_armed = false;
};

/// Addresses of validator shards ([validator][shard]) and of known payees.
struct Routing {
    std::vector<std::vector<ActorId>> validators;
    std::map<PublicKey, ActorId> peers;
};

/// Honest wallet working through a queue of payments one at a time. Sends
/// each payee a transfer bundle once its payment is confirmed.
class ClientActor : public Actor {
public:
    ClientActor(Wallet wallet, Routing routing, std::vector<std::vector<Recipient>> payments);

    void on_start(SimContext &ctx) override { try_next(ctx); }
    void on_message(const SimMessage &msg, SimContext &ctx) override;
    std::unique_ptr<Actor> clone() const override { return std::make_unique<ClientActor>(*this); }
    void fingerprint(ByteWriter &w) const override;
    bool done() const override { return _queue.empty() && !_inflight; }

    const Wallet &wallet() const { return _wallet; }
    Routing &routing() { return _routing; }
    std::size_t confirmed() const { return _confirmed; }
    std::size_t requested() const { return _requested; }
    std::size_t received() const { return _received; }
    std::size_t invalid_responses() const { return _invalid; }

private:
    void try_next(SimContext &ctx);

    Wallet _wallet;
    Routing _routing;
    std::deque<std::vector<Recipient>> _queue;
    std::optional<ConfirmationCollector> _inflight;
    std::size_t _requested = 0;
    std::size_t _confirmed = 0;
    std::size_t _received = 0;
    std::size_t _invalid = 0;
};

/// Builds several transactions over the same inputs and submits all of them
/// at once, recording every one that gathers a quorum.
class DoubleSpendClient : public Actor {
public:
    /// Each entry of `spends` must name different recipients so digests differ.
    DoubleSpendClient(Wallet wallet, Routing routing, const std::vector<std::vector<Recipient>> &spends);

    void on_start(SimContext &ctx) override;
    void on_message(const SimMessage &msg, SimContext &ctx) override;
    std::unique_ptr<Actor> clone() const override { return std::make_unique<DoubleSpendClient>(*this); }
    void fingerprint(ByteWriter &w) const override;

    const std::vector<Transaction> &transactions() const { return _txs; }
    std::size_t confirmed() const;

private:
    Wallet _wallet;
    Routing _routing;
    std::vector<Transaction> _txs;
    std::vector<ConfirmationCollector> _collectors;
    std::vector<bool> _recorded;
};

} // namespace accept::sim
