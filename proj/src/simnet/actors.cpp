// SPDX-License-Identifier: Apache-2.0
#include <accept/simnet/actors.hpp>
#include <accept/core/encoding.hpp>

#include <algorithm>

namespace accept::sim {

namespace {

// Simulated validators run on logical time; merkle batches flush on timer messages.
const Validator::Clock::time_point logical_now{};

void corrupt(OutputSignature &s)
{
    std::visit(
        [](auto &sig) {
            using T = std::decay_t<decltype(sig)>;
            if constexpr (std::is_same_v<T, MerkleSignature>)
                sig.root_sig[0] ^= 0x01;
            else
                sig.sig[sig.sig.size() - 1] ^= 0x01;
        },
        s.payload);
}

void write_outputs(ByteWriter &w, const Wallet &wallet)
{
    std::vector<std::pair<OutputId, std::uint64_t>> owned;
    for (const OwnedOutput &o : wallet.outputs())
        owned.emplace_back(o.id, o.body.amount);
    std::sort(owned.begin(), owned.end());
    w.u32(static_cast<std::uint32_t>(owned.size()));
    for (const auto &[id, amount] : owned) {
        w.bytes(id.source_digest);
        w.u16(id.index);
        w.u64(amount);
    }
}

} // namespace

ByzantineSpec::ByzantineSpec(const SystemParams &params, std::map<std::uint16_t, ByzantineBehavior> members)
    : _members(std::move(members))
{
    if (_members.size() > params.f)
        throw InvalidParameter("more byzantine validators than f");
    for (const auto &[idx, _] : _members)
        if (idx >= params.n)
            throw InvalidParameter("byzantine validator index out of range");
}

ByzantineSpec ByzantineSpec::unchecked(std::map<std::uint16_t, ByzantineBehavior> members)
{
    ByzantineSpec s;
    s._members = std::move(members);
    return s;
}

ByzantineSpec ByzantineSpec::first(const SystemParams &params, std::size_t count, ByzantineBehavior behavior)
{
    std::map<std::uint16_t, ByzantineBehavior> m;
    for (std::size_t i = 0; i < count; ++i)
        m.emplace(static_cast<std::uint16_t>(i), behavior);
    return ByzantineSpec(params, std::move(m));
}

std::optional<ByzantineBehavior> ByzantineSpec::behavior_of(std::uint16_t validator) const
{
    const auto it = _members.find(validator);
    if (it == _members.end())
        return std::nullopt;
    return it->second;
}

// ---------------------------------------------------------------------------

ValidatorActor::ValidatorActor(Validator validator, ByzantineBehavior behavior)
    : _validator(std::move(validator)), _behavior(behavior)
{
}

SignResponse ValidatorActor::handle(const SignRequest &req)
{
    if (_behavior.sign_everything)
        return _validator.handle_sign_request(req, logical_now, HandleOptions{.skip_spent_set = true});

    SignResponse r = _validator.handle_sign_request(req, logical_now);
    if (_behavior.equivocate && r.status == SignStatus::double_spend) {
        const Hash32 digest = r.tx_digest;
        auto sigs = _validator.sign_outputs(req.tx, digest, logical_now);
        SignResponse forged;
        forged.validator_index = r.validator_index;
        forged.tx_digest = digest;
        forged.status = sigs ? SignStatus::ok : SignStatus::pending;
        if (sigs)
            forged.signatures = std::move(*sigs);
        return forged;
    }
    return r;
}

void ValidatorActor::respond(ActorId to, SignResponse resp, SimContext &ctx)
{
    if (_behavior.garbage && resp.status == SignStatus::ok)
        for (OutputSignature &s : resp.signatures)
            corrupt(s);
    ctx.send(to, std::move(resp));
}

void ValidatorActor::drain(SimContext &ctx)
{
    for (SignResponse &r : _validator.take_completed()) {
        const auto it = _waiting.find(r.tx_digest);
        if (it == _waiting.end())
            continue;
        for (ActorId to : it->second)
            respond(to, r, ctx);
        _waiting.erase(it);
    }
    if (_validator.pending_claims() > 0 && !_timer_armed) {
        _timer_armed = true;
        ctx.send(ctx.self(), Timer{});
    }
}

void ValidatorActor::on_message(const SimMessage &msg, SimContext &ctx)
{
    if (_behavior.silent)
        return;
    if (msg.kind() == MessageKind::timer) {
        _timer_armed = false;
        _validator.flush();
        drain(ctx);
        return;
    }
    const auto *req = std::get_if<SignRequest>(msg.payload.get());
    if (!req)
        return;
    SignResponse r = handle(*req);
    if (r.status == SignStatus::pending)
        _waiting[r.tx_digest].push_back(msg.from);
    else
        respond(msg.from, std::move(r), ctx);
    drain(ctx);
}

void ValidatorActor::fingerprint(ByteWriter &w) const
{
    w.u8(0x56);
    auto spent = _validator.spent().snapshot();
    std::sort(spent.begin(), spent.end());
    w.u32(static_cast<std::uint32_t>(spent.size()));
    for (const auto &[k, v] : spent) {
        w.bytes(k);
        w.bytes(v);
    }
    w.u32(static_cast<std::uint32_t>(_validator.pending_claims()));
    w.u32(static_cast<std::uint32_t>(_waiting.size()));
    for (const auto &[digest, who] : _waiting) {
        w.bytes(digest);
        w.u32(static_cast<std::uint32_t>(who.size()));
        for (ActorId a : who)
            w.u32(a);
    }
    w.u8(_timer_armed ? 1 : 0);
}

// ---------------------------------------------------------------------------

ClientActor::ClientActor(Wallet wallet, Routing routing, std::vector<std::vector<Recipient>> payments)
    : _wallet(std::move(wallet)), _routing(std::move(routing)), _queue(payments.begin(), payments.end())
{
    if (_routing.validators.size() != _wallet.validators().size())
        throw InvalidParameter("routing must list every validator");
}

void ClientActor::try_next(SimContext &ctx)
{
    if (_inflight || _queue.empty())
        return;
    Transaction tx;
    try {
        tx = _wallet.create_transaction(_queue.front());
    } catch (const InsufficientFunds &) {
        // Wait for incoming transfers.
        return;
    }
    _queue.pop_front();
    ++_requested;
    const SignRequest req = _wallet.make_request(tx);
    const std::uint32_t shard = _wallet.shard();
    for (const auto &shards : _routing.validators)
        ctx.send(shards.at(shard), req);
    _inflight.emplace(_wallet.validators(), std::move(tx));
}

void ClientActor::on_message(const SimMessage &msg, SimContext &ctx)
{
    if (const auto *resp = std::get_if<SignResponse>(msg.payload.get())) {
        if (!_inflight)
            return;
        if (_inflight->add_response(*resp) == ConfirmationCollector::Outcome::invalid)
            ++_invalid;
        if (!_inflight->complete())
            return;
        const Transaction tx = _inflight->tx();
        const Hash32 digest = _inflight->digest();
        std::vector<Confirmation> confs = _inflight->confirmations();
        _inflight.reset();
        _wallet.settle(tx, confs);
        for (std::size_t i = 0; i < tx.outputs.size(); ++i) {
            const auto peer = _routing.peers.find(tx.outputs[i].owner);
            if (tx.outputs[i].owner == _wallet.public_key() || peer == _routing.peers.end())
                continue;
            ctx.send(peer->second,
                     TransferBundle{OutputId{digest, static_cast<std::uint16_t>(i)}, tx.outputs[i], confs[i]});
        }
        ctx.record_confirmation(tx, std::move(confs));
        ++_confirmed;
        try_next(ctx);
    } else if (const auto *bundle = std::get_if<TransferBundle>(msg.payload.get())) {
        if (_wallet.accept_payment(*bundle))
            ++_received;
        try_next(ctx);
    }
}

void ClientActor::fingerprint(ByteWriter &w) const
{
    w.u8(0x43);
    write_outputs(w, _wallet);
    w.u32(static_cast<std::uint32_t>(_queue.size()));
    w.u8(_inflight ? 1 : 0);
    if (_inflight)
        _inflight->fingerprint(w);
    w.u32(static_cast<std::uint32_t>(_confirmed));
    w.u32(static_cast<std::uint32_t>(_received));
}

// ---------------------------------------------------------------------------

DoubleSpendClient::DoubleSpendClient(Wallet wallet, Routing routing, const std::vector<std::vector<Recipient>> &spends)
    : _wallet(std::move(wallet)), _routing(std::move(routing))
{
    if (_routing.validators.size() != _wallet.validators().size())
        throw InvalidParameter("routing must list every validator");
    for (const auto &recipients : spends) {
        _txs.push_back(_wallet.create_transaction(recipients));
        _collectors.emplace_back(_wallet.validators(), _txs.back());
    }
    _recorded.assign(_txs.size(), false);
}

void DoubleSpendClient::on_start(SimContext &ctx)
{
    const std::uint32_t shard = _wallet.shard();
    for (const Transaction &tx : _txs) {
        const SignRequest req = _wallet.make_request(tx);
        for (const auto &shards : _routing.validators)
            ctx.send(shards.at(shard), req);
    }
}

void DoubleSpendClient::on_message(const SimMessage &msg, SimContext &ctx)
{
    const auto *resp = std::get_if<SignResponse>(msg.payload.get());
    if (!resp)
        return;
    for (std::size_t i = 0; i < _collectors.size(); ++i) {
        if (_collectors[i].digest() != resp->tx_digest)
            continue;
        _collectors[i].add_response(*resp);
        if (_collectors[i].complete() && !_recorded[i]) {
            _recorded[i] = true;
            ctx.record_confirmation(_txs[i], _collectors[i].confirmations());
        }
    }
}

void DoubleSpendClient::fingerprint(ByteWriter &w) const
{
    w.u8(0x44);
    for (std::size_t i = 0; i < _collectors.size(); ++i) {
        _collectors[i].fingerprint(w);
        w.u8(_recorded[i] ? 1 : 0);
    }
}

std::size_t DoubleSpendClient::confirmed() const
{
    return static_cast<std::size_t>(std::count(_recorded.begin(), _recorded.end(), true));
}

} // namespace accept::sim
