// SPDX-License-Identifier: Apache-2.0
#include <accept/simnet/world.hpp>
#include <accept/core/encoding.hpp>
#include <accept/core/hash.hpp>

#include <json.hpp>

#include <algorithm>

namespace accept::sim {

std::string_view to_string(MessageKind k)
{
    switch (k) {
    case MessageKind::timer: return "timer";
    case MessageKind::sign_request: return "sign_request";
    case MessageKind::sign_response: return "sign_response";
    case MessageKind::transfer: return "transfer";
    }
    return "unknown";
}

std::string_view to_string(Action a)
{
    switch (a) {
    case Action::deliver: return "deliver";
    case Action::drop: return "drop";
    case Action::duplicate: return "duplicate";
    }
    return "unknown";
}

std::string Trace::to_jsonl() const
{
    std::string out;
    nlohmann::json header{{"seed", seed}, {"policy", policy}, {"steps", steps}, {"complete", complete}};
    out += header.dump();
    out += '\n';
    for (const TraceEvent &e : events) {
        nlohmann::json j{{"step", e.step},
                         {"action", to_string(e.action)},
                         {"sender", e.from},
                         {"receiver", e.to},
                         {"type", to_string(e.kind)},
                         {"digest", to_hex(e.digest)}};
        out += j.dump();
        out += '\n';
    }
    for (const ConfirmationRecord &c : confirmations) {
        nlohmann::json j{{"step", c.step}, {"type", "confirmation"}, {"sender", c.client}, {"digest", to_hex(tx_digest(c.tx))}};
        out += j.dump();
        out += '\n';
    }
    return out;
}

SchedulePolicy SchedulePolicy::fair()
{
    return SchedulePolicy{};
}

SchedulePolicy SchedulePolicy::unrestricted(double drop, double duplicate)
{
    if (drop < 0 || duplicate < 0 || drop + duplicate > 1)
        throw InvalidParameter("drop and duplicate probabilities must lie in [0,1] and sum to at most 1");
    SchedulePolicy p;
    p.kind = Kind::unrestricted;
    p.drop_probability = drop;
    p.duplicate_probability = duplicate;
    return p;
}

SchedulePolicy SchedulePolicy::scripted(Chooser chooser)
{
    SchedulePolicy p;
    p.kind = Kind::scripted;
    p.script = std::move(chooser);
    return p;
}

std::string SchedulePolicy::describe() const
{
    switch (kind) {
    case Kind::fair: return "fair";
    case Kind::unrestricted:
        return "unrestricted(drop=" + std::to_string(drop_probability) + ",duplicate=" + std::to_string(duplicate_probability) +
               ")";
    case Kind::scripted: return "scripted";
    }
    return "unknown";
}

std::uint64_t SimContext::step() const
{
    return _world._trace.steps;
}

void SimContext::send(ActorId to, Payload payload)
{
    _world.enqueue(_self, to, std::move(payload));
}

void SimContext::record_confirmation(const Transaction &tx, std::vector<Confirmation> confirmations)
{
    _world._trace.confirmations.push_back(ConfirmationRecord{_world._trace.steps, _self, tx, std::move(confirmations)});
}

SimWorld::SimWorld(std::uint64_t seed, SchedulePolicy policy) : _policy(std::move(policy)), _rng(seed)
{
    if (_policy.kind == SchedulePolicy::Kind::scripted && !_policy.script)
        throw InvalidParameter("scripted policy needs a chooser");
    _trace.seed = seed;
    _trace.policy = _policy.describe();
}

SimWorld::SimWorld(const SimWorld &other)
    : _policy(other._policy), _rng(other._rng), _pending(other._pending), _next_id(other._next_id),
      _started(other._started), _stopped(other._stopped), _trace(other._trace)
{
    _actors.reserve(other._actors.size());
    for (const auto &a : other._actors)
        _actors.push_back(a->clone());
}

ActorId SimWorld::add(std::unique_ptr<Actor> actor)
{
    if (_started)
        throw InvalidParameter("actors must be registered before start");
    _actors.push_back(std::move(actor));
    return static_cast<ActorId>(_actors.size() - 1);
}

void SimWorld::start()
{
    if (_started)
        return;
    _started = true;
    for (ActorId id = 0; id < _actors.size(); ++id) {
        SimContext ctx(*this, id);
        _actors[id]->on_start(ctx);
    }
}

void SimWorld::enqueue(ActorId from, ActorId to, Payload payload)
{
    if (to >= _actors.size())
        throw InvalidParameter("message to unknown actor");
    SimMessage m;
    m.id = _next_id++;
    m.from = from;
    m.to = to;

    ByteWriter w;
    w.u8(static_cast<std::uint8_t>(payload.index()));
    std::visit(
        [&](const auto &p) {
            using T = std::decay_t<decltype(p)>;
            if constexpr (std::is_same_v<T, SignRequest>) {
                m.digest = tx_digest(p.tx);
                w.bytes(encode_sign_request(p));
            } else if constexpr (std::is_same_v<T, SignResponse>) {
                m.digest = p.tx_digest;
                w.bytes(encode_sign_response(p));
            } else if constexpr (std::is_same_v<T, TransferBundle>) {
                m.digest = p.id.source_digest;
                w.bytes(encode_transfer_bundle(p));
            }
        },
        payload);
    m.content = sha256(w.view());
    m.payload = std::make_shared<const Payload>(std::move(payload));
    _pending.push_back(std::move(m));
}

void SimWorld::apply(Decision d)
{
    if (d.index >= _pending.size())
        throw InvalidParameter("decision refers to no pending message");
    SimMessage msg = _pending[d.index];
    if (d.action != Action::duplicate)
        _pending.erase(_pending.begin() + static_cast<std::ptrdiff_t>(d.index));
    _trace.events.push_back(TraceEvent{_trace.steps, d.action, msg.from, msg.to, msg.kind(), msg.digest});
    ++_trace.steps;
    if (d.action == Action::drop)
        return;
    SimContext ctx(*this, msg.to);
    _actors[msg.to]->on_message(msg, ctx);
}

bool SimWorld::step()
{
    if (!_started)
        start();
    if (_stopped || _pending.empty())
        return false;

    Decision d;
    switch (_policy.kind) {
    case SchedulePolicy::Kind::fair:
        d.index = static_cast<std::size_t>(_rng() % _pending.size());
        break;
    case SchedulePolicy::Kind::unrestricted: {
        d.index = static_cast<std::size_t>(_rng() % _pending.size());
        const double r = static_cast<double>(_rng() >> 11) * 0x1.0p-53;
        // Timers are local, not network traffic: the adversary cannot touch them.
        if (_pending[d.index].kind() != MessageKind::timer) {
            if (r < _policy.drop_probability)
                d.action = Action::drop;
            else if (r < _policy.drop_probability + _policy.duplicate_probability)
                d.action = Action::duplicate;
        }
        break;
    }
    case SchedulePolicy::Kind::scripted: {
        const auto choice = _policy.script(_pending, _rng);
        if (!choice) {
            _stopped = true;
            return false;
        }
        d = *choice;
        break;
    }
    }
    apply(d);
    return true;
}

const Trace &SimWorld::run(RunLimits limits)
{
    start();
    std::uint64_t taken = 0;
    while (taken < limits.max_steps && step())
        ++taken;
    _trace.complete = _pending.empty();
    return _trace;
}

bool SimWorld::all_done() const
{
    return std::all_of(_actors.begin(), _actors.end(), [](const auto &a) { return a->done(); });
}

Hash32 SimWorld::fingerprint() const
{
    ByteWriter w;
    for (const auto &a : _actors)
        a->fingerprint(w);

    std::vector<Hash32> msgs;
    msgs.reserve(_pending.size());
    for (const SimMessage &m : _pending) {
        ByteWriter mw;
        mw.u32(m.from);
        mw.u32(m.to);
        mw.bytes(m.content);
        msgs.push_back(sha256(mw.view()));
    }
    std::sort(msgs.begin(), msgs.end());
    w.u32(static_cast<std::uint32_t>(msgs.size()));
    for (const Hash32 &h : msgs)
        w.bytes(h);

    std::vector<Hash32> confirmed;
    for (const ConfirmationRecord &c : _trace.confirmations)
        confirmed.push_back(tx_digest(c.tx));
    std::sort(confirmed.begin(), confirmed.end());
    w.u32(static_cast<std::uint32_t>(confirmed.size()));
    for (const Hash32 &h : confirmed)
        w.bytes(h);
    return sha256(w.view());
}

} // namespace accept::sim
