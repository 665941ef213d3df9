// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <accept/client/wallet.hpp>

#include <cstdint>
#include <functional>
#include <memory>
#include <random>
#include <string>
#include <variant>
#include <vector>

namespace accept::sim {

using ActorId = std::uint32_t;

/// Self-addressed wake-up; carries no data.
struct Timer {
    bool operator==(const Timer &) const = default;
};

using Payload = std::variant<Timer, SignRequest, SignResponse, TransferBundle>;

enum class MessageKind : std::uint8_t { timer = 0, sign_request = 1, sign_response = 2, transfer = 3 };
std::string_view to_string(MessageKind k);

struct SimMessage {
    std::uint64_t id = 0;
    ActorId from = 0;
    ActorId to = 0;
    std::shared_ptr<const Payload> payload;
    /// Transaction digest the message concerns (zero for timers).
    Hash32 digest{};
    /// Hash of kind and encoded payload; identical messages share it.
    Hash32 content{};

    MessageKind kind() const { return static_cast<MessageKind>(payload->index()); }
};

enum class Action : std::uint8_t { deliver, drop, duplicate };
std::string_view to_string(Action a);

struct TraceEvent {
    std::uint64_t step = 0;
    Action action = Action::deliver;
    ActorId from = 0;
    ActorId to = 0;
    MessageKind kind = MessageKind::timer;
    Hash32 digest{};

    bool operator==(const TraceEvent &) const = default;
};

/// A client assembled confirmations for every output of `tx`.
struct ConfirmationRecord {
    std::uint64_t step = 0;
    ActorId client = 0;
    Transaction tx;
    std::vector<Confirmation> confirmations;

    bool operator==(const ConfirmationRecord &) const = default;
};

struct Trace {
    std::uint64_t seed = 0;
    std::string policy;
    std::vector<TraceEvent> events;
    std::vector<ConfirmationRecord> confirmations;
    std::uint64_t steps = 0;
    /// False when the run stopped before quiescence.
    bool complete = false;

    bool operator==(const Trace &) const = default;

    /// Header line with seed and policy, then one JSON object per event.
    std::string to_jsonl() const;
};

struct Decision {
    std::size_t index = 0;
    Action action = Action::deliver;
};

/// Picks the next pending message; nullopt stops the run.
using Chooser = std::function<std::optional<Decision>(const std::vector<SimMessage> &pending, std::mt19937_64 &rng)>;

struct SchedulePolicy {
    enum class Kind : std::uint8_t { fair, unrestricted, scripted };

    Kind kind = Kind::fair;
    double drop_probability = 0.0;
    double duplicate_probability = 0.0;
    Chooser script;

    /// Uniformly random order, nothing lost: every message is eventually delivered.
    static SchedulePolicy fair();
    /// Random order with drops and replays.
    static SchedulePolicy unrestricted(double drop = 0.1, double duplicate = 0.1);
    static SchedulePolicy scripted(Chooser chooser);

    std::string describe() const;
};

class SimContext;

class Actor {
public:
    virtual ~Actor() = default;
    virtual void on_start(SimContext &) {}
    virtual void on_message(const SimMessage &msg, SimContext &ctx) = 0;
    virtual std::unique_ptr<Actor> clone() const = 0;
    /// Everything that can influence future behaviour.
    virtual void fingerprint(ByteWriter &w) const = 0;
    /// For liveness checks; actors with no goals are always done.
    virtual bool done() const { return true; }
};

class SimWorld;

class SimContext {
public:
    SimContext(SimWorld &world, ActorId self) : _world(world), _self(self) {}

    ActorId self() const { return _self; }
    std::uint64_t step() const;
    void send(ActorId to, Payload payload);
    void record_confirmation(const Transaction &tx, std::vector<Confirmation> confirmations);

private:
    SimWorld &_world;
    ActorId _self;
};

struct RunLimits {
    std::uint64_t max_steps = 1'000'000;
};

/// Single-threaded deterministic message pool. Actors only interact through
/// messages; the policy decides which pending message goes next.
class SimWorld {
public:
    SimWorld(std::uint64_t seed, SchedulePolicy policy);
    SimWorld(const SimWorld &other);
    SimWorld &operator=(const SimWorld &) = delete;

    ActorId add(std::unique_ptr<Actor> actor);
    std::size_t actor_count() const { return _actors.size(); }
    Actor &actor(ActorId id) { return *_actors.at(id); }
    const Actor &actor(ActorId id) const { return *_actors.at(id); }
    template <class T> T &actor_as(ActorId id) { return dynamic_cast<T &>(actor(id)); }
    template <class T> const T &actor_as(ActorId id) const { return dynamic_cast<const T &>(actor(id)); }

    /// Runs on_start of every actor once.
    void start();
    /// One policy decision. False when nothing is pending or the script stops.
    bool step();
    /// Steps until quiescence or the bound; trace().complete tells which.
    const Trace &run(RunLimits limits = {});

    const std::vector<SimMessage> &pending() const { return _pending; }
    void apply(Decision d);

    const Trace &trace() const { return _trace; }
    Trace take_trace() { return std::move(_trace); }
    bool all_done() const;

    /// Actor states, pending multiset and recorded confirmations.
    Hash32 fingerprint() const;

private:
    friend class SimContext;
    void enqueue(ActorId from, ActorId to, Payload payload);

    SchedulePolicy _policy;
    std::mt19937_64 _rng;
    std::vector<std::unique_ptr<Actor>> _actors;
    std::vector<SimMessage> _pending;
    std::uint64_t _next_id = 0;
    bool _started = false;
    bool _stopped = false;
    Trace _trace;
};

} // namespace accept::sim
