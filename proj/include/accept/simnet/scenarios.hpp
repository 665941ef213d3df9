// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <accept/simnet/actors.hpp>
#include <accept/simnet/audit.hpp>

namespace accept::sim {

struct NetworkOptions {
    Scheme scheme = Scheme::naive;
    std::uint32_t shards = 1;
    ByzantineSpec byzantine;
    std::size_t spent_buckets = 64;
    std::size_t merkle_batch_size = 64;
};

/// Registers one ValidatorActor per (validator, shard); returns [validator][shard] addresses.
std::vector<std::vector<ActorId>> add_validator_actors(SimWorld &world, const Committee &committee,
                                                       std::shared_ptr<const Genesis> genesis,
                                                       const NetworkOptions &options);

/// Deterministic client key i.
KeyPair sim_client_key(std::size_t i);

/// A conflicting-spend attempt: one client holding a single genesis output
/// submits `conflicting` transactions over it, each to a different payee.
struct DoubleSpendScenario {
    NetworkOptions network;
    SchedulePolicy policy = SchedulePolicy::fair();
    std::uint64_t seed = 0;
    std::size_t conflicting = 2;
    std::uint64_t max_steps = 100'000;
};

struct ScenarioOutcome {
    Trace trace;
    AuditResult double_spend;
    AuditResult conservation;
    std::shared_ptr<const Genesis> genesis;
    std::size_t confirmed = 0;
    std::size_t requested = 0;
    bool all_done = false;
};

/// Started, not yet run.
SimWorld make_double_spend_world(const Committee &committee, const DoubleSpendScenario &scenario,
                                 std::shared_ptr<const Genesis> *genesis_out = nullptr);
ScenarioOutcome run_double_spend(const Committee &committee, const DoubleSpendScenario &scenario);

/// Honest clients in a ring, each paying the next one; amounts are drawn from the seed.
struct PaymentScenario {
    NetworkOptions network;
    SchedulePolicy policy = SchedulePolicy::fair();
    std::uint64_t seed = 0;
    std::size_t clients = 3;
    std::size_t payments_per_client = 3;
    std::uint64_t initial_balance = 1000;
    std::uint64_t max_steps = 1'000'000;
};

SimWorld make_payment_world(const Committee &committee, const PaymentScenario &scenario,
                            std::shared_ptr<const Genesis> *genesis_out = nullptr);
ScenarioOutcome run_payments(const Committee &committee, const PaymentScenario &scenario);

/// Builds the genesis a scenario uses, one entry of `balance` per client.
std::shared_ptr<const Genesis> sim_genesis(std::size_t clients, std::uint64_t balance);

} // namespace accept::sim
