// SPDX-License-Identifier: Apache-2.0
#include <accept/simnet/scenarios.hpp>

#include <limits>

namespace accept::sim {

std::vector<std::vector<ActorId>> add_validator_actors(SimWorld &world, const Committee &committee,
                                                       std::shared_ptr<const Genesis> genesis,
                                                       const NetworkOptions &options)
{
    if (options.shards == 0)
        throw InvalidParameter("at least one shard per validator");
    if (options.scheme == Scheme::bls && !committee.validators.has_bls())
        throw InvalidParameter("bls scheme needs a committee with bls keys");
    const std::size_t n = committee.validators.size();
    std::vector<std::vector<ActorId>> ids(n);
    for (std::size_t v = 0; v < n; ++v) {
        const auto behavior = options.byzantine.behavior_of(static_cast<std::uint16_t>(v)).value_or(ByzantineBehavior{});
        for (std::uint32_t s = 0; s < options.shards; ++s) {
            ValidatorConfig cfg;
            cfg.index = static_cast<std::uint16_t>(v);
            cfg.scheme = options.scheme;
            cfg.shard_index = s;
            cfg.shard_count = options.shards;
            cfg.merkle_batch_size = options.merkle_batch_size;
            cfg.merkle_flush_after = std::chrono::hours(24);
            cfg.spent_buckets = options.spent_buckets;
            cfg.root_cache_capacity = 1024;
            Validator validator(cfg, committee.secrets[v], committee.validators, genesis);
            ids[v].push_back(world.add(std::make_unique<ValidatorActor>(std::move(validator), behavior)));
        }
    }
    return ids;
}

KeyPair sim_client_key(std::size_t i)
{
    return derive_keypair("sim-client", i);
}

std::shared_ptr<const Genesis> sim_genesis(std::size_t clients, std::uint64_t balance)
{
    std::vector<Output> entries;
    for (std::size_t i = 0; i < clients; ++i)
        entries.push_back(Output{balance, sim_client_key(i).public_key});
    return std::make_shared<const Genesis>(std::move(entries));
}

namespace {

ScenarioOutcome finish(SimWorld &world, std::uint64_t max_steps, const Committee &committee,
                       std::shared_ptr<const Genesis> genesis)
{
    world.run(RunLimits{max_steps});
    ScenarioOutcome out;
    out.all_done = world.all_done();
    out.trace = world.take_trace();
    out.genesis = genesis;
    out.confirmed = out.trace.confirmations.size();
    out.double_spend = audit_no_double_spend(out.trace, committee.validators);
    out.conservation = audit_conservation(out.trace, *genesis, committee.validators);
    return out;
}

} // namespace

SimWorld make_double_spend_world(const Committee &committee, const DoubleSpendScenario &scenario,
                                 std::shared_ptr<const Genesis> *genesis_out)
{
    if (scenario.conflicting < 2)
        throw InvalidParameter("a double spend needs at least two transactions");
    auto genesis = sim_genesis(1, 100);
    SimWorld world(scenario.seed, scenario.policy);
    const auto validators = add_validator_actors(world, committee, genesis, scenario.network);

    Wallet wallet(sim_client_key(0), committee.validators, genesis, scenario.network.shards);
    wallet.claim_genesis();
    std::vector<std::vector<Recipient>> spends;
    for (std::size_t i = 0; i < scenario.conflicting; ++i)
        spends.push_back({Recipient{sim_client_key(100 + i).public_key, 100}});
    world.add(std::make_unique<DoubleSpendClient>(std::move(wallet), Routing{validators, {}}, spends));
    world.start();
    if (genesis_out)
        *genesis_out = genesis;
    return world;
}

ScenarioOutcome run_double_spend(const Committee &committee, const DoubleSpendScenario &scenario)
{
    std::shared_ptr<const Genesis> genesis;
    SimWorld world = make_double_spend_world(committee, scenario, &genesis);
    ScenarioOutcome out = finish(world, scenario.max_steps, committee, genesis);
    out.requested = scenario.conflicting;
    return out;
}

SimWorld make_payment_world(const Committee &committee, const PaymentScenario &scenario,
                            std::shared_ptr<const Genesis> *genesis_out)
{
    if (scenario.clients == 0)
        throw InvalidParameter("at least one client");
    auto genesis = sim_genesis(scenario.clients, scenario.initial_balance);
    SimWorld world(scenario.seed, scenario.policy);
    const auto validators = add_validator_actors(world, committee, genesis, scenario.network);

    std::mt19937_64 amounts(scenario.seed ^ 0x9e3779b97f4a7c15ULL);
    const std::uint64_t cap = std::max<std::uint64_t>(1, scenario.initial_balance / (scenario.payments_per_client + 1));
    const ActorId first_client = static_cast<ActorId>(world.actor_count());
    Routing routing{validators, {}};
    for (std::size_t i = 0; i < scenario.clients; ++i)
        routing.peers.emplace(sim_client_key(i).public_key, static_cast<ActorId>(first_client + i));

    for (std::size_t i = 0; i < scenario.clients; ++i) {
        Wallet wallet(sim_client_key(i), committee.validators, genesis, scenario.network.shards);
        wallet.claim_genesis();
        const PublicKey payee = sim_client_key((i + 1) % scenario.clients).public_key;
        std::vector<std::vector<Recipient>> payments;
        for (std::size_t p = 0; p < scenario.payments_per_client; ++p)
            payments.push_back({Recipient{payee, 1 + amounts() % cap}});
        world.add(std::make_unique<ClientActor>(std::move(wallet), routing, std::move(payments)));
    }
    world.start();
    if (genesis_out)
        *genesis_out = genesis;
    return world;
}

ScenarioOutcome run_payments(const Committee &committee, const PaymentScenario &scenario)
{
    std::shared_ptr<const Genesis> genesis;
    SimWorld world = make_payment_world(committee, scenario, &genesis);
    ScenarioOutcome out = finish(world, scenario.max_steps, committee, genesis);
    out.requested = scenario.clients * scenario.payments_per_client;
    return out;
}

} // namespace accept::sim
