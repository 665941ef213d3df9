// SPDX-License-Identifier: Apache-2.0
#include <accept/simnet/scenarios.hpp>

#include <support/fixtures.hpp>
#include <support/negative_control.hpp>

#include <gtest/gtest.h>

#include <sstream>

using namespace accept;
using namespace accept::sim;
using namespace accept::test;

namespace {

const Committee &committee4()
{
    static const Committee c = make_committee(4, 21);
    return c;
}

} // namespace

TEST(SimWorld, SameSeedSameTrace)
{
    PaymentScenario s;
    s.seed = 5;
    s.policy = SchedulePolicy::unrestricted();
    const ScenarioOutcome a = run_payments(committee4(), s);
    const ScenarioOutcome b = run_payments(committee4(), s);
    EXPECT_EQ(a.trace, b.trace);
    EXPECT_EQ(a.trace.to_jsonl(), b.trace.to_jsonl());
    s.seed = 6;
    EXPECT_NE(run_payments(committee4(), s).trace.events, a.trace.events);
}

TEST(SimWorld, CopiedWorldReplaysIdentically)
{
    DoubleSpendScenario s;
    s.seed = 3;
    SimWorld w = make_double_spend_world(committee4(), s);
    for (int i = 0; i < 5; ++i)
        w.step();
    SimWorld copy(w);
    EXPECT_EQ(copy.fingerprint(), w.fingerprint());
    w.run();
    copy.run();
    EXPECT_EQ(copy.trace(), w.trace());
}

TEST(SimWorld, FairSinglePaymentConfirms)
{
    for (Scheme scheme : {Scheme::naive, Scheme::merkle, Scheme::bls}) {
        PaymentScenario s;
        s.network.scheme = scheme;
        s.clients = 2;
        s.payments_per_client = 1;
        const ScenarioOutcome out = run_payments(committee4(), s);
        EXPECT_TRUE(out.trace.complete) << to_string(scheme);
        EXPECT_TRUE(out.all_done);
        EXPECT_EQ(out.confirmed, 2u);
        EXPECT_TRUE(out.double_spend.ok) << out.double_spend.detail;
        EXPECT_TRUE(out.conservation.ok) << out.conservation.detail;
    }
}

TEST(SimWorld, DroppingEverythingConfirmsNothing)
{
    PaymentScenario s;
    s.policy = SchedulePolicy::unrestricted(1.0, 0.0);
    const ScenarioOutcome out = run_payments(committee4(), s);
    EXPECT_EQ(out.confirmed, 0u);
    EXPECT_TRUE(out.double_spend.ok);
    EXPECT_TRUE(out.conservation.ok);
    EXPECT_TRUE(out.trace.complete);
    EXPECT_FALSE(out.all_done);
}

TEST(SimWorld, SilentMinorityDoesNotBlock)
{
    const Committee c = make_committee(7, 4);
    PaymentScenario s;
    s.network.byzantine = ByzantineSpec::first(c.validators.params(), 2, ByzantineBehavior{.silent = true});
    for (std::uint64_t seed = 0; seed < 10; ++seed) {
        s.seed = seed;
        const ScenarioOutcome out = run_payments(c, s);
        EXPECT_EQ(out.confirmed, out.requested) << "seed " << seed;
        EXPECT_TRUE(out.all_done);
    }
}

TEST(SimWorld, GarbageMinorityIsDiscarded)
{
    const Committee c = make_committee(7, 4);
    for (Scheme scheme : {Scheme::naive, Scheme::merkle, Scheme::bls}) {
        PaymentScenario s;
        s.network.scheme = scheme;
        s.network.byzantine = ByzantineSpec::first(c.validators.params(), 2, ByzantineBehavior{.garbage = true});
        s.payments_per_client = 2;
        SimWorld w = make_payment_world(c, s);
        w.run();
        std::size_t invalid = 0;
        std::size_t confirmed = 0;
        for (ActorId id = 7; id < w.actor_count(); ++id) {
            invalid += w.actor_as<ClientActor>(id).invalid_responses();
            confirmed += w.actor_as<ClientActor>(id).confirmed();
        }
        EXPECT_EQ(confirmed, 6u) << to_string(scheme);
        EXPECT_GT(invalid, 0u) << to_string(scheme);
        EXPECT_TRUE(audit_conservation(w.trace(), *sim_genesis(3, 1000), c.validators).ok);
    }
}

TEST(SimWorld, ByzantineBound)
{
    const SystemParams p = quorum_params(4);
    EXPECT_THROW(ByzantineSpec::first(p, 2, ByzantineBehavior{.sign_everything = true}), InvalidParameter);
    EXPECT_THROW(ByzantineSpec(p, {{4, ByzantineBehavior{}}}), InvalidParameter);
    EXPECT_EQ(ByzantineSpec::first(p, 1, ByzantineBehavior{}).size(), 1u);
    EXPECT_EQ(ByzantineSpec::unchecked({{0, {}}, {1, {}}}).size(), 2u);
}

TEST(SimWorld, JsonLinesFormat)
{
    PaymentScenario s;
    s.seed = 12;
    s.clients = 2;
    s.payments_per_client = 1;
    const ScenarioOutcome out = run_payments(committee4(), s);
    std::istringstream lines(out.trace.to_jsonl());
    std::string line;
    ASSERT_TRUE(std::getline(lines, line));
    const auto header = nlohmann::json::parse(line);
    EXPECT_EQ(header["seed"], 12);
    EXPECT_EQ(header["policy"], "fair");
    std::size_t events = 0;
    std::size_t confirmations = 0;
    while (std::getline(lines, line)) {
        const auto j = nlohmann::json::parse(line);
        ASSERT_TRUE(j.contains("step") && j.contains("sender") && j.contains("type") && j.contains("digest"));
        EXPECT_EQ(j["digest"].get<std::string>().size(), 64u);
        if (j["type"] == "confirmation") {
            ++confirmations;
        } else {
            ASSERT_TRUE(j.contains("receiver") && j.contains("action"));
            ++events;
        }
    }
    EXPECT_EQ(events, out.trace.events.size());
    EXPECT_EQ(confirmations, 2u);
}

TEST(SimWorld, SchedulePolicyValidation)
{
    EXPECT_THROW(SchedulePolicy::unrestricted(0.7, 0.5), InvalidParameter);
    EXPECT_THROW(SchedulePolicy::unrestricted(-0.1, 0), InvalidParameter);
    EXPECT_EQ(SchedulePolicy::fair().describe(), "fair");
}

// --- safety --------------------------------------------------------------------

TEST(Safety, SignEverythingMinorityAcrossSeeds)
{
    for (std::size_t n : {4u, 7u}) {
        const Committee c = make_committee(n, n);
        DoubleSpendScenario s;
        s.network.byzantine = ByzantineSpec::first(c.validators.params(), c.validators.params().f,
                                                   ByzantineBehavior{.sign_everything = true});
        s.policy = SchedulePolicy::unrestricted();
        for (std::uint64_t seed = 0; seed < 200; ++seed) {
            s.seed = seed;
            const ScenarioOutcome out = run_double_spend(c, s);
            ASSERT_TRUE(out.double_spend.ok) << "n=" << n << " seed=" << seed << " " << out.double_spend.detail;
            ASSERT_TRUE(out.conservation.ok) << out.conservation.detail;
            ASSERT_LE(out.confirmed, 1u);
        }
    }
}

TEST(Safety, EquivocatingMinority)
{
    const Committee c = make_committee(4, 4);
    DoubleSpendScenario s;
    s.network.byzantine = ByzantineSpec::first(c.validators.params(), 1, ByzantineBehavior{.equivocate = true});
    s.policy = SchedulePolicy::unrestricted(0.05, 0.2);
    for (std::uint64_t seed = 0; seed < 100; ++seed) {
        s.seed = seed;
        ASSERT_TRUE(run_double_spend(c, s).double_spend.ok) << seed;
    }
}

TEST(Safety, ExhaustiveFourValidators)
{
    const Committee &c = committee4();
    DoubleSpendScenario s;
    s.network.byzantine = ByzantineSpec::first(c.validators.params(), 1, ByzantineBehavior{.sign_everything = true});
    std::shared_ptr<const Genesis> genesis;
    const SimWorld initial = make_double_spend_world(c, s, &genesis);
    const auto check = [&](const SimWorld &w) -> std::optional<std::string> {
        const auto r = audit_no_double_spend(w.trace(), c.validators);
        if (!r.ok)
            return r.detail;
        return std::nullopt;
    };
    const ExploreResult r = explore_all_schedules(initial, check);
    EXPECT_TRUE(r.exhausted);
    EXPECT_EQ(r.violations, 0u) << r.first_violation;
    EXPECT_GT(r.states, 100u);
    EXPECT_GT(r.terminal_states, 0u);
}

TEST(Safety, ExhaustiveSearchFindsOverpoweredViolation)
{
    const Committee &c = committee4();
    DoubleSpendScenario s;
    s.network.byzantine = ByzantineSpec::unchecked({{0, {.sign_everything = true}}, {1, {.sign_everything = true}}});
    const SimWorld initial = make_double_spend_world(c, s);
    const auto check = [&](const SimWorld &w) -> std::optional<std::string> {
        const auto r = audit_no_double_spend(w.trace(), c.validators);
        if (!r.ok)
            return r.detail;
        return std::nullopt;
    };
    const ExploreResult r = explore_all_schedules(initial, check);
    EXPECT_GT(r.violations, 0u);
    EXPECT_FALSE(r.first_violation.empty());
}

TEST(Safety, NegativeControlScriptedSchedule)
{
    const ScenarioOutcome out = run_overpowered_double_spend(committee4());
    EXPECT_EQ(out.confirmed, 2u);
    EXPECT_FALSE(out.double_spend.ok);
    EXPECT_FALSE(out.conservation.ok);
}

// --- conservation --------------------------------------------------------------

TEST(Conservation, EmptyWorkload)
{
    Trace empty;
    const auto g = sim_genesis(3, 1000);
    const AuditResult r = audit_conservation(empty, *g, committee4().validators);
    EXPECT_TRUE(r.ok);
    EXPECT_EQ(r.records_checked, 0u);
}

TEST(Conservation, HundredSequentialPayments)
{
    PaymentScenario s;
    s.clients = 2;
    s.payments_per_client = 50;
    s.seed = 8;
    const ScenarioOutcome out = run_payments(committee4(), s);
    EXPECT_EQ(out.confirmed, 100u);
    EXPECT_TRUE(out.conservation.ok) << out.conservation.detail;
    EXPECT_EQ(out.conservation.records_checked, 100u);
    EXPECT_TRUE(out.double_spend.ok);
}

TEST(Conservation, ForgedRecordsAreCaught)
{
    PaymentScenario s;
    s.clients = 2;
    s.payments_per_client = 2;
    const ScenarioOutcome out = run_payments(committee4(), s);
    ASSERT_TRUE(out.conservation.ok);
    const ValidatorSet &vs = committee4().validators;

    // Inflated output with the original confirmations.
    Trace inflated = out.trace;
    inflated.confirmations[1].tx.outputs[0].amount += 1;
    EXPECT_FALSE(audit_conservation(inflated, *out.genesis, vs).ok);
    EXPECT_FALSE(audit_no_double_spend(inflated, vs).ok);

    // The same transaction recorded twice is one spend, not two.
    Trace replayed = out.trace;
    replayed.confirmations.push_back(replayed.confirmations.front());
    const AuditResult again = audit_conservation(replayed, *out.genesis, vs);
    EXPECT_TRUE(again.ok);
    EXPECT_EQ(again.records_checked, out.conservation.records_checked);

    // Missing confirmations.
    Trace stripped = out.trace;
    stripped.confirmations[0].confirmations.pop_back();
    EXPECT_FALSE(audit_conservation(stripped, *out.genesis, vs).ok);
}
