// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <accept/simnet/scenarios.hpp>

namespace accept::test {

/// n = 4 with validators 0 and 1 signing everything (f+1 of them). The
/// schedule keeps transaction A away from validator 3 and B away from
/// validator 2, so each conflicting spend gathers a quorum.
inline sim::ScenarioOutcome run_overpowered_double_spend(const Committee &committee)
{
    auto digests = std::make_shared<std::array<Hash32, 2>>();
    const auto chooser = [digests](const std::vector<sim::SimMessage> &pending,
                                   std::mt19937_64 &) -> std::optional<sim::Decision> {
        if (pending.empty())
            return std::nullopt;
        for (std::size_t i = 0; i < pending.size(); ++i) {
            const sim::SimMessage &m = pending[i];
            if (m.kind() != sim::MessageKind::sign_request)
                continue;
            if ((m.to == 3 && m.digest == (*digests)[0]) || (m.to == 2 && m.digest == (*digests)[1]))
                return sim::Decision{i, sim::Action::drop};
        }
        return sim::Decision{0, sim::Action::deliver};
    };

    sim::DoubleSpendScenario s;
    s.network.byzantine = sim::ByzantineSpec::unchecked({{0, {.sign_everything = true}}, {1, {.sign_everything = true}}});
    s.policy = sim::SchedulePolicy::scripted(chooser);
    std::shared_ptr<const Genesis> genesis;
    sim::SimWorld world = sim::make_double_spend_world(committee, s, &genesis);
    const auto &client = world.actor_as<sim::DoubleSpendClient>(4);
    (*digests)[0] = tx_digest(client.transactions()[0]);
    (*digests)[1] = tx_digest(client.transactions()[1]);
    world.run(sim::RunLimits{s.max_steps});

    sim::ScenarioOutcome out;
    out.all_done = world.all_done();
    out.trace = world.take_trace();
    out.genesis = genesis;
    out.confirmed = out.trace.confirmations.size();
    out.requested = 2;
    out.double_spend = sim::audit_no_double_spend(out.trace, committee.validators);
    out.conservation = sim::audit_conservation(out.trace, *genesis, committee.validators);
    return out;
}

} // namespace accept::test
