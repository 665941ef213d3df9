// SPDX-License-Identifier: Apache-2.0
#include <accept/simnet/audit.hpp>
#include <accept/core/encoding.hpp>
#include <accept/core/validation.hpp>

#include <map>
#include <set>
#include <unordered_set>

namespace accept::sim {

namespace {

std::optional<std::string> verify_record(const ConfirmationRecord &rec, const ValidatorSet &validators,
                                         const Hash32 &digest)
{
    if (rec.confirmations.size() != rec.tx.outputs.size())
        return "confirmation count mismatch for " + to_hex(digest);
    for (std::size_t i = 0; i < rec.tx.outputs.size(); ++i) {
        const OutputId id{digest, static_cast<std::uint16_t>(i)};
        if (!verify_confirmation(validators, id, rec.tx.outputs[i], rec.confirmations[i]))
            return "unverifiable confirmation for " + to_hex(digest) + " output " + std::to_string(i);
    }
    return std::nullopt;
}

} // namespace

AuditResult audit_no_double_spend(const Trace &trace, const ValidatorSet &validators)
{
    AuditResult result;
    std::map<OutputId, Hash32> spender;
    std::set<Hash32> seen;
    for (const ConfirmationRecord &rec : trace.confirmations) {
        const Hash32 digest = tx_digest(rec.tx);
        if (!seen.insert(digest).second)
            continue;
        ++result.records_checked;
        if (auto err = verify_record(rec, validators, digest)) {
            result.ok = false;
            result.detail = *err;
            return result;
        }
        for (const Input &in : rec.tx.inputs) {
            const auto [it, fresh] = spender.emplace(in.id, digest);
            if (!fresh && it->second != digest) {
                result.ok = false;
                result.detail = "output " + to_hex(in.id.source_digest) + ":" + std::to_string(in.id.index) +
                                " spent by " + to_hex(it->second) + " and " + to_hex(digest);
                return result;
            }
        }
    }
    return result;
}

AuditResult audit_conservation(const Trace &trace, const Genesis &genesis, const ValidatorSet &validators)
{
    AuditResult result;
    std::map<OutputId, Output> unspent;
    for (std::size_t i = 0; i < genesis.entries().size(); ++i)
        unspent.emplace(genesis.id_of(i), genesis.entries()[i]);
    const std::uint64_t total = genesis.total();
    std::uint64_t current = total;

    std::set<Hash32> applied;
    for (const ConfirmationRecord &rec : trace.confirmations) {
        const Hash32 digest = tx_digest(rec.tx);
        if (applied.count(digest))
            continue;
        ++result.records_checked;
        auto fail = [&](std::string why) {
            result.ok = false;
            result.detail = "step " + std::to_string(rec.step) + ": " + std::move(why);
            return result;
        };
        if (auto err = verify_record(rec, validators, digest))
            return fail(*err);
        if (!validate_stateless(rec.tx).ok())
            return fail("confirmed transaction " + to_hex(digest) + " is not balanced or well formed");

        std::uint64_t in_sum = 0;
        for (const Input &in : rec.tx.inputs) {
            const auto it = unspent.find(in.id);
            if (it == unspent.end() || it->second != in.body)
                return fail("confirmed transaction " + to_hex(digest) + " spends an output that is not unspent");
            in_sum += it->second.amount;
            unspent.erase(it);
        }
        std::uint64_t out_sum = 0;
        for (std::size_t i = 0; i < rec.tx.outputs.size(); ++i) {
            unspent.emplace(OutputId{digest, static_cast<std::uint16_t>(i)}, rec.tx.outputs[i]);
            out_sum += rec.tx.outputs[i].amount;
        }
        current = current - in_sum + out_sum;
        applied.insert(digest);
        if (current != total)
            return fail("unspent total " + std::to_string(current) + " differs from genesis total " + std::to_string(total));
    }
    return result;
}

ExploreResult explore_all_schedules(const SimWorld &initial, const StateCheck &check, ExploreLimits limits)
{
    ExploreResult result;
    std::unordered_set<Hash32, Hash32Hasher> visited;
    std::vector<std::unique_ptr<SimWorld>> stack;

    auto visit = [&](std::unique_ptr<SimWorld> w) {
        if (!visited.insert(w->fingerprint()).second)
            return;
        ++result.states;
        if (auto err = check(*w)) {
            if (result.violations++ == 0)
                result.first_violation = *err;
        }
        stack.push_back(std::move(w));
    };

    visit(std::make_unique<SimWorld>(initial));
    while (!stack.empty()) {
        std::unique_ptr<SimWorld> w = std::move(stack.back());
        stack.pop_back();
        const auto &pending = w->pending();
        if (pending.empty()) {
            ++result.terminal_states;
            continue;
        }
        std::set<std::tuple<ActorId, ActorId, Hash32>> tried;
        for (std::size_t i = 0; i < pending.size(); ++i) {
            if (!tried.emplace(pending[i].from, pending[i].to, pending[i].content).second)
                continue;
            if (result.states >= limits.max_states) {
                result.exhausted = false;
                return result;
            }
            auto next = std::make_unique<SimWorld>(*w);
            next->apply(Decision{i, Action::deliver});
            ++result.transitions;
            visit(std::move(next));
        }
    }
    return result;
}

} // namespace accept::sim
