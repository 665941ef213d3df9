// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <accept/simnet/world.hpp>

#include <functional>

namespace accept::sim {

struct AuditResult {
    bool ok = true;
    std::string detail;
    std::size_t records_checked = 0;

    explicit operator bool() const { return ok; }
};

/// Re-verifies every recorded confirmation and flags two confirmed
/// transactions spending the same output. A record whose confirmations do
/// not verify is itself a violation.
AuditResult audit_no_double_spend(const Trace &trace, const ValidatorSet &validators);

/// Replays recorded confirmations in order through a sequential ledger
/// seeded with genesis; the unspent total must equal the genesis total after
/// every record, and every confirmed input must be unspent at that point.
AuditResult audit_conservation(const Trace &trace, const Genesis &genesis, const ValidatorSet &validators);

struct ExploreLimits {
    std::size_t max_states = 2'000'000;
};

struct ExploreResult {
    std::size_t states = 0;
    std::size_t transitions = 0;
    std::size_t terminal_states = 0;
    std::size_t violations = 0;
    /// False if max_states cut the search short.
    bool exhausted = true;
    std::string first_violation;
};

/// nullopt when the state is fine, otherwise a description of the problem.
using StateCheck = std::function<std::optional<std::string>(const SimWorld &)>;

/// Depth-first enumeration of every delivery order from `initial` (which
/// must be started). States are deduplicated by fingerprint; identical
/// pending messages are treated as one choice. Drops need no separate
/// branch: every state reachable with drops is a prefix state of some
/// explored schedule, and every reached state is checked.
ExploreResult explore_all_schedules(const SimWorld &initial, const StateCheck &check, ExploreLimits limits = {});

} // namespace accept::sim
