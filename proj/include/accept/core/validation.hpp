// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <accept/core/types.hpp>

#include <string_view>
#include <vector>

namespace accept {

enum class Violation : std::uint8_t {
    unbalanced = 1,
    empty_inputs,
    empty_outputs,
    mixed_owners,
    zero_amount,
    bad_signature,
    amount_overflow,
    duplicate_input,
    too_many_outputs,
};

std::string_view to_string(Violation v);

struct ValidationResult {
    std::vector<Violation> violations;

    bool ok() const { return violations.empty(); }
    bool has(Violation v) const;
};

/// Every check that needs no ledger state: balance, non-empty sides, a single
/// input owner, positive amounts, no repeated input, and the sender signature
/// over tx_digest. All violations are reported, not just the first.
ValidationResult validate_stateless(const Transaction &tx);

/// Signs tx_digest(tx) in place with the owner key.
void sign_transaction(Transaction &tx, const KeyPair &owner);

/// Checked sum; returns nullopt on u64 overflow.
std::optional<std::uint64_t> checked_sum(const std::vector<Output> &outputs);

} // namespace accept
