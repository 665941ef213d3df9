// SPDX-License-Identifier: Apache-2.0
#include <accept/core/encoding.hpp>
#include <accept/core/validation.hpp>

#include <algorithm>
#include <limits>
#include <set>

namespace accept {

std::string_view to_string(Violation v)
{
    switch (v) {
    case Violation::unbalanced: return "unbalanced";
    case Violation::empty_inputs: return "empty-inputs";
    case Violation::empty_outputs: return "empty-outputs";
    case Violation::mixed_owners: return "mixed-owners";
    case Violation::zero_amount: return "zero-amount";
    case Violation::bad_signature: return "bad-signature";
    case Violation::amount_overflow: return "amount-overflow";
    case Violation::duplicate_input: return "duplicate-input";
    case Violation::too_many_outputs: return "too-many-outputs";
    }
    return "unknown";
}

bool ValidationResult::has(Violation v) const
{
    return std::find(violations.begin(), violations.end(), v) != violations.end();
}

std::optional<std::uint64_t> checked_sum(const std::vector<Output> &outputs)
{
    std::uint64_t sum = 0;
    for (const Output &o : outputs) {
        if (o.amount > std::numeric_limits<std::uint64_t>::max() - sum)
            return std::nullopt;
        sum += o.amount;
    }
    return sum;
}

ValidationResult validate_stateless(const Transaction &tx)
{
    ValidationResult res;
    auto flag = [&](Violation v) {
        if (!res.has(v))
            res.violations.push_back(v);
    };

    if (tx.inputs.empty())
        flag(Violation::empty_inputs);
    if (tx.outputs.empty())
        flag(Violation::empty_outputs);
    if (tx.outputs.size() > std::numeric_limits<std::uint16_t>::max() ||
        tx.inputs.size() > std::numeric_limits<std::uint16_t>::max()) {
        // Cannot be encoded, so there is no digest to check a signature against.
        flag(Violation::too_many_outputs);
        return res;
    }

    std::vector<Output> in_bodies;
    in_bodies.reserve(tx.inputs.size());
    std::set<OutputId> seen;
    for (const Input &in : tx.inputs) {
        in_bodies.push_back(in.body);
        if (in.body.owner != tx.inputs.front().body.owner)
            flag(Violation::mixed_owners);
        if (in.body.amount == 0)
            flag(Violation::zero_amount);
        if (!seen.insert(in.id).second)
            flag(Violation::duplicate_input);
    }
    for (const Output &out : tx.outputs)
        if (out.amount == 0)
            flag(Violation::zero_amount);

    const auto in_sum = checked_sum(in_bodies);
    const auto out_sum = checked_sum(tx.outputs);
    if (!in_sum || !out_sum)
        flag(Violation::amount_overflow);
    else if (*in_sum != *out_sum)
        flag(Violation::unbalanced);

    if (!tx.inputs.empty()) {
        const Hash32 digest = tx_digest(tx);
        if (!ed25519_verify(tx.inputs.front().body.owner, digest, tx.sender_signature))
            flag(Violation::bad_signature);
    }
    return res;
}

void sign_transaction(Transaction &tx, const KeyPair &owner)
{
    const Hash32 digest = tx_digest(tx);
    tx.sender_signature = ed25519_sign(owner, digest);
}

} // namespace accept
