// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <accept/core/validation.hpp>
#include <accept/sig/confirmation.hpp>

#include <optional>
#include <vector>

namespace accept {

/// A transaction plus, aligned with its inputs, the confirmation of every
/// non-genesis input (nullopt for genesis inputs).
struct SignRequest {
    Transaction tx;
    std::vector<std::optional<Confirmation>> input_confirmations;

    bool operator==(const SignRequest &) const = default;
};

enum class SignStatus : std::uint8_t {
    ok = 0,
    /// Merkle scheme: signatures follow when the batch is flushed.
    pending = 1,
    bad_stateless = 2,
    bad_input_confirmation = 3,
    double_spend = 4,
    wrong_shard = 5,
    malformed = 6,
};

std::string_view to_string(SignStatus s);

struct SignResponse {
    SignStatus status = SignStatus::ok;
    std::uint16_t validator_index = 0;
    Hash32 tx_digest{};
    /// ok: one signature per transaction output, in output order.
    std::vector<OutputSignature> signatures;
    /// bad_stateless
    std::vector<Violation> violations;
    /// bad_input_confirmation, double_spend
    std::uint16_t input_index = 0;
    /// double_spend: digest of the transaction that already holds the input.
    Hash32 conflicting_digest{};

    bool operator==(const SignResponse &) const = default;
};

/// u32 length | wire transaction | u16 count | count x (u32 length | confirmation blob, empty for genesis)
Bytes encode_sign_request(const SignRequest &req);
SignRequest decode_sign_request(ByteSpan data);

/// status u8 | validator_index u16 | tx digest 32B | status-specific body; for ok:
/// u16 count | count x (u32 length | signature blob)
Bytes encode_sign_response(const SignResponse &resp);
SignResponse decode_sign_response(ByteSpan data);

} // namespace accept
