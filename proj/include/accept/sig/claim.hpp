// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <accept/core/types.hpp>

namespace accept {

inline constexpr std::uint8_t claim_domain_byte = 0x4F;
inline constexpr std::size_t claim_message_size = 1 + 32 + 8 + 32;

using ClaimMessage = FixedBytes<claim_message_size>;

/// What every scheme signs for one output:
///   0x4F | OutputId key (32B) | amount u64 LE | owner (32B)
ClaimMessage output_claim_message(const OutputId &id, const Output &output);

inline ClaimMessage output_claim_message(const Hash32 &tx_digest, std::uint16_t index, const Output &output)
{
    return output_claim_message(OutputId{tx_digest, index}, output);
}

} // namespace accept
