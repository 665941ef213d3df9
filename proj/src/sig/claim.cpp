// SPDX-License-Identifier: Apache-2.0
#include <accept/sig/claim.hpp>

namespace accept {

ClaimMessage output_claim_message(const OutputId &id, const Output &output)
{
    ClaimMessage msg{};
    msg[0] = claim_domain_byte;
    const Hash32 key = id.key();
    std::memcpy(msg.data() + 1, key.data(), 32);
    for (int i = 0; i < 8; ++i)
        msg[33 + static_cast<std::size_t>(i)] = static_cast<std::uint8_t>(output.amount >> (8 * i));
    std::memcpy(msg.data() + 41, output.owner.data(), 32);
    return msg;
}

} // namespace accept
