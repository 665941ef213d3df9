// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <accept/core/types.hpp>

namespace accept {

inline constexpr std::uint8_t tx_encoding_version = 0x01;
inline constexpr std::size_t encoded_input_size = 32 + 2 + 8 + 32;
inline constexpr std::size_t encoded_output_size = 8 + 32;

/// Canonical, signature-free encoding:
///   0x01 | u16 input count | inputs (source 32B, index u16, amount u64, owner 32B)
///   | u16 output count | outputs (amount u64, owner 32B)
/// Throws EncodingError when a count does not fit in u16.
Bytes encode_tx(const Transaction &tx);

/// encode_tx(tx) followed by the 64-byte sender signature.
Bytes encode_tx_wire(const Transaction &tx);

Transaction decode_tx(ByteSpan data);
Transaction decode_tx_wire(ByteSpan data);

Hash32 tx_digest(const Transaction &tx);

void write_tx_body(ByteWriter &w, const Transaction &tx);
Transaction read_tx_body(ByteReader &r);

} // namespace accept
