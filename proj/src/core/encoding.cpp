// SPDX-License-Identifier: Apache-2.0
#include <accept/core/encoding.hpp>
#include <accept/core/hash.hpp>

#include <limits>

namespace accept {

void write_tx_body(ByteWriter &w, const Transaction &tx)
{
    constexpr std::size_t max_count = std::numeric_limits<std::uint16_t>::max();
    if (tx.inputs.size() > max_count)
        throw EncodingError("too many inputs to encode");
    if (tx.outputs.size() > max_count)
        throw EncodingError("too many outputs to encode");

    w.u8(tx_encoding_version);
    w.u16(static_cast<std::uint16_t>(tx.inputs.size()));
    for (const Input &in : tx.inputs) {
        w.bytes(in.id.source_digest);
        w.u16(in.id.index);
        w.u64(in.body.amount);
        w.bytes(in.body.owner);
    }
    w.u16(static_cast<std::uint16_t>(tx.outputs.size()));
    for (const Output &out : tx.outputs) {
        w.u64(out.amount);
        w.bytes(out.owner);
    }
}

Transaction read_tx_body(ByteReader &r)
{
    if (r.u8() != tx_encoding_version)
        throw DecodeError("unsupported transaction encoding version");
    Transaction tx;
    const std::uint16_t n_in = r.u16();
    if (r.remaining() < n_in * encoded_input_size)
        throw DecodeError("input count exceeds available bytes");
    tx.inputs.resize(n_in);
    for (Input &in : tx.inputs) {
        in.id.source_digest = r.fixed<32>();
        in.id.index = r.u16();
        in.body.amount = r.u64();
        in.body.owner = r.fixed<32>();
    }
    const std::uint16_t n_out = r.u16();
    if (r.remaining() < n_out * encoded_output_size)
        throw DecodeError("output count exceeds available bytes");
    tx.outputs.resize(n_out);
    for (Output &out : tx.outputs) {
        out.amount = r.u64();
        out.owner = r.fixed<32>();
    }
    return tx;
}

Bytes encode_tx(const Transaction &tx)
{
    ByteWriter w(1 + 2 + tx.inputs.size() * encoded_input_size + 2 + tx.outputs.size() * encoded_output_size);
    write_tx_body(w, tx);
    return w.take();
}

Bytes encode_tx_wire(const Transaction &tx)
{
    ByteWriter w(1 + 2 + tx.inputs.size() * encoded_input_size + 2 + tx.outputs.size() * encoded_output_size + 64);
    write_tx_body(w, tx);
    w.bytes(tx.sender_signature);
    return w.take();
}

Transaction decode_tx(ByteSpan data)
{
    ByteReader r(data);
    Transaction tx = read_tx_body(r);
    r.expect_done();
    return tx;
}

Transaction decode_tx_wire(ByteSpan data)
{
    ByteReader r(data);
    Transaction tx = read_tx_body(r);
    tx.sender_signature = r.fixed<64>();
    r.expect_done();
    return tx;
}

Hash32 tx_digest(const Transaction &tx)
{
    return sha256(encode_tx(tx));
}

} // namespace accept
