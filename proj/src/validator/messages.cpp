// SPDX-License-Identifier: Apache-2.0
#include <accept/core/encoding.hpp>
#include <accept/validator/messages.hpp>

#include <limits>

namespace accept {

std::string_view to_string(SignStatus s)
{
    switch (s) {
    case SignStatus::ok: return "ok";
    case SignStatus::pending: return "pending";
    case SignStatus::bad_stateless: return "bad-stateless";
    case SignStatus::bad_input_confirmation: return "bad-input-confirmation";
    case SignStatus::double_spend: return "double-spend";
    case SignStatus::wrong_shard: return "wrong-shard";
    case SignStatus::malformed: return "malformed";
    }
    return "unknown";
}

namespace {

void write_blob(ByteWriter &w, const Bytes &blob)
{
    if (blob.size() > std::numeric_limits<std::uint32_t>::max())
        throw EncodingError("blob too large");
    w.u32(static_cast<std::uint32_t>(blob.size()));
    w.bytes(blob);
}

} // namespace

Bytes encode_sign_request(const SignRequest &req)
{
    if (req.input_confirmations.size() > std::numeric_limits<std::uint16_t>::max())
        throw EncodingError("too many input confirmations");
    ByteWriter w;
    write_blob(w, encode_tx_wire(req.tx));
    w.u16(static_cast<std::uint16_t>(req.input_confirmations.size()));
    for (const auto &conf : req.input_confirmations)
        write_blob(w, conf ? encode_confirmation(*conf) : Bytes{});
    return w.take();
}

SignRequest decode_sign_request(ByteSpan data)
{
    ByteReader r(data);
    SignRequest req;
    const std::uint32_t tx_len = r.u32();
    req.tx = decode_tx_wire(r.take(tx_len));
    const std::uint16_t count = r.u16();
    req.input_confirmations.reserve(count);
    for (std::uint16_t i = 0; i < count; ++i) {
        const std::uint32_t len = r.u32();
        if (len == 0)
            req.input_confirmations.emplace_back();
        else
            req.input_confirmations.emplace_back(decode_confirmation(r.take(len)));
    }
    r.expect_done();
    return req;
}

Bytes encode_sign_response(const SignResponse &resp)
{
    ByteWriter w;
    w.u8(static_cast<std::uint8_t>(resp.status));
    w.u16(resp.validator_index);
    w.bytes(resp.tx_digest);
    switch (resp.status) {
    case SignStatus::ok: {
        if (resp.signatures.size() > std::numeric_limits<std::uint16_t>::max())
            throw EncodingError("too many signatures in response");
        w.u16(static_cast<std::uint16_t>(resp.signatures.size()));
        for (const OutputSignature &s : resp.signatures) {
            ByteWriter sw;
            write_output_signature(sw, s);
            write_blob(w, sw.view());
        }
        break;
    }
    case SignStatus::bad_stateless:
        w.u8(static_cast<std::uint8_t>(resp.violations.size()));
        for (const Violation v : resp.violations)
            w.u8(static_cast<std::uint8_t>(v));
        break;
    case SignStatus::bad_input_confirmation: w.u16(resp.input_index); break;
    case SignStatus::double_spend:
        w.u16(resp.input_index);
        w.bytes(resp.conflicting_digest);
        break;
    case SignStatus::pending:
    case SignStatus::wrong_shard:
    case SignStatus::malformed: break;
    }
    return w.take();
}

SignResponse decode_sign_response(ByteSpan data)
{
    ByteReader r(data);
    SignResponse resp;
    const std::uint8_t status = r.u8();
    if (status > static_cast<std::uint8_t>(SignStatus::malformed))
        throw DecodeError("unknown response status");
    resp.status = static_cast<SignStatus>(status);
    resp.validator_index = r.u16();
    resp.tx_digest = r.fixed<32>();
    switch (resp.status) {
    case SignStatus::ok: {
        const std::uint16_t count = r.u16();
        resp.signatures.reserve(count);
        for (std::uint16_t i = 0; i < count; ++i) {
            const std::uint32_t len = r.u32();
            ByteReader sr(r.take(len));
            resp.signatures.push_back(read_output_signature(sr));
            sr.expect_done();
        }
        break;
    }
    case SignStatus::bad_stateless: {
        const std::uint8_t count = r.u8();
        for (std::uint8_t i = 0; i < count; ++i) {
            const std::uint8_t v = r.u8();
            if (v < 1 || v > static_cast<std::uint8_t>(Violation::too_many_outputs))
                throw DecodeError("unknown violation code");
            resp.violations.push_back(static_cast<Violation>(v));
        }
        break;
    }
    case SignStatus::bad_input_confirmation: resp.input_index = r.u16(); break;
    case SignStatus::double_spend:
        resp.input_index = r.u16();
        resp.conflicting_digest = r.fixed<32>();
        break;
    case SignStatus::pending:
    case SignStatus::wrong_shard:
    case SignStatus::malformed: break;
    }
    r.expect_done();
    return resp;
}

} // namespace accept
