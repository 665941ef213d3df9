// SPDX-License-Identifier: Apache-2.0
#include <accept/client/collector.hpp>
#include <accept/core/encoding.hpp>
#include <accept/validator/validator.hpp>

namespace accept {

ConfirmationCollector::ConfirmationCollector(ValidatorSet validators, Transaction tx, std::shared_ptr<RootCache> cache)
    : _validators(std::move(validators)), _tx(std::move(tx)), _digest(tx_digest(_tx)), _cache(std::move(cache))
{
    _claims.reserve(_tx.outputs.size());
    for (std::size_t i = 0; i < _tx.outputs.size(); ++i)
        _claims.push_back(output_claim_message(_digest, static_cast<std::uint16_t>(i), _tx.outputs[i]));
}

ConfirmationCollector::Outcome ConfirmationCollector::add_response(const SignResponse &resp)
{
    if (resp.tx_digest != _digest || resp.validator_index >= _validators.size())
        return Outcome::irrelevant;
    if (resp.status == SignStatus::pending)
        return Outcome::pending;
    if (resp.status != SignStatus::ok) {
        _rejections.insert_or_assign(resp.validator_index, resp);
        return Outcome::rejected;
    }
    if (_signatures.count(resp.validator_index))
        return Outcome::duplicate;

    bool good = resp.signatures.size() == _claims.size();
    for (std::size_t i = 0; good && i < _claims.size(); ++i) {
        const OutputSignature &s = resp.signatures[i];
        good = s.validator_index() == resp.validator_index &&
               verify_output_signature(_validators, _claims[i], s, _cache.get());
    }
    if (!good) {
        ++_invalid[resp.validator_index];
        return Outcome::invalid;
    }
    _signatures.emplace(resp.validator_index, resp.signatures);
    return Outcome::accepted;
}

std::size_t ConfirmationCollector::invalid_responses(std::uint16_t validator) const
{
    const auto it = _invalid.find(validator);
    return it == _invalid.end() ? 0 : it->second;
}

std::size_t ConfirmationCollector::total_invalid() const
{
    std::size_t sum = 0;
    for (const auto &[_, n] : _invalid)
        sum += n;
    return sum;
}

std::vector<Confirmation> ConfirmationCollector::confirmations() const
{
    if (!complete())
        throw InsufficientShares("confirmation not complete");
    std::vector<Confirmation> out;
    out.reserve(_claims.size());
    for (std::size_t i = 0; i < _claims.size(); ++i) {
        std::vector<OutputSignature> per_output;
        per_output.reserve(_signatures.size());
        for (const auto &[_, sigs] : _signatures)
            per_output.push_back(sigs[i]);
        out.push_back(assemble_confirmation(_validators, per_output));
    }
    return out;
}

void ConfirmationCollector::fingerprint(ByteWriter &w) const
{
    w.bytes(_digest);
    w.u16(static_cast<std::uint16_t>(_signatures.size()));
    for (const auto &[v, _] : _signatures)
        w.u16(v);
    w.u16(static_cast<std::uint16_t>(_rejections.size()));
    for (const auto &[v, r] : _rejections) {
        w.u16(v);
        w.u8(static_cast<std::uint8_t>(r.status));
    }
    w.u16(static_cast<std::uint16_t>(_invalid.size()));
    for (const auto &[v, n] : _invalid) {
        w.u16(v);
        w.u32(static_cast<std::uint32_t>(n));
    }
}

std::optional<std::vector<Confirmation>> submit_and_collect(Wallet &wallet, const Transaction &tx, Transport &transport)
{
    std::lock_guard serial(wallet.submission_mutex());
    const SignRequest req = wallet.make_request(tx);
    const std::uint32_t shard = shard_of(tx.inputs.at(0).body.owner, wallet.shard_count());
    for (std::size_t v = 0; v < wallet.validators().size(); ++v)
        transport.send(v, shard, req);

    ConfirmationCollector collector(wallet.validators(), tx);
    while (!collector.complete()) {
        const auto resp = transport.receive();
        if (!resp)
            return std::nullopt;
        collector.add_response(*resp);
    }
    std::vector<Confirmation> confs = collector.confirmations();
    wallet.settle(tx, confs);
    return confs;
}

} // namespace accept
