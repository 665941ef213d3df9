// SPDX-License-Identifier: Apache-2.0
#include <accept/client/wallet.hpp>
#include <accept/core/encoding.hpp>
#include <accept/validator/validator.hpp>

#include <json.hpp>

#include <algorithm>
#include <cstring>
#include <fstream>
#include <limits>
#include <sstream>

namespace accept {

Bytes encode_transfer_bundle(const TransferBundle &bundle)
{
    ByteWriter w;
    w.bytes(bundle.id.source_digest);
    w.u16(bundle.id.index);
    w.u64(bundle.body.amount);
    w.bytes(bundle.body.owner);
    const Bytes conf = encode_confirmation(bundle.confirmation);
    w.u32(static_cast<std::uint32_t>(conf.size()));
    w.bytes(conf);
    return w.take();
}

TransferBundle decode_transfer_bundle(ByteSpan data)
{
    ByteReader r(data);
    TransferBundle b;
    b.id.source_digest = r.fixed<32>();
    b.id.index = r.u16();
    b.body.amount = r.u64();
    b.body.owner = r.fixed<32>();
    const std::uint32_t len = r.u32();
    b.confirmation = decode_confirmation(r.take(len));
    r.expect_done();
    return b;
}

Wallet::Wallet(KeyPair key, ValidatorSet validators, std::shared_ptr<const Genesis> genesis, std::uint32_t shard_count)
    : _key(std::move(key)), _validators(std::move(validators)), _genesis(std::move(genesis)), _shard_count(shard_count)
{
    if (!_genesis)
        throw InvalidParameter("wallet needs a genesis");
    if (shard_count == 0)
        throw InvalidParameter("shard count must be at least 1");
}

Wallet::Wallet(const Wallet &other)
    : _key(other._key), _validators(other._validators), _genesis(other._genesis), _shard_count(other._shard_count),
      _outputs(other._outputs)
{
}

Wallet &Wallet::operator=(const Wallet &other)
{
    if (this != &other) {
        _key = other._key;
        _validators = other._validators;
        _genesis = other._genesis;
        _shard_count = other._shard_count;
        _outputs = other._outputs;
    }
    return *this;
}

std::uint32_t Wallet::shard() const
{
    return shard_of(_key.public_key, _shard_count);
}

std::uint64_t Wallet::balance() const
{
    std::uint64_t sum = 0;
    for (const OwnedOutput &o : _outputs)
        sum += o.body.amount;
    return sum;
}

std::size_t Wallet::claim_genesis()
{
    std::size_t added = 0;
    for (std::size_t i = 0; i < _genesis->entries().size(); ++i) {
        const Output &e = _genesis->entries()[i];
        if (e.owner != _key.public_key)
            continue;
        const OutputId id = _genesis->id_of(i);
        if (std::any_of(_outputs.begin(), _outputs.end(), [&](const OwnedOutput &o) { return o.id == id; }))
            continue;
        _outputs.push_back(OwnedOutput{id, e, std::nullopt});
        ++added;
    }
    return added;
}

Transaction Wallet::create_transaction(std::span<const Recipient> recipients) const
{
    if (recipients.empty())
        throw InvalidParameter("transaction needs at least one recipient");
    std::uint64_t total = 0;
    for (const Recipient &r : recipients) {
        if (r.amount == 0)
            throw InvalidParameter("payment amount must be positive");
        if (r.amount > std::numeric_limits<std::uint64_t>::max() - total)
            throw InsufficientFunds("requested total overflows");
        total += r.amount;
    }

    std::vector<const OwnedOutput *> coins;
    coins.reserve(_outputs.size());
    for (const OwnedOutput &o : _outputs)
        coins.push_back(&o);
    std::sort(coins.begin(), coins.end(), [](const OwnedOutput *a, const OwnedOutput *b) {
        if (a->body.amount != b->body.amount)
            return a->body.amount > b->body.amount;
        return a->id < b->id;
    });

    Transaction tx;
    std::uint64_t gathered = 0;
    for (const OwnedOutput *c : coins) {
        if (gathered >= total)
            break;
        tx.inputs.push_back(Input{c->id, c->body});
        gathered += c->body.amount;
    }
    if (gathered < total)
        throw InsufficientFunds("wallet balance below requested amount");

    for (const Recipient &r : recipients)
        tx.outputs.push_back(Output{r.amount, r.owner});
    if (gathered > total)
        tx.outputs.push_back(Output{gathered - total, _key.public_key});
    sign_transaction(tx, _key);
    return tx;
}

SignRequest Wallet::make_request(const Transaction &tx) const
{
    SignRequest req;
    req.tx = tx;
    req.input_confirmations.reserve(tx.inputs.size());
    for (const Input &in : tx.inputs) {
        const auto it = std::find_if(_outputs.begin(), _outputs.end(), [&](const OwnedOutput &o) { return o.id == in.id; });
        req.input_confirmations.push_back(it != _outputs.end() ? it->confirmation : std::nullopt);
    }
    return req;
}

bool Wallet::accept_payment(const OutputId &id, const Output &body, const Confirmation &conf)
{
    if (body.owner != _key.public_key || body.amount == 0)
        return false;
    if (!verify_confirmation(_validators, id, body, conf))
        return false;
    if (std::any_of(_outputs.begin(), _outputs.end(), [&](const OwnedOutput &o) { return o.id == id; }))
        return true;
    _outputs.push_back(OwnedOutput{id, body, conf});
    return true;
}

void Wallet::settle(const Transaction &tx, std::span<const Confirmation> confirmations)
{
    if (confirmations.size() != tx.outputs.size())
        throw InvalidInput("one confirmation per output required");
    for (const Input &in : tx.inputs)
        std::erase_if(_outputs, [&](const OwnedOutput &o) { return o.id == in.id; });
    const Hash32 digest = tx_digest(tx);
    for (std::size_t i = 0; i < tx.outputs.size(); ++i)
        if (tx.outputs[i].owner == _key.public_key)
            _outputs.push_back(OwnedOutput{OutputId{digest, static_cast<std::uint16_t>(i)}, tx.outputs[i], confirmations[i]});
}

std::uint64_t Wallet::verified_balance() const
{
    std::uint64_t sum = 0;
    for (const OwnedOutput &o : _outputs) {
        const bool good = o.confirmation ? verify_confirmation(_validators, o.id, o.body, *o.confirmation)
                                         : _genesis->find(o.id) == std::optional<Output>(o.body);
        if (good)
            sum += o.body.amount;
    }
    return sum;
}

std::string Wallet::to_json() const
{
    nlohmann::json doc;
    doc["version"] = 1;
    doc["secret_key"] = to_hex(_key.secret_key);
    doc["shard_count"] = _shard_count;
    nlohmann::json outs = nlohmann::json::array();
    for (const OwnedOutput &o : _outputs) {
        nlohmann::json e;
        e["source"] = to_hex(o.id.source_digest);
        e["index"] = o.id.index;
        e["amount"] = std::to_string(o.body.amount);
        e["owner"] = to_hex(o.body.owner);
        e["confirmation"] = o.confirmation ? nlohmann::json(to_hex(encode_confirmation(*o.confirmation))) : nlohmann::json();
        outs.push_back(std::move(e));
    }
    doc["outputs"] = std::move(outs);
    return doc.dump(2);
}

Wallet Wallet::from_json(std::string_view text, ValidatorSet validators, std::shared_ptr<const Genesis> genesis)
{
    try {
        const auto doc = nlohmann::json::parse(text);
        if (doc.at("version").get<int>() != 1)
            throw DecodeError("unsupported wallet version");
        KeyPair kp;
        kp.secret_key = fixed_from_hex<64>(doc.at("secret_key").get<std::string>());
        std::memcpy(kp.public_key.data(), kp.secret_key.data() + 32, 32);
        Wallet w(kp, std::move(validators), std::move(genesis), doc.at("shard_count").get<std::uint32_t>());
        for (const auto &e : doc.at("outputs")) {
            OwnedOutput o;
            o.id.source_digest = fixed_from_hex<32>(e.at("source").get<std::string>());
            o.id.index = e.at("index").get<std::uint16_t>();
            o.body.amount = std::stoull(e.at("amount").get<std::string>());
            o.body.owner = fixed_from_hex<32>(e.at("owner").get<std::string>());
            if (!e.at("confirmation").is_null())
                o.confirmation = decode_confirmation(from_hex(e.at("confirmation").get<std::string>()));
            w._outputs.push_back(std::move(o));
        }
        return w;
    } catch (const nlohmann::json::exception &e) {
        throw DecodeError(std::string("malformed wallet file: ") + e.what());
    }
}

void Wallet::save(const std::filesystem::path &path) const
{
    std::ofstream out(path);
    if (!out)
        throw Error("cannot write wallet file " + path.string());
    out << to_json() << '\n';
}

Wallet Wallet::load(const std::filesystem::path &path, ValidatorSet validators, std::shared_ptr<const Genesis> genesis)
{
    std::ifstream in(path);
    if (!in)
        throw Error("cannot open wallet file " + path.string());
    std::stringstream ss;
    ss << in.rdbuf();
    return from_json(ss.str(), std::move(validators), std::move(genesis));
}

} // namespace accept
