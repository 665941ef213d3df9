// SPDX-License-Identifier: Apache-2.0
#include <accept/core/encoding.hpp>
#include <accept/core/hash.hpp>
#include <accept/validator/validator.hpp>

#include <algorithm>
#include <numeric>

namespace accept {

std::uint32_t shard_of(const PublicKey &owner, std::uint32_t shard_count)
{
    if (shard_count == 0)
        throw InvalidParameter("shard count must be at least 1");
    const Hash32 h = sha256(owner);
    return static_cast<std::uint32_t>(load_le64(h.data()) % shard_count);
}

Validator::Validator(ValidatorConfig config, ValidatorSecrets secrets, ValidatorSet validators,
                     std::shared_ptr<const Genesis> genesis)
    : _config(config), _secrets(std::move(secrets)), _validators(std::move(validators)), _genesis(std::move(genesis)),
      _spent(config.spent_buckets), _cache(config.root_cache_capacity),
      _batcher(config.merkle_batch_size, config.merkle_flush_after),
      _digest_locks(std::make_unique<std::mutex[]>(digest_stripes))
{
    if (!_genesis)
        throw InvalidParameter("validator needs a genesis");
    if (config.index >= _validators.size())
        throw InvalidParameter("validator index out of range");
    if (config.shard_count == 0 || config.shard_index >= config.shard_count)
        throw InvalidParameter("invalid shard descriptor");
    if (config.scheme == Scheme::bls && !_validators.has_bls())
        throw InvalidParameter("BLS scheme requires BLS keys");
}

Validator::Validator(const Validator &other)
    : _config(other._config), _secrets(other._secrets), _validators(other._validators), _genesis(other._genesis),
      _spent(other._spent), _cache(other._cache), _batcher(other._batcher),
      _digest_locks(std::make_unique<std::mutex[]>(digest_stripes))
{
    std::lock_guard lock(other._pending_mutex);
    _pending = other._pending;
    _completed = other._completed;
}

std::mutex &Validator::digest_lock(const Hash32 &digest) const
{
    return _digest_locks[load_le64(digest.data()) % digest_stripes];
}

SignResponse Validator::reject(SignStatus status, const Hash32 &digest) const
{
    SignResponse r;
    r.status = status;
    r.validator_index = _config.index;
    r.tx_digest = digest;
    return r;
}

bool Validator::verify_input_confirmation(const OutputId &id, const Output &body, const Confirmation &conf)
{
    if (conf.scheme() != _config.scheme)
        return false;
    return verify_confirmation(_validators, id, body, conf, &_cache);
}

SignResponse Validator::handle_sign_request(const SignRequest &req, Clock::time_point now, HandleOptions opts)
{
    const Transaction &tx = req.tx;
    Hash32 digest{};
    try {
        digest = tx_digest(tx);
    } catch (const EncodingError &) {
        return reject(SignStatus::malformed, digest);
    }

    if (!tx.inputs.empty() && shard_of(tx.inputs.front().body.owner, _config.shard_count) != _config.shard_index)
        return reject(SignStatus::wrong_shard, digest);

    if (ValidationResult v = validate_stateless(tx); !v.ok()) {
        SignResponse r = reject(SignStatus::bad_stateless, digest);
        r.violations = std::move(v.violations);
        return r;
    }
    if (req.input_confirmations.size() != tx.inputs.size())
        return reject(SignStatus::malformed, digest);

    for (std::size_t i = 0; i < tx.inputs.size(); ++i) {
        const Input &in = tx.inputs[i];
        bool good = false;
        if (const auto g = _genesis->find(in.id))
            good = *g == in.body;
        else if (in.id.source_digest != _genesis->digest() && req.input_confirmations[i])
            good = verify_input_confirmation(in.id, in.body, *req.input_confirmations[i]);
        if (!good) {
            SignResponse r = reject(SignStatus::bad_input_confirmation, digest);
            r.input_index = static_cast<std::uint16_t>(i);
            return r;
        }
    }

    if (!opts.skip_spent_set)
        if (auto rejected = mark_inputs(tx, digest))
            return *rejected;

    if (auto sigs = sign_outputs(tx, digest, now)) {
        SignResponse r = reject(SignStatus::ok, digest);
        r.signatures = std::move(*sigs);
        return r;
    }
    return reject(SignStatus::pending, digest);
}

std::optional<SignResponse> Validator::mark_inputs(const Transaction &tx, const Hash32 &digest)
{
    // Identical transactions are marked one at a time so a rollback can never
    // remove an entry that a concurrent retry of the same transaction relies on.
    std::lock_guard guard(digest_lock(digest));

    std::vector<Hash32> keys;
    keys.reserve(tx.inputs.size());
    for (const Input &in : tx.inputs)
        keys.push_back(in.id.key());
    std::vector<std::size_t> order(keys.size());
    std::iota(order.begin(), order.end(), std::size_t{0});
    std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) { return keys[a] < keys[b]; });

    std::vector<std::size_t> inserted_now;
    for (const std::size_t i : order) {
        const SpentSet::InsertResult res = _spent.insert_if_absent(keys[i], digest);
        if (res.inserted) {
            inserted_now.push_back(i);
            continue;
        }
        if (res.value == digest)
            continue;
        for (const std::size_t j : inserted_now)
            _spent.remove_if_value(keys[j], digest);
        SignResponse r = reject(SignStatus::double_spend, digest);
        r.input_index = static_cast<std::uint16_t>(i);
        r.conflicting_digest = res.value;
        return r;
    }
    if (_log)
        for (const std::size_t j : inserted_now)
            _log->append(keys[j], digest);
    return std::nullopt;
}

std::optional<std::vector<OutputSignature>> Validator::sign_outputs(const Transaction &tx, const Hash32 &digest,
                                                                    Clock::time_point now)
{
    const std::uint16_t me = _config.index;
    switch (_config.scheme) {
    case Scheme::naive: {
        std::vector<OutputSignature> out;
        out.reserve(tx.outputs.size());
        for (std::size_t i = 0; i < tx.outputs.size(); ++i) {
            const ClaimMessage claim = output_claim_message(digest, static_cast<std::uint16_t>(i), tx.outputs[i]);
            out.push_back(OutputSignature{sign_naive(_secrets.ed25519, me, claim)});
        }
        return out;
    }
    case Scheme::bls: {
        std::vector<OutputSignature> out;
        out.reserve(tx.outputs.size());
        for (std::size_t i = 0; i < tx.outputs.size(); ++i) {
            const ClaimMessage claim = output_claim_message(digest, static_cast<std::uint16_t>(i), tx.outputs[i]);
            out.push_back(OutputSignature{sign_share(me, _secrets.bls_share, claim)});
        }
        return out;
    }
    case Scheme::merkle: break;
    }

    {
        std::lock_guard lock(_pending_mutex);
        // A retry of a request whose batch is still open is already queued.
        if (_pending.count(digest))
            return std::nullopt;
        _pending.emplace(digest, PendingMerkle{std::vector<std::optional<MerkleSignature>>(tx.outputs.size()),
                                               tx.outputs.size()});
    }
    std::vector<MerkleClaim> claims;
    claims.reserve(tx.outputs.size());
    for (std::size_t i = 0; i < tx.outputs.size(); ++i) {
        const auto idx = static_cast<std::uint16_t>(i);
        claims.push_back(MerkleClaim{digest, idx, claim_leaf(output_claim_message(digest, idx, tx.outputs[i]))});
    }
    sign_jobs(_batcher.submit(claims, now));
    return std::nullopt;
}

void Validator::sign_jobs(std::vector<MerkleBatchJob> jobs)
{
    for (const MerkleBatchJob &job : jobs) {
        SignedMerkleBatch signed_batch = sign_merkle_batch(_secrets.ed25519, _config.index, job, _config.merkle_batch_size);
        std::lock_guard lock(_pending_mutex);
        for (std::size_t i = 0; i < signed_batch.claims.size(); ++i) {
            const MerkleClaim &c = signed_batch.claims[i];
            const auto it = _pending.find(c.ticket);
            if (it == _pending.end() || it->second.signatures[c.output_index])
                continue;
            it->second.signatures[c.output_index] = std::move(signed_batch.signatures[i]);
            if (--it->second.remaining > 0)
                continue;
            SignResponse r = reject(SignStatus::ok, c.ticket);
            r.signatures.reserve(it->second.signatures.size());
            for (auto &s : it->second.signatures)
                r.signatures.push_back(OutputSignature{std::move(*s)});
            _completed.push_back(std::move(r));
            _pending.erase(it);
        }
    }
}

void Validator::poll(Clock::time_point now)
{
    if (auto job = _batcher.flush_if_due(now)) {
        std::vector<MerkleBatchJob> jobs;
        jobs.push_back(std::move(*job));
        sign_jobs(std::move(jobs));
    }
}

void Validator::flush()
{
    if (auto job = _batcher.flush()) {
        std::vector<MerkleBatchJob> jobs;
        jobs.push_back(std::move(*job));
        sign_jobs(std::move(jobs));
    }
}

std::vector<SignResponse> Validator::take_completed()
{
    std::lock_guard lock(_pending_mutex);
    std::vector<SignResponse> out;
    out.swap(_completed);
    return out;
}

} // namespace accept
