// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <accept/spentset/spent_log.hpp>
#include <accept/spentset/spent_set.hpp>
#include <accept/validator/messages.hpp>

#include <chrono>
#include <memory>
#include <mutex>
#include <unordered_map>

namespace accept {

/// Shard that owns a client: first 8 bytes of sha256(owner) as u64 LE, mod shard_count.
std::uint32_t shard_of(const PublicKey &owner, std::uint32_t shard_count);

struct ValidatorConfig {
    std::uint16_t index = 0;
    Scheme scheme = Scheme::naive;
    std::uint32_t shard_index = 0;
    std::uint32_t shard_count = 1;
    std::size_t merkle_batch_size = 64;
    std::chrono::nanoseconds merkle_flush_after = std::chrono::milliseconds(5);
    std::size_t spent_buckets = SpentSet::default_buckets;
    std::size_t root_cache_capacity = RootCache::default_capacity;
};

/// Knobs used only by simulated misbehaving validators.
struct HandleOptions {
    bool skip_spent_set = false;
};

/// One shard of one validator: verifies sign requests, marks inputs spent
/// and signs outputs. Safe for concurrent handle_sign_request calls.
class Validator {
public:
    using Clock = std::chrono::steady_clock;

    Validator(ValidatorConfig config, ValidatorSecrets secrets, ValidatorSet validators,
              std::shared_ptr<const Genesis> genesis);
    Validator(const Validator &other);
    Validator &operator=(const Validator &) = delete;

    /// Verify, mark spent, sign. Merkle-scheme requests answer `pending`
    /// and their signatures arrive through take_completed().
    SignResponse handle_sign_request(const SignRequest &req, Clock::time_point now = Clock::now(),
                                     HandleOptions opts = {});

    bool verify_input_confirmation(const OutputId &id, const Output &body, const Confirmation &conf);

    /// Signs every output of `tx` without any check. Immediate schemes return
    /// the signatures; the merkle scheme enqueues and returns nullopt.
    std::optional<std::vector<OutputSignature>> sign_outputs(const Transaction &tx, const Hash32 &digest,
                                                             Clock::time_point now = Clock::now());

    /// Flushes the merkle batch if its timer expired.
    void poll(Clock::time_point now = Clock::now());
    /// Flushes any pending merkle claims now.
    void flush();
    /// Responses whose merkle batch has been signed since the last call.
    std::vector<SignResponse> take_completed();
    std::size_t pending_claims() const { return _batcher.pending(); }

    void attach_log(std::shared_ptr<SpentLog> log) { _log = std::move(log); }

    const ValidatorConfig &config() const { return _config; }
    const SpentSet &spent() const { return _spent; }
    const RootCache &root_cache() const { return _cache; }
    const ValidatorSet &validators() const { return _validators; }
    const Genesis &genesis() const { return *_genesis; }

private:
    struct PendingMerkle {
        std::vector<std::optional<MerkleSignature>> signatures;
        std::size_t remaining = 0;
    };

    SignResponse reject(SignStatus status, const Hash32 &digest) const;
    std::optional<SignResponse> mark_inputs(const Transaction &tx, const Hash32 &digest);
    void sign_jobs(std::vector<MerkleBatchJob> jobs);
    std::mutex &digest_lock(const Hash32 &digest) const;

    ValidatorConfig _config;
    ValidatorSecrets _secrets;
    ValidatorSet _validators;
    std::shared_ptr<const Genesis> _genesis;

    SpentSet _spent;
    RootCache _cache;
    MerkleBatcher _batcher;
    std::shared_ptr<SpentLog> _log;

    static constexpr std::size_t digest_stripes = 256;
    std::unique_ptr<std::mutex[]> _digest_locks;

    mutable std::mutex _pending_mutex;
    std::unordered_map<Hash32, PendingMerkle, Hash32Hasher> _pending;
    std::vector<SignResponse> _completed;
};

} // namespace accept
