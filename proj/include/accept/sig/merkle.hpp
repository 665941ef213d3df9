// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <accept/core/params.hpp>
#include <accept/sig/claim.hpp>

#include <chrono>
#include <list>
#include <mutex>
#include <optional>
#include <span>
#include <unordered_map>
#include <vector>

namespace accept {

inline constexpr std::uint8_t merkle_leaf_prefix = 0x00;
inline constexpr std::uint8_t merkle_node_prefix = 0x01;
inline constexpr std::size_t merkle_max_depth = 32;

/// Position of the sibling relative to the running hash.
enum class Side : std::uint8_t { left = 0, right = 1 };

struct PathStep {
    Hash32 sibling{};
    Side side = Side::left;

    bool operator==(const PathStep &) const = default;
};

/// Leaf-to-root list of siblings.
using MerklePath = std::vector<PathStep>;

/// sha256(claim); the value a validator pools for signing.
Hash32 claim_leaf(ByteSpan claim);

/// sha256(0x00 || leaf)
Hash32 merkle_leaf_node(const Hash32 &leaf);
/// sha256(0x01 || left || right)
Hash32 merkle_inner_node(const Hash32 &left, const Hash32 &right);

struct MerkleBatch {
    Hash32 root{};
    std::vector<MerklePath> paths;
};

/// Builds a complete tree over `leaves`, padded with all-zero leaves up to
/// `tree_size` (a power of two), and returns one path per real leaf.
MerkleBatch build_merkle_batch(std::span<const Hash32> leaves, std::size_t tree_size);

Hash32 merkle_root_from_path(const Hash32 &leaf, const MerklePath &path);

struct MerkleSignature {
    std::uint16_t validator_index = 0;
    MerklePath path;
    Ed25519Signature root_sig{};

    bool operator==(const MerkleSignature &) const = default;
};

/// validator_index u16 | depth u8 | depth x (side u8, sibling 32B) | root_sig 64B
void write_merkle_signature(ByteWriter &w, const MerkleSignature &sig);
MerkleSignature read_merkle_signature(ByteReader &r);
Bytes encode_merkle_signature(const MerkleSignature &sig);
MerkleSignature decode_merkle_signature(ByteSpan data);

/// Memo of (validator, root) pairs whose root signature already verified.
/// Bounded, least-recently-used eviction, safe for concurrent use.
class RootCache {
public:
    static constexpr std::size_t default_capacity = std::size_t{1} << 16;

    explicit RootCache(std::size_t capacity = default_capacity);
    RootCache(const RootCache &other);
    RootCache &operator=(const RootCache &other);

    bool contains(std::uint16_t validator_index, const Hash32 &root);
    void insert(std::uint16_t validator_index, const Hash32 &root);
    std::size_t size() const;
    std::size_t capacity() const { return _capacity; }
    void clear();

    /// Sorted contents; used for state fingerprints.
    std::vector<std::pair<std::uint16_t, Hash32>> snapshot() const;

private:
    struct Key {
        std::uint16_t validator = 0;
        Hash32 root{};
        bool operator==(const Key &) const = default;
    };
    struct KeyHasher {
        std::size_t operator()(const Key &k) const noexcept { return Hash32Hasher{}(k.root) ^ k.validator; }
    };

    std::size_t _capacity;
    mutable std::mutex _mutex;
    std::list<Key> _order; // front = most recent
    std::unordered_map<Key, std::list<Key>::iterator, KeyHasher> _index;
};

/// Folds the path from the claim's leaf to a root, then accepts if the
/// (validator, root) pair is cached or the root signature verifies; a
/// successful signature check is recorded in the cache. `cache` may be null.
bool verify_merkle_sig(RootCache *cache, const PublicKey &validator_key, std::uint16_t validator_index,
                       ByteSpan claim, const MerkleSignature &sig,
                       std::optional<std::size_t> expected_depth = std::nullopt);

struct MerkleConfirmation {
    std::vector<MerkleSignature> signatures;

    bool operator==(const MerkleConfirmation &) const = default;
};

bool verify_merkle_confirmation(const SystemParams &params, std::span<const PublicKey> validator_keys,
                                ByteSpan claim, const MerkleConfirmation &conf, RootCache *cache);

void write_merkle_confirmation(ByteWriter &w, const MerkleConfirmation &conf);
MerkleConfirmation read_merkle_confirmation(ByteReader &r);

// ---------------------------------------------------------------------------
// Batching

/// One output claim waiting for a root signature. `ticket` correlates the
/// claim with the request that produced it.
struct MerkleClaim {
    Hash32 ticket{};
    std::uint16_t output_index = 0;
    Hash32 leaf{};
};

struct MerkleBatchJob {
    std::vector<MerkleClaim> claims;
};

/// Pools claims until `batch_size` accumulate or the oldest pending claim is
/// older than `flush_after`. Submission is thread-safe; whoever receives a
/// job from submit/flush is its single signer.
class MerkleBatcher {
public:
    using Clock = std::chrono::steady_clock;

    explicit MerkleBatcher(std::size_t batch_size = 64,
                           std::chrono::nanoseconds flush_after = std::chrono::milliseconds(5));
    MerkleBatcher(const MerkleBatcher &other);
    MerkleBatcher &operator=(const MerkleBatcher &other);

    /// Returns the full batches cut by this submission (usually zero or one).
    std::vector<MerkleBatchJob> submit(std::span<const MerkleClaim> claims, Clock::time_point now = Clock::now());
    std::optional<MerkleBatchJob> flush_if_due(Clock::time_point now = Clock::now());
    std::optional<MerkleBatchJob> flush();

    std::size_t pending() const;
    std::size_t batch_size() const { return _batch_size; }
    std::chrono::nanoseconds flush_after() const { return _flush_after; }

private:
    std::size_t _batch_size;
    std::chrono::nanoseconds _flush_after;
    mutable std::mutex _mutex;
    std::vector<MerkleClaim> _pending;
    Clock::time_point _oldest{};
};

/// Signed result of one batch: the claim order of the job is preserved.
struct SignedMerkleBatch {
    Hash32 root{};
    std::vector<MerkleClaim> claims;
    std::vector<MerkleSignature> signatures;
};

/// Builds the tree (padded to `tree_size`, or the next power of two if the
/// job is larger) and signs only its root.
SignedMerkleBatch sign_merkle_batch(const KeyPair &key, std::uint16_t validator_index, const MerkleBatchJob &job,
                                    std::size_t tree_size);

// ---------------------------------------------------------------------------
// Cost model

struct SchemeCosts {
    double naive = 0;
    double merkle = 0;
};

/// Per-output validator cost with quorum q and relative costs of hashing,
/// signing and verifying:
///   naive  = q*c_v + c_s
///   merkle = log2(N)*q*c_h + (q*c_v + c_s)/N + 2*c_h
/// `leaves` must be a power of two.
SchemeCosts cost_model(double q, double c_h, double c_s, double c_v, std::size_t leaves);

/// Real-valued minimiser of the merkle cost: (q*c_v + c_s)/(q*c_h) * ln 2.
double optimal_leaves(double q, double c_h, double c_s, double c_v);

/// The power of two with the lower merkle cost among the two bracketing
/// optimal_leaves (1 if the optimum is below 1).
std::size_t optimal_power_of_two_leaves(double q, double c_h, double c_s, double c_v);

inline bool is_power_of_two(std::size_t v) { return v != 0 && (v & (v - 1)) == 0; }

} // namespace accept
