// SPDX-License-Identifier: Apache-2.0
#include <accept/core/hash.hpp>
#include <accept/sig/merkle.hpp>

#include <algorithm>
#include <bit>
#include <cmath>

namespace accept {

Hash32 claim_leaf(ByteSpan claim)
{
    return sha256(claim);
}

Hash32 merkle_leaf_node(const Hash32 &leaf)
{
    std::uint8_t buf[33];
    buf[0] = merkle_leaf_prefix;
    std::memcpy(buf + 1, leaf.data(), 32);
    return sha256(ByteSpan(buf, sizeof(buf)));
}

Hash32 merkle_inner_node(const Hash32 &left, const Hash32 &right)
{
    std::uint8_t buf[65];
    buf[0] = merkle_node_prefix;
    std::memcpy(buf + 1, left.data(), 32);
    std::memcpy(buf + 33, right.data(), 32);
    return sha256(ByteSpan(buf, sizeof(buf)));
}

MerkleBatch build_merkle_batch(std::span<const Hash32> leaves, std::size_t tree_size)
{
    if (!is_power_of_two(tree_size))
        throw InvalidParameter("merkle tree size must be a power of two");
    if (leaves.empty() || leaves.size() > tree_size)
        throw InvalidParameter("merkle batch needs between 1 and tree_size leaves");

    const std::size_t depth = static_cast<std::size_t>(std::countr_zero(tree_size));
    std::vector<std::vector<Hash32>> levels(depth + 1);
    levels[0].reserve(tree_size);
    for (const Hash32 &leaf : leaves)
        levels[0].push_back(merkle_leaf_node(leaf));
    if (leaves.size() < tree_size)
        levels[0].resize(tree_size, merkle_leaf_node(Hash32{}));

    for (std::size_t l = 1; l <= depth; ++l) {
        const auto &below = levels[l - 1];
        auto &level = levels[l];
        level.resize(below.size() / 2);
        for (std::size_t i = 0; i < level.size(); ++i) {
            // Identical children come only from zero padding; reuse the previous parent.
            if (i > 0 && below[2 * i] == below[2 * i - 2] && below[2 * i + 1] == below[2 * i - 1])
                level[i] = level[i - 1];
            else
                level[i] = merkle_inner_node(below[2 * i], below[2 * i + 1]);
        }
    }

    MerkleBatch batch;
    batch.root = levels[depth][0];
    batch.paths.resize(leaves.size());
    for (std::size_t leaf = 0; leaf < leaves.size(); ++leaf) {
        MerklePath &path = batch.paths[leaf];
        path.reserve(depth);
        std::size_t pos = leaf;
        for (std::size_t l = 0; l < depth; ++l) {
            const bool is_left = (pos & 1) == 0;
            path.push_back(PathStep{levels[l][pos ^ 1], is_left ? Side::right : Side::left});
            pos >>= 1;
        }
    }
    return batch;
}

Hash32 merkle_root_from_path(const Hash32 &leaf, const MerklePath &path)
{
    Hash32 acc = merkle_leaf_node(leaf);
    for (const PathStep &step : path)
        acc = step.side == Side::right ? merkle_inner_node(acc, step.sibling) : merkle_inner_node(step.sibling, acc);
    return acc;
}

void write_merkle_signature(ByteWriter &w, const MerkleSignature &sig)
{
    if (sig.path.size() > merkle_max_depth)
        throw EncodingError("merkle path too long");
    w.u16(sig.validator_index);
    w.u8(static_cast<std::uint8_t>(sig.path.size()));
    for (const PathStep &step : sig.path) {
        w.u8(static_cast<std::uint8_t>(step.side));
        w.bytes(step.sibling);
    }
    w.bytes(sig.root_sig);
}

MerkleSignature read_merkle_signature(ByteReader &r)
{
    MerkleSignature sig;
    sig.validator_index = r.u16();
    const std::uint8_t depth = r.u8();
    if (depth > merkle_max_depth)
        throw DecodeError("merkle path too long");
    sig.path.resize(depth);
    for (PathStep &step : sig.path) {
        const std::uint8_t side = r.u8();
        if (side > 1)
            throw DecodeError("merkle path side byte must be 0 or 1");
        step.side = static_cast<Side>(side);
        step.sibling = r.fixed<32>();
    }
    sig.root_sig = r.fixed<64>();
    return sig;
}

Bytes encode_merkle_signature(const MerkleSignature &sig)
{
    ByteWriter w(2 + 1 + sig.path.size() * 33 + 64);
    write_merkle_signature(w, sig);
    return w.take();
}

MerkleSignature decode_merkle_signature(ByteSpan data)
{
    ByteReader r(data);
    MerkleSignature sig = read_merkle_signature(r);
    r.expect_done();
    return sig;
}

// ---------------------------------------------------------------------------

RootCache::RootCache(std::size_t capacity) : _capacity(capacity)
{
    if (capacity == 0)
        throw InvalidParameter("root cache capacity must be positive");
}

RootCache::RootCache(const RootCache &other) : _capacity(other._capacity)
{
    std::lock_guard lock(other._mutex);
    _order = other._order;
    for (auto it = _order.begin(); it != _order.end(); ++it)
        _index.emplace(*it, it);
}

RootCache &RootCache::operator=(const RootCache &other)
{
    if (this == &other)
        return *this;
    RootCache copy(other);
    std::scoped_lock lock(_mutex);
    _capacity = copy._capacity;
    _order = std::move(copy._order);
    _index = std::move(copy._index);
    return *this;
}

bool RootCache::contains(std::uint16_t validator_index, const Hash32 &root)
{
    std::lock_guard lock(_mutex);
    const auto it = _index.find(Key{validator_index, root});
    if (it == _index.end())
        return false;
    _order.splice(_order.begin(), _order, it->second);
    return true;
}

void RootCache::insert(std::uint16_t validator_index, const Hash32 &root)
{
    std::lock_guard lock(_mutex);
    const Key key{validator_index, root};
    if (const auto it = _index.find(key); it != _index.end()) {
        _order.splice(_order.begin(), _order, it->second);
        return;
    }
    _order.push_front(key);
    _index.emplace(key, _order.begin());
    if (_order.size() > _capacity) {
        _index.erase(_order.back());
        _order.pop_back();
    }
}

std::size_t RootCache::size() const
{
    std::lock_guard lock(_mutex);
    return _order.size();
}

void RootCache::clear()
{
    std::lock_guard lock(_mutex);
    _order.clear();
    _index.clear();
}

std::vector<std::pair<std::uint16_t, Hash32>> RootCache::snapshot() const
{
    std::vector<std::pair<std::uint16_t, Hash32>> out;
    {
        std::lock_guard lock(_mutex);
        for (const Key &k : _order)
            out.emplace_back(k.validator, k.root);
    }
    std::sort(out.begin(), out.end());
    return out;
}

bool verify_merkle_sig(RootCache *cache, const PublicKey &validator_key, std::uint16_t validator_index,
                       ByteSpan claim, const MerkleSignature &sig, std::optional<std::size_t> expected_depth)
{
    if (sig.validator_index != validator_index)
        return false;
    if (sig.path.size() > merkle_max_depth || (expected_depth && sig.path.size() != *expected_depth))
        return false;
    const Hash32 root = merkle_root_from_path(claim_leaf(claim), sig.path);
    if (cache && cache->contains(validator_index, root))
        return true;
    if (!ed25519_verify(validator_key, root, sig.root_sig))
        return false;
    if (cache)
        cache->insert(validator_index, root);
    return true;
}

bool verify_merkle_confirmation(const SystemParams &params, std::span<const PublicKey> validator_keys,
                                ByteSpan claim, const MerkleConfirmation &conf, RootCache *cache)
{
    if (validator_keys.size() != params.n)
        return false;
    std::size_t valid = 0;
    int prev = -1;
    for (const MerkleSignature &s : conf.signatures) {
        if (s.validator_index >= params.n || static_cast<int>(s.validator_index) <= prev)
            return false;
        prev = s.validator_index;
        if (verify_merkle_sig(cache, validator_keys[s.validator_index], s.validator_index, claim, s))
            ++valid;
    }
    return valid >= params.quorum;
}

void write_merkle_confirmation(ByteWriter &w, const MerkleConfirmation &conf)
{
    if (conf.signatures.size() > 0xffff)
        throw EncodingError("too many signatures in confirmation");
    w.u16(static_cast<std::uint16_t>(conf.signatures.size()));
    for (const MerkleSignature &s : conf.signatures)
        write_merkle_signature(w, s);
}

MerkleConfirmation read_merkle_confirmation(ByteReader &r)
{
    MerkleConfirmation conf;
    const std::uint16_t count = r.u16();
    if (r.remaining() < count * std::size_t{2 + 1 + 64})
        throw DecodeError("signature count exceeds available bytes");
    conf.signatures.reserve(count);
    for (std::uint16_t i = 0; i < count; ++i)
        conf.signatures.push_back(read_merkle_signature(r));
    return conf;
}

// ---------------------------------------------------------------------------

MerkleBatcher::MerkleBatcher(std::size_t batch_size, std::chrono::nanoseconds flush_after)
    : _batch_size(batch_size), _flush_after(flush_after)
{
    if (!is_power_of_two(batch_size))
        throw InvalidParameter("merkle batch size must be a power of two");
}

MerkleBatcher::MerkleBatcher(const MerkleBatcher &other)
    : _batch_size(other._batch_size), _flush_after(other._flush_after)
{
    std::lock_guard lock(other._mutex);
    _pending = other._pending;
    _oldest = other._oldest;
}

MerkleBatcher &MerkleBatcher::operator=(const MerkleBatcher &other)
{
    if (this == &other)
        return *this;
    MerkleBatcher copy(other);
    std::lock_guard lock(_mutex);
    _batch_size = copy._batch_size;
    _flush_after = copy._flush_after;
    _pending = std::move(copy._pending);
    _oldest = copy._oldest;
    return *this;
}

std::vector<MerkleBatchJob> MerkleBatcher::submit(std::span<const MerkleClaim> claims, Clock::time_point now)
{
    std::vector<MerkleBatchJob> jobs;
    std::lock_guard lock(_mutex);
    for (const MerkleClaim &c : claims) {
        if (_pending.empty())
            _oldest = now;
        _pending.push_back(c);
        if (_pending.size() == _batch_size) {
            jobs.push_back(MerkleBatchJob{std::move(_pending)});
            _pending.clear();
            _pending.reserve(_batch_size);
        }
    }
    return jobs;
}

std::optional<MerkleBatchJob> MerkleBatcher::flush_if_due(Clock::time_point now)
{
    std::lock_guard lock(_mutex);
    if (_pending.empty() || now - _oldest < _flush_after)
        return std::nullopt;
    MerkleBatchJob job{std::move(_pending)};
    _pending.clear();
    return job;
}

std::optional<MerkleBatchJob> MerkleBatcher::flush()
{
    std::lock_guard lock(_mutex);
    if (_pending.empty())
        return std::nullopt;
    MerkleBatchJob job{std::move(_pending)};
    _pending.clear();
    return job;
}

std::size_t MerkleBatcher::pending() const
{
    std::lock_guard lock(_mutex);
    return _pending.size();
}

SignedMerkleBatch sign_merkle_batch(const KeyPair &key, std::uint16_t validator_index, const MerkleBatchJob &job,
                                    std::size_t tree_size)
{
    if (job.claims.empty())
        throw InvalidParameter("cannot sign an empty merkle batch");
    tree_size = std::max(tree_size, std::bit_ceil(job.claims.size()));

    std::vector<Hash32> leaves;
    leaves.reserve(job.claims.size());
    for (const MerkleClaim &c : job.claims)
        leaves.push_back(c.leaf);
    MerkleBatch tree = build_merkle_batch(leaves, tree_size);

    SignedMerkleBatch out;
    out.root = tree.root;
    out.claims = job.claims;
    const Ed25519Signature root_sig = ed25519_sign(key, tree.root);
    out.signatures.reserve(leaves.size());
    for (MerklePath &p : tree.paths)
        out.signatures.push_back(MerkleSignature{validator_index, std::move(p), root_sig});
    return out;
}

// ---------------------------------------------------------------------------

SchemeCosts cost_model(double q, double c_h, double c_s, double c_v, std::size_t leaves)
{
    if (!is_power_of_two(leaves))
        throw InvalidParameter("merkle leaf count must be a power of two");
    const double n = static_cast<double>(leaves);
    SchemeCosts c;
    c.naive = q * c_v + c_s;
    c.merkle = std::log2(n) * (q * c_h) + (q * c_v + c_s) / n + 2 * c_h;
    return c;
}

double optimal_leaves(double q, double c_h, double c_s, double c_v)
{
    if (!(c_h > 0) || !(c_s > 0) || !(c_v > 0))
        throw InvalidParameter("operation costs must be positive");
    if (!(q >= 1))
        throw InvalidParameter("quorum must be at least 1");
    return (q * c_v + c_s) / (q * c_h) * std::log(2.0);
}

std::size_t optimal_power_of_two_leaves(double q, double c_h, double c_s, double c_v)
{
    const double best = optimal_leaves(q, c_h, c_s, c_v);
    if (best <= 1.0)
        return 1;
    std::size_t lo = 1;
    while (static_cast<double>(lo) * 2 <= best && lo < (std::size_t{1} << 62))
        lo *= 2;
    const std::size_t hi = lo * 2;
    return cost_model(q, c_h, c_s, c_v, hi).merkle < cost_model(q, c_h, c_s, c_v, lo).merkle ? hi : lo;
}

} // namespace accept
