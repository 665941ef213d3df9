// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <accept/core/types.hpp>

#include <atomic>
#include <memory>
#include <mutex>
#include <optional>
#include <thread>
#include <unordered_map>
#include <utility>
#include <vector>

namespace accept {

/// One-byte test-and-test-and-set lock guarding a single bucket chain.
class BucketLock {
public:
    void lock() noexcept
    {
        for (int spins = 0; _flag.test_and_set(std::memory_order_acquire); ++spins) {
            while (_flag.test(std::memory_order_relaxed)) {
                if (++spins > 64)
                    std::this_thread::yield();
            }
        }
    }

    void unlock() noexcept { _flag.clear(std::memory_order_release); }

private:
    std::atomic_flag _flag;
};

/// Exact concurrent map from spent-output key to the digest of the spending
/// transaction. Fixed array of 2^k buckets selected by the low key bits
/// without locking; each bucket is a linked chain under its own lock. No
/// global lock and no resizing: memory is 16 bytes per bucket plus one node
/// per entry.
class SpentSet {
public:
    static constexpr std::size_t default_buckets = std::size_t{1} << 22;

    struct InsertResult {
        bool inserted = false;
        /// The value now associated with the key (ours if inserted).
        Hash32 value{};
    };

    explicit SpentSet(std::size_t bucket_count = default_buckets);
    ~SpentSet();
    SpentSet(const SpentSet &other);
    SpentSet &operator=(const SpentSet &other);
    SpentSet(SpentSet &&) = delete;
    SpentSet &operator=(SpentSet &&) = delete;

    /// First writer wins; later callers observe the stored value.
    InsertResult insert_if_absent(const Hash32 &key, const Hash32 &value);
    InsertResult insert_if_absent(const OutputId &id, const Hash32 &value) { return insert_if_absent(id.key(), value); }

    /// Removes the entry only if it currently maps to `expected`.
    bool remove_if_value(const Hash32 &key, const Hash32 &expected);
    bool remove_if_value(const OutputId &id, const Hash32 &expected) { return remove_if_value(id.key(), expected); }

    bool contains(const Hash32 &key) const { return find(key).has_value(); }
    bool contains(const OutputId &id) const { return contains(id.key()); }
    std::optional<Hash32> find(const Hash32 &key) const;

    std::size_t size() const { return _size.load(std::memory_order_relaxed); }
    std::size_t bucket_count() const { return _mask + 1; }

    /// All entries sorted by key. Not atomic with respect to concurrent writers.
    std::vector<std::pair<Hash32, Hash32>> snapshot() const;

private:
    struct Node {
        Hash32 key;
        Hash32 value;
        Node *next;
    };

    struct Bucket {
        BucketLock lock;
        Node *head = nullptr;
    };

    Bucket &bucket_for(const Hash32 &key) const { return _buckets[load_le64(key.data()) & _mask]; }
    void clear_chains();
    void copy_from(const SpentSet &other);

    std::unique_ptr<Bucket[]> _buckets;
    std::size_t _mask;
    std::atomic<std::size_t> _size{0};
};

/// Reference implementation with one mutex around a standard hash map; the
/// throughput baseline and the differential-test oracle.
class GlobalLockSpentMap {
public:
    SpentSet::InsertResult insert_if_absent(const Hash32 &key, const Hash32 &value)
    {
        std::lock_guard lock(_mutex);
        const auto [it, inserted] = _map.try_emplace(key, value);
        return {inserted, it->second};
    }

    bool remove_if_value(const Hash32 &key, const Hash32 &expected)
    {
        std::lock_guard lock(_mutex);
        const auto it = _map.find(key);
        if (it == _map.end() || it->second != expected)
            return false;
        _map.erase(it);
        return true;
    }

    bool contains(const Hash32 &key) const
    {
        std::lock_guard lock(_mutex);
        return _map.count(key) != 0;
    }

    std::optional<Hash32> find(const Hash32 &key) const
    {
        std::lock_guard lock(_mutex);
        const auto it = _map.find(key);
        if (it == _map.end())
            return std::nullopt;
        return it->second;
    }

    std::size_t size() const
    {
        std::lock_guard lock(_mutex);
        return _map.size();
    }

    void reserve(std::size_t n)
    {
        std::lock_guard lock(_mutex);
        _map.reserve(n);
    }

private:
    mutable std::mutex _mutex;
    std::unordered_map<Hash32, Hash32, Hash32Hasher> _map;
};

} // namespace accept
