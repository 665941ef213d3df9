// SPDX-License-Identifier: Apache-2.0
#include <accept/core/hash.hpp>
#include <accept/sig/merkle.hpp>
#include <accept/spentset/spent_log.hpp>

#include <algorithm>

namespace accept {

SpentSet::SpentSet(std::size_t bucket_count)
{
    if (!is_power_of_two(bucket_count))
        throw InvalidParameter("spent set bucket count must be a power of two");
    _buckets = std::make_unique<Bucket[]>(bucket_count);
    _mask = bucket_count - 1;
}

SpentSet::~SpentSet()
{
    clear_chains();
}

SpentSet::SpentSet(const SpentSet &other) : _mask(other._mask)
{
    _buckets = std::make_unique<Bucket[]>(other._mask + 1);
    copy_from(other);
}

SpentSet &SpentSet::operator=(const SpentSet &other)
{
    if (this == &other)
        return *this;
    clear_chains();
    if (_mask != other._mask) {
        _buckets = std::make_unique<Bucket[]>(other._mask + 1);
        _mask = other._mask;
    }
    copy_from(other);
    return *this;
}

void SpentSet::clear_chains()
{
    if (!_buckets)
        return;
    for (std::size_t i = 0; i <= _mask; ++i) {
        Node *n = _buckets[i].head;
        while (n) {
            Node *next = n->next;
            delete n;
            n = next;
        }
        _buckets[i].head = nullptr;
    }
    _size.store(0, std::memory_order_relaxed);
}

void SpentSet::copy_from(const SpentSet &other)
{
    std::size_t count = 0;
    for (std::size_t i = 0; i <= _mask; ++i) {
        Bucket &src = other._buckets[i];
        std::lock_guard lock(src.lock);
        Node **tail = &_buckets[i].head;
        for (const Node *n = src.head; n; n = n->next) {
            *tail = new Node{n->key, n->value, nullptr};
            tail = &(*tail)->next;
            ++count;
        }
    }
    _size.store(count, std::memory_order_relaxed);
}

SpentSet::InsertResult SpentSet::insert_if_absent(const Hash32 &key, const Hash32 &value)
{
    Bucket &b = bucket_for(key);
    // Allocate outside the critical section; discarded if the key exists.
    auto fresh = std::make_unique<Node>(Node{key, value, nullptr});
    std::lock_guard lock(b.lock);
    for (const Node *n = b.head; n; n = n->next)
        if (n->key == key)
            return {false, n->value};
    fresh->next = b.head;
    b.head = fresh.release();
    _size.fetch_add(1, std::memory_order_relaxed);
    return {true, value};
}

bool SpentSet::remove_if_value(const Hash32 &key, const Hash32 &expected)
{
    Bucket &b = bucket_for(key);
    Node *victim = nullptr;
    {
        std::lock_guard lock(b.lock);
        for (Node **link = &b.head; *link; link = &(*link)->next) {
            if ((*link)->key != key)
                continue;
            if ((*link)->value != expected)
                return false;
            victim = *link;
            *link = victim->next;
            break;
        }
    }
    if (!victim)
        return false;
    _size.fetch_sub(1, std::memory_order_relaxed);
    delete victim;
    return true;
}

std::optional<Hash32> SpentSet::find(const Hash32 &key) const
{
    Bucket &b = bucket_for(key);
    std::lock_guard lock(b.lock);
    for (const Node *n = b.head; n; n = n->next)
        if (n->key == key)
            return n->value;
    return std::nullopt;
}

std::vector<std::pair<Hash32, Hash32>> SpentSet::snapshot() const
{
    std::vector<std::pair<Hash32, Hash32>> out;
    out.reserve(size());
    for (std::size_t i = 0; i <= _mask; ++i) {
        Bucket &b = _buckets[i];
        std::lock_guard lock(b.lock);
        for (const Node *n = b.head; n; n = n->next)
            out.emplace_back(n->key, n->value);
    }
    std::sort(out.begin(), out.end());
    return out;
}

// ---------------------------------------------------------------------------

namespace {

FixedBytes<8> record_checksum(const Hash32 &key, const Hash32 &value)
{
    const Hash32 h = sha256({ByteSpan(key), ByteSpan(value)});
    FixedBytes<8> out{};
    std::memcpy(out.data(), h.data(), 8);
    return out;
}

} // namespace

SpentLog::SpentLog(const std::filesystem::path &path)
{
    _file = std::fopen(path.c_str(), "ab");
    if (!_file)
        throw Error("cannot open spent-set log " + path.string());
}

SpentLog::~SpentLog()
{
    if (_file)
        std::fclose(_file);
}

void SpentLog::append(const Hash32 &key, const Hash32 &value)
{
    std::uint8_t rec[record_size];
    std::memcpy(rec, key.data(), 32);
    std::memcpy(rec + 32, value.data(), 32);
    const auto sum = record_checksum(key, value);
    std::memcpy(rec + 64, sum.data(), 8);
    std::lock_guard lock(_mutex);
    if (std::fwrite(rec, 1, record_size, _file) != record_size)
        throw Error("short write to spent-set log");
}

void SpentLog::flush()
{
    std::lock_guard lock(_mutex);
    std::fflush(_file);
}

SpentLog::ReplayStats SpentLog::replay(const std::filesystem::path &path, SpentSet &set)
{
    ReplayStats stats;
    std::FILE *f = std::fopen(path.c_str(), "rb");
    if (!f)
        return stats;
    std::uint8_t rec[record_size];
    for (;;) {
        const std::size_t got = std::fread(rec, 1, record_size, f);
        if (got == 0)
            break;
        if (got != record_size) {
            stats.truncated_tail = true;
            break;
        }
        Hash32 key{};
        Hash32 value{};
        std::memcpy(key.data(), rec, 32);
        std::memcpy(value.data(), rec + 32, 32);
        const auto sum = record_checksum(key, value);
        if (std::memcmp(sum.data(), rec + 64, 8) != 0) {
            stats.truncated_tail = true;
            break;
        }
        set.insert_if_absent(key, value);
        ++stats.applied;
    }
    std::fclose(f);
    return stats;
}

} // namespace accept
