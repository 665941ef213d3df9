// SPDX-License-Identifier: Apache-2.0
// Recorded concurrent histories of spent-set operations and a
// Wing & Gong style search for a legal sequential order.
#pragma once

#include <accept/spentset/spent_set.hpp>

#include <algorithm>
#include <atomic>
#include <map>
#include <random>
#include <set>
#include <thread>

namespace accept::test {

enum class OpKind : std::uint8_t { insert, contains, remove };

struct HistoryOp {
    OpKind kind = OpKind::insert;
    std::uint8_t key = 0;
    std::uint8_t value = 0;
    /// insert: inserted flag; contains/remove: the boolean result.
    bool result = false;
    /// insert: value observed.
    std::uint8_t observed = 0;
    std::uint64_t invoked = 0;
    std::uint64_t returned = 0;
};

inline Hash32 small_key(std::uint8_t k)
{
    Hash32 h{};
    h[0] = k;
    h[31] = 0x5a;
    return h;
}

inline Hash32 small_value(std::uint8_t v)
{
    Hash32 h{};
    h[0] = v;
    return h;
}

/// Runs `ops_per_thread` random operations per thread over `keys` keys against `set`.
inline std::vector<HistoryOp> record_history(SpentSet &set, unsigned threads, std::size_t ops_per_thread, unsigned keys,
                                             std::uint64_t seed)
{
    std::atomic<std::uint64_t> clock{0};
    std::atomic<bool> go{false};
    std::vector<std::vector<HistoryOp>> per_thread(threads);
    std::vector<std::thread> pool;
    for (unsigned t = 0; t < threads; ++t)
        pool.emplace_back([&, t] {
            std::mt19937_64 rng(seed * 131 + t);
            while (!go.load())
                std::this_thread::yield();
            for (std::size_t i = 0; i < ops_per_thread; ++i) {
                HistoryOp op;
                op.kind = static_cast<OpKind>(rng() % 3);
                op.key = static_cast<std::uint8_t>(rng() % keys);
                op.value = static_cast<std::uint8_t>(1 + rng() % 2 + 2 * t);
                op.invoked = clock.fetch_add(1);
                switch (op.kind) {
                case OpKind::insert: {
                    const auto r = set.insert_if_absent(small_key(op.key), small_value(op.value));
                    op.result = r.inserted;
                    op.observed = r.value[0];
                    break;
                }
                case OpKind::contains: op.result = set.contains(small_key(op.key)); break;
                case OpKind::remove: op.result = set.remove_if_value(small_key(op.key), small_value(op.value)); break;
                }
                op.returned = clock.fetch_add(1);
                per_thread[t].push_back(op);
                if (rng() % 4 == 0)
                    std::this_thread::yield();
            }
        });
    go.store(true);
    for (auto &th : pool)
        th.join();
    std::vector<HistoryOp> all;
    for (auto &v : per_thread)
        all.insert(all.end(), v.begin(), v.end());
    return all;
}

/// True if some total order consistent with real time explains every result
/// under a sequential map. Histories up to 64 operations.
inline bool linearizable(const std::vector<HistoryOp> &history)
{
    const std::size_t n = history.size();
    if (n > 64)
        return false;
    using State = std::map<std::uint8_t, std::uint8_t>;
    std::set<std::pair<std::uint64_t, State>> seen;

    auto apply = [](const HistoryOp &op, State &s) {
        const auto it = s.find(op.key);
        switch (op.kind) {
        case OpKind::insert:
            if (it == s.end()) {
                if (!op.result || op.observed != op.value)
                    return false;
                s[op.key] = op.value;
                return true;
            }
            return !op.result && op.observed == it->second;
        case OpKind::contains: return op.result == (it != s.end());
        case OpKind::remove:
            if (it != s.end() && it->second == op.value) {
                if (!op.result)
                    return false;
                s.erase(it);
                return true;
            }
            return !op.result;
        }
        return false;
    };

    const std::uint64_t full = n == 64 ? ~std::uint64_t{0} : (std::uint64_t{1} << n) - 1;
    auto search = [&](auto &self, std::uint64_t done, const State &state) -> bool {
        if (done == full)
            return true;
        if (!seen.emplace(done, state).second)
            return false;
        // Candidates: pending ops invoked before every pending op returned.
        std::uint64_t horizon = ~std::uint64_t{0};
        for (std::size_t i = 0; i < n; ++i)
            if (!(done >> i & 1))
                horizon = std::min(horizon, history[i].returned);
        for (std::size_t i = 0; i < n; ++i) {
            if (done >> i & 1 || history[i].invoked > horizon)
                continue;
            State next = state;
            if (apply(history[i], next) && self(self, done | (std::uint64_t{1} << i), next))
                return true;
        }
        return false;
    };
    return search(search, 0, State{});
}

} // namespace accept::test
