// SPDX-License-Identifier: Apache-2.0
#include <accept/bench/bench.hpp>
#include <accept/spentset/spent_set.hpp>

#include <algorithm>
#include <atomic>
#include <random>
#include <thread>
#include <unordered_map>

namespace accept::bench {

namespace {

struct Workload {
    /// ops[t] is thread t's key sequence. One key in eight is shared by all threads.
    std::vector<std::vector<Hash32>> ops;
    std::size_t unique_keys = 0;
};

Hash32 random_key(std::mt19937_64 &rng)
{
    Hash32 k{};
    for (std::size_t i = 0; i < k.size(); i += 8) {
        const std::uint64_t r = rng();
        for (std::size_t j = 0; j < 8; ++j)
            k[i + j] = static_cast<std::uint8_t>(r >> (8 * j));
    }
    return k;
}

Workload make_workload(unsigned threads, std::size_t per_thread, std::uint64_t seed)
{
    std::mt19937_64 rng(seed);
    const std::size_t shared_count = per_thread / 8;
    std::vector<Hash32> shared;
    for (std::size_t i = 0; i < shared_count; ++i)
        shared.push_back(random_key(rng));
    Workload w;
    w.ops.resize(threads);
    for (unsigned t = 0; t < threads; ++t) {
        auto &ops = w.ops[t];
        ops.reserve(per_thread);
        for (std::size_t i = 0; i < per_thread - shared_count; ++i)
            ops.push_back(random_key(rng));
        ops.insert(ops.end(), shared.begin(), shared.end());
        std::shuffle(ops.begin(), ops.end(), rng);
    }
    w.unique_keys = threads * (per_thread - shared_count) + shared_count;
    return w;
}

Hash32 value_for(unsigned thread)
{
    Hash32 v{};
    v[0] = static_cast<std::uint8_t>(thread + 1);
    return v;
}

/// Runs `insert(thread, key)` from every thread at once; returns seconds and inserted count.
template <class Insert> std::pair<double, std::size_t> timed_run(const Workload &w, Insert insert)
{
    std::atomic<bool> go{false};
    std::atomic<std::size_t> inserted{0};
    std::vector<std::thread> pool;
    for (unsigned t = 0; t < w.ops.size(); ++t)
        pool.emplace_back([&, t] {
            while (!go.load(std::memory_order_acquire))
                std::this_thread::yield();
            std::size_t mine = 0;
            const Hash32 value = value_for(t);
            for (const Hash32 &k : w.ops[t])
                mine += insert(k, value) ? 1 : 0;
            inserted.fetch_add(mine);
        });
    const auto t0 = std::chrono::steady_clock::now();
    go.store(true, std::memory_order_release);
    for (auto &th : pool)
        th.join();
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    return {secs, inserted.load()};
}

std::size_t check_lost(const Workload &w, std::size_t inserted, const std::function<std::optional<Hash32>(const Hash32 &)> &find)
{
    std::size_t lost = inserted > w.unique_keys ? inserted - w.unique_keys : w.unique_keys - inserted;
    for (unsigned t = 0; t < w.ops.size(); ++t)
        for (const Hash32 &k : w.ops[t]) {
            const auto v = find(k);
            if (!v || (*v)[0] == 0 || (*v)[0] > w.ops.size())
                ++lost;
        }
    return lost;
}

} // namespace

SpentSetReport bench_spentset(const SpentSetOptions &options)
{
    if (options.threads.empty() || options.inserts_per_thread < 8 || options.repetitions == 0)
        throw InvalidParameter("spent-set bench needs thread counts, at least 8 inserts per thread and a repetition");
    SpentSetReport report;
    report.machine = MachineInfo::detect();
    report.options = options;

    for (unsigned threads : options.threads) {
        if (threads == 0)
            throw InvalidParameter("thread count must be positive");
        const Workload w = make_workload(threads, options.inserts_per_thread, options.seed + threads);
        const double ops = static_cast<double>(threads * options.inserts_per_thread);
        std::vector<double> ours;
        std::vector<double> base;
        SpentSetPoint p;
        p.threads = threads;
        for (std::size_t rep = 0; rep < options.repetitions; ++rep) {
            {
                SpentSet set(options.buckets);
                const auto [secs, inserted] =
                    timed_run(w, [&](const Hash32 &k, const Hash32 &v) { return set.insert_if_absent(k, v).inserted; });
                ours.push_back(ops / secs);
                p.lost_inserts += check_lost(w, inserted, [&](const Hash32 &k) { return set.find(k); });
            }
            {
                GlobalLockSpentMap map;
                map.reserve(w.unique_keys);
                const auto [secs, inserted] =
                    timed_run(w, [&](const Hash32 &k, const Hash32 &v) { return map.insert_if_absent(k, v).inserted; });
                base.push_back(ops / secs);
                p.lost_inserts += check_lost(w, inserted, [&](const Hash32 &k) { return map.find(k); });
            }
        }
        std::sort(ours.begin(), ours.end());
        std::sort(base.begin(), base.end());
        p.purpose_built_per_second = ours[ours.size() / 2];
        p.baseline_per_second = base[base.size() / 2];
        p.speedup = p.purpose_built_per_second / p.baseline_per_second;
        report.points.push_back(p);
    }
    return report;
}

} // namespace accept::bench
