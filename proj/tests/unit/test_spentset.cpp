// SPDX-License-Identifier: Apache-2.0
#include <accept/spentset/spent_log.hpp>

#include <support/fixtures.hpp>
#include <support/linearizability.hpp>

#include <gtest/gtest.h>

#include <barrier>
#include <filesystem>
#include <fstream>
#include <unordered_set>

using namespace accept;
using namespace accept::test;

TEST(SpentSet, InsertSemantics)
{
    SpentSet s(16);
    const Hash32 k = filled(1);
    const auto first = s.insert_if_absent(k, filled(10));
    EXPECT_TRUE(first.inserted);
    EXPECT_EQ(first.value, filled(10));
    const auto again = s.insert_if_absent(k, filled(10));
    EXPECT_FALSE(again.inserted);
    EXPECT_EQ(again.value, filled(10));
    const auto other = s.insert_if_absent(k, filled(11));
    EXPECT_FALSE(other.inserted);
    EXPECT_EQ(other.value, filled(10));
    EXPECT_TRUE(s.contains(k));
    EXPECT_FALSE(s.contains(filled(2)));
    EXPECT_EQ(s.size(), 1u);
    EXPECT_EQ(s.bucket_count(), 16u);
}

TEST(SpentSet, RemoveIfValue)
{
    SpentSet s(4);
    s.insert_if_absent(filled(1), filled(10));
    EXPECT_FALSE(s.remove_if_value(filled(1), filled(11)));
    EXPECT_TRUE(s.contains(filled(1)));
    EXPECT_TRUE(s.remove_if_value(filled(1), filled(10)));
    EXPECT_FALSE(s.contains(filled(1)));
    EXPECT_FALSE(s.remove_if_value(filled(1), filled(10)));
    EXPECT_EQ(s.size(), 0u);
}

TEST(SpentSet, OutputIdOverloadUsesKey)
{
    SpentSet s(8);
    const OutputId id{filled(3), 2};
    s.insert_if_absent(id, filled(9));
    EXPECT_TRUE(s.contains(id.key()));
    EXPECT_TRUE(s.remove_if_value(id, filled(9)));
}

TEST(SpentSet, CopyAndSnapshot)
{
    SpentSet s(2);
    for (std::uint8_t i = 0; i < 10; ++i)
        s.insert_if_absent(filled(i), filled(static_cast<std::uint8_t>(i + 100)));
    const SpentSet copy(s);
    EXPECT_EQ(copy.snapshot(), s.snapshot());
    const auto snap = s.snapshot();
    EXPECT_TRUE(std::is_sorted(snap.begin(), snap.end()));
    EXPECT_EQ(snap.size(), 10u);
    SpentSet assigned(4);
    assigned = s;
    EXPECT_EQ(assigned.snapshot(), snap);
    EXPECT_EQ(assigned.size(), 10u);
}

TEST(SpentSet, SameKeyRace)
{
    constexpr unsigned workers = 32;
    for (int round = 0; round < 20; ++round) {
        SpentSet s(64);
        std::barrier sync(workers);
        std::vector<SpentSet::InsertResult> results(workers);
        std::vector<std::thread> pool;
        for (unsigned w = 0; w < workers; ++w)
            pool.emplace_back([&, w] {
                sync.arrive_and_wait();
                results[w] = s.insert_if_absent(filled(1), filled(static_cast<std::uint8_t>(w + 1)));
            });
        for (auto &t : pool)
            t.join();
        std::size_t winners = 0;
        Hash32 winner{};
        for (const auto &r : results)
            if (r.inserted) {
                ++winners;
                winner = r.value;
            }
        ASSERT_EQ(winners, 1u);
        for (const auto &r : results)
            EXPECT_EQ(r.value, winner);
        EXPECT_EQ(s.find(filled(1)), winner);
    }
}

// Insert and compare-and-remove on keys sharing one bucket chain.
TEST(SpentSet, InsertRemoveInterleavingsKeepChainIntact)
{
    SpentSet s(1);
    for (std::uint8_t i = 0; i < 8; ++i)
        s.insert_if_absent(filled(static_cast<std::uint8_t>(200 + i)), filled(1));
    std::atomic<bool> go{false};
    auto churn = [&](std::uint8_t base) {
        while (!go.load())
            std::this_thread::yield();
        for (int i = 0; i < 20000; ++i) {
            const Hash32 k = filled(static_cast<std::uint8_t>(base + i % 4));
            s.insert_if_absent(k, filled(base));
            s.remove_if_value(k, filled(base));
        }
    };
    std::thread a(churn, 0);
    std::thread b(churn, 0);
    go.store(true);
    a.join();
    b.join();
    EXPECT_EQ(s.size(), 8u);
    const auto snap = s.snapshot();
    ASSERT_EQ(snap.size(), 8u);
    for (std::uint8_t i = 0; i < 8; ++i)
        EXPECT_EQ(s.find(filled(static_cast<std::uint8_t>(200 + i))), filled(1));
}

TEST(Linearizability, CheckerRejectsImpossibleHistory)
{
    // Two sequential inserts of the same key both claiming to win.
    std::vector<HistoryOp> h{
        {OpKind::insert, 1, 1, true, 1, 0, 1},
        {OpKind::insert, 1, 2, true, 2, 2, 3},
    };
    EXPECT_FALSE(linearizable(h));
    // Overlapping: either order is fine as long as results agree.
    h = {
        {OpKind::insert, 1, 1, false, 2, 0, 3},
        {OpKind::insert, 1, 2, true, 2, 1, 2},
    };
    EXPECT_TRUE(linearizable(h));
    // contains after a completed insert must be true.
    h = {
        {OpKind::insert, 1, 1, true, 1, 0, 1},
        {OpKind::contains, 1, 0, false, 0, 2, 3},
    };
    EXPECT_FALSE(linearizable(h));
}

class LinearizabilityTest : public ::testing::TestWithParam<unsigned> {};

TEST_P(LinearizabilityTest, RandomHistories)
{
    const unsigned threads = GetParam();
    const std::size_t per_thread = 24 / threads;
    for (std::uint64_t seed = 0; seed < 300; ++seed) {
        SpentSet s(2);
        const auto h = record_history(s, threads, per_thread, 3, seed);
        ASSERT_TRUE(linearizable(h)) << "seed " << seed;
    }
}

INSTANTIATE_TEST_SUITE_P(Threads, LinearizabilityTest, ::testing::Values(2u, 3u, 4u));

TEST(SpentSet, DifferentialAgainstReference)
{
    std::mt19937_64 rng(2024);
    SpentSet set(std::size_t{1} << 12);
    std::unordered_map<Hash32, Hash32, Hash32Hasher> ref;
    std::vector<Hash32> keys;
    for (int i = 0; i < 1'000'000; ++i) {
        const unsigned op = rng() % 4;
        const Hash32 k = keys.empty() || rng() % 3 == 0 ? random_hash(rng) : keys[rng() % keys.size()];
        const Hash32 v = filled(static_cast<std::uint8_t>(rng() % 4));
        if (op <= 1) {
            const auto got = set.insert_if_absent(k, v);
            const auto [it, inserted] = ref.try_emplace(k, v);
            ASSERT_EQ(got.inserted, inserted);
            ASSERT_EQ(got.value, it->second);
            if (inserted && keys.size() < 4096)
                keys.push_back(k);
        } else if (op == 2) {
            const auto it = ref.find(k);
            const bool expect = it != ref.end() && it->second == v;
            if (expect)
                ref.erase(it);
            ASSERT_EQ(set.remove_if_value(k, v), expect);
        } else {
            ASSERT_EQ(set.contains(k), ref.count(k) == 1);
        }
    }
    EXPECT_EQ(set.size(), ref.size());
}

TEST(SpentSet, NoFalsePositives)
{
    std::mt19937_64 rng(77);
    SpentSet set(std::size_t{1} << 18);
    std::unordered_set<Hash32, Hash32Hasher> inserted;
    for (int i = 0; i < 1'000'000; ++i) {
        const Hash32 k = random_hash(rng);
        set.insert_if_absent(k, filled(1));
        inserted.insert(k);
    }
    std::size_t false_positives = 0;
    for (int i = 0; i < 1'000'000; ++i) {
        const Hash32 probe = random_hash(rng);
        if (!inserted.count(probe) && set.contains(probe))
            ++false_positives;
    }
    EXPECT_EQ(false_positives, 0u);
    EXPECT_EQ(set.size(), inserted.size());
}

TEST(GlobalLockSpentMap, SameContract)
{
    GlobalLockSpentMap m;
    EXPECT_TRUE(m.insert_if_absent(filled(1), filled(2)).inserted);
    EXPECT_EQ(m.insert_if_absent(filled(1), filled(3)).value, filled(2));
    EXPECT_FALSE(m.remove_if_value(filled(1), filled(3)));
    EXPECT_TRUE(m.remove_if_value(filled(1), filled(2)));
    EXPECT_FALSE(m.contains(filled(1)));
}

namespace {

struct TempPath {
    std::filesystem::path path;
    explicit TempPath(const std::string &name) : path(std::filesystem::temp_directory_path() / name)
    {
        std::filesystem::remove(path);
    }
    ~TempPath() { std::filesystem::remove(path); }
};

} // namespace

TEST(SpentLog, ReplayRestoresEntries)
{
    TempPath tmp("accept_spentlog_replay.bin");
    {
        SpentLog log(tmp.path);
        for (std::uint8_t i = 0; i < 10; ++i)
            log.append(filled(i), filled(static_cast<std::uint8_t>(i + 1)));
        log.flush();
    }
    EXPECT_EQ(std::filesystem::file_size(tmp.path), 10 * SpentLog::record_size);
    SpentSet s(16);
    const auto stats = SpentLog::replay(tmp.path, s);
    EXPECT_EQ(stats.applied, 10u);
    EXPECT_FALSE(stats.truncated_tail);
    EXPECT_EQ(s.find(filled(4)), filled(5));

    // Reopening appends.
    {
        SpentLog log(tmp.path);
        log.append(filled(50), filled(51));
    }
    SpentSet again(16);
    EXPECT_EQ(SpentLog::replay(tmp.path, again).applied, 11u);
}

TEST(SpentLog, TornTailAndCorruption)
{
    TempPath tmp("accept_spentlog_torn.bin");
    {
        SpentLog log(tmp.path);
        for (std::uint8_t i = 0; i < 5; ++i)
            log.append(filled(i), filled(9));
    }
    std::filesystem::resize_file(tmp.path, 5 * SpentLog::record_size - 3);
    SpentSet torn(8);
    auto stats = SpentLog::replay(tmp.path, torn);
    EXPECT_EQ(stats.applied, 4u);
    EXPECT_TRUE(stats.truncated_tail);

    {
        std::fstream f(tmp.path, std::ios::in | std::ios::out | std::ios::binary);
        f.seekp(static_cast<std::streamoff>(SpentLog::record_size + 7));
        f.put('\x7f');
    }
    SpentSet corrupt(8);
    stats = SpentLog::replay(tmp.path, corrupt);
    EXPECT_EQ(stats.applied, 1u);
    EXPECT_TRUE(stats.truncated_tail);

    SpentSet missing(8);
    EXPECT_EQ(SpentLog::replay(tmp.path.string() + ".absent", missing).applied, 0u);
}
