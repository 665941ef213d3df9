// SPDX-License-Identifier: Apache-2.0
#include <accept/bench/bench.hpp>
#include <accept/sig/merkle.hpp>

#include <gtest/gtest.h>
#include <json.hpp>

#include <cmath>
#include <random>
#include <sstream>

using namespace accept;
using namespace accept::bench;

namespace {

// Straight loop over n, kept apart from the library's search.
Crossovers brute_crossovers(const CryptoCosts &c, QuorumModel model)
{
    const double avg = (c.merkle_verify_uncached + 63 * c.merkle_verify_cached) / 64;
    const double bls = c.bls_sign + c.bls_verify;
    Crossovers x;
    for (std::size_t n = 1; n < 100'000 && (x.bls_beats_naive == 0 || x.bls_beats_merkle == 0); ++n) {
        const double q = model == QuorumModel::integer ? 2.0 * static_cast<double>((n - 1) / 3) + 1
                                                       : (2.0 * static_cast<double>(n) + 1) / 3;
        if (x.bls_beats_naive == 0 && bls < q * c.naive_verify + c.naive_sign)
            x.bls_beats_naive = n;
        if (x.bls_beats_merkle == 0 && bls < q * avg + c.merkle_sign)
            x.bls_beats_merkle = n;
    }
    return x;
}

std::string note(const BenchReport &b, const std::string &key)
{
    for (const auto &[k, v] : b.notes)
        if (k == key)
            return v;
    ADD_FAILURE() << "missing note " << key;
    return {};
}

} // namespace

TEST(Crossover, ReferenceCosts)
{
    const CryptoCosts ref = CryptoCosts::reference();
    const Crossovers cont = crossover_validators(ref, QuorumModel::continuous);
    EXPECT_EQ(cont.bls_beats_naive, 38u);
    EXPECT_EQ(cont.bls_beats_merkle, 477u);
    const Crossovers integer = crossover_validators(ref, QuorumModel::integer);
    EXPECT_EQ(integer.bls_beats_naive, 40u);
    EXPECT_EQ(integer.bls_beats_merkle, 478u);
    for (QuorumModel m : {QuorumModel::continuous, QuorumModel::integer}) {
        const Crossovers b = brute_crossovers(ref, m);
        const Crossovers l = crossover_validators(ref, m);
        EXPECT_EQ(l.bls_beats_naive, b.bls_beats_naive);
        EXPECT_EQ(l.bls_beats_merkle, b.bls_beats_merkle);
    }
}

TEST(Crossover, MatchesBruteForceOnRandomCosts)
{
    std::mt19937_64 rng(31);
    std::uniform_real_distribution<double> u(1, 1000);
    for (int i = 0; i < 200; ++i) {
        CryptoCosts c;
        c.naive_sign = u(rng);
        c.naive_verify = u(rng);
        c.merkle_sign = u(rng);
        c.merkle_verify_uncached = u(rng);
        c.merkle_verify_cached = u(rng);
        c.bls_sign = u(rng) * 50;
        c.bls_verify = u(rng) * 50;
        for (QuorumModel m : {QuorumModel::continuous, QuorumModel::integer}) {
            const Crossovers b = brute_crossovers(c, m);
            if (b.bls_beats_naive == 0 || b.bls_beats_merkle == 0)
                continue;
            const Crossovers l = crossover_validators(c, m);
            ASSERT_EQ(l.bls_beats_naive, b.bls_beats_naive) << i;
            ASSERT_EQ(l.bls_beats_merkle, b.bls_beats_merkle) << i;
        }
    }
}

TEST(Crossover, CheapBlsWinsImmediately)
{
    CryptoCosts c = CryptoCosts::reference();
    c.bls_sign = c.naive_sign;
    c.bls_verify = c.naive_verify;
    // bls == naive at q = 1; strictly cheaper once q > 1.
    EXPECT_EQ(crossover_validators(c, QuorumModel::integer).bls_beats_naive, 4u);
    EXPECT_EQ(crossover_validators(c, QuorumModel::continuous).bls_beats_naive, 2u);
}

TEST(Crossover, IncompleteCostsRejected)
{
    CryptoCosts c = CryptoCosts::reference();
    EXPECT_TRUE(c.complete_for_crossover());
    c.bls_verify = 0;
    EXPECT_FALSE(c.complete_for_crossover());
    EXPECT_THROW(crossover_validators(c), InvalidInput);
    c = CryptoCosts::reference();
    c.merkle_verify_cached = std::nan("");
    EXPECT_THROW(crossover_validators(c), InvalidInput);
    c = CryptoCosts::reference();
    EXPECT_THROW(crossover_validators(c, QuorumModel::integer, 64, 10), InvalidInput);
}

TEST(Crossover, QuorumSize)
{
    EXPECT_EQ(quorum_size(4, QuorumModel::integer), 3);
    EXPECT_EQ(quorum_size(6, QuorumModel::integer), 3);
    EXPECT_EQ(quorum_size(7, QuorumModel::integer), 5);
    EXPECT_DOUBLE_EQ(quorum_size(4, QuorumModel::continuous), 3);
    EXPECT_DOUBLE_EQ(quorum_size(5, QuorumModel::continuous), 11.0 / 3);
    for (std::size_t n = 1; n < 200; ++n)
        EXPECT_EQ(quorum_size(n, QuorumModel::integer), static_cast<double>(quorum_params(n).quorum)) << n;
}

TEST(Crossover, MerkleAverage)
{
    const CryptoCosts ref = CryptoCosts::reference();
    EXPECT_DOUBLE_EQ(ref.merkle_verify_average(64), (106771.0 + 63 * 6473.0) / 64);
    EXPECT_DOUBLE_EQ(ref.merkle_verify_average(1), 106771.0);
}

TEST(Report, CryptoReportIsSelfConsistent)
{
    CryptoBenchOptions o;
    o.iterations = 1000;
    o.batches = 1;
    o.bls_iterations = 1000;
    const CryptoReport r = bench_crypto(o);
    EXPECT_TRUE(r.costs.complete_for_crossover());
    EXPECT_GT(r.costs.hash, 0);
    EXPECT_GE(r.machine.hardware_threads, 1u);
    for (const OpStats &op : r.ops) {
        EXPECT_LE(op.min_ns, op.median_ns) << op.name;
        EXPECT_LE(op.median_ns, op.max_ns) << op.name;
        EXPECT_EQ(op.batches, 1u);
    }

    const BenchReport b = to_report(r, 7);
    const double n_star = std::stod(note(b, "n_star"));
    EXPECT_NEAR(n_star, optimal_leaves(7, r.costs.hash, r.costs.naive_sign, r.costs.naive_verify), 1e-9 * n_star);
    EXPECT_NEAR(n_star, (7 * r.costs.naive_verify + r.costs.naive_sign) / (7 * r.costs.hash) * std::log(2.0), 1e-6 * n_star);
    const Crossovers cont = brute_crossovers(r.costs, QuorumModel::continuous);
    EXPECT_EQ(note(b, "crossover_naive_continuous"), std::to_string(cont.bls_beats_naive));
    EXPECT_EQ(note(b, "crossover_merkle_continuous"), std::to_string(cont.bls_beats_merkle));
    EXPECT_EQ(b.rows.size(), r.ops.size());
}

TEST(Report, CsvAndJson)
{
    const BenchReport b = crossover_report(CryptoCosts::reference(), "reference");
    const std::string csv = b.to_csv();
    std::istringstream lines(csv);
    std::string line;
    std::size_t comments = 0;
    std::vector<std::string> body;
    while (std::getline(lines, line)) {
        if (line.rfind("# ", 0) == 0)
            ++comments;
        else
            body.push_back(line);
    }
    // bench, cpu, hardware_threads and compiler come before the notes.
    EXPECT_EQ(comments, 4 + b.notes.size());
    ASSERT_EQ(body.size(), 1 + b.rows.size());
    EXPECT_EQ(body[0], "quorum_model,bls_beats_naive,bls_beats_merkle");

    const auto j = nlohmann::json::parse(b.to_json());
    EXPECT_EQ(j["rows"].size(), b.rows.size());
    bool found = false;
    for (const auto &row : j["rows"])
        if (row["quorum_model"] == "continuous") {
            EXPECT_EQ(row["bls_beats_naive"], 38);
            EXPECT_EQ(row["bls_beats_merkle"], 477);
            found = true;
        }
    EXPECT_TRUE(found);
}

TEST(Report, CryptoRejectsShortRuns)
{
    CryptoBenchOptions o;
    o.iterations = 999;
    EXPECT_THROW(bench_crypto(o), InvalidParameter);
}

TEST(Report, FormatDouble)
{
    EXPECT_EQ(format_double(0.1), "0.1");
    EXPECT_EQ(format_double(3), "3");
    EXPECT_EQ(std::stod(format_double(1.0 / 3)), 1.0 / 3);
}

TEST(Sweep, SmallSweepShape)
{
    SweepOptions o;
    o.max_leaves = 64;
    o.outputs = 256;
    o.repetitions = 1;
    const SweepReport r = merkle_size_sweep(o);
    ASSERT_EQ(r.points.size(), 7u);
    EXPECT_EQ(r.points.front().leaves, 1u);
    EXPECT_EQ(r.points.back().leaves, 64u);
    for (const auto &p : r.points)
        EXPECT_GT(p.measured_ns, 0);
    EXPECT_NEAR(r.model_n_star, optimal_leaves(r.q, r.c_h, r.c_s, r.c_v), 1e-9 * r.model_n_star);
}

TEST(SpentSetBench, SmallRunLosesNothing)
{
    SpentSetOptions o;
    o.threads = {1, 2};
    o.inserts_per_thread = 4096;
    o.buckets = 1024;
    o.repetitions = 1;
    const SpentSetReport r = bench_spentset(o);
    ASSERT_EQ(r.points.size(), 2u);
    for (const auto &p : r.points) {
        EXPECT_EQ(p.lost_inserts, 0u);
        EXPECT_GT(p.purpose_built_per_second, 0);
        EXPECT_GT(p.baseline_per_second, 0);
    }
}

TEST(E2eBench, ShortRunConserves)
{
    for (Scheme scheme : {Scheme::naive, Scheme::merkle}) {
        E2eOptions o;
        o.scheme = scheme;
        o.duration = std::chrono::milliseconds(500);
        o.clients_per_shard = 2;
        const E2eReport r = bench_e2e(o);
        EXPECT_GT(r.confirmed, 0u) << to_string(scheme);
        EXPECT_TRUE(r.conservation_ok) << r.conservation_detail;
        EXPECT_GT(r.sampled_records, 0u);
        EXPECT_GT(r.tx_per_second, 0);
    }
}
