// SPDX-License-Identifier: Apache-2.0
// Acceptance gate: one line per criterion. Exit status is nonzero if any
// evaluated check fails. Checks whose hardware precondition is not met are
// measured and printed as NOT EVALUATED; ACCEPT_STRICT=1 turns those into
// failures too.
#include <accept/bench/bench.hpp>
#include <accept/core/hash.hpp>
#include <accept/sig/bls.hpp>
#include <accept/sig/merkle.hpp>
#include <accept/simnet/scenarios.hpp>

#include <support/fixtures.hpp>
#include <support/linearizability.hpp>
#include <support/negative_control.hpp>

#include <chrono>
#include <cmath>
#include <cstdlib>
#include <iostream>
#include <sstream>
#include <thread>

using namespace accept;
using namespace accept::test;

namespace {

// Tolerances and workload sizes.
constexpr std::size_t safety_seeds = 10'000;
constexpr std::size_t liveness_seeds = 1'000;
constexpr double n_star_expected = 80.4;
constexpr double n_star_tolerance = 0.1;
constexpr std::size_t naive_crossover_expected = 37;
constexpr std::size_t naive_crossover_tolerance = 1;
constexpr std::size_t merkle_crossover_expected = 475;
constexpr std::size_t merkle_crossover_tolerance = 2;
constexpr double cached_verify_min_ratio = 5.0;
constexpr double amortized_sign_min_ratio = 5.0;
constexpr double two_shard_min_ratio = 1.6;
constexpr double four_shard_min_ratio = 2.5;
constexpr double spentset_min_speedup = 4.0;
constexpr unsigned scaling_min_cores = 8;
constexpr std::chrono::milliseconds e2e_duration{3000};
constexpr std::size_t differential_ops = 1'000'000;

struct Gate {
    bool strict = false;
    bool failed = false;
    std::vector<sim::AuditResult> simnet_conservation;
    std::vector<bench::E2eReport> e2e_runs;

    void line(int id, bool pass, bool evaluated_fully, const std::string &detail)
    {
        const char *status = !pass ? "FAIL" : evaluated_fully ? "PASS" : "PASS (partial)";
        if (!pass || (strict && !evaluated_fully))
            failed = true;
        std::cout << "AC" << id << ' ' << status << "  " << detail << std::endl;
    }
};

std::string fmt(double v, int digits = 2)
{
    std::ostringstream o;
    o.setf(std::ios::fixed);
    o.precision(digits);
    o << v;
    return o.str();
}

unsigned cores() { return std::max(1u, std::thread::hardware_concurrency()); }

std::optional<std::string> no_double_spend(const sim::SimWorld &w, const ValidatorSet &vs)
{
    const auto r = sim::audit_no_double_spend(w.trace(), vs);
    if (!r.ok)
        return r.detail;
    return std::nullopt;
}

void ac1(Gate &g)
{
    std::size_t runs = 0;
    std::size_t violations = 0;
    std::string first;
    for (std::size_t n : {4u, 7u, 10u}) {
        const Committee c = make_committee(n, 100 + n);
        sim::DoubleSpendScenario s;
        s.network.byzantine = sim::ByzantineSpec::first(c.validators.params(), c.validators.params().f,
                                                        sim::ByzantineBehavior{.sign_everything = true});
        s.policy = sim::SchedulePolicy::unrestricted();
        for (std::uint64_t seed = 0; seed < safety_seeds; ++seed) {
            s.seed = seed;
            const sim::ScenarioOutcome out = sim::run_double_spend(c, s);
            ++runs;
            if (!out.double_spend.ok) {
                ++violations;
                if (first.empty())
                    first = "n=" + std::to_string(n) + " seed=" + std::to_string(seed) + ": " + out.double_spend.detail;
            }
            g.simnet_conservation.push_back(out.conservation);
        }
    }

    const Committee c4 = make_committee(4, 104);
    sim::DoubleSpendScenario s;
    s.conflicting = 2;
    s.network.byzantine = sim::ByzantineSpec::first(c4.validators.params(), 1, sim::ByzantineBehavior{.sign_everything = true});
    const sim::SimWorld initial = sim::make_double_spend_world(c4, s);
    const sim::ExploreResult ex =
        sim::explore_all_schedules(initial, [&](const sim::SimWorld &w) { return no_double_spend(w, c4.validators); });

    // The auditor must see a violation once f+1 validators sign everything.
    const sim::ScenarioOutcome control = run_overpowered_double_spend(c4);

    const bool pass = violations == 0 && ex.exhausted && ex.violations == 0 && !control.double_spend.ok;
    g.line(1, pass, true,
           std::to_string(runs) + " seeded runs (n=4,7,10), " + std::to_string(violations) +
               " violations; exhaustive n=4: " + std::to_string(ex.states) + " states, " +
               std::to_string(ex.violations) + " violations, exhausted=" + (ex.exhausted ? "yes" : "no") +
               "; f+1 control detected=" + (control.double_spend.ok ? "no" : "yes") + (first.empty() ? "" : "; " + first));
}

void ac2(Gate &g)
{
    std::size_t requested = 0;
    std::size_t confirmed = 0;
    std::size_t incomplete_runs = 0;
    for (std::size_t n : {4u, 7u}) {
        const Committee c = make_committee(n, 200 + n);
        sim::PaymentScenario s;
        s.network.byzantine =
            sim::ByzantineSpec::first(c.validators.params(), c.validators.params().f, sim::ByzantineBehavior{.silent = true});
        for (std::uint64_t seed = 0; seed < liveness_seeds; ++seed) {
            s.seed = seed;
            const sim::ScenarioOutcome out = sim::run_payments(c, s);
            requested += out.requested;
            confirmed += out.confirmed;
            if (!out.all_done || out.confirmed != out.requested)
                ++incomplete_runs;
            g.simnet_conservation.push_back(out.conservation);
        }
    }
    g.line(2, requested > 0 && confirmed == requested && incomplete_runs == 0, true,
           std::to_string(confirmed) + "/" + std::to_string(requested) + " honest payments confirmed over " +
               std::to_string(2 * liveness_seeds) + " fair runs (n=4,7, f silent)");
}

void ac3(Gate &g)
{
    const double n_star = optimal_leaves(7, 1, 63, 107);
    const bench::SweepReport sweep = bench::merkle_size_sweep();
    const bool model_ok = std::abs(n_star - n_star_expected) <= n_star_tolerance;
    g.line(3, model_ok && sweep.within_one_power_of_two(), true,
           "model N*=" + fmt(n_star, 3) + " (target " + fmt(n_star_expected, 1) + "+-" + fmt(n_star_tolerance, 1) +
               "); this machine: c_h=" + fmt(sweep.c_h, 0) + " c_s=" + fmt(sweep.c_s, 0) + " c_v=" + fmt(sweep.c_v, 0) +
               " ns, model N*=" + fmt(sweep.model_n_star, 1) + ", model optimum " + std::to_string(sweep.model_optimum) +
               ", measured optimum " + std::to_string(sweep.measured_optimum));
}

void ac4(Gate &g)
{
    const bench::Crossovers x =
        bench::crossover_validators(bench::CryptoCosts::reference(), bench::QuorumModel::continuous);
    const auto near = [](std::size_t v, std::size_t target, std::size_t tol) {
        return v + tol >= target && v <= target + tol;
    };
    g.line(4,
           near(x.bls_beats_naive, naive_crossover_expected, naive_crossover_tolerance) &&
               near(x.bls_beats_merkle, merkle_crossover_expected, merkle_crossover_tolerance),
           true,
           "naive crossover " + std::to_string(x.bls_beats_naive) + " (target 37+-1), merkle crossover " +
               std::to_string(x.bls_beats_merkle) + " (target 475+-2), continuous quorum model");
}

void ac5(Gate &g)
{
    const SystemParams p = quorum_params(7);
    const BlsKeyMaterial km = trusted_keygen(p, Bytes{'a', 'c', '5'});
    const ClaimMessage claim = output_claim_message(OutputId{filled(5), 1}, Output{42, filled(6)});
    std::vector<BlsShareSignature> shares;
    for (std::uint16_t i = 0; i < 7; ++i)
        shares.push_back(sign_share(i, km.secret_shares[i], claim));

    std::size_t subsets = 0;
    std::size_t identical = 0;
    std::size_t verifying = 0;
    std::optional<MasterSignature> reference;
    for (unsigned mask = 0; mask < 128; ++mask) {
        if (std::popcount(mask) != 5)
            continue;
        std::vector<BlsShareSignature> subset;
        for (unsigned i = 0; i < 7; ++i)
            if (mask & (1u << i))
                subset.push_back(shares[i]);
        const MasterSignature m = aggregate_master(p, subset);
        ++subsets;
        if (!reference)
            reference = m;
        identical += m == *reference;
        verifying += verify_master(km.master_public_key, claim, m);
    }
    g.line(5, subsets == 21 && identical == 21 && verifying == 21, true,
           std::to_string(subsets) + " subsets, " + std::to_string(identical) + " byte-identical, " +
               std::to_string(verifying) + " verify under the master key");
}

void ac6(Gate &g)
{
    std::vector<Hash32> leaves;
    for (std::uint8_t i = 1; i <= 8; ++i)
        leaves.push_back(sha256(Bytes{i}));
    std::array<Hash32, 16> h{};
    for (std::size_t i = 1; i <= 8; ++i)
        h[i] = merkle_leaf_node(leaves[i - 1]);
    h[9] = merkle_inner_node(h[1], h[2]);
    h[10] = merkle_inner_node(h[3], h[4]);
    h[11] = merkle_inner_node(h[5], h[6]);
    h[12] = merkle_inner_node(h[7], h[8]);
    h[13] = merkle_inner_node(h[9], h[10]);
    h[14] = merkle_inner_node(h[11], h[12]);
    const Hash32 root = merkle_inner_node(h[13], h[14]);

    const MerkleBatch batch = build_merkle_batch(leaves, 8);
    const MerklePath expected{{h[4], Side::right}, {h[9], Side::left}, {h[14], Side::right}};
    const bool pass = batch.root == root && batch.paths[2] == expected && merkle_root_from_path(leaves[2], batch.paths[2]) == root;
    g.line(6, pass, true, std::string("path(h3) = [(h4,right),(h9,left),(h14,right)] ") + (pass ? "reproduced" : "mismatch"));
}

void ac7(Gate &g)
{
    bench::CryptoBenchOptions o;
    o.iterations = 2000;
    o.batches = 5;
    o.bls_iterations = 1000;
    const bench::CryptoCosts c = bench::bench_crypto(o).costs;
    const double verify_ratio = c.naive_verify / c.merkle_verify_cached;
    const double sign_ratio = c.naive_sign / c.merkle_sign;
    g.line(7, verify_ratio >= cached_verify_min_ratio && sign_ratio >= amortized_sign_min_ratio && c.bls_verify > c.naive_verify,
           true,
           "naive verify / merkle cached verify = " + fmt(verify_ratio) + " (>= 5), naive sign / merkle amortized sign = " +
               fmt(sign_ratio) + " (>= 5), bls verify " + fmt(c.bls_verify, 0) + " ns vs naive verify " +
               fmt(c.naive_verify, 0) + " ns");
}

bench::E2eReport e2e(Gate &g, std::size_t n, std::uint32_t shards)
{
    bench::E2eOptions o;
    o.validators = n;
    o.shards = shards;
    o.duration = e2e_duration;
    o.seed = 8;
    bench::E2eReport r = bench::bench_e2e(o);
    g.e2e_runs.push_back(r);
    return r;
}

void ac8(Gate &g)
{
    const double t4 = e2e(g, 4, 1).tx_per_second;
    const double t10 = e2e(g, 10, 1).tx_per_second;
    const double t28 = e2e(g, 28, 1).tx_per_second;
    const bool monotone = t4 > t10 && t10 > t28;

    const double s2 = e2e(g, 4, 2).tx_per_second / t4;
    const double s4 = e2e(g, 4, 4).tx_per_second / t4;
    const bool scaling_evaluated = cores() >= scaling_min_cores;
    const bool scaling_ok = s2 >= two_shard_min_ratio && s4 >= four_shard_min_ratio;

    std::string detail = "tx/s at 1 shard: n=4 " + fmt(t4, 0) + ", n=10 " + fmt(t10, 0) + ", n=28 " + fmt(t28, 0) +
                         (monotone ? " (decreasing)" : " (NOT decreasing)") + "; shard scaling 2/1=" + fmt(s2) +
                         " 4/1=" + fmt(s4);
    if (scaling_evaluated)
        detail += scaling_ok ? " (>= 1.6, >= 2.5)" : " (below 1.6 / 2.5)";
    else
        detail += " NOT EVALUATED (precondition >= " + std::to_string(scaling_min_cores) + " cores, found " +
                  std::to_string(cores()) + ")";
    g.line(8, monotone && (!scaling_evaluated || scaling_ok), scaling_evaluated, detail);
}

void ac9(Gate &g)
{
    std::size_t histories = 0;
    std::size_t linearizable_count = 0;
    for (unsigned threads : {2u, 3u, 4u})
        for (std::uint64_t seed = 0; seed < 500; ++seed) {
            SpentSet s(2);
            ++histories;
            linearizable_count += linearizable(record_history(s, threads, 24 / threads, 3, seed));
        }

    std::mt19937_64 rng(9);
    SpentSet set(std::size_t{1} << 12);
    std::unordered_map<Hash32, Hash32, Hash32Hasher> ref;
    std::vector<Hash32> keys;
    std::size_t mismatches = 0;
    for (std::size_t i = 0; i < differential_ops; ++i) {
        const unsigned op = rng() % 4;
        const Hash32 k = keys.empty() || rng() % 3 == 0 ? random_hash(rng) : keys[rng() % keys.size()];
        const Hash32 v = filled(static_cast<std::uint8_t>(rng() % 4));
        if (op <= 1) {
            const auto got = set.insert_if_absent(k, v);
            const auto [it, inserted] = ref.try_emplace(k, v);
            mismatches += got.inserted != inserted || got.value != it->second;
            if (inserted && keys.size() < 4096)
                keys.push_back(k);
        } else if (op == 2) {
            const auto it = ref.find(k);
            const bool expect = it != ref.end() && it->second == v;
            if (expect)
                ref.erase(it);
            mismatches += set.remove_if_value(k, v) != expect;
        } else {
            mismatches += set.contains(k) != (ref.count(k) == 1);
        }
    }
    mismatches += set.size() != ref.size();

    bench::SpentSetOptions o;
    o.threads = {1, 8};
    const bench::SpentSetReport r = bench::bench_spentset(o);
    const bench::SpentSetPoint &eight = r.points.back();
    std::size_t lost = 0;
    for (const auto &p : r.points)
        lost += p.lost_inserts;

    const bool scaling_evaluated = cores() >= scaling_min_cores;
    const bool correct = linearizable_count == histories && mismatches == 0 && lost == 0;
    std::string detail = std::to_string(linearizable_count) + "/" + std::to_string(histories) +
                         " histories linearizable (2-4 threads); differential " + std::to_string(differential_ops) +
                         " ops, " + std::to_string(mismatches) + " mismatches; speedup at 8 threads " + fmt(eight.speedup);
    if (scaling_evaluated)
        detail += eight.speedup >= spentset_min_speedup ? " (>= 4)" : " (below 4)";
    else
        detail += " NOT EVALUATED (precondition >= " + std::to_string(scaling_min_cores) + " cores, found " +
                  std::to_string(cores()) + ")";
    g.line(9, correct && (!scaling_evaluated || eight.speedup >= spentset_min_speedup), scaling_evaluated, detail);
}

void ac10(Gate &g)
{
    std::size_t sim_failed = 0;
    std::size_t records = 0;
    for (const auto &r : g.simnet_conservation) {
        sim_failed += !r.ok;
        records += r.records_checked;
    }
    std::size_t e2e_failed = 0;
    std::size_t sampled = 0;
    for (const auto &r : g.e2e_runs) {
        e2e_failed += !r.conservation_ok;
        sampled += r.sampled_records;
    }
    g.line(10, !g.simnet_conservation.empty() && !g.e2e_runs.empty() && sim_failed == 0 && e2e_failed == 0, true,
           std::to_string(g.simnet_conservation.size()) + " simnet traces (" + std::to_string(records) + " records), " +
               std::to_string(sim_failed) + " failed; " + std::to_string(g.e2e_runs.size()) + " e2e runs (" +
               std::to_string(sampled) + " sampled records), " + std::to_string(e2e_failed) + " failed");
}

} // namespace

int main()
{
    Gate g;
    if (const char *s = std::getenv("ACCEPT_STRICT"))
        g.strict = std::string(s) == "1";
    std::cout << "hardware threads: " << cores() << std::endl;
    ac1(g);
    ac2(g);
    ac3(g);
    ac4(g);
    ac5(g);
    ac6(g);
    ac7(g);
    ac8(g);
    ac9(g);
    ac10(g);
    std::cout << (g.failed ? "acceptance: FAILED" : "acceptance: ok") << std::endl;
    return g.failed ? 1 : 0;
}
