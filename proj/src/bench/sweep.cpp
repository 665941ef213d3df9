// SPDX-License-Identifier: Apache-2.0
#include <accept/bench/bench.hpp>
#include <accept/sig/claim.hpp>

#include <algorithm>
#include <cmath>
#include <random>

namespace accept::bench {

bool SweepReport::within_one_power_of_two() const
{
    return measured_optimum == model_optimum || measured_optimum * 2 == model_optimum ||
           measured_optimum == model_optimum * 2;
}

bool SweepReport::model_unimodal() const
{
    if (points.empty())
        return false;
    std::size_t best = 0;
    for (std::size_t i = 1; i < points.size(); ++i)
        if (points[i].model_ns < points[best].model_ns)
            best = i;
    for (std::size_t i = 1; i <= best; ++i)
        if (!(points[i].model_ns < points[i - 1].model_ns))
            return false;
    for (std::size_t i = best + 1; i < points.size(); ++i)
        if (!(points[i].model_ns > points[i - 1].model_ns))
            return false;
    return true;
}

namespace {

double median(std::vector<double> v)
{
    std::sort(v.begin(), v.end());
    const std::size_t m = v.size() / 2;
    return v.size() % 2 ? v[m] : (v[m - 1] + v[m]) / 2;
}

double elapsed_ns(std::chrono::steady_clock::time_point t0)
{
    return std::chrono::duration<double, std::nano>(std::chrono::steady_clock::now() - t0).count();
}

} // namespace

SweepReport merkle_size_sweep(const SweepOptions &options)
{
    if (!is_power_of_two(options.max_leaves))
        throw InvalidParameter("largest tree size must be a power of two");
    if (options.outputs == 0 || options.repetitions == 0)
        throw InvalidParameter("sweep needs outputs and repetitions");
    const auto q = static_cast<std::size_t>(std::llround(options.q));
    if (q < 1)
        throw InvalidParameter("quorum must be at least 1");

    SweepReport report;
    report.machine = MachineInfo::detect();
    report.q = options.q;

    // This machine's primitive costs feed the model.
    {
        const KeyPair key = derive_keypair("sweep-probe", options.seed);
        std::mt19937_64 rng(options.seed);
        std::vector<ClaimMessage> probe;
        for (std::size_t i = 0; i < 1024; ++i) {
            Hash32 d{};
            for (auto &b : d)
                b = static_cast<std::uint8_t>(rng());
            probe.push_back(output_claim_message(d, 0, Output{1, key.public_key}));
        }
        std::vector<NaiveSignature> sigs;
        for (const auto &c : probe)
            sigs.push_back(sign_naive(key, 0, c));
        std::vector<Hash32> leaves;
        for (const auto &c : probe)
            leaves.push_back(claim_leaf(c));
        volatile std::uint8_t sink = 0;
        report.c_h = measure("hash", 16384, 7, [&](std::size_t i) {
            sink = sink ^ merkle_inner_node(leaves[i % leaves.size()], leaves[(i + 1) % leaves.size()])[0];
        }).median_ns;
        report.c_s = measure("sign", 2048, 7, [&](std::size_t i) { sink = sink ^ sign_naive(key, 0, probe[i % probe.size()]).sig[0]; })
                         .median_ns;
        report.c_v = measure("verify", 2048, 7, [&](std::size_t i) {
                         const std::size_t k = i % probe.size();
                         if (!verify_naive(key.public_key, probe[k], sigs[k]))
                             throw Error("verification failed during sweep");
                     }).median_ns;
    }
    report.model_n_star = optimal_leaves(options.q, report.c_h, report.c_s, report.c_v);
    report.model_optimum = optimal_power_of_two_leaves(options.q, report.c_h, report.c_s, report.c_v);

    std::vector<KeyPair> keys;
    for (std::size_t v = 0; v < q; ++v)
        keys.push_back(derive_keypair("sweep-validator", v));

    for (std::size_t leaves = 1; leaves <= options.max_leaves; leaves *= 2) {
        const std::size_t m = (std::max(options.outputs, leaves) + leaves - 1) / leaves * leaves;
        std::mt19937_64 rng(options.seed + leaves);
        std::vector<ClaimMessage> claims;
        std::vector<MerkleBatchJob> jobs(m / leaves);
        claims.reserve(m);
        for (std::size_t i = 0; i < m; ++i) {
            Hash32 d{};
            for (auto &b : d)
                b = static_cast<std::uint8_t>(rng());
            claims.push_back(output_claim_message(d, 0, Output{1 + rng() % 1000, keys[0].public_key}));
            jobs[i / leaves].claims.push_back(MerkleClaim{d, 0, claim_leaf(claims.back())});
        }
        std::vector<std::vector<MerkleSignature>> sigs(q);
        for (std::size_t v = 0; v < q; ++v)
            for (const auto &job : jobs)
                for (auto &s : sign_merkle_batch(keys[v], static_cast<std::uint16_t>(v), job, leaves).signatures)
                    sigs[v].push_back(std::move(s));

        std::vector<double> totals;
        for (std::size_t rep = 0; rep < options.repetitions; ++rep) {
            auto t0 = std::chrono::steady_clock::now();
            // Leaf hashing is part of the signer's work.
            for (std::size_t b = 0; b < jobs.size(); ++b) {
                MerkleBatchJob job;
                job.claims.reserve(leaves);
                for (std::size_t i = b * leaves; i < (b + 1) * leaves; ++i)
                    job.claims.push_back(MerkleClaim{Hash32{}, 0, claim_leaf(claims[i])});
                sign_merkle_batch(keys[0], 0, job, leaves);
            }
            const double sign_ns = elapsed_ns(t0);

            RootCache cache(jobs.size() * q + 16);
            t0 = std::chrono::steady_clock::now();
            for (std::size_t i = 0; i < m; ++i)
                for (std::size_t v = 0; v < q; ++v)
                    if (!verify_merkle_sig(&cache, keys[v].public_key, static_cast<std::uint16_t>(v), claims[i], sigs[v][i]))
                        throw Error("merkle verification failed during sweep");
            const double verify_ns = elapsed_ns(t0);
            totals.push_back((sign_ns + verify_ns) / static_cast<double>(m));
        }
        SweepPoint p;
        p.leaves = leaves;
        p.measured_ns = median(totals);
        p.model_ns = cost_model(options.q, report.c_h, report.c_s, report.c_v, leaves).merkle;
        report.points.push_back(p);
    }
    const auto best = std::min_element(report.points.begin(), report.points.end(),
                                       [](const SweepPoint &a, const SweepPoint &b) { return a.measured_ns < b.measured_ns; });
    report.measured_optimum = best->leaves;
    return report;
}

} // namespace accept::bench
