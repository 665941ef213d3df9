// SPDX-License-Identifier: Apache-2.0
#include <accept/bench/bench.hpp>
#include <accept/sig/claim.hpp>

#include <algorithm>
#include <cmath>
#include <fstream>
#include <random>
#include <thread>

namespace accept::bench {

MachineInfo MachineInfo::detect()
{
    MachineInfo m;
    m.hardware_threads = std::max(1u, std::thread::hardware_concurrency());
    std::ifstream cpuinfo("/proc/cpuinfo");
    std::string line;
    while (std::getline(cpuinfo, line)) {
        if (line.rfind("model name", 0) == 0) {
            const auto colon = line.find(':');
            if (colon != std::string::npos)
                m.cpu_model = line.substr(line.find_first_not_of(' ', colon + 1));
            break;
        }
    }
    if (m.cpu_model.empty())
        m.cpu_model = "unknown";
#if defined(__clang__)
    m.compiler = "clang " __clang_version__;
#elif defined(__GNUC__)
    m.compiler = "gcc " __VERSION__;
#else
    m.compiler = "unknown";
#endif
    return m;
}

OpStats measure(std::string name, std::size_t iterations, std::size_t batches, const std::function<void(std::size_t)> &op)
{
    if (iterations == 0 || batches == 0)
        throw InvalidParameter("measure needs at least one iteration and one batch");
    const std::size_t per_batch = (iterations + batches - 1) / batches;
    std::vector<double> means;
    means.reserve(batches);
    std::size_t i = 0;
    for (std::size_t b = 0; b < batches; ++b) {
        const auto t0 = std::chrono::steady_clock::now();
        for (std::size_t k = 0; k < per_batch; ++k)
            op(i++ % iterations);
        const auto t1 = std::chrono::steady_clock::now();
        means.push_back(std::chrono::duration<double, std::nano>(t1 - t0).count() / static_cast<double>(per_batch));
    }
    auto median_of = [](std::vector<double> v) {
        std::sort(v.begin(), v.end());
        const std::size_t m = v.size() / 2;
        return v.size() % 2 ? v[m] : (v[m - 1] + v[m]) / 2;
    };
    OpStats s;
    s.name = std::move(name);
    s.median_ns = median_of(means);
    s.min_ns = *std::min_element(means.begin(), means.end());
    s.max_ns = *std::max_element(means.begin(), means.end());
    std::vector<double> dev;
    for (double v : means)
        dev.push_back(std::abs(v - s.median_ns));
    s.mad_ns = median_of(dev);
    s.batches = batches;
    s.iterations = per_batch * batches;
    return s;
}

double CryptoCosts::merkle_verify_average(std::size_t leaves) const
{
    if (leaves == 0)
        throw InvalidParameter("tree must have leaves");
    const double n = static_cast<double>(leaves);
    return (merkle_verify_uncached + (n - 1) * merkle_verify_cached) / n;
}

bool CryptoCosts::complete_for_crossover() const
{
    for (double v : {naive_sign, naive_verify, merkle_sign, merkle_verify_uncached, merkle_verify_cached, bls_sign, bls_verify})
        if (!(v > 0) || !std::isfinite(v))
            return false;
    return true;
}

CryptoCosts CryptoCosts::reference()
{
    CryptoCosts c;
    c.naive_sign = 29967;
    c.naive_verify = 100663;
    c.naive_verify_batch64 = 51247;
    c.merkle_sign = 2709;
    c.merkle_verify_uncached = 106771;
    c.merkle_verify_cached = 6473;
    c.bls_sign = 640205;
    c.bls_verify = 1918578;
    return c;
}

namespace {

std::vector<ClaimMessage> random_claims(std::size_t count, std::uint64_t seed)
{
    std::mt19937_64 rng(seed);
    std::vector<ClaimMessage> claims;
    claims.reserve(count);
    for (std::size_t i = 0; i < count; ++i) {
        Hash32 digest{};
        Hash32 owner{};
        for (auto &b : digest)
            b = static_cast<std::uint8_t>(rng());
        for (auto &b : owner)
            b = static_cast<std::uint8_t>(rng());
        claims.push_back(output_claim_message(digest, static_cast<std::uint16_t>(i % 4), Output{1 + rng() % 1000, owner}));
    }
    return claims;
}

std::vector<Hash32> leaves_of(std::span<const ClaimMessage> claims)
{
    std::vector<Hash32> out;
    out.reserve(claims.size());
    for (const auto &c : claims)
        out.push_back(claim_leaf(c));
    return out;
}

} // namespace

CryptoReport bench_crypto(const CryptoBenchOptions &options)
{
    if (options.iterations < 1000 || options.bls_iterations < 1000)
        throw InvalidParameter("crypto benchmarks need at least 1000 iterations");
    constexpr std::size_t tree = 64;
    const std::size_t n = (options.iterations + tree - 1) / tree * tree;
    const auto claims = random_claims(n, options.seed);
    const KeyPair key = derive_keypair("bench-validator", options.seed);

    CryptoReport report;
    report.machine = MachineInfo::detect();
    auto run = [&](std::string name, std::size_t iters, const std::function<void(std::size_t)> &op, double scale = 1.0) {
        OpStats s = measure(std::move(name), iters, options.batches, op);
        s.median_ns /= scale;
        s.min_ns /= scale;
        s.max_ns /= scale;
        s.mad_ns /= scale;
        report.ops.push_back(s);
        return s.median_ns;
    };

    // Hashing: one inner-node computation.
    const auto leaves = leaves_of(claims);
    volatile std::uint8_t sink = 0;
    report.costs.hash = run("hash", n * 8, [&](std::size_t i) {
        sink = sink ^ merkle_inner_node(leaves[i % n], leaves[(i + 1) % n])[0];
    });

    // Naive.
    std::vector<NaiveSignature> naive_sigs;
    naive_sigs.reserve(n);
    for (const auto &c : claims)
        naive_sigs.push_back(sign_naive(key, 0, c));
    report.costs.naive_sign = run("naive_sign", n, [&](std::size_t i) { sink = sink ^ sign_naive(key, 0, claims[i]).sig[0]; });
    report.costs.naive_verify = run("naive_verify", n, [&](std::size_t i) {
        if (!verify_naive(key.public_key, claims[i], naive_sigs[i]))
            throw Error("naive verification failed during benchmark");
    });
    std::vector<NaiveBatchItem> items;
    items.reserve(n);
    for (std::size_t i = 0; i < n; ++i)
        items.push_back(NaiveBatchItem{key.public_key, claims[i], naive_sigs[i].sig});
    report.costs.naive_verify_batch64 = run(
        "naive_verify_batch64", n / tree,
        [&](std::size_t i) {
            const auto ok = verify_naive_batch(std::span<const NaiveBatchItem>(items).subspan(i * tree, tree));
            if (std::find(ok.begin(), ok.end(), false) != ok.end())
                throw Error("batch verification failed during benchmark");
        },
        tree);

    // Merkle.
    std::vector<MerkleBatchJob> jobs(n / tree);
    for (std::size_t i = 0; i < n; ++i)
        jobs[i / tree].claims.push_back(MerkleClaim{Hash32{}, static_cast<std::uint16_t>(i % tree), leaves[i]});
    std::vector<MerkleSignature> merkle_sigs;
    merkle_sigs.reserve(n);
    for (const auto &job : jobs)
        for (auto &s : sign_merkle_batch(key, 0, job, tree).signatures)
            merkle_sigs.push_back(std::move(s));
    report.costs.merkle_sign = run(
        "merkle_sign_amortized64", jobs.size(),
        [&](std::size_t i) { sink = sink ^ sign_merkle_batch(key, 0, jobs[i], tree).root[0]; }, tree);
    report.costs.merkle_verify_uncached = run("merkle_verify_uncached", n, [&](std::size_t i) {
        if (!verify_merkle_sig(nullptr, key.public_key, 0, claims[i], merkle_sigs[i]))
            throw Error("merkle verification failed during benchmark");
    });
    RootCache cache(jobs.size() * 2);
    for (std::size_t i = 0; i < n; i += tree)
        verify_merkle_sig(&cache, key.public_key, 0, claims[i], merkle_sigs[i]);
    report.costs.merkle_verify_cached = run("merkle_verify_cached", n, [&](std::size_t i) {
        if (!verify_merkle_sig(&cache, key.public_key, 0, claims[i], merkle_sigs[i]))
            throw Error("cached merkle verification failed during benchmark");
    });

    // BLS: a share signature costs what a master signature costs to make and check.
    const Committee committee = make_committee(4, options.seed, true);
    const BlsScalar &share = committee.secrets[0].bls_share;
    const BlsVerifier &verifier = committee.validators.bls_share_verifier(0);
    const auto bls_claims = random_claims(std::min<std::size_t>(options.bls_iterations, 256), options.seed + 1);
    std::vector<BlsShareSignature> bls_sigs;
    for (const auto &c : bls_claims)
        bls_sigs.push_back(sign_share(0, share, c));
    report.costs.bls_sign = run("bls_sign", options.bls_iterations, [&](std::size_t i) {
        sink = sink ^ sign_share(0, share, bls_claims[i % bls_claims.size()]).sig[0];
    });
    report.costs.bls_verify = run("bls_verify", options.bls_iterations, [&](std::size_t i) {
        const std::size_t k = i % bls_claims.size();
        if (!verifier.verify(bls_claims[k], bls_sigs[k].sig))
            throw Error("bls verification failed during benchmark");
    });
    return report;
}

std::string_view to_string(QuorumModel m)
{
    return m == QuorumModel::integer ? "integer" : "continuous";
}

double quorum_size(std::size_t n, QuorumModel model)
{
    if (n == 0)
        throw InvalidParameter("validator count must be positive");
    if (model == QuorumModel::integer)
        return static_cast<double>(2 * ((n - 1) / 3) + 1);
    return (2.0 * static_cast<double>(n) + 1.0) / 3.0;
}

Crossovers crossover_validators(const CryptoCosts &costs, QuorumModel model, std::size_t merkle_leaves, std::size_t max_n)
{
    if (!costs.complete_for_crossover())
        throw InvalidInput("crossover needs positive naive, merkle and bls sign and verify costs");
    const double bls = costs.bls_sign + costs.bls_verify;
    const double merkle_verify = costs.merkle_verify_average(merkle_leaves);
    Crossovers c;
    for (std::size_t n = 1; n <= max_n && (c.bls_beats_naive == 0 || c.bls_beats_merkle == 0); ++n) {
        const double q = quorum_size(n, model);
        if (c.bls_beats_naive == 0 && bls < q * costs.naive_verify + costs.naive_sign)
            c.bls_beats_naive = n;
        if (c.bls_beats_merkle == 0 && bls < q * merkle_verify + costs.merkle_sign)
            c.bls_beats_merkle = n;
    }
    if (c.bls_beats_naive == 0 || c.bls_beats_merkle == 0)
        throw InvalidInput("bls never becomes cheaper within the searched validator counts");
    return c;
}

} // namespace accept::bench
