// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <accept/sig/confirmation.hpp>

#include <chrono>
#include <functional>
#include <string>
#include <vector>

namespace accept::bench {

struct MachineInfo {
    std::string cpu_model;
    unsigned hardware_threads = 0;
    std::string compiler;

    static MachineInfo detect();
};

/// Per-operation timing from `batches` timed batches of `iterations` calls each.
struct OpStats {
    std::string name;
    double median_ns = 0;
    double min_ns = 0;
    double max_ns = 0;
    /// Median absolute deviation of the batch means.
    double mad_ns = 0;
    std::size_t batches = 0;
    std::size_t iterations = 0;
};

/// Calls `op(i)` for i in [0, iterations) per batch; returns ns per call.
OpStats measure(std::string name, std::size_t iterations, std::size_t batches, const std::function<void(std::size_t)> &op);

/// Nanosecond costs of the primitives the schemes are built from.
struct CryptoCosts {
    double hash = 0;
    double naive_sign = 0;
    double naive_verify = 0;
    double naive_verify_batch64 = 0;
    double merkle_sign = 0;
    double merkle_verify_uncached = 0;
    double merkle_verify_cached = 0;
    double bls_sign = 0;
    double bls_verify = 0;

    /// Average over a tree of `leaves`: one uncached root check, the rest cached.
    double merkle_verify_average(std::size_t leaves = 64) const;
    /// Every cost needed by crossover_validators is positive and finite.
    bool complete_for_crossover() const;
    /// The published reference measurements (c3.8xlarge).
    static CryptoCosts reference();
};

struct CryptoBenchOptions {
    std::size_t iterations = 1000;
    std::size_t batches = 7;
    /// BLS operations are three orders of magnitude slower; they use this count.
    std::size_t bls_iterations = 1000;
    std::uint64_t seed = 1;
};

struct CryptoReport {
    MachineInfo machine;
    CryptoCosts costs;
    std::vector<OpStats> ops;
};

CryptoReport bench_crypto(const CryptoBenchOptions &options = {});

// ---------------------------------------------------------------------------

/// How a validator count maps to a quorum size. `integer` is 2*floor((n-1)/3)+1;
/// `continuous` takes f = (n-1)/3 without rounding, i.e. q = (2n+1)/3.
enum class QuorumModel : std::uint8_t { integer, continuous };
std::string_view to_string(QuorumModel m);
double quorum_size(std::size_t n, QuorumModel model);

struct Crossovers {
    /// Smallest n where per-output BLS cost is below the naive cost.
    std::size_t bls_beats_naive = 0;
    /// Smallest n where per-output BLS cost is below the merkle cost.
    std::size_t bls_beats_merkle = 0;
};

/// Per-output costs at quorum q:
///   naive  = q*c_v + c_s
///   merkle = q*avg_v(N) + c_s^merkle
///   bls    = c_s^bls + c_v^bls
/// Throws InvalidInput if a needed cost is missing, and if no n up to
/// `max_n` satisfies a comparison.
Crossovers crossover_validators(const CryptoCosts &costs, QuorumModel model = QuorumModel::integer,
                                std::size_t merkle_leaves = 64, std::size_t max_n = 1'000'000);

// ---------------------------------------------------------------------------

struct SweepPoint {
    std::size_t leaves = 0;
    double measured_ns = 0;
    double model_ns = 0;
};

struct SweepOptions {
    double q = 7;
    std::size_t max_leaves = 4096;
    /// Outputs processed per measured point.
    std::size_t outputs = 4096;
    std::size_t repetitions = 3;
    std::uint64_t seed = 1;
};

struct SweepReport {
    MachineInfo machine;
    double q = 0;
    double c_h = 0;
    double c_s = 0;
    double c_v = 0;
    double model_n_star = 0;
    std::size_t model_optimum = 0;
    std::size_t measured_optimum = 0;
    std::vector<SweepPoint> points;

    /// measured_optimum is model_optimum, half or double of it.
    bool within_one_power_of_two() const;
    /// Model curve strictly decreases then strictly increases.
    bool model_unimodal() const;
};

/// For each power of two N, times a validator's per-output work: signing
/// outputs in trees of N leaves, then checking q merkle signatures per
/// output with a root cache. The model curve uses this machine's c_h, c_s, c_v.
SweepReport merkle_size_sweep(const SweepOptions &options = {});

// ---------------------------------------------------------------------------

struct E2eOptions {
    std::size_t validators = 4;
    std::uint32_t shards = 1;
    Scheme scheme = Scheme::naive;
    std::chrono::milliseconds duration{60'000};
    std::size_t clients_per_shard = 4;
    /// Every k-th client keeps a full record of its confirmations for the audit.
    std::size_t sample_every = 4;
    std::uint64_t seed = 1;
};

struct E2eReport {
    MachineInfo machine;
    E2eOptions options;
    std::uint64_t confirmed = 0;
    double seconds = 0;
    double tx_per_second = 0;
    /// Process CPU time over wall time and hardware threads.
    double cpu_utilization = 0;
    std::size_t sampled_records = 0;
    bool conservation_ok = false;
    std::string conservation_detail;
};

/// In-process validators, one worker thread per (validator, shard), driven
/// by client threads that keep transferring their balance to themselves.
E2eReport bench_e2e(const E2eOptions &options);

// ---------------------------------------------------------------------------

struct SpentSetOptions {
    std::vector<unsigned> threads{1, 2, 4, 8};
    std::size_t inserts_per_thread = 1u << 18;
    std::size_t buckets = std::size_t{1} << 22;
    std::size_t repetitions = 3;
    std::uint64_t seed = 1;
};

struct SpentSetPoint {
    unsigned threads = 0;
    double purpose_built_per_second = 0;
    double baseline_per_second = 0;
    double speedup = 0;
    /// Keys missing or holding the wrong value after the run, both maps together.
    std::size_t lost_inserts = 0;
};

struct SpentSetReport {
    MachineInfo machine;
    SpentSetOptions options;
    std::vector<SpentSetPoint> points;
};

SpentSetReport bench_spentset(const SpentSetOptions &options = {});

// ---------------------------------------------------------------------------

/// Flat table plus key/value notes, printable as CSV or JSON.
struct BenchReport {
    std::string name;
    MachineInfo machine;
    std::vector<std::pair<std::string, std::string>> notes;
    std::vector<std::string> columns;
    std::vector<std::vector<std::string>> rows;

    /// Notes as leading "# key: value" lines, then a header and the rows.
    std::string to_csv() const;
    std::string to_json() const;
};

/// Tables for the CLI. The crypto table carries N* and crossovers derived
/// from the same report's costs.
BenchReport to_report(const CryptoReport &r, double q = 7);
BenchReport to_report(const SweepReport &r);
BenchReport to_report(const std::vector<E2eReport> &runs);
BenchReport to_report(const SpentSetReport &r);
BenchReport crossover_report(const CryptoCosts &costs, const std::string &source);

/// Shortest decimal form that round-trips.
std::string format_double(double v);

} // namespace accept::bench
