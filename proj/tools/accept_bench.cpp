// SPDX-License-Identifier: Apache-2.0
// Benchmark and simulation driver.
#include <accept/bench/bench.hpp>
#include <accept/simnet/scenarios.hpp>

#include <CLI11.hpp>

#include <fstream>
#include <iostream>

using namespace accept;

namespace {

void emit(const bench::BenchReport &r, const std::string &format)
{
    std::cout << (format == "json" ? r.to_json() : r.to_csv());
}

Scheme scheme_from(const std::string &name)
{
    const auto s = parse_scheme(name);
    if (!s)
        throw CLI::ValidationError("--scheme", "expected naive, merkle or bls");
    return *s;
}

} // namespace

int main(int argc, char **argv)
{
    CLI::App app{"accept-bench: signature-scheme microbenchmarks, cost-model checks, end-to-end throughput and "
                 "adversarial simulation"};
    app.require_subcommand(1);
    app.fallthrough();

    std::string output = "csv";
    std::uint64_t seed = 1;
    app.add_option("--output", output, "Report format")->check(CLI::IsMember({"csv", "json"}))->capture_default_str();
    app.add_option("--seed", seed, "Seed for keys, workloads and schedules")->capture_default_str();

    // crypto
    auto *crypto = app.add_subcommand("crypto", "Per-operation costs of every scheme");
    crypto->footer("CSV columns: operation,median_ns,min_ns,max_ns,mad_ns,batches,iterations.\n"
                   "Leading '#' lines carry the cost summary, N* for --q, and crossovers derived from these costs.");
    bench::CryptoBenchOptions copts;
    double crypto_q = 7;
    std::string crypto_scheme;
    crypto->add_option("--iterations", copts.iterations, "Timed Ed25519 and hash operations (>= 1000)")->capture_default_str();
    crypto->add_option("--bls-iterations", copts.bls_iterations, "Timed BLS operations (>= 1000)")->capture_default_str();
    crypto->add_option("--batches", copts.batches, "Timing batches; the median is reported")->capture_default_str();
    crypto->add_option("--q", crypto_q, "Quorum used for the derived N*")->capture_default_str();
    crypto->add_option("--scheme", crypto_scheme, "Only print rows of this scheme (naive, merkle, bls)");

    // crossover
    auto *crossover = app.add_subcommand("crossover", "Validator counts beyond which BLS is cheapest per output");
    crossover->footer("CSV columns: quorum_model,bls_beats_naive,bls_beats_merkle.\n"
                      "'continuous' takes q = (2n+1)/3, 'integer' takes q = 2*floor((n-1)/3)+1.");
    std::string crossover_source = "reference";
    crossover->add_option("--costs", crossover_source, "reference (published timings) or measured (benchmarks this machine)")
        ->check(CLI::IsMember({"reference", "measured"}))
        ->capture_default_str();

    // merkle-sweep
    auto *sweep = app.add_subcommand("merkle-sweep", "Measured per-output merkle cost for tree sizes 1..max");
    sweep->footer("CSV columns: leaves,measured_ns_per_output,model_ns_per_output.");
    bench::SweepOptions sopts;
    sweep->add_option("--q", sopts.q, "Quorum size")->capture_default_str();
    sweep->add_option("--max-leaves", sopts.max_leaves, "Largest tree (power of two)")->capture_default_str();
    sweep->add_option("--outputs", sopts.outputs, "Outputs per measured point")->capture_default_str();
    sweep->add_option("--repetitions", sopts.repetitions, "Repetitions per point; the median is reported")
        ->capture_default_str();

    // e2e
    auto *e2e = app.add_subcommand("e2e", "In-process throughput with client load against every validator shard");
    e2e->footer("CSV columns: validators,shards,scheme,duration_s,confirmed,tx_per_second,cpu_utilization,"
                "sampled_records,conservation_ok.\nOne row per (validators, shards) combination.");
    std::vector<std::size_t> e2e_validators{4};
    std::vector<std::uint32_t> e2e_shards{1};
    std::string e2e_scheme = "naive";
    double e2e_duration = 60;
    std::size_t e2e_clients = 4;
    e2e->add_option("--validators", e2e_validators, "Validator counts")->capture_default_str();
    e2e->add_option("--shards", e2e_shards, "Shards per validator")->capture_default_str();
    e2e->add_option("--scheme", e2e_scheme, "naive, merkle or bls")->capture_default_str();
    e2e->add_option("--duration", e2e_duration, "Seconds per run")->capture_default_str();
    e2e->add_option("--clients-per-shard", e2e_clients, "Client threads per shard")->capture_default_str();

    // spentset
    auto *spent = app.add_subcommand("spentset", "Spent-set insert throughput against a global-lock map");
    spent->footer("CSV columns: threads,purpose_built_per_second,baseline_per_second,speedup,lost_inserts.");
    bench::SpentSetOptions popts;
    spent->add_option("--threads", popts.threads, "Thread counts")->capture_default_str();
    spent->add_option("--inserts", popts.inserts_per_thread, "Inserts per thread")->capture_default_str();
    spent->add_option("--buckets", popts.buckets, "Bucket count of the purpose-built set")->capture_default_str();
    spent->add_option("--repetitions", popts.repetitions, "Repetitions; the median is reported")->capture_default_str();

    // simulate
    auto *simulate = app.add_subcommand("simulate", "One seeded simnet run with audits");
    simulate->footer("Prints the audit outcome; --trace writes the JSON-lines trace.");
    std::size_t sim_validators = 4;
    std::string sim_scheme = "naive";
    std::string sim_workload = "double-spend";
    std::string sim_policy = "fair";
    std::size_t sim_byzantine = 0;
    std::string sim_trace;
    simulate->add_option("--validators", sim_validators, "Validator count")->capture_default_str();
    simulate->add_option("--scheme", sim_scheme, "naive, merkle or bls")->capture_default_str();
    simulate->add_option("--workload", sim_workload, "double-spend or payments")
        ->check(CLI::IsMember({"double-spend", "payments"}))
        ->capture_default_str();
    simulate->add_option("--policy", sim_policy, "fair or unrestricted")
        ->check(CLI::IsMember({"fair", "unrestricted"}))
        ->capture_default_str();
    simulate->add_option("--byzantine", sim_byzantine, "Sign-everything validators (at most f)")->capture_default_str();
    simulate->add_option("--trace", sim_trace, "Write the trace here");

    CLI11_PARSE(app, argc, argv);

    try {
        if (*crypto) {
            copts.seed = seed;
            auto r = bench::bench_crypto(copts);
            bench::BenchReport b = bench::to_report(r, crypto_q);
            if (!crypto_scheme.empty()) {
                const std::string prefix = std::string(to_string(scheme_from(crypto_scheme)));
                std::erase_if(b.rows, [&](const auto &row) { return row[0].rfind(prefix, 0) != 0; });
            }
            emit(b, output);
        } else if (*crossover) {
            if (crossover_source == "reference") {
                emit(bench::crossover_report(bench::CryptoCosts::reference(), "reference"), output);
            } else {
                bench::CryptoBenchOptions o;
                o.seed = seed;
                emit(bench::crossover_report(bench::bench_crypto(o).costs, "measured"), output);
            }
        } else if (*sweep) {
            sopts.seed = seed;
            emit(bench::to_report(bench::merkle_size_sweep(sopts)), output);
        } else if (*e2e) {
            std::vector<bench::E2eReport> runs;
            for (std::size_t n : e2e_validators)
                for (std::uint32_t s : e2e_shards) {
                    bench::E2eOptions o;
                    o.validators = n;
                    o.shards = s;
                    o.scheme = scheme_from(e2e_scheme);
                    o.duration = std::chrono::milliseconds(static_cast<long long>(e2e_duration * 1000));
                    o.clients_per_shard = e2e_clients;
                    o.seed = seed;
                    runs.push_back(bench::bench_e2e(o));
                }
            emit(bench::to_report(runs), output);
        } else if (*spent) {
            popts.seed = seed;
            const unsigned hw = bench::MachineInfo::detect().hardware_threads;
            for (unsigned t : popts.threads)
                if (t > hw)
                    std::cerr << "warning: " << t << " threads exceed the " << hw << " hardware threads available\n";
            emit(bench::to_report(bench::bench_spentset(popts)), output);
        } else if (*simulate) {
            const Scheme scheme = scheme_from(sim_scheme);
            const Committee committee = make_committee(sim_validators, seed, scheme == Scheme::bls);
            sim::NetworkOptions net;
            net.scheme = scheme;
            net.byzantine = sim::ByzantineSpec::first(committee.validators.params(), sim_byzantine,
                                                      sim::ByzantineBehavior{.sign_everything = true});
            const auto policy = sim_policy == "fair" ? sim::SchedulePolicy::fair() : sim::SchedulePolicy::unrestricted();
            sim::ScenarioOutcome out;
            if (sim_workload == "double-spend") {
                sim::DoubleSpendScenario s;
                s.network = net;
                s.policy = policy;
                s.seed = seed;
                out = sim::run_double_spend(committee, s);
            } else {
                sim::PaymentScenario s;
                s.network = net;
                s.policy = policy;
                s.seed = seed;
                out = sim::run_payments(committee, s);
            }
            bench::BenchReport b;
            b.name = "simulate";
            b.machine = bench::MachineInfo::detect();
            b.notes.emplace_back("policy", out.trace.policy);
            b.columns = {"seed", "steps", "complete", "requested", "confirmed", "no_double_spend", "conservation"};
            b.rows.push_back({std::to_string(seed), std::to_string(out.trace.steps), out.trace.complete ? "true" : "false",
                              std::to_string(out.requested), std::to_string(out.confirmed),
                              out.double_spend.ok ? "true" : "false", out.conservation.ok ? "true" : "false"});
            emit(b, output);
            if (!sim_trace.empty()) {
                std::ofstream f(sim_trace);
                f << out.trace.to_jsonl();
            }
            if (!out.double_spend.ok || !out.conservation.ok) {
                std::cerr << out.double_spend.detail << out.conservation.detail << "\n";
                return 2;
            }
        }
    } catch (const std::exception &e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
    return 0;
}
