// SPDX-License-Identifier: Apache-2.0
#include <accept/bench/bench.hpp>

#include <json.hpp>

#include <charconv>

namespace accept::bench {

std::string format_double(double v)
{
    char buf[64];
    const auto res = std::to_chars(buf, buf + sizeof buf, v);
    return std::string(buf, res.ptr);
}

namespace {

std::string csv_field(const std::string &s)
{
    if (s.find_first_of(",\"\n") == std::string::npos)
        return s;
    std::string out = "\"";
    for (char c : s) {
        if (c == '"')
            out += '"';
        out += c;
    }
    return out + "\"";
}

nlohmann::json json_value(const std::string &s)
{
    std::int64_t i = 0;
    const auto ires = std::from_chars(s.data(), s.data() + s.size(), i);
    if (!s.empty() && ires.ec == std::errc{} && ires.ptr == s.data() + s.size())
        return i;
    double d = 0;
    const auto res = std::from_chars(s.data(), s.data() + s.size(), d);
    if (!s.empty() && res.ec == std::errc{} && res.ptr == s.data() + s.size())
        return d;
    if (s == "true" || s == "false")
        return s == "true";
    return s;
}

std::string str(std::size_t v)
{
    return std::to_string(v);
}

std::string str(double v)
{
    return format_double(v);
}

std::string str(bool v)
{
    return v ? "true" : "false";
}

} // namespace

std::string BenchReport::to_csv() const
{
    std::string out;
    out += "# bench: " + name + "\n";
    out += "# cpu: " + machine.cpu_model + "\n";
    out += "# hardware_threads: " + std::to_string(machine.hardware_threads) + "\n";
    out += "# compiler: " + machine.compiler + "\n";
    for (const auto &[k, v] : notes)
        out += "# " + k + ": " + v + "\n";
    for (std::size_t i = 0; i < columns.size(); ++i)
        out += (i ? "," : "") + csv_field(columns[i]);
    out += '\n';
    for (const auto &row : rows) {
        for (std::size_t i = 0; i < row.size(); ++i)
            out += (i ? "," : "") + csv_field(row[i]);
        out += '\n';
    }
    return out;
}

std::string BenchReport::to_json() const
{
    nlohmann::ordered_json j;
    j["bench"] = name;
    j["machine"] = {{"cpu", machine.cpu_model}, {"hardware_threads", machine.hardware_threads}, {"compiler", machine.compiler}};
    nlohmann::ordered_json n = nlohmann::ordered_json::object();
    for (const auto &[k, v] : notes)
        n[k] = json_value(v);
    j["derived"] = std::move(n);
    nlohmann::ordered_json rs = nlohmann::ordered_json::array();
    for (const auto &row : rows) {
        nlohmann::ordered_json r = nlohmann::ordered_json::object();
        for (std::size_t i = 0; i < columns.size() && i < row.size(); ++i)
            r[columns[i]] = json_value(row[i]);
        rs.push_back(std::move(r));
    }
    j["rows"] = std::move(rs);
    return j.dump(2) + "\n";
}

namespace {

void add_costs(BenchReport &b, const CryptoCosts &c)
{
    b.notes.emplace_back("c_h_ns", str(c.hash));
    b.notes.emplace_back("naive_sign_ns", str(c.naive_sign));
    b.notes.emplace_back("naive_verify_ns", str(c.naive_verify));
    b.notes.emplace_back("naive_verify_batch64_ns", str(c.naive_verify_batch64));
    b.notes.emplace_back("merkle_sign_ns", str(c.merkle_sign));
    b.notes.emplace_back("merkle_verify_uncached_ns", str(c.merkle_verify_uncached));
    b.notes.emplace_back("merkle_verify_cached_ns", str(c.merkle_verify_cached));
    b.notes.emplace_back("bls_sign_ns", str(c.bls_sign));
    b.notes.emplace_back("bls_verify_ns", str(c.bls_verify));
}

void add_crossovers(BenchReport &b, const CryptoCosts &c)
{
    for (QuorumModel m : {QuorumModel::continuous, QuorumModel::integer}) {
        const Crossovers x = crossover_validators(c, m);
        b.notes.emplace_back("crossover_naive_" + std::string(to_string(m)), str(x.bls_beats_naive));
        b.notes.emplace_back("crossover_merkle_" + std::string(to_string(m)), str(x.bls_beats_merkle));
    }
}

} // namespace

BenchReport to_report(const CryptoReport &r, double q)
{
    BenchReport b;
    b.name = "crypto";
    b.machine = r.machine;
    b.notes.emplace_back("note", "absolute reference timings are not targets; compare ratios and orderings");
    add_costs(b, r.costs);
    b.notes.emplace_back("q", str(q));
    b.notes.emplace_back("n_star", str(optimal_leaves(q, r.costs.hash, r.costs.naive_sign, r.costs.naive_verify)));
    b.notes.emplace_back("ratio_naive_verify_over_merkle_cached", str(r.costs.naive_verify / r.costs.merkle_verify_cached));
    b.notes.emplace_back("ratio_naive_sign_over_merkle_sign", str(r.costs.naive_sign / r.costs.merkle_sign));
    b.notes.emplace_back("ratio_bls_verify_over_naive_verify", str(r.costs.bls_verify / r.costs.naive_verify));
    add_crossovers(b, r.costs);
    b.columns = {"operation", "median_ns", "min_ns", "max_ns", "mad_ns", "batches", "iterations"};
    for (const OpStats &s : r.ops)
        b.rows.push_back({s.name, str(s.median_ns), str(s.min_ns), str(s.max_ns), str(s.mad_ns), str(s.batches), str(s.iterations)});
    return b;
}

BenchReport to_report(const SweepReport &r)
{
    BenchReport b;
    b.name = "merkle-sweep";
    b.machine = r.machine;
    b.notes.emplace_back("q", str(r.q));
    b.notes.emplace_back("c_h_ns", str(r.c_h));
    b.notes.emplace_back("c_s_ns", str(r.c_s));
    b.notes.emplace_back("c_v_ns", str(r.c_v));
    b.notes.emplace_back("model_n_star", str(r.model_n_star));
    b.notes.emplace_back("model_optimum", str(r.model_optimum));
    b.notes.emplace_back("measured_optimum", str(r.measured_optimum));
    b.notes.emplace_back("within_one_power_of_two", str(r.within_one_power_of_two()));
    b.notes.emplace_back("model_unimodal", str(r.model_unimodal()));
    b.columns = {"leaves", "measured_ns_per_output", "model_ns_per_output"};
    for (const SweepPoint &p : r.points)
        b.rows.push_back({str(p.leaves), str(p.measured_ns), str(p.model_ns)});
    return b;
}

BenchReport to_report(const std::vector<E2eReport> &runs)
{
    BenchReport b;
    b.name = "e2e";
    if (!runs.empty())
        b.machine = runs.front().machine;
    else
        b.machine = MachineInfo::detect();
    b.notes.emplace_back("note", "absolute reference throughput is not a target; compare trends across shard and validator counts");
    b.columns = {"validators", "shards", "scheme", "duration_s", "confirmed", "tx_per_second", "cpu_utilization",
                 "sampled_records", "conservation_ok"};
    for (const E2eReport &r : runs)
        b.rows.push_back({str(r.options.validators), str(static_cast<std::size_t>(r.options.shards)),
                          std::string(to_string(r.options.scheme)), str(r.seconds), str(static_cast<std::size_t>(r.confirmed)),
                          str(r.tx_per_second), str(r.cpu_utilization), str(r.sampled_records), str(r.conservation_ok)});
    return b;
}

BenchReport to_report(const SpentSetReport &r)
{
    BenchReport b;
    b.name = "spentset";
    b.machine = r.machine;
    b.notes.emplace_back("inserts_per_thread", str(r.options.inserts_per_thread));
    b.notes.emplace_back("buckets", str(r.options.buckets));
    b.notes.emplace_back("repetitions", str(r.options.repetitions));
    b.columns = {"threads", "purpose_built_per_second", "baseline_per_second", "speedup", "lost_inserts"};
    for (const SpentSetPoint &p : r.points)
        b.rows.push_back({str(static_cast<std::size_t>(p.threads)), str(p.purpose_built_per_second), str(p.baseline_per_second),
                          str(p.speedup), str(p.lost_inserts)});
    return b;
}

BenchReport crossover_report(const CryptoCosts &costs, const std::string &source)
{
    BenchReport b;
    b.name = "crossover";
    b.machine = MachineInfo::detect();
    b.notes.emplace_back("source", source);
    add_costs(b, costs);
    b.notes.emplace_back("merkle_verify_average64_ns", str(costs.merkle_verify_average(64)));
    b.columns = {"quorum_model", "bls_beats_naive", "bls_beats_merkle"};
    for (QuorumModel m : {QuorumModel::continuous, QuorumModel::integer}) {
        const Crossovers x = crossover_validators(costs, m);
        b.rows.push_back({std::string(to_string(m)), str(x.bls_beats_naive), str(x.bls_beats_merkle)});
    }
    return b;
}

} // namespace accept::bench
