//  Copyright 2026 The opsched Authors
//
//  Licensed under the Apache License, Version 2.0 (the "License");
//  you may not use this file except in compliance with the License.
//  You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
//  Unless required by applicable law or agreed to in writing, software
//  distributed under the License is distributed on an "AS IS" BASIS,
//  WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
//  See the License for the specific language governing permissions and
//  limitations under the License.

#include "commands.hpp"

#include <cmath>
#include <filesystem>
#include <optional>
#include <ostream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "opsched/opsched.hpp"

namespace opsched::cli {

namespace {

using io::json;
namespace fs = std::filesystem;

std::string ms(double seconds) { return io::fmt(seconds * 1000.0); }

std::string ms(const Sojourn& s) { return s.is_unstable() ? "UNSTABLE" : ms(s.seconds()) + " ms"; }

json manifest(const std::string& command, json inputs, json parameters)
{
    return {{"command", command}, {"inputs", std::move(inputs)}, {"parameters", std::move(parameters)},
            {"version", kVersion}};
}

void write_report(const std::string& out_dir, const std::string& name, const json& manifest_json, json body)
{
    if (out_dir.empty())
        return;
    json doc = {{"manifest", manifest_json}};
    for (auto& [k, v] : body.items())
        doc[k] = v;
    io::write_file(fs::path(out_dir) / name, doc.dump(2) + "\n");
}

std::string operator_name(const std::optional<Topology>& topo, std::size_t i)
{
    if (topo && i < topo->size())
        return topo->op(i).name;
    return "op" + std::to_string(i);
}

// Topology or measured rates, whichever the command was given.
struct RateInput {
    std::optional<Topology> topology;
    RateProfile rates;
};

RateInput load_rates(const std::string& topology_file, const std::string& rates_file)
{
    RateInput in;
    if (!topology_file.empty()) {
        in.topology = io::load_topology(topology_file);
        auto rep = validate_topology(*in.topology);
        if (!rep.ok())
            throw io::InputError(topology_file + ": " + rep.to_string());
    }
    if (!rates_file.empty()) {
        in.rates = io::rates_from_json(io::load_json(rates_file), rates_file);
        if (in.topology && in.rates.size() != in.topology->size())
            throw io::InputError(rates_file + ": has " + std::to_string(in.rates.size()) +
                                 " operators but the topology has " + std::to_string(in.topology->size()));
    } else if (in.topology) {
        in.rates = solve_traffic(*in.topology);
    } else {
        throw io::InputError("one of --topology or --rates is required");
    }
    return in;
}

json rate_inputs(const std::string& topology_file, const std::string& rates_file)
{
    json j = json::object();
    if (!topology_file.empty())
        j["topology"] = topology_file;
    if (!rates_file.empty())
        j["rates"] = rates_file;
    return j;
}

void print_estimate(std::ostream& out, const std::optional<Topology>& topo, const RateProfile& rates,
                    const Allocation& alloc, const SojournEstimate& est)
{
    for (std::size_t i = 0; i < alloc.size(); ++i)
        out << "operator " << operator_name(topo, i) << ": k = " << alloc[i] << ", lambda = "
            << io::fmt(rates.lambdas[i]) << "/s, mu = " << io::fmt(rates.mus[i])
            << "/s, E[T_i] = " << ms(est.per_operator[i]) << "\n";
    out << "total E[T] = " << ms(est.total) << "\n";
}

// --- predict ---------------------------------------------------------------

struct PredictArgs {
    std::string topology, rates, allocation, out;
};

int cmd_predict(const PredictArgs& a, std::ostream& out)
{
    auto in = load_rates(a.topology, a.rates);
    auto alloc = io::parse_allocation(a.allocation);
    if (alloc.size() != in.rates.size())
        throw io::InputError("allocation has " + std::to_string(alloc.size()) + " counts but the network has " +
                             std::to_string(in.rates.size()) + " operators");
    auto est = network_sojourn(in.rates, alloc);
    print_estimate(out, in.topology, in.rates, alloc, est);
    for (std::size_t i = 0; i < alloc.size(); ++i)
        if (est.per_operator[i].is_unstable() && in.rates.lambdas[i] > 0.0)
            out << "UNSTABLE at operator " << operator_name(in.topology, i) << "\n";
    out << "stable: " << (est.stable ? "yes" : "no") << "\n";

    auto m = manifest("predict", rate_inputs(a.topology, a.rates), {{"allocation", alloc.to_string()}});
    write_report(a.out, "predict.json", m,
                 {{"rates", io::rates_to_json(in.rates)}, {"estimate", io::estimate_to_json(est)}});
    return kExitOk;
}

// --- plan ------------------------------------------------------------------

struct PlanArgs {
    std::string topology, rates, out;
    std::int64_t kmax = 0;
    bool verify = false;
};

int cmd_plan(const PlanArgs& a, std::ostream& out)
{
    auto in = load_rates(a.topology, a.rates);
    Plan plan = assign_processors(in.rates, a.kmax);
    auto m = manifest("plan", rate_inputs(a.topology, a.rates), {{"kmax", a.kmax}, {"verify", a.verify}});
    json body = {{"plan", io::plan_to_json(plan)}};
    if (!plan.feasible) {
        out << "insufficient processors: K_max = " << a.kmax
            << " is not sufficient for the application; the stable minimum needs " << plan.processors_used
            << " (deficit " << plan.deficit << ")\n";
        write_report(a.out, "plan.json", m, body);
        return kExitInfeasible;
    }
    out << "k = " << plan.allocation.to_string() << "\n";
    out << "processors = " << plan.processors_used << "\n";
    out << "E[T] = " << ms(plan.estimate.total) << "\n";
    for (const auto& s : plan.trace)
        out << "step " << s.step << ": +1 to " << operator_name(in.topology, s.op) << " (delta = "
            << (s.delta == kMaxBenefit ? std::string("MAX") : io::fmt(s.delta)) << ")\n";

    int rc = kExitOk;
    if (a.verify) {
        Plan brute = brute_force_optimal(in.rates, a.kmax);
        const double g = plan.estimate.total.seconds();
        const double b = brute.estimate.total.seconds();
        const bool pass = std::abs(g - b) <= 1e-9 * std::abs(b);
        out << "brute force k = " << brute.allocation.to_string() << ", E[T] = " << ms(brute.estimate.total) << "\n";
        out << "greedy = brute force: " << (pass ? "PASS" : "FAIL") << "\n";
        body["verify"] = {{"brute_force", io::plan_to_json(brute)}, {"pass", pass}};
        if (!pass)
            rc = kExitError;
    }
    write_report(a.out, "plan.json", m, body);
    return rc;
}

// --- provision -------------------------------------------------------------

struct ProvisionArgs {
    std::string topology, rates, out;
    double tmax_ms = 0.0;
    std::optional<std::int64_t> kcap;
};

int cmd_provision(const ProvisionArgs& a, std::ostream& out)
{
    auto in = load_rates(a.topology, a.rates);
    json params = {{"tmax_ms", a.tmax_ms}};
    if (a.kcap)
        params["kcap"] = *a.kcap;
    auto m = manifest("provision", rate_inputs(a.topology, a.rates), params);
    Plan plan;
    try {
        plan = provision_min_resources(in.rates, a.tmax_ms / 1000.0, a.kcap);
    } catch (const UnreachableTargetError& e) {
        out << "unreachable: lower bound >= " << ms(e.bound()) << " ms (T_max = " << io::fmt(a.tmax_ms)
            << " ms)\n";
        write_report(a.out, "provision.json", m, {{"unreachable", true}, {"lower_bound_ms", e.bound() * 1000.0}});
        return kExitInfeasible;
    }
    json body = {{"plan", io::plan_to_json(plan)}};
    if (!plan.feasible) {
        out << "infeasible: processor cap " << plan.processors_used << " reached with E[T] = "
            << ms(plan.estimate.total) << "\n";
        write_report(a.out, "provision.json", m, body);
        return kExitInfeasible;
    }
    out << plan.processors_used << " processors, k = " << plan.allocation.to_string() << "\n";
    out << "E[T] = " << ms(plan.estimate.total) << " (T_max = " << io::fmt(a.tmax_ms) << " ms)\n";
    write_report(a.out, "provision.json", m, body);
    return kExitOk;
}

// --- simulate / sweep -------------------------------------------------------

struct SimArgs {
    std::string config, out, allocations;
    std::optional<std::uint64_t> seed, horizon, warmup;
};

SimConfig load_sim(const SimArgs& a)
{
    SimConfig cfg = io::load_sim_config(a.config);
    if (a.seed)
        cfg.seed = *a.seed;
    if (a.horizon) {
        cfg.horizon = *a.horizon;
        cfg.warmup.reset();
    }
    if (a.warmup)
        cfg.warmup = *a.warmup;
    return cfg;
}

json sim_params(const SimConfig& cfg)
{
    return {{"seed", cfg.seed}, {"horizon", cfg.horizon}, {"warmup", cfg.effective_warmup()}};
}

void print_sim(std::ostream& out, const SimulationReport& r)
{
    out << "completed = " << r.completed << "\n";
    out << "mean sojourn = " << ms(r.mean_sojourn) << " ms (stddev " << ms(r.stddev_sojourn) << " ms)\n";
    out << "p50 / p95 / p99 = " << ms(r.p50) << " / " << ms(r.p95) << " / " << ms(r.p99) << " ms\n";
    for (const auto& o : r.per_operator)
        out << "operator " << o.name << ": k = " << o.processors << ", utilization = " << io::fmt(o.utilization)
            << ", lambda = " << io::fmt(o.observed_lambda) << "/s, mu = " << io::fmt(o.observed_mu)
            << "/s, mean wait = " << ms(o.mean_queue_wait) << " ms\n";
    if (r.model_prediction)
        out << "model estimate = " << ms(r.model_prediction->total) << "\n";
    if (r.relative_error)
        out << "relative error = " << io::fmt(*r.relative_error) << "\n";
}

int cmd_simulate(const SimArgs& a, std::ostream& out)
{
    SimConfig cfg = load_sim(a);
    auto m = manifest("simulate", {{"config", a.config}}, sim_params(cfg));
    SimulationReport r;
    try {
        r = compare_with_model(cfg);
    } catch (const SimulationUnstableError& e) {
        out << "UNSTABLE: " << e.what() << "\n";
        write_report(a.out, "simulate.json", m, {{"unstable", true}, {"detail", e.what()}});
        return kExitInfeasible;
    }
    print_sim(out, r);
    write_report(a.out, "simulate.json", m, {{"report", io::sim_report_to_json(r)}});
    if (!a.out.empty())
        io::write_file(fs::path(a.out) / "simulate.csv",
                       std::string(io::kSimCsvHeader) + "\n" + io::sim_csv_row(cfg.allocation, r) + "\n");
    return kExitOk;
}

int cmd_sweep(const SimArgs& a, std::ostream& out)
{
    SimConfig base = load_sim(a);
    auto allocations = io::parse_allocation_list(a.allocations);
    json params = sim_params(base);
    params["allocations"] = a.allocations;
    auto m = manifest("sweep", {{"config", a.config}}, params);

    std::string csv = std::string(io::kSimCsvHeader) + "\n";
    json rows = json::array();
    std::vector<double> measured, predicted;
    const auto rates = solve_traffic(base.topology);
    for (const auto& alloc : allocations) {
        if (alloc.size() != base.topology.size())
            throw io::InputError("allocation " + alloc.to_string() + " has " + std::to_string(alloc.size()) +
                                 " counts but the topology has " + std::to_string(base.topology.size()) +
                                 " operators");
        SimConfig cfg = base;
        cfg.allocation = alloc;
        if (network_sojourn(rates, alloc).total.is_unstable()) {
            csv += alloc.to_string() + ",0,UNSTABLE,,,,,UNSTABLE,\n";
            rows.push_back({{"allocation", alloc.to_string()}, {"unstable", true}});
            continue;
        }
        auto r = compare_with_model(cfg);
        csv += io::sim_csv_row(alloc, r) + "\n";
        json row = io::sim_report_to_json(r);
        row["allocation"] = alloc.to_string();
        rows.push_back(row);
        if (r.model_prediction && r.model_prediction->total.is_finite()) {
            measured.push_back(r.mean_sojourn);
            predicted.push_back(r.model_prediction->total.seconds());
        }
    }
    out << csv;
    json body = {{"rows", rows}};
    if (measured.size() >= 2) {
        double rho = spearman(predicted, measured);
        out << "spearman(model, measured) = " << io::fmt(rho) << "\n";
        body["spearman"] = rho;
    }
    write_report(a.out, "sweep.json", m, body);
    if (!a.out.empty())
        io::write_file(fs::path(a.out) / "sweep.csv", csv);
    return kExitOk;
}

// --- loop ------------------------------------------------------------------

struct LoopArgs {
    std::string topology, control, config, out, smooth;
    std::optional<std::uint64_t> seed;
};

int cmd_loop(const LoopArgs& a, std::ostream& out)
{
    SimConfig cfg = io::load_sim_config(a.config);
    if (!a.topology.empty()) {
        cfg.topology = io::load_topology(a.topology);
        if (cfg.allocation.size() != cfg.topology.size())
            throw io::InputError(a.config + ": allocation does not match the topology in " + a.topology);
    }
    if (a.seed)
        cfg.seed = *a.seed;
    auto doc = io::control_from_json(io::load_json(a.control), a.control);
    if (!a.smooth.empty())
        doc.schedule.smoothing = io::parse_smoothing(a.smooth);

    json inputs = {{"control", a.control}, {"config", a.config}};
    if (!a.topology.empty())
        inputs["topology"] = a.topology;
    json params = {{"seed", cfg.seed},
                   {"intervals", doc.schedule.intervals},
                   {"interval_seconds", doc.schedule.sampling.pull_interval},
                   {"sample_every", doc.schedule.sampling.sample_every},
                   {"smoothing", io::smoothing_to_string(doc.schedule.smoothing)},
                   {"threshold", doc.control.threshold},
                   {"cooldown", doc.control.cooldown}};
    if (const auto* cap = std::get_if<CapMode>(&doc.control.mode))
        params["kmax"] = cap->k_max;
    else
        params["tmax_ms"] = std::get<TargetMode>(doc.control.mode).t_max * 1000.0;
    auto m = manifest("loop", inputs, params);

    LoopResult result = run_control_loop(cfg, doc.control, doc.schedule);

    std::string csv = "interval,time_end_s,allocation,processors,completed,measured_sojourn_s,smoothed_sojourn_s,act,"
                      "reason,proposed\n";
    std::string log, metrics;
    for (const auto& rec : result.intervals) {
        metrics += io::metric_log_lines(rec.measurement);
        csv += std::to_string(rec.interval) + "," + io::fmt(rec.time_end) + "," + rec.allocation.to_string() + "," +
               std::to_string(rec.allocation.total()) + "," + std::to_string(rec.completed) + "," +
               io::fmt(rec.measured_sojourn) + "," + io::fmt(rec.smoothed.mean_sojourn) + "," +
               (rec.decision.act ? "1" : "0") + "," + std::string(to_string(rec.decision.reason)) + "," +
               rec.decision.proposed.to_string() + "\n";
        json entry = io::decision_to_json(rec.decision);
        entry["timestamp_s"] = rec.time_end;
        log += entry.dump() + "\n";
        out << "interval " << rec.interval << ": k = " << rec.allocation.to_string() << ", measured "
            << ms(rec.measured_sojourn) << " ms, " << to_string(rec.decision.reason)
            << (rec.decision.act ? " -> " + rec.decision.proposed.to_string() : std::string()) << "\n";
    }
    out << "re-balances: " << result.rebalances << "\n";
    out << "final allocation: " << result.final_allocation.to_string() << "\n";
    write_report(a.out, "loop.json", m,
                 {{"rebalances", result.rebalances}, {"final_allocation", result.final_allocation.to_string()}});
    if (!a.out.empty()) {
        io::write_file(fs::path(a.out) / "intervals.csv", csv);
        io::write_file(fs::path(a.out) / "decisions.ndjson", log);
        io::write_file(fs::path(a.out) / "metrics.ndjson", metrics);
    }
    return kExitOk;
}

// --- replay ----------------------------------------------------------------

struct ReplayArgs {
    std::string log, topology, out, smooth = "window=3";
    std::optional<std::int64_t> kmax, kcap;
    std::optional<double> tmax_ms;
    std::optional<std::uint64_t> operators;
    std::uint64_t sample_every = 1;
};

int cmd_replay(const ReplayArgs& a, std::ostream& out)
{
    if (a.kmax.has_value() == a.tmax_ms.has_value())
        throw io::InputError("exactly one of --kmax or --tmax-ms is required");
    auto intervals = io::parse_metric_log(io::read_file(a.log), a.log);
    std::optional<Topology> topo;
    std::size_t n = 0;
    if (!a.topology.empty()) {
        topo = io::load_topology(a.topology);
        n = topo->size();
    } else if (a.operators) {
        n = static_cast<std::size_t>(*a.operators);
    } else {
        for (const auto& iv : intervals)
            for (const auto& s : iv.samples)
                n = std::max(n, s.operator_id + 1);
    }
    if (n == 0)
        throw io::InputError(a.log + ": no operator records and no operator count given");
    auto scheme = io::parse_smoothing(a.smooth);

    json params = {{"smoothing", a.smooth}, {"sample_every", a.sample_every}, {"operators", n}};
    if (a.kmax)
        params["kmax"] = *a.kmax;
    if (a.tmax_ms)
        params["tmax_ms"] = *a.tmax_ms;
    json inputs = {{"log", a.log}};
    if (!a.topology.empty())
        inputs["topology"] = a.topology;
    auto m = manifest("replay", inputs, params);

    SamplingConfig sampling;
    sampling.sample_every = a.sample_every;
    sampling.pull_interval = 1.0;
    OperatorAggregator agg(n, sampling);
    std::optional<SmoothedMetrics> sm;
    json rows = json::array();
    int rc = kExitOk;
    for (const auto& iv : intervals) {
        auto raw = agg.aggregate(iv.samples, iv.global);
        sm = smooth(sm, raw, scheme);
        json row = {{"interval", sm->interval}};
        out << "interval " << sm->interval << ": ";
        if (sm->stale(kMaxCarryForward)) {
            out << "stale metrics, planning paused\n";
            row["status"] = "stale";
            rows.push_back(row);
            continue;
        }
        RateProfile rates;
        try {
            rates = measured_profile(*sm);
        } catch (const MeasurementError& e) {
            out << e.what() << "\n";
            row["status"] = "measurement_error";
            row["detail"] = e.what();
            rows.push_back(row);
            continue;
        }
        row["rates"] = io::rates_to_json(rates);
        if (a.kmax) {
            Plan p = assign_processors(rates, *a.kmax);
            row["plan"] = io::plan_to_json(p);
            if (!p.feasible) {
                out << "insufficient processors (deficit " << p.deficit << ")\n";
                rc = kExitInfeasible;
            } else {
                out << "k = " << p.allocation.to_string() << ", E[T] = " << ms(p.estimate.total) << "\n";
            }
        } else {
            try {
                Plan p = provision_min_resources(rates, *a.tmax_ms / 1000.0, a.kcap);
                row["plan"] = io::plan_to_json(p);
                if (!p.feasible) {
                    out << "infeasible within processor cap\n";
                    rc = kExitInfeasible;
                } else {
                    out << p.processors_used << " processors, k = " << p.allocation.to_string()
                        << ", E[T] = " << ms(p.estimate.total) << "\n";
                }
            } catch (const UnreachableTargetError& e) {
                out << "unreachable: lower bound >= " << ms(e.bound()) << " ms\n";
                row["unreachable"] = true;
                rc = kExitInfeasible;
            }
        }
        rows.push_back(row);
    }
    write_report(a.out, "replay.json", m, {{"intervals", rows}});
    return rc;
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err)
{
    CLI::App app{"Operator-network latency model, processor planner and simulator"};
    app.require_subcommand(1);
    app.set_version_flag("--version", kVersion);

    PredictArgs pa;
    auto* predict = app.add_subcommand("predict", "Expected sojourn of an allocation");
    predict->add_option("--topology", pa.topology, "Topology JSON file")->required();
    predict->add_option("--allocation", pa.allocation, "Processor counts, e.g. 6:2")->required();
    predict->add_option("--rates", pa.rates, "Measured rates JSON (overrides the traffic equations)");
    predict->add_option("--out", pa.out, "Output directory");

    PlanArgs pl;
    auto* plan = app.add_subcommand("plan", "Optimal allocation under a processor cap");
    plan->add_option("--topology", pl.topology, "Topology JSON file");
    plan->add_option("--rates", pl.rates, "Measured rates JSON");
    plan->add_option("--kmax", pl.kmax, "Processor cap")->required()->check(CLI::PositiveNumber);
    plan->add_flag("--verify", pl.verify, "Cross-check against exhaustive enumeration");
    plan->add_option("--out", pl.out, "Output directory");

    ProvisionArgs pv;
    std::int64_t kcap = 0;
    auto* provision = app.add_subcommand("provision", "Fewest processors meeting a latency target");
    provision->add_option("--topology", pv.topology, "Topology JSON file");
    provision->add_option("--rates", pv.rates, "Measured rates JSON");
    provision->add_option("--tmax-ms", pv.tmax_ms, "Target mean sojourn in milliseconds")
        ->required()
        ->check(CLI::PositiveNumber);
    auto* kcap_opt = provision->add_option("--kcap", kcap, "Processor safety cap");
    provision->add_option("--out", pv.out, "Output directory");

    SimArgs sa;
    std::uint64_t seed = 0, horizon = 0, warmup = 0;
    auto* simulate = app.add_subcommand("simulate", "Simulate and compare with the model");
    simulate->add_option("--config", sa.config, "Simulation config JSON")->required();
    auto* sim_seed = simulate->add_option("--seed", seed, "RNG seed");
    auto* sim_horizon = simulate->add_option("--horizon", horizon, "External tuples to complete");
    auto* sim_warmup = simulate->add_option("--warmup", warmup, "External tuples discarded");
    simulate->add_option("--out", sa.out, "Output directory");

    SimArgs sw;
    std::uint64_t sw_seed = 0, sw_horizon = 0, sw_warmup = 0;
    auto* sweep = app.add_subcommand("sweep", "Simulate several allocations");
    sweep->add_option("--config", sw.config, "Simulation config JSON")->required();
    sweep->add_option("--allocations", sw.allocations, "Allocations, e.g. 10:11:1,8:8:1")->required();
    auto* sw_seed_opt = sweep->add_option("--seed", sw_seed, "RNG seed");
    auto* sw_horizon_opt = sweep->add_option("--horizon", sw_horizon, "External tuples to complete");
    auto* sw_warmup_opt = sweep->add_option("--warmup", sw_warmup, "External tuples discarded");
    sweep->add_option("--out", sw.out, "Output directory");

    LoopArgs la;
    std::uint64_t loop_seed = 0;
    auto* loop = app.add_subcommand("loop", "Closed-loop control against the simulator");
    loop->add_option("--topology", la.topology, "Topology JSON (overrides the config's topology)");
    loop->add_option("--control", la.control, "Control config JSON")->required();
    loop->add_option("--config", la.config, "Simulation config JSON")->required();
    auto* loop_seed_opt = loop->add_option("--seed", loop_seed, "RNG seed");
    loop->add_option("--smooth", la.smooth, "alpha=<a> or window=<w>");
    loop->add_option("--out", la.out, "Output directory");

    ReplayArgs ra;
    std::int64_t r_kmax = 0, r_kcap = 0;
    double r_tmax = 0.0;
    std::uint64_t r_ops = 0;
    auto* replay = app.add_subcommand("replay", "Plan from a recorded metric log");
    replay->add_option("--log", ra.log, "Newline-delimited metric log")->required();
    auto* r_kmax_opt = replay->add_option("--kmax", r_kmax, "Processor cap")->check(CLI::PositiveNumber);
    auto* r_tmax_opt = replay->add_option("--tmax-ms", r_tmax, "Target in milliseconds")->check(CLI::PositiveNumber);
    auto* r_kcap_opt = replay->add_option("--kcap", r_kcap, "Processor safety cap for --tmax-ms");
    replay->add_option("--topology", ra.topology, "Topology JSON (operator names and count)");
    auto* r_ops_opt = replay->add_option("--operators", r_ops, "Operator count");
    replay->add_option("--sample-every", ra.sample_every, "Sampling period N_m")->check(CLI::PositiveNumber);
    replay->add_option("--smooth", ra.smooth, "alpha=<a> or window=<w>");
    replay->add_option("--out", ra.out, "Output directory");

    std::vector<std::string> rev(args.rbegin(), args.rend() - (args.empty() ? 0 : 1));
    try {
        app.parse(rev);
    } catch (const CLI::ParseError& e) {
        int code = app.exit(e, out, err);
        return code == 0 ? kExitOk : kExitError;
    }

    try {
        if (*predict)
            return cmd_predict(pa, out);
        if (*plan) {
            if (pl.topology.empty() == pl.rates.empty())
                throw io::InputError("exactly one of --topology or --rates is required");
            return cmd_plan(pl, out);
        }
        if (*provision) {
            if (pv.topology.empty() == pv.rates.empty())
                throw io::InputError("exactly one of --topology or --rates is required");
            if (*kcap_opt)
                pv.kcap = kcap;
            return cmd_provision(pv, out);
        }
        if (*simulate) {
            if (*sim_seed)
                sa.seed = seed;
            if (*sim_horizon)
                sa.horizon = horizon;
            if (*sim_warmup)
                sa.warmup = warmup;
            return cmd_simulate(sa, out);
        }
        if (*sweep) {
            if (*sw_seed_opt)
                sw.seed = sw_seed;
            if (*sw_horizon_opt)
                sw.horizon = sw_horizon;
            if (*sw_warmup_opt)
                sw.warmup = sw_warmup;
            return cmd_sweep(sw, out);
        }
        if (*loop) {
            if (*loop_seed_opt)
                la.seed = loop_seed;
            return cmd_loop(la, out);
        }
        if (*replay) {
            if (*r_kmax_opt)
                ra.kmax = r_kmax;
            if (*r_tmax_opt)
                ra.tmax_ms = r_tmax;
            if (*r_kcap_opt)
                ra.kcap = r_kcap;
            if (*r_ops_opt)
                ra.operators = r_ops;
            return cmd_replay(ra, out);
        }
    } catch (const io::InputError& e) {
        err << "error: " << e.what() << "\n";
        return kExitError;
    } catch (const std::exception& e) {
        err << "error: " << e.what() << "\n";
        return kExitError;
    }
    return kExitError;
}

}  // namespace opsched::cli
