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

// JSON documents: topology, measured rates, simulation and control configs,
// newline-delimited metric logs, and the report/CSV writers. Input errors
// carry a line:column (syntax) or a JSON field path (schema).

#ifndef OPSCHED_IO_HPP
#define OPSCHED_IO_HPP

#include <cstdint>
#include <filesystem>
#include <fstream>
#include <iomanip>
#include <sstream>
#include <stdexcept>
#include <string>
#include <variant>
#include <vector>

#include <json.hpp>

#include "opsched/control.hpp"
#include "opsched/loop.hpp"
#include "opsched/metrics.hpp"
#include "opsched/planner.hpp"
#include "opsched/queueing.hpp"
#include "opsched/simengine.hpp"
#include "opsched/topology.hpp"

namespace opsched::io {

using json = nlohmann::ordered_json;

class InputError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

namespace detail {

inline std::pair<std::size_t, std::size_t> line_col(const std::string& text, std::size_t byte)
{
    std::size_t line = 1, col = 1;
    for (std::size_t i = 0; i < text.size() && i + 1 < byte; ++i) {
        if (text[i] == '\n') {
            ++line;
            col = 1;
        } else {
            ++col;
        }
    }
    return {line, col};
}

inline const json& field(const json& j, const std::string& name, const std::string& path)
{
    if (!j.is_object())
        throw InputError(path + ": expected an object");
    auto it = j.find(name);
    if (it == j.end())
        throw InputError(path + "." + name + ": missing required field");
    return *it;
}

inline double number(const json& j, const std::string& path)
{
    if (!j.is_number())
        throw InputError(path + ": expected a number, got " + std::string(j.type_name()));
    return j.get<double>();
}

inline std::int64_t integer(const json& j, const std::string& path)
{
    if (!j.is_number_integer())
        throw InputError(path + ": expected an integer, got " + std::string(j.type_name()));
    return j.get<std::int64_t>();
}

inline std::uint64_t unsigned_int(const json& j, const std::string& path)
{
    std::int64_t v = integer(j, path);
    if (v < 0)
        throw InputError(path + ": expected a non-negative integer");
    return static_cast<std::uint64_t>(v);
}

inline std::string string(const json& j, const std::string& path)
{
    if (!j.is_string())
        throw InputError(path + ": expected a string, got " + std::string(j.type_name()));
    return j.get<std::string>();
}

inline const json& array(const json& j, const std::string& path)
{
    if (!j.is_array())
        throw InputError(path + ": expected an array, got " + std::string(j.type_name()));
    return j;
}

inline std::vector<double> numbers(const json& j, const std::string& path)
{
    std::vector<double> out;
    const auto& a = array(j, path);
    for (std::size_t i = 0; i < a.size(); ++i)
        out.push_back(number(a[i], path + "[" + std::to_string(i) + "]"));
    return out;
}

inline json sojourn(const Sojourn& s)
{
    if (s.is_unstable())
        return "UNSTABLE";
    return s.seconds();
}

}  // namespace detail

inline std::string read_file(const std::string& path)
{
    std::ifstream in(path, std::ios::binary);
    if (!in)
        throw InputError(path + ": cannot open file");
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

inline void write_file(const std::filesystem::path& path, const std::string& content)
{
    if (path.has_parent_path())
        std::filesystem::create_directories(path.parent_path());
    std::ofstream out(path, std::ios::binary);
    if (!out)
        throw std::runtime_error(path.string() + ": cannot write file");
    out << content;
}

/// Parses JSON text; syntax errors are reported as source:line:column.
inline json parse(const std::string& text, const std::string& source)
{
    try {
        return json::parse(text);
    } catch (const json::parse_error& e) {
        auto [line, col] = detail::line_col(text, e.byte);
        std::string msg = e.what();
        auto pos = msg.find("; ");
        throw InputError(source + ":" + std::to_string(line) + ":" + std::to_string(col) + ": syntax error" +
                         (pos != std::string::npos ? ": " + msg.substr(pos + 2) : ""));
    }
}

inline json load_json(const std::string& path) { return parse(read_file(path), path); }

// --- topology --------------------------------------------------------------

/// Schema:
///   { "operators": [ {"name": str, "service_rate": number}, ... ],
///     "routing": [ [number x N] x N ],
///     "external_rates": [number x N] }
/// Shape errors are reported here; semantic violations (row sums, openness)
/// come from validate_topology.
inline Topology topology_from_json(const json& j, const std::string& path = "$")
{
    const auto& ops = detail::array(detail::field(j, "operators", path), path + ".operators");
    std::vector<OperatorSpec> specs;
    for (std::size_t i = 0; i < ops.size(); ++i) {
        const std::string p = path + ".operators[" + std::to_string(i) + "]";
        OperatorSpec s;
        s.id = i;
        if (ops[i].contains("name"))
            s.name = detail::string(ops[i]["name"], p + ".name");
        else
            s.name = "op" + std::to_string(i);
        s.service_rate = detail::number(detail::field(ops[i], "service_rate", p), p + ".service_rate");
        specs.push_back(std::move(s));
    }
    const std::size_t n = specs.size();
    const auto& routing = detail::array(detail::field(j, "routing", path), path + ".routing");
    if (routing.size() != n)
        throw InputError(path + ".routing: expected " + std::to_string(n) + " rows, got " +
                         std::to_string(routing.size()));
    std::vector<std::vector<double>> p(n);
    for (std::size_t r = 0; r < n; ++r) {
        const std::string rp = path + ".routing[" + std::to_string(r) + "]";
        p[r] = detail::numbers(routing[r], rp);
        if (p[r].size() != n)
            throw InputError(rp + ": row " + std::to_string(r) + " has " + std::to_string(p[r].size()) +
                             " entries, expected " + std::to_string(n));
    }
    auto ext = detail::numbers(detail::field(j, "external_rates", path), path + ".external_rates");
    if (ext.size() != n)
        throw InputError(path + ".external_rates: expected " + std::to_string(n) + " entries, got " +
                         std::to_string(ext.size()));
    return Topology(std::move(specs), std::move(p), std::move(ext));
}

inline json topology_to_json(const Topology& t)
{
    json ops = json::array();
    for (const auto& o : t.operators())
        ops.push_back({{"name", o.name}, {"service_rate", o.service_rate}});
    return {{"operators", ops}, {"routing", t.routing()}, {"external_rates", t.external_rates()}};
}

inline Topology load_topology(const std::string& path) { return topology_from_json(load_json(path), path); }

// --- rates -----------------------------------------------------------------

/// Schema: { "lambda0": number, "lambdas": [number], "mus": [number] }
inline RateProfile rates_from_json(const json& j, const std::string& path = "$")
{
    RateProfile r;
    r.lambda0 = detail::number(detail::field(j, "lambda0", path), path + ".lambda0");
    r.lambdas = detail::numbers(detail::field(j, "lambdas", path), path + ".lambdas");
    r.mus = detail::numbers(detail::field(j, "mus", path), path + ".mus");
    auto rep = validate_rate_profile(r);
    if (!rep.ok())
        throw InputError(path + ": " + rep.to_string());
    return r;
}

inline json rates_to_json(const RateProfile& r)
{
    return {{"lambda0", r.lambda0}, {"lambdas", r.lambdas}, {"mus", r.mus}};
}

// --- allocations -----------------------------------------------------------

/// Parses "6:2" or "6,2".
inline Allocation parse_allocation(const std::string& text)
{
    std::vector<std::int64_t> k;
    std::string cur;
    auto flush = [&] {
        if (cur.empty())
            throw InputError("allocation '" + text + "': empty count");
        std::size_t pos = 0;
        long long v = 0;
        try {
            v = std::stoll(cur, &pos);
        } catch (const std::exception&) {
            throw InputError("allocation '" + text + "': '" + cur + "' is not an integer");
        }
        if (pos != cur.size())
            throw InputError("allocation '" + text + "': '" + cur + "' is not an integer");
        if (v < 1)
            throw InputError("allocation '" + text + "': counts must be >= 1");
        k.push_back(v);
        cur.clear();
    };
    for (char c : text) {
        if (c == ':' || c == ',')
            flush();
        else if (c != ' ')
            cur += c;
    }
    flush();
    return Allocation(std::move(k));
}

/// Parses "a:b:c,d:e:f" into several allocations.
inline std::vector<Allocation> parse_allocation_list(const std::string& text)
{
    std::vector<Allocation> out;
    std::string cur;
    for (char c : text + ",") {
        if (c == ',') {
            if (!cur.empty())
                out.push_back(parse_allocation(cur));
            cur.clear();
        } else {
            cur += c;
        }
    }
    if (out.empty())
        throw InputError("allocation list is empty");
    return out;
}

inline Allocation allocation_from_json(const json& j, const std::string& path)
{
    const auto& a = detail::array(j, path);
    std::vector<std::int64_t> k;
    for (std::size_t i = 0; i < a.size(); ++i) {
        auto v = detail::integer(a[i], path + "[" + std::to_string(i) + "]");
        if (v < 1)
            throw InputError(path + "[" + std::to_string(i) + "]: processor counts must be >= 1");
        k.push_back(v);
    }
    return Allocation(std::move(k));
}

// --- smoothing -------------------------------------------------------------

/// "alpha=<a>" or "window=<w>".
inline SmoothingScheme parse_smoothing(const std::string& text)
{
    auto eq = text.find('=');
    if (eq == std::string::npos)
        throw InputError("smoothing '" + text + "': expected alpha=<a> or window=<w>");
    const std::string key = text.substr(0, eq);
    const std::string val = text.substr(eq + 1);
    try {
        std::size_t pos = 0;
        if (key == "alpha") {
            double a = std::stod(val, &pos);
            if (pos != val.size() || !(a >= 0.0 && a < 1.0))
                throw InputError("smoothing '" + text + "': alpha must lie in [0, 1)");
            return AlphaSmoothing{a};
        }
        if (key == "window") {
            long long w = std::stoll(val, &pos);
            if (pos != val.size() || w < 1)
                throw InputError("smoothing '" + text + "': window must be an integer >= 1");
            return WindowSmoothing{static_cast<std::size_t>(w)};
        }
    } catch (const InputError&) {
        throw;
    } catch (const std::exception&) {
        throw InputError("smoothing '" + text + "': malformed value");
    }
    throw InputError("smoothing '" + text + "': unknown scheme '" + key + "'");
}

inline std::string smoothing_to_string(const SmoothingScheme& s)
{
    if (const auto* a = std::get_if<AlphaSmoothing>(&s)) {
        std::ostringstream os;
        os << "alpha=" << a->alpha;
        return os.str();
    }
    return "window=" + std::to_string(std::get<WindowSmoothing>(s).w);
}

// --- simulation config -----------------------------------------------------

/// Schema (times in seconds):
///   { "topology": {...} | "topology_file": str,
///     "allocation": [int],
///     "service_distribution": {"kind": "exponential"|"uniform"|"deterministic", "lo", "hi"},
///     "arrival_process": {"kind": "poisson"|"uniform", "lo", "hi"},
///     "horizon": int, "warmup": int, "seed": int, "queue_cap": int,
///     "dispatch": "fifo"|"hash" }
/// Relative topology_file paths resolve against `base_dir`.
inline SimConfig sim_config_from_json(const json& j, const std::filesystem::path& base_dir = {},
                                      const std::string& path = "$")
{
    if (!j.is_object())
        throw InputError(path + ": expected an object");
    SimConfig c;
    if (j.contains("topology")) {
        c.topology = topology_from_json(j["topology"], path + ".topology");
    } else if (j.contains("topology_file")) {
        auto f = std::filesystem::path(detail::string(j["topology_file"], path + ".topology_file"));
        if (f.is_relative())
            f = base_dir / f;
        c.topology = load_topology(f.string());
    } else {
        throw InputError(path + ": one of 'topology' or 'topology_file' is required");
    }
    c.allocation = allocation_from_json(detail::field(j, "allocation", path), path + ".allocation");
    if (c.allocation.size() != c.topology.size())
        throw InputError(path + ".allocation: expected " + std::to_string(c.topology.size()) + " counts, got " +
                         std::to_string(c.allocation.size()));
    if (j.contains("service_distribution")) {
        const auto& s = j["service_distribution"];
        const std::string p = path + ".service_distribution";
        auto kind = detail::string(detail::field(s, "kind", p), p + ".kind");
        if (kind == "exponential")
            c.service.kind = ServiceDistribution::Kind::Exponential;
        else if (kind == "uniform")
            c.service.kind = ServiceDistribution::Kind::Uniform;
        else if (kind == "deterministic")
            c.service.kind = ServiceDistribution::Kind::Deterministic;
        else
            throw InputError(p + ".kind: unknown distribution '" + kind + "'");
        if (s.contains("lo"))
            c.service.lo = detail::number(s["lo"], p + ".lo");
        if (s.contains("hi"))
            c.service.hi = detail::number(s["hi"], p + ".hi");
    }
    if (j.contains("arrival_process")) {
        const auto& s = j["arrival_process"];
        const std::string p = path + ".arrival_process";
        auto kind = detail::string(detail::field(s, "kind", p), p + ".kind");
        if (kind == "poisson")
            c.arrivals.kind = ArrivalProcess::Kind::Poisson;
        else if (kind == "uniform")
            c.arrivals.kind = ArrivalProcess::Kind::UniformInterarrival;
        else
            throw InputError(p + ".kind: unknown arrival process '" + kind + "'");
        if (s.contains("lo"))
            c.arrivals.lo = detail::number(s["lo"], p + ".lo");
        if (s.contains("hi"))
            c.arrivals.hi = detail::number(s["hi"], p + ".hi");
    }
    if (j.contains("horizon"))
        c.horizon = detail::unsigned_int(j["horizon"], path + ".horizon");
    if (j.contains("warmup"))
        c.warmup = detail::unsigned_int(j["warmup"], path + ".warmup");
    if (j.contains("seed"))
        c.seed = detail::unsigned_int(j["seed"], path + ".seed");
    if (j.contains("queue_cap"))
        c.queue_cap = detail::unsigned_int(j["queue_cap"], path + ".queue_cap");
    if (j.contains("dispatch")) {
        auto d = detail::string(j["dispatch"], path + ".dispatch");
        if (d == "fifo")
            c.dispatch = Dispatch::Fifo;
        else if (d == "hash")
            c.dispatch = Dispatch::Hash;
        else
            throw InputError(path + ".dispatch: unknown dispatch mode '" + d + "'");
    }
    return c;
}

inline SimConfig load_sim_config(const std::string& file)
{
    return sim_config_from_json(load_json(file), std::filesystem::path(file).parent_path(), file);
}

// --- control config and loop schedule --------------------------------------

struct ControlDocument {
    ControlConfig control;
    LoopSchedule schedule;
};

/// Schema (T_max in milliseconds):
///   { "mode": "cap"|"target", "kmax": int, "tmax_ms": number, "kcap": int,
///     "threshold": number, "cooldown": int, "rebalance_cost": number,
///     "amortization_horizon": number, "passive": bool,
///     "processors_per_machine": int,
///     "schedule": { "intervals": int, "interval_seconds": number,
///                   "passive_intervals": int, "sample_every": int,
///                   "smoothing": "alpha=<a>"|"window=<w>",
///                   "changes": [ {"interval": int, "operator": int, "service_rate": number} ] } }
inline ControlDocument control_from_json(const json& j, const std::string& path = "$")
{
    ControlDocument d;
    auto mode = detail::string(detail::field(j, "mode", path), path + ".mode");
    if (mode == "cap") {
        d.control.mode = CapMode{detail::integer(detail::field(j, "kmax", path), path + ".kmax")};
    } else if (mode == "target") {
        TargetMode t;
        t.t_max = detail::number(detail::field(j, "tmax_ms", path), path + ".tmax_ms") / 1000.0;
        if (j.contains("kcap"))
            t.k_cap = detail::integer(j["kcap"], path + ".kcap");
        d.control.mode = t;
    } else {
        throw InputError(path + ".mode: expected 'cap' or 'target', got '" + mode + "'");
    }
    if (j.contains("threshold"))
        d.control.threshold = detail::number(j["threshold"], path + ".threshold");
    if (j.contains("cooldown"))
        d.control.cooldown = detail::integer(j["cooldown"], path + ".cooldown");
    if (j.contains("rebalance_cost"))
        d.control.rebalance_cost = detail::number(j["rebalance_cost"], path + ".rebalance_cost");
    if (j.contains("amortization_horizon"))
        d.control.amortization_horizon = detail::number(j["amortization_horizon"], path + ".amortization_horizon");
    if (j.contains("passive")) {
        if (!j["passive"].is_boolean())
            throw InputError(path + ".passive: expected a boolean");
        d.control.passive = j["passive"].get<bool>();
    }
    if (j.contains("processors_per_machine"))
        d.control.processors_per_machine =
            detail::integer(j["processors_per_machine"], path + ".processors_per_machine");
    if (d.control.threshold < 0.0)
        throw InputError(path + ".threshold: must be >= 0");
    if (d.control.cooldown < 1)
        throw InputError(path + ".cooldown: must be >= 1");

    if (j.contains("schedule")) {
        const auto& s = j["schedule"];
        const std::string p = path + ".schedule";
        if (s.contains("intervals"))
            d.schedule.intervals = detail::unsigned_int(s["intervals"], p + ".intervals");
        if (s.contains("interval_seconds"))
            d.schedule.sampling.pull_interval = detail::number(s["interval_seconds"], p + ".interval_seconds");
        if (s.contains("passive_intervals"))
            d.schedule.passive_intervals = detail::unsigned_int(s["passive_intervals"], p + ".passive_intervals");
        if (s.contains("sample_every"))
            d.schedule.sampling.sample_every = detail::unsigned_int(s["sample_every"], p + ".sample_every");
        if (s.contains("smoothing")) {
            try {
                d.schedule.smoothing = parse_smoothing(detail::string(s["smoothing"], p + ".smoothing"));
            } catch (const InputError& e) {
                throw InputError(p + ".smoothing: " + e.what());
            }
        }
        if (s.contains("changes")) {
            const auto& ch = detail::array(s["changes"], p + ".changes");
            for (std::size_t i = 0; i < ch.size(); ++i) {
                const std::string cp = p + ".changes[" + std::to_string(i) + "]";
                ServiceChange c;
                c.interval = detail::unsigned_int(detail::field(ch[i], "interval", cp), cp + ".interval");
                c.op = static_cast<std::size_t>(
                    detail::unsigned_int(detail::field(ch[i], "operator", cp), cp + ".operator"));
                c.service_rate = detail::number(detail::field(ch[i], "service_rate", cp), cp + ".service_rate");
                d.schedule.changes.push_back(c);
            }
        }
        if (!(d.schedule.sampling.pull_interval > 0.0))
            throw InputError(p + ".interval_seconds: must be > 0");
        if (d.schedule.sampling.sample_every < 1)
            throw InputError(p + ".sample_every: must be >= 1");
    }
    return d;
}

// --- metric log ------------------------------------------------------------

struct MetricInterval {
    std::vector<MetricSample> samples;
    GlobalSample global;
    bool has_global = false;
};

/// Newline-delimited records, one JSON object per line:
///   {"type": "operator", "operator_id", "instance_id", "window_start",
///    "window_end", "arrivals", "service_time_total", "served"}
///   {"type": "global", "window_start", "window_end", "external_arrivals",
///    "completed_tuples", "sojourn_time_total"}
/// Consecutive records sharing (window_start, window_end) form one interval;
/// every interval needs exactly one global record. Blank lines are skipped.
inline std::vector<MetricInterval> parse_metric_log(const std::string& text, const std::string& source)
{
    std::vector<MetricInterval> out;
    std::istringstream in(text);
    std::string line;
    std::size_t lineno = 0;
    bool open = false;
    double cur_start = 0.0, cur_end = 0.0;
    while (std::getline(in, line)) {
        ++lineno;
        if (line.find_first_not_of(" \t\r") == std::string::npos)
            continue;
        const std::string where = source + ":" + std::to_string(lineno);
        json j;
        try {
            j = json::parse(line);
        } catch (const json::parse_error& e) {
            throw InputError(where + ":" + std::to_string(e.byte) + ": syntax error");
        }
        const std::string p = where + ": $";
        auto type = detail::string(detail::field(j, "type", p), p + ".type");
        double ws = detail::number(detail::field(j, "window_start", p), p + ".window_start");
        double we = detail::number(detail::field(j, "window_end", p), p + ".window_end");
        if (!(we > ws))
            throw InputError(p + ".window_end: must be after window_start");
        if (!open || ws != cur_start || we != cur_end) {
            if (open && !out.back().has_global)
                throw InputError(where + ": interval [" + std::to_string(cur_start) + ", " +
                                 std::to_string(cur_end) + "] has no global record");
            out.emplace_back();
            open = true;
            cur_start = ws;
            cur_end = we;
        }
        auto& iv = out.back();
        if (type == "operator") {
            MetricSample s;
            s.operator_id = static_cast<std::size_t>(
                detail::unsigned_int(detail::field(j, "operator_id", p), p + ".operator_id"));
            s.instance_id = j.contains("instance_id")
                                ? static_cast<std::size_t>(detail::unsigned_int(j["instance_id"], p + ".instance_id"))
                                : 0;
            s.window_start = ws;
            s.window_end = we;
            s.arrivals = detail::unsigned_int(detail::field(j, "arrivals", p), p + ".arrivals");
            s.served = detail::unsigned_int(detail::field(j, "served", p), p + ".served");
            s.service_time_total =
                detail::number(detail::field(j, "service_time_total", p), p + ".service_time_total");
            if (s.service_time_total < 0.0)
                throw InputError(p + ".service_time_total: must be >= 0");
            iv.samples.push_back(s);
        } else if (type == "global") {
            if (iv.has_global)
                throw InputError(where + ": duplicate global record for this interval");
            iv.has_global = true;
            iv.global.window_start = ws;
            iv.global.window_end = we;
            iv.global.external_arrivals =
                detail::unsigned_int(detail::field(j, "external_arrivals", p), p + ".external_arrivals");
            iv.global.completed_tuples =
                detail::unsigned_int(detail::field(j, "completed_tuples", p), p + ".completed_tuples");
            iv.global.sojourn_time_total =
                detail::number(detail::field(j, "sojourn_time_total", p), p + ".sojourn_time_total");
            if (iv.global.sojourn_time_total < 0.0)
                throw InputError(p + ".sojourn_time_total: must be >= 0");
        } else {
            throw InputError(p + ".type: expected 'operator' or 'global', got '" + type + "'");
        }
    }
    if (open && !out.back().has_global)
        throw InputError(source + ": last interval has no global record");
    return out;
}

inline std::string metric_log_lines(const IntervalMeasurement& m)
{
    std::string out;
    for (const auto& s : m.samples) {
        json j = {{"type", "operator"},
                  {"operator_id", s.operator_id},
                  {"instance_id", s.instance_id},
                  {"window_start", s.window_start},
                  {"window_end", s.window_end},
                  {"arrivals", s.arrivals},
                  {"service_time_total", s.service_time_total},
                  {"served", s.served}};
        out += j.dump() + "\n";
    }
    json g = {{"type", "global"},
              {"window_start", m.global.window_start},
              {"window_end", m.global.window_end},
              {"external_arrivals", m.global.external_arrivals},
              {"completed_tuples", m.global.completed_tuples},
              {"sojourn_time_total", m.global.sojourn_time_total}};
    out += g.dump() + "\n";
    return out;
}

// --- reports ---------------------------------------------------------------

inline json estimate_to_json(const SojournEstimate& e)
{
    json per = json::array();
    for (const auto& s : e.per_operator)
        per.push_back(detail::sojourn(s));
    return {{"per_operator_s", per}, {"total_s", detail::sojourn(e.total)}, {"stable", e.stable}};
}

inline json plan_to_json(const Plan& p)
{
    json trace = json::array();
    for (const auto& s : p.trace) {
        json step = {{"step", s.step}, {"operator", s.op}};
        if (s.delta == kMaxBenefit)
            step["delta"] = "MAX";
        else
            step["delta"] = s.delta;
        trace.push_back(step);
    }
    return {{"allocation", p.allocation.counts},
            {"allocation_str", p.allocation.to_string()},
            {"processors_used", p.processors_used},
            {"feasible", p.feasible},
            {"deficit", p.deficit},
            {"estimate", estimate_to_json(p.estimate)},
            {"delta_evaluations", p.delta_evaluations},
            {"trace", trace}};
}

inline json sim_report_to_json(const SimulationReport& r)
{
    json ops = json::array();
    for (const auto& o : r.per_operator)
        ops.push_back({{"name", o.name},
                       {"processors", o.processors},
                       {"utilization", o.utilization},
                       {"mean_queue_wait_s", o.mean_queue_wait},
                       {"mean_service_s", o.mean_service},
                       {"mean_in_system", o.mean_in_system},
                       {"observed_lambda", o.observed_lambda},
                       {"observed_mu", o.observed_mu},
                       {"arrivals", o.arrivals},
                       {"completions", o.completions}});
    json j = {{"completed", r.completed},
              {"mean_sojourn_s", r.mean_sojourn},
              {"stddev_sojourn_s", r.stddev_sojourn},
              {"p50_s", r.p50},
              {"p95_s", r.p95},
              {"p99_s", r.p99},
              {"observed_lambda0", r.observed_lambda0},
              {"span_start_s", r.span_start},
              {"span_end_s", r.span_end},
              {"per_operator", ops}};
    j["model_prediction"] = r.model_prediction ? estimate_to_json(*r.model_prediction) : json(nullptr);
    j["relative_error"] = r.relative_error ? json(*r.relative_error) : json(nullptr);
    return j;
}

inline json decision_to_json(const RebalanceDecision& d)
{
    json j = {{"interval", d.interval},
              {"act", d.act},
              {"reason", std::string(to_string(d.reason))},
              {"gated_reason", d.gated_reason ? json(std::string(to_string(*d.gated_reason))) : json(nullptr)},
              {"current", d.current.to_string()},
              {"proposed", d.proposed.to_string()},
              {"current_estimate_s", d.current_estimate ? detail::sojourn(d.current_estimate->total) : json(nullptr)},
              {"proposed_estimate_s",
               d.proposed_estimate ? detail::sojourn(d.proposed_estimate->total) : json(nullptr)},
              {"measured_sojourn_s", d.measured_sojourn},
              {"rebalance_cost_s", d.rebalance_cost},
              {"rejected", d.rejected},
              {"detail", d.detail}};
    if (d.rejected)
        j["rejection"] = d.rejection;
    return j;
}

/// Fixed CSV column order for simulation rows.
inline constexpr const char* kSimCsvHeader =
    "allocation,completed,mean_sojourn_s,stddev_sojourn_s,p50_s,p95_s,p99_s,model_estimate_s,relative_error";

inline std::string fmt(double v)
{
    std::ostringstream os;
    os << std::setprecision(10) << v;
    return os.str();
}

inline std::string sim_csv_row(const Allocation& a, const SimulationReport& r)
{
    std::string model = "";
    if (r.model_prediction)
        model = r.model_prediction->total.is_unstable() ? "UNSTABLE" : fmt(r.model_prediction->total.seconds());
    return a.to_string() + "," + std::to_string(r.completed) + "," + fmt(r.mean_sojourn) + "," +
           fmt(r.stddev_sojourn) + "," + fmt(r.p50) + "," + fmt(r.p95) + "," + fmt(r.p99) + "," + model + "," +
           (r.relative_error ? fmt(*r.relative_error) : std::string());
}

}  // namespace opsched::io

#endif  // OPSCHED_IO_HPP
