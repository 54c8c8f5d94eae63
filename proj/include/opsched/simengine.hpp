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

// Discrete-event simulator of an operator network.
//
// External tuples arrive per source operator, wait in a FIFO queue in front
// of k identical servers, and on completion are forwarded to operator j with
// probability p[i][j] or leave the network. Each tuple follows a single path,
// so its sojourn is the sum of its per-visit waits and services.
//
// Events are ordered by (time, sequence number); the sequence number is
// assigned when the event is created, so a run is fully determined by its
// configuration and seed. Arrivals, service times and routing draw from
// separate generators, which keeps the arrival sequence identical across
// allocations.

#ifndef OPSCHED_SIMENGINE_HPP
#define OPSCHED_SIMENGINE_HPP

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <deque>
#include <limits>
#include <optional>
#include <queue>
#include <random>
#include <stdexcept>
#include <string>
#include <vector>

#include "opsched/metrics.hpp"
#include "opsched/queueing.hpp"
#include "opsched/topology.hpp"

namespace opsched {

/// Service-time law; every variant has mean exactly 1/mu.
struct ServiceDistribution {
    enum class Kind { Exponential, Uniform, Deterministic };
    Kind kind = Kind::Exponential;
    // Uniform: U[lo, hi] rescaled by 2/(lo + hi).
    double lo = 0.5;
    double hi = 1.5;
};

/// External inter-arrival law; every variant has mean exactly 1/a_j.
struct ArrivalProcess {
    enum class Kind { Poisson, UniformInterarrival };
    Kind kind = Kind::Poisson;
    double lo = 0.5;
    double hi = 1.5;
};

/// FIFO: one queue per operator feeding the first free server.
/// Hash: each tuple is hashed to a server with its own queue.
enum class Dispatch { Fifo, Hash };

struct SimConfig {
    Topology topology;
    Allocation allocation;
    ServiceDistribution service;
    ArrivalProcess arrivals;
    std::uint64_t horizon = 1000000;
    std::optional<std::uint64_t> warmup;  // default: 10% of horizon
    std::uint64_t seed = 1;
    std::uint64_t queue_cap = 10000000;
    Dispatch dispatch = Dispatch::Fifo;

    std::uint64_t effective_warmup() const { return warmup.value_or(horizon / 10); }
};

struct OperatorReport {
    std::string name;
    std::int64_t processors = 0;
    double utilization = 0.0;
    double mean_queue_wait = 0.0;
    double mean_service = 0.0;
    double mean_in_system = 0.0;
    double observed_lambda = 0.0;
    double observed_mu = 0.0;
    std::uint64_t arrivals = 0;
    std::uint64_t completions = 0;
};

struct SimulationReport {
    std::uint64_t completed = 0;
    double mean_sojourn = 0.0;
    double p50 = 0.0;
    double p95 = 0.0;
    double p99 = 0.0;
    double stddev_sojourn = 0.0;
    double observed_lambda0 = 0.0;
    double span_start = 0.0;
    double span_end = 0.0;
    std::vector<OperatorReport> per_operator;
    std::optional<SojournEstimate> model_prediction;
    std::optional<double> relative_error;
};

/// One pull interval as seen by the measurer.
struct IntervalMeasurement {
    std::vector<MetricSample> samples;
    GlobalSample global;
};

class SimulationUnstableError : public std::runtime_error {
public:
    SimulationUnstableError(std::size_t op, const std::string& name, std::uint64_t length, double time)
        : std::runtime_error("simulation unstable: queue of operator " + name + " reached " +
                             std::to_string(length) + " tuples at t = " + std::to_string(time) + " s"),
          op_(op)
    {
    }
    std::size_t operator_id() const { return op_; }

private:
    std::size_t op_;
};

namespace detail {

inline std::uint64_t splitmix64(std::uint64_t x)
{
    x += 0x9e3779b97f4a7c15ULL;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
    return x ^ (x >> 31);
}

// Stream offsets for generator derivation.
inline constexpr std::uint64_t kArrivalStream = 0x1000;
inline constexpr std::uint64_t kServiceStream = 0x2000000;
inline constexpr std::uint64_t kRoutingStream = 0x4000000;

class Stream {
public:
    Stream(std::uint64_t seed, std::uint64_t offset) : gen_(splitmix64(seed ^ splitmix64(offset))) {}

    // Uniform on [0, 1) from the top 53 bits.
    double uniform01() { return static_cast<double>(gen_() >> 11) * 0x1.0p-53; }

    double exponential(double mean) { return -mean * std::log1p(-uniform01()); }

    // Uniform on [lo, hi] rescaled to the requested mean.
    double scaled_uniform(double mean, double lo, double hi)
    {
        double u = lo + (hi - lo) * uniform01();
        return mean * u * 2.0 / (lo + hi);
    }

private:
    std::mt19937_64 gen_;
};

struct Job {
    std::uint64_t tuple = 0;
    double origin = 0.0;
    double enqueued = 0.0;
    double service = 0.0;
    std::uint32_t instance = 0;
    bool sampled = false;
};

enum class EventKind : std::uint8_t { ExternalArrival, Completion };

struct Event {
    double time = 0.0;
    std::uint64_t seq = 0;
    EventKind kind = EventKind::ExternalArrival;
    std::uint32_t op = 0;
    std::uint32_t server = 0;
    Job job;
};

struct EventLater {
    bool operator()(const Event& a, const Event& b) const
    {
        if (a.time != b.time)
            return a.time > b.time;
        return a.seq > b.seq;
    }
};

}  // namespace detail

inline void validate_sim_config(const SimConfig& cfg)
{
    auto rep = validate_topology(cfg.topology);
    if (!rep.ok())
        throw std::invalid_argument("invalid topology: " + rep.to_string());
    if (cfg.allocation.size() != cfg.topology.size() || !cfg.allocation.valid())
        throw std::invalid_argument("allocation must have one count >= 1 per operator");
    if (!(cfg.horizon > cfg.effective_warmup()))
        throw std::invalid_argument("horizon must exceed warmup");
    if (cfg.service.kind == ServiceDistribution::Kind::Uniform &&
        !(cfg.service.lo >= 0.0 && cfg.service.hi > cfg.service.lo))
        throw std::invalid_argument("uniform service needs 0 <= lo < hi");
    if (cfg.arrivals.kind == ArrivalProcess::Kind::UniformInterarrival &&
        !(cfg.arrivals.lo >= 0.0 && cfg.arrivals.hi > cfg.arrivals.lo))
        throw std::invalid_argument("uniform inter-arrival needs 0 <= lo < hi");
    if (cfg.queue_cap < 1)
        throw std::invalid_argument("queue_cap must be >= 1");
}

/// Event-driven engine. Use run() for a fixed number of external tuples,
/// or run_interval() repeatedly to drive a control loop.
class Simulator {
public:
    Simulator(const Topology& topology, const Allocation& allocation, ServiceDistribution service,
              ArrivalProcess arrivals, std::uint64_t seed, Dispatch dispatch = Dispatch::Fifo,
              std::uint64_t queue_cap = 10000000, SamplingConfig sampling = {})
        : topo_(topology),
          service_dist_(service),
          arrival_proc_(arrivals),
          dispatch_(dispatch),
          queue_cap_(queue_cap),
          sampling_(sampling),
          seed_(seed)
    {
        const std::size_t n = topo_.size();
        if (allocation.size() != n || !allocation.valid())
            throw std::invalid_argument("allocation must have one count >= 1 per operator");
        if (sampling_.sample_every < 1)
            throw std::invalid_argument("sample_every must be >= 1");
        ops_.resize(n);
        for (std::size_t i = 0; i < n; ++i) {
            auto& o = ops_[i];
            o.k = allocation[i];
            o.mu = topo_.op(i).service_rate;
            o.busy.assign(static_cast<std::size_t>(o.k), false);
            o.server_queues.resize(static_cast<std::size_t>(o.k));
            o.samples.resize(static_cast<std::size_t>(o.k));
            o.local_inputs.assign(static_cast<std::size_t>(o.k), 0);
        }
        for (std::size_t j = 0; j < n; ++j) {
            arrival_rng_.emplace_back(seed, detail::kArrivalStream + j);
            service_rng_.emplace_back(seed, detail::kServiceStream + j);
            routing_rng_.emplace_back(seed, detail::kRoutingStream + j);
        }
    }

    double now() const { return now_; }

    Allocation allocation() const
    {
        std::vector<std::int64_t> k;
        for (const auto& o : ops_)
            k.push_back(o.k);
        return Allocation(std::move(k));
    }

    /// Changes processor counts in place. Queued tuples are kept; servers
    /// beyond the new count finish their current tuple and then retire.
    void set_allocation(const Allocation& alloc)
    {
        if (alloc.size() != ops_.size() || !alloc.valid())
            throw std::invalid_argument("allocation must have one count >= 1 per operator");
        for (std::size_t i = 0; i < ops_.size(); ++i) {
            auto& o = ops_[i];
            integrate(i, now_);
            const auto newk = static_cast<std::size_t>(alloc[i]);
            if (newk > o.busy.size())
                o.busy.resize(newk, false);
            if (newk > o.server_queues.size())
                o.server_queues.resize(newk);
            if (newk > o.samples.size()) {
                o.samples.resize(newk);
                o.local_inputs.resize(newk, 0);
            }
            o.k = alloc[i];
            if (dispatch_ == Dispatch::Hash) {
                // Re-home tuples queued at retired servers.
                for (std::size_t s = newk; s < o.server_queues.size(); ++s) {
                    while (!o.server_queues[s].empty()) {
                        auto job = o.server_queues[s].front();
                        o.server_queues[s].pop_front();
                        o.server_queues[hash_server(job.tuple, i, newk)].push_back(job);
                    }
                }
            }
            dispatch(i);
        }
    }

    /// Changes the mean service rate of one operator for services that start
    /// from now on.
    void set_service_rate(std::size_t op, double mu)
    {
        if (!(mu > 0.0) || !std::isfinite(mu))
            throw std::invalid_argument("service rate must be finite and > 0");
        ops_.at(op).mu = mu;
    }

    /// Runs until `horizon` external tuples have entered and all of them have
    /// left. Statistics cover tuples with index >= warmup; per-operator rates
    /// cover the span between the arrival of tuple `warmup` and the last one.
    SimulationReport run(std::uint64_t horizon, std::uint64_t warmup)
    {
        if (!(horizon > warmup))
            throw std::invalid_argument("horizon must exceed warmup");
        if (started_)
            throw std::logic_error("run() requires a fresh simulator");
        limit_ = horizon;
        warmup_ = warmup;
        measuring_ = false;
        sojourns_.clear();
        sojourns_.reserve(static_cast<std::size_t>(horizon - warmup));
        start_sources();
        while (!events_.empty())
            process(pop());

        SimulationReport rep;
        rep.completed = sojourns_.size();
        rep.span_start = span_start_;
        rep.span_end = span_end_;
        const double span = span_end_ - span_start_;
        fill_sojourn_stats(rep);
        rep.observed_lambda0 = span > 0.0 ? static_cast<double>(horizon - warmup) / span : 0.0;
        for (std::size_t i = 0; i < ops_.size(); ++i) {
            const auto& o = ops_[i];
            OperatorReport r;
            r.name = topo_.op(i).name;
            r.processors = o.k;
            r.arrivals = o.stat_arrivals;
            r.completions = o.stat_completions;
            if (span > 0.0) {
                r.utilization = std::min(1.0, o.area_busy / (static_cast<double>(o.k) * span));
                r.mean_in_system = o.area_system / span;
                r.observed_lambda = static_cast<double>(o.stat_arrivals) / span;
            }
            r.mean_queue_wait = o.stat_started ? o.wait_sum / static_cast<double>(o.stat_started) : 0.0;
            r.mean_service =
                o.stat_completions ? o.service_sum / static_cast<double>(o.stat_completions) : 0.0;
            r.observed_mu = o.service_sum > 0.0 ? static_cast<double>(o.stat_completions) / o.service_sum : 0.0;
            rep.per_operator.push_back(r);
        }
        return rep;
    }

    /// Advances simulated time by `duration` with an unbounded arrival
    /// stream and returns the sampled counters for that interval.
    IntervalMeasurement run_interval(double duration)
    {
        if (!(duration > 0.0))
            throw std::invalid_argument("interval duration must be > 0");
        if (!started_) {
            limit_ = std::numeric_limits<std::uint64_t>::max();
            warmup_ = 0;
            measuring_ = true;
            start_sources();
        }
        const double start = now_;
        const double end = now_ + duration;
        interval_ = GlobalSample{start, end, 0, 0, 0.0};
        for (auto& o : ops_)
            for (auto& s : o.samples)
                s = {};
        while (!events_.empty() && events_.top().time <= end)
            process(pop());
        now_ = end;

        IntervalMeasurement m;
        m.global = interval_;
        for (std::size_t i = 0; i < ops_.size(); ++i) {
            const auto& o = ops_[i];
            for (std::size_t s = 0; s < o.samples.size(); ++s) {
                const auto& c = o.samples[s];
                if (s >= static_cast<std::size_t>(o.k) && c.arrivals == 0 && c.served == 0)
                    continue;
                MetricSample ms;
                ms.operator_id = i;
                ms.instance_id = s;
                ms.window_start = start;
                ms.window_end = end;
                ms.arrivals = c.arrivals;
                ms.served = c.served;
                ms.service_time_total = c.busy;
                m.samples.push_back(ms);
            }
        }
        return m;
    }

private:
    struct InstanceCounters {
        std::uint64_t arrivals = 0;
        std::uint64_t served = 0;
        double busy = 0.0;
    };

    struct OpState {
        std::int64_t k = 1;
        double mu = 1.0;
        std::vector<bool> busy;
        std::int64_t busy_count = 0;
        std::deque<detail::Job> queue;                       // FIFO dispatch
        std::vector<std::deque<detail::Job>> server_queues;  // hash dispatch
        std::uint64_t queued = 0;
        std::uint64_t enqueue_counter = 0;

        // Span statistics.
        double last_update = 0.0;
        double area_busy = 0.0;
        double area_system = 0.0;
        std::uint64_t stat_arrivals = 0;
        std::uint64_t stat_completions = 0;
        std::uint64_t stat_started = 0;
        double wait_sum = 0.0;
        double service_sum = 0.0;

        // Interval sampling.
        std::vector<InstanceCounters> samples;
        std::vector<std::uint64_t> local_inputs;
    };

    detail::Event pop()
    {
        detail::Event e = events_.top();
        events_.pop();
        return e;
    }

    void push(detail::Event e)
    {
        e.seq = next_seq_++;
        events_.push(e);
    }

    std::size_t hash_server(std::uint64_t tuple, std::size_t op, std::size_t k) const
    {
        return static_cast<std::size_t>(detail::splitmix64(tuple ^ (seed_ * 0x2545f4914f6cdd1dULL) ^
                                                           (static_cast<std::uint64_t>(op) << 48)) %
                                        k);
    }

    double draw_interarrival(std::size_t j)
    {
        const double mean = 1.0 / topo_.external_rates()[j];
        auto& rng = arrival_rng_[j];
        if (arrival_proc_.kind == ArrivalProcess::Kind::Poisson)
            return rng.exponential(mean);
        return rng.scaled_uniform(mean, arrival_proc_.lo, arrival_proc_.hi);
    }

    double draw_service(std::size_t i)
    {
        auto& o = ops_[i];
        const double mean = 1.0 / o.mu;
        auto& rng = service_rng_[i];
        switch (service_dist_.kind) {
        case ServiceDistribution::Kind::Exponential:
            return rng.exponential(mean);
        case ServiceDistribution::Kind::Uniform:
            return rng.scaled_uniform(mean, service_dist_.lo, service_dist_.hi);
        case ServiceDistribution::Kind::Deterministic:
            return mean;
        }
        return mean;
    }

    void start_sources()
    {
        started_ = true;
        for (std::size_t j = 0; j < ops_.size(); ++j) {
            if (topo_.external_rates()[j] > 0.0) {
                detail::Event e;
                e.kind = detail::EventKind::ExternalArrival;
                e.op = static_cast<std::uint32_t>(j);
                e.time = now_ + draw_interarrival(j);
                push(e);
            }
        }
    }

    void integrate(std::size_t i, double t)
    {
        auto& o = ops_[i];
        if (measuring_) {
            const double dt = t - o.last_update;
            o.area_busy += static_cast<double>(o.busy_count) * dt;
            o.area_system += static_cast<double>(o.busy_count + static_cast<std::int64_t>(o.queued)) * dt;
        }
        o.last_update = t;
    }

    void set_measuring(bool on, double t)
    {
        for (std::size_t i = 0; i < ops_.size(); ++i)
            integrate(i, t);
        measuring_ = on;
    }

    void enqueue(std::size_t i, detail::Job job, double t)
    {
        auto& o = ops_[i];
        integrate(i, t);
        job.enqueued = t;
        const auto k = static_cast<std::size_t>(o.k);
        std::size_t instance;
        if (dispatch_ == Dispatch::Hash)
            instance = hash_server(job.tuple, i, k);
        else
            instance = static_cast<std::size_t>(o.enqueue_counter % k);
        ++o.enqueue_counter;
        job.instance = static_cast<std::uint32_t>(instance);
        job.sampled = false;
        if (++o.local_inputs[instance] % sampling_.sample_every == 0) {
            job.sampled = true;
            ++o.samples[instance].arrivals;
        }
        if (measuring_)
            ++o.stat_arrivals;

        if (dispatch_ == Dispatch::Hash)
            o.server_queues[instance].push_back(job);
        else
            o.queue.push_back(job);
        ++o.queued;
        if (o.queued > queue_cap_)
            throw SimulationUnstableError(i, topo_.op(i).name, o.queued, t);
        dispatch(i);
    }

    void start_service(std::size_t i, std::size_t server, detail::Job job)
    {
        auto& o = ops_[i];
        o.busy[server] = true;
        ++o.busy_count;
        --o.queued;
        job.service = draw_service(i);
        if (measuring_) {
            ++o.stat_started;
            o.wait_sum += now_ - job.enqueued;
        }
        detail::Event e;
        e.kind = detail::EventKind::Completion;
        e.op = static_cast<std::uint32_t>(i);
        e.server = static_cast<std::uint32_t>(server);
        e.time = now_ + job.service;
        e.job = job;
        push(e);
    }

    // Starts service on every idle active server that has work.
    void dispatch(std::size_t i)
    {
        auto& o = ops_[i];
        integrate(i, now_);
        const auto k = static_cast<std::size_t>(o.k);
        if (dispatch_ == Dispatch::Hash) {
            for (std::size_t s = 0; s < k; ++s) {
                if (!o.busy[s] && !o.server_queues[s].empty()) {
                    auto job = o.server_queues[s].front();
                    o.server_queues[s].pop_front();
                    start_service(i, s, job);
                }
            }
            return;
        }
        for (std::size_t s = 0; s < k && !o.queue.empty(); ++s) {
            if (!o.busy[s]) {
                auto job = o.queue.front();
                o.queue.pop_front();
                start_service(i, s, job);
            }
        }
    }

    void process(const detail::Event& e)
    {
        now_ = e.time;
        if (e.kind == detail::EventKind::ExternalArrival) {
            if (created_ >= limit_)
                return;
            const std::uint64_t id = created_++;
            if (limit_ != std::numeric_limits<std::uint64_t>::max() && id == warmup_) {
                span_start_ = now_;
                set_measuring(true, now_);
            }
            ++interval_.external_arrivals;
            detail::Job job;
            job.tuple = id;
            job.origin = now_;
            enqueue(e.op, job, now_);
            if (limit_ != std::numeric_limits<std::uint64_t>::max() && created_ == limit_) {
                span_end_ = now_;
                set_measuring(false, now_);
            }
            if (created_ < limit_) {
                detail::Event next;
                next.kind = detail::EventKind::ExternalArrival;
                next.op = e.op;
                next.time = now_ + draw_interarrival(e.op);
                push(next);
            }
            return;
        }

        const std::size_t i = e.op;
        auto& o = ops_[i];
        integrate(i, now_);
        o.busy[e.server] = false;
        --o.busy_count;
        if (measuring_) {
            ++o.stat_completions;
            o.service_sum += e.job.service;
        }
        if (e.job.sampled) {
            auto& c = o.samples[e.job.instance];
            ++c.served;
            c.busy += e.job.service;
        }

        // Route or exit.
        const double u = routing_rng_[i].uniform01();
        double acc = 0.0;
        std::optional<std::size_t> dest;
        for (std::size_t j = 0; j < ops_.size(); ++j) {
            acc += topo_.routing(i, j);
            if (u < acc) {
                dest = j;
                break;
            }
        }
        if (dest) {
            enqueue(*dest, e.job, now_);
        } else {
            const double sojourn = now_ - e.job.origin;
            if (limit_ != std::numeric_limits<std::uint64_t>::max()) {
                if (e.job.tuple >= warmup_)
                    sojourns_.push_back(sojourn);
            }
            ++interval_.completed_tuples;
            interval_.sojourn_time_total += sojourn;
        }
        dispatch(i);
    }

    void fill_sojourn_stats(SimulationReport& rep) const
    {
        if (sojourns_.empty())
            return;
        const double n = static_cast<double>(sojourns_.size());
        double sum = 0.0;
        for (double s : sojourns_)
            sum += s;
        rep.mean_sojourn = sum / n;
        double sq = 0.0;
        for (double s : sojourns_)
            sq += (s - rep.mean_sojourn) * (s - rep.mean_sojourn);
        rep.stddev_sojourn = sojourns_.size() > 1 ? std::sqrt(sq / (n - 1.0)) : 0.0;
        std::vector<double> sorted = sojourns_;
        std::sort(sorted.begin(), sorted.end());
        auto rank = [&](double p) {
            auto idx = static_cast<std::size_t>(std::ceil(p * n));
            return sorted[std::min(sorted.size(), std::max<std::size_t>(idx, 1)) - 1];
        };
        rep.p50 = rank(0.50);
        rep.p95 = rank(0.95);
        rep.p99 = rank(0.99);
    }

    Topology topo_;
    ServiceDistribution service_dist_;
    ArrivalProcess arrival_proc_;
    Dispatch dispatch_;
    std::uint64_t queue_cap_;
    SamplingConfig sampling_;
    std::uint64_t seed_;

    std::vector<OpState> ops_;
    std::vector<detail::Stream> arrival_rng_;
    std::vector<detail::Stream> service_rng_;
    std::vector<detail::Stream> routing_rng_;
    std::priority_queue<detail::Event, std::vector<detail::Event>, detail::EventLater> events_;
    std::uint64_t next_seq_ = 0;
    double now_ = 0.0;
    bool started_ = false;
    bool measuring_ = false;
    std::uint64_t limit_ = 0;
    std::uint64_t warmup_ = 0;
    std::uint64_t created_ = 0;
    double span_start_ = 0.0;
    double span_end_ = 0.0;
    std::vector<double> sojourns_;
    GlobalSample interval_;
};

/// Runs the configured simulation to completion.
inline SimulationReport run_simulation(const SimConfig& cfg)
{
    validate_sim_config(cfg);
    Simulator sim(cfg.topology, cfg.allocation, cfg.service, cfg.arrivals, cfg.seed, cfg.dispatch,
                  cfg.queue_cap);
    return sim.run(cfg.horizon, cfg.effective_warmup());
}

/// Model prediction from the rates the simulation actually produced.
/// Operators that saw no completions fall back to their configured rate.
inline RateProfile observed_profile(const SimConfig& cfg, const SimulationReport& rep)
{
    RateProfile rp;
    rp.lambda0 = rep.observed_lambda0;
    for (std::size_t i = 0; i < rep.per_operator.size(); ++i) {
        const auto& o = rep.per_operator[i];
        rp.lambdas.push_back(o.observed_lambda);
        rp.mus.push_back(o.observed_mu > 0.0 ? o.observed_mu : cfg.topology.op(i).service_rate);
    }
    return rp;
}

/// Simulation plus the model's estimate from observed rates and the signed
/// relative error (measured - predicted) / predicted.
inline SimulationReport compare_with_model(const SimConfig& cfg)
{
    SimulationReport rep = run_simulation(cfg);
    auto rates = observed_profile(cfg, rep);
    rep.model_prediction = network_sojourn(rates, cfg.allocation);
    if (rep.model_prediction->total.is_finite()) {
        const double predicted = rep.model_prediction->total.seconds();
        rep.relative_error = (rep.mean_sojourn - predicted) / predicted;
    }
    return rep;
}

}  // namespace opsched

#endif  // OPSCHED_SIMENGINE_HPP
