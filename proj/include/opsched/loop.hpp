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

// Closed measure -> smooth -> plan -> re-balance loop against the simulator.

#ifndef OPSCHED_LOOP_HPP
#define OPSCHED_LOOP_HPP

#include <cstdint>
#include <optional>
#include <stdexcept>
#include <vector>

#include "opsched/control.hpp"
#include "opsched/metrics.hpp"
#include "opsched/simengine.hpp"

namespace opsched {

/// Sets an operator's mean service rate at the start of an interval.
struct ServiceChange {
    std::uint64_t interval = 1;
    std::size_t op = 0;
    double service_rate = 1.0;
};

struct LoopSchedule {
    std::uint64_t intervals = 30;
    // Re-balancing stays disabled (passive) through this interval.
    std::uint64_t passive_intervals = 0;
    SamplingConfig sampling;  // pull_interval is the interval length
    SmoothingScheme smoothing = WindowSmoothing{3};
    std::vector<ServiceChange> changes;
};

struct IntervalRecord {
    std::uint64_t interval = 0;
    double time_end = 0.0;
    Allocation allocation;  // in force during the interval
    std::uint64_t completed = 0;
    double measured_sojourn = 0.0;  // raw mean of this interval, 0 if none completed
    IntervalMeasurement measurement;
    SmoothedMetrics smoothed;
    RebalanceDecision decision;
};

struct LoopResult {
    std::vector<IntervalRecord> intervals;
    Allocation final_allocation;
    std::uint64_t rebalances = 0;
};

inline LoopResult run_control_loop(const SimConfig& sim_cfg, const ControlConfig& ctl, const LoopSchedule& sched)
{
    validate_sim_config(sim_cfg);
    for (const auto& c : sched.changes)
        if (c.op >= sim_cfg.topology.size())
            throw std::invalid_argument("service change names unknown operator " + std::to_string(c.op));

    Simulator sim(sim_cfg.topology, sim_cfg.allocation, sim_cfg.service, sim_cfg.arrivals, sim_cfg.seed,
                  sim_cfg.dispatch, sim_cfg.queue_cap, sched.sampling);
    OperatorAggregator aggregator(sim_cfg.topology.size(), sched.sampling);
    SimulatorNegotiator negotiator(sim);
    Controller controller(sim_cfg.allocation);
    std::optional<SmoothedMetrics> smoothed;

    LoopResult result;
    for (std::uint64_t n = 1; n <= sched.intervals; ++n) {
        for (const auto& c : sched.changes)
            if (c.interval == n)
                sim.set_service_rate(c.op, c.service_rate);

        IntervalRecord rec;
        rec.interval = n;
        rec.allocation = controller.current();
        auto m = sim.run_interval(sched.sampling.pull_interval);
        rec.time_end = m.global.window_end;
        rec.completed = m.global.completed_tuples;
        if (m.global.completed_tuples > 0)
            rec.measured_sojourn = m.global.sojourn_time_total / static_cast<double>(m.global.completed_tuples);

        auto raw = aggregator.aggregate(m.samples, m.global);
        rec.measurement = std::move(m);
        smoothed = smooth(smoothed, raw, sched.smoothing);
        rec.smoothed = *smoothed;

        ControlConfig cfg = ctl;
        cfg.passive = ctl.passive || n <= sched.passive_intervals;
        rec.decision = controller.step(cfg, *smoothed, negotiator);
        if (rec.decision.act && !rec.decision.rejected)
            ++result.rebalances;
        result.intervals.push_back(std::move(rec));
    }
    result.final_allocation = controller.current();
    return result;
}

}  // namespace opsched

#endif  // OPSCHED_LOOP_HPP
