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

// Re-balance decisions. Once per interval the controller plans against the
// smoothed measurements, decides whether the proposed allocation is worth
// applying, and hands it to a negotiator that owns the running system.

#ifndef OPSCHED_CONTROL_HPP
#define OPSCHED_CONTROL_HPP

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include "opsched/metrics.hpp"
#include "opsched/planner.hpp"
#include "opsched/queueing.hpp"
#include "opsched/simengine.hpp"

namespace opsched {

/// Minimize latency under a processor budget.
struct CapMode {
    std::int64_t k_max = 0;
};

/// Minimize processors under a latency target (seconds).
struct TargetMode {
    double t_max = 0.0;
    std::optional<std::int64_t> k_cap;
};

using PlanMode = std::variant<CapMode, TargetMode>;

struct ControlConfig {
    PlanMode mode = CapMode{};
    double threshold = 0.1;  // relative improvement required in CAP mode
    std::int64_t cooldown = 3;
    double rebalance_cost = 0.0;  // seconds, logged
    // When set, CAP mode also requires gain * horizon > rebalance_cost.
    std::optional<double> amortization_horizon;
    bool passive = false;
    std::int64_t processors_per_machine = 1;
};

enum class DecisionReason {
    ImprovementAboveThreshold,
    TargetViolated,
    TargetMetWithFewer,
    Cooldown,
    NoGain,
    Passive,
    StaleMetrics,
    StalledOperator,
    InvalidMeasurement,
    InsufficientProcessors,
    UnreachableTarget,
};

inline std::string_view to_string(DecisionReason r)
{
    switch (r) {
    case DecisionReason::ImprovementAboveThreshold: return "IMPROVEMENT_ABOVE_THRESHOLD";
    case DecisionReason::TargetViolated: return "TARGET_VIOLATED";
    case DecisionReason::TargetMetWithFewer: return "TARGET_MET_WITH_FEWER";
    case DecisionReason::Cooldown: return "COOLDOWN";
    case DecisionReason::NoGain: return "NO_GAIN";
    case DecisionReason::Passive: return "PASSIVE";
    case DecisionReason::StaleMetrics: return "STALE_METRICS";
    case DecisionReason::StalledOperator: return "STALLED_OPERATOR";
    case DecisionReason::InvalidMeasurement: return "INVALID_MEASUREMENT";
    case DecisionReason::InsufficientProcessors: return "INSUFFICIENT_PROCESSORS";
    case DecisionReason::UnreachableTarget: return "UNREACHABLE_TARGET";
    }
    return "UNKNOWN";
}

struct RebalanceDecision {
    bool act = false;
    DecisionReason reason = DecisionReason::NoGain;
    // The reason the decision would have carried before the passive and
    // cooldown gates.
    std::optional<DecisionReason> gated_reason;
    Allocation current;
    Allocation proposed;
    std::optional<SojournEstimate> current_estimate;
    std::optional<SojournEstimate> proposed_estimate;
    std::string detail;
    double rebalance_cost = 0.0;
    std::uint64_t interval = 0;
    double measured_sojourn = 0.0;
    bool rejected = false;
    std::string rejection;
};

namespace detail {

inline RebalanceDecision no_act(DecisionReason reason, const Allocation& current, std::string detail)
{
    RebalanceDecision d;
    d.act = false;
    d.reason = reason;
    d.current = current;
    d.proposed = current;
    d.detail = std::move(detail);
    return d;
}

inline RebalanceDecision evaluate_cap(const ControlConfig& cfg, const CapMode& mode, const RateProfile& rates,
                                      const Allocation& current)
{
    Plan plan = assign_processors(rates, mode.k_max);
    if (!plan.feasible) {
        auto d = no_act(DecisionReason::InsufficientProcessors, current,
                        "K_max = " + std::to_string(mode.k_max) + " is below the stable minimum by " +
                            std::to_string(plan.deficit));
        d.current_estimate = network_sojourn(rates, current);
        return d;
    }
    RebalanceDecision d;
    d.current = current;
    d.proposed = plan.allocation;
    d.current_estimate = network_sojourn(rates, current);
    d.proposed_estimate = plan.estimate;
    const Sojourn cur = d.current_estimate->total;
    const Sojourn prop = plan.estimate.total;
    if (current == plan.allocation) {
        d.reason = DecisionReason::NoGain;
        d.detail = "current allocation is optimal";
        return d;
    }
    if (cur.is_unstable()) {
        d.act = true;
        d.reason = DecisionReason::ImprovementAboveThreshold;
        d.detail = "current allocation is unstable under measured rates";
        return d;
    }
    const double gain = cur.seconds() - prop.seconds();
    bool worth = gain > cfg.threshold * prop.seconds();
    if (worth && cfg.amortization_horizon)
        worth = gain * *cfg.amortization_horizon > cfg.rebalance_cost;
    d.act = worth;
    d.reason = worth ? DecisionReason::ImprovementAboveThreshold : DecisionReason::NoGain;
    d.detail = "gain " + std::to_string(gain) + " s vs threshold " +
               std::to_string(cfg.threshold * prop.seconds()) + " s";
    return d;
}

inline RebalanceDecision evaluate_target(const ControlConfig& cfg, const TargetMode& mode,
                                         const RateProfile& rates, const Allocation& current,
                                         double measured_sojourn)
{
    Plan plan;
    try {
        plan = provision_min_resources(rates, mode.t_max, mode.k_cap);
    } catch (const UnreachableTargetError& e) {
        auto d = no_act(DecisionReason::UnreachableTarget, current, e.what());
        d.current_estimate = network_sojourn(rates, current);
        return d;
    }
    if (!plan.feasible) {
        auto d = no_act(DecisionReason::UnreachableTarget, current,
                        "processor cap reached before meeting T_max");
        d.current_estimate = network_sojourn(rates, current);
        return d;
    }
    if (cfg.processors_per_machine > 1) {
        const std::int64_t q = cfg.processors_per_machine;
        const std::int64_t rounded = (plan.processors_used + q - 1) / q * q;
        if (rounded != plan.processors_used)
            plan = assign_processors(rates, rounded);
    }

    RebalanceDecision d;
    d.current = current;
    d.proposed = plan.allocation;
    d.current_estimate = network_sojourn(rates, current);
    d.proposed_estimate = plan.estimate;
    const Sojourn target = Sojourn::finite(mode.t_max);
    const bool model_violates = d.current_estimate->total > target;
    const bool measured_violates = measured_sojourn > mode.t_max;

    if (current == plan.allocation) {
        d.reason = DecisionReason::NoGain;
        d.detail = "current allocation equals the provisioned plan";
        return d;
    }
    if (model_violates || measured_violates) {
        if (model_violates || plan.processors_used > current.total()) {
            d.act = true;
            d.reason = DecisionReason::TargetViolated;
            d.detail = model_violates ? "model estimate of current allocation exceeds T_max"
                                      : "measured sojourn exceeds T_max";
            return d;
        }
        d.reason = DecisionReason::NoGain;
        d.detail = "measured sojourn exceeds T_max but no larger plan is proposed";
        return d;
    }
    if (plan.processors_used < current.total()) {
        d.act = true;
        d.reason = DecisionReason::TargetMetWithFewer;
        d.detail = "T_max met with " + std::to_string(plan.processors_used) + " instead of " +
                   std::to_string(current.total()) + " processors";
        return d;
    }
    d.reason = DecisionReason::NoGain;
    d.detail = "target met; provisioned plan does not use fewer processors";
    return d;
}

}  // namespace detail

/// Decision for one interval. `intervals_since_rebalance` is empty when no
/// re-balance has happened yet.
inline RebalanceDecision evaluate(const ControlConfig& cfg, const SmoothedMetrics& sm, const Allocation& current,
                                  std::optional<std::int64_t> intervals_since_rebalance = std::nullopt)
{
    if (cfg.threshold < 0.0)
        throw std::invalid_argument("improvement threshold must be >= 0");
    if (cfg.cooldown < 1)
        throw std::invalid_argument("cooldown must be >= 1");
    if (cfg.processors_per_machine < 1)
        throw std::invalid_argument("processors per machine must be >= 1");

    RebalanceDecision d;
    if (sm.stale(kMaxCarryForward)) {
        d = detail::no_act(DecisionReason::StaleMetrics, current,
                           "service rate carried forward for more than " + std::to_string(kMaxCarryForward) +
                               " intervals; planning paused");
    } else {
        std::optional<RateProfile> rates;
        try {
            rates = measured_profile(sm);
        } catch (const MeasurementError& e) {
            d = detail::no_act(e.kind() == MeasurementError::Kind::StalledOperator
                                   ? DecisionReason::StalledOperator
                                   : DecisionReason::InvalidMeasurement,
                               current, e.what());
        }
        if (rates) {
            if (rates->size() != current.size())
                throw std::invalid_argument("allocation size does not match measured operators");
            if (const auto* cap = std::get_if<CapMode>(&cfg.mode))
                d = detail::evaluate_cap(cfg, *cap, *rates, current);
            else
                d = detail::evaluate_target(cfg, std::get<TargetMode>(cfg.mode), *rates, current,
                                            sm.mean_sojourn);
        }
    }
    d.rebalance_cost = cfg.rebalance_cost;
    d.interval = sm.interval;
    d.measured_sojourn = sm.mean_sojourn;

    if (d.act && cfg.passive) {
        d.act = false;
        d.gated_reason = d.reason;
        d.reason = DecisionReason::Passive;
    } else if (d.act && intervals_since_rebalance && *intervals_since_rebalance < cfg.cooldown) {
        d.act = false;
        d.gated_reason = d.reason;
        d.reason = DecisionReason::Cooldown;
    }
    return d;
}

struct NegotiationResult {
    bool acknowledged = true;
    std::string reason;

    static NegotiationResult ack() { return {true, {}}; }
    static NegotiationResult reject(std::string why) { return {false, std::move(why)}; }
};

/// Owner of the running system's allocation.
class Negotiator {
public:
    virtual ~Negotiator() = default;
    virtual NegotiationResult apply(const Allocation& allocation) = 0;
};

/// Records commands without acting on anything.
class DryRunNegotiator : public Negotiator {
public:
    NegotiationResult apply(const Allocation& allocation) override
    {
        applied_.push_back(allocation);
        return NegotiationResult::ack();
    }
    const std::vector<Allocation>& applied() const { return applied_; }

private:
    std::vector<Allocation> applied_;
};

/// Applies allocations to a live simulator.
class SimulatorNegotiator : public Negotiator {
public:
    explicit SimulatorNegotiator(Simulator& sim) : sim_(sim) {}

    NegotiationResult apply(const Allocation& allocation) override
    {
        try {
            sim_.set_allocation(allocation);
        } catch (const std::invalid_argument& e) {
            return NegotiationResult::reject(e.what());
        }
        return NegotiationResult::ack();
    }

private:
    Simulator& sim_;
};

/// Single-actor loop state: the allocation in force, the interval of the
/// last applied re-balance and the decision log.
class Controller {
public:
    explicit Controller(Allocation initial) : current_(std::move(initial)) {}

    const Allocation& current() const { return current_; }
    const std::vector<RebalanceDecision>& log() const { return log_; }

    /// One interval: evaluate, and on an act decision issue the command.
    /// Rejections leave the state unchanged and are recorded, not retried.
    const RebalanceDecision& step(const ControlConfig& cfg, const SmoothedMetrics& sm, Negotiator& negotiator)
    {
        ++intervals_;
        std::optional<std::int64_t> since;
        if (last_rebalance_)
            since = intervals_ - *last_rebalance_;
        RebalanceDecision d = evaluate(cfg, sm, current_, since);
        if (d.act) {
            auto res = negotiator.apply(d.proposed);
            if (res.acknowledged) {
                current_ = d.proposed;
                last_rebalance_ = intervals_;
            } else {
                d.rejected = true;
                d.rejection = res.reason;
            }
        }
        log_.push_back(std::move(d));
        return log_.back();
    }

private:
    Allocation current_;
    std::int64_t intervals_ = 0;
    std::optional<std::int64_t> last_rebalance_;
    std::vector<RebalanceDecision> log_;
};

}  // namespace opsched

#endif  // OPSCHED_CONTROL_HPP
