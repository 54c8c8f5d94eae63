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

#include <gtest/gtest.h>

#include "opsched/control.hpp"
#include "opsched/loop.hpp"
#include "oracle.hpp"

namespace {

using opsched::Allocation;
using opsched::CapMode;
using opsched::ControlConfig;
using opsched::DecisionReason;
using opsched::SmoothedMetrics;
using opsched::TargetMode;

// Smoothed snapshot holding exactly the given rates.
SmoothedMetrics snapshot(double lambda0, std::vector<double> lambdas, std::vector<double> mus,
                         double sojourn = 0.0, std::uint64_t interval = 1)
{
    SmoothedMetrics s;
    s.interval = interval;
    s.lambda0 = lambda0;
    s.staleness.assign(lambdas.size(), 0);
    s.lambdas = std::move(lambdas);
    s.mus = std::move(mus);
    s.mean_sojourn = sojourn;
    return s;
}

const SmoothedMetrics kExample = snapshot(4, {4, 1}, {1, 1});

ControlConfig cap(std::int64_t k)
{
    ControlConfig c;
    c.mode = CapMode{k};
    return c;
}

TEST(Evaluate, OptimalCurrentIsNoGain)
{
    auto d = opsched::evaluate(cap(8), kExample, Allocation({6, 2}));
    EXPECT_FALSE(d.act);
    EXPECT_EQ(d.reason, DecisionReason::NoGain);
}

TEST(Evaluate, UnstableCurrentAlwaysActs)
{
    auto c = cap(8);
    c.threshold = 1e9;
    auto d = opsched::evaluate(c, kExample, Allocation({4, 4}));
    EXPECT_TRUE(d.act);
    EXPECT_EQ(d.reason, DecisionReason::ImprovementAboveThreshold);
    EXPECT_EQ(d.proposed, Allocation({6, 2}));
}

TEST(Evaluate, ThresholdGatesSmallGains)
{
    // 5:3 -> 6:2 gains about 21% of the proposed estimate.
    auto c = cap(8);
    c.threshold = 0.1;
    EXPECT_TRUE(opsched::evaluate(c, kExample, Allocation({5, 3})).act);
    c.threshold = 0.5;
    auto d = opsched::evaluate(c, kExample, Allocation({5, 3}));
    EXPECT_FALSE(d.act);
    EXPECT_EQ(d.reason, DecisionReason::NoGain);
}

TEST(Evaluate, AmortizationRequiresGainTimesHorizonAboveCost)
{
    auto c = cap(8);
    c.rebalance_cost = 10.0;
    c.amortization_horizon = 1.0;
    EXPECT_FALSE(opsched::evaluate(c, kExample, Allocation({5, 3})).act);
    c.amortization_horizon = 1e4;
    EXPECT_TRUE(opsched::evaluate(c, kExample, Allocation({5, 3})).act);
}

TEST(Evaluate, PassiveRecordsWouldBeReason)
{
    auto c = cap(8);
    c.passive = true;
    auto d = opsched::evaluate(c, kExample, Allocation({4, 4}));
    EXPECT_FALSE(d.act);
    EXPECT_EQ(d.reason, DecisionReason::Passive);
    EXPECT_EQ(d.gated_reason, DecisionReason::ImprovementAboveThreshold);
}

TEST(Evaluate, CooldownGate)
{
    auto d = opsched::evaluate(cap(8), kExample, Allocation({4, 4}), 2);
    EXPECT_EQ(d.reason, DecisionReason::Cooldown);
    EXPECT_TRUE(opsched::evaluate(cap(8), kExample, Allocation({4, 4}), 3).act);
}

TEST(Evaluate, DiagnosticReasons)
{
    auto stalled = snapshot(4, {4, 1}, {1, 0});
    EXPECT_EQ(opsched::evaluate(cap(8), stalled, Allocation({6, 2})).reason, DecisionReason::StalledOperator);
    auto stale = kExample;
    stale.staleness = {0, 4};
    EXPECT_EQ(opsched::evaluate(cap(8), stale, Allocation({6, 2})).reason, DecisionReason::StaleMetrics);
    EXPECT_EQ(opsched::evaluate(cap(6), kExample, Allocation({6, 2})).reason,
              DecisionReason::InsufficientProcessors);
    auto bad = cap(8);
    bad.cooldown = 0;
    EXPECT_THROW(opsched::evaluate(bad, kExample, Allocation({6, 2})), std::invalid_argument);
}

TEST(EvaluateTarget, ScaleInScaleOutAndUnreachable)
{
    ControlConfig c;
    c.mode = TargetMode{1.5, std::nullopt};
    auto in = opsched::evaluate(c, kExample, Allocation({10, 10}));
    EXPECT_TRUE(in.act);
    EXPECT_EQ(in.reason, DecisionReason::TargetMetWithFewer);
    EXPECT_EQ(in.proposed, Allocation({6, 2}));
    EXPECT_LE(in.proposed_estimate->total.seconds(), 1.5);

    auto out = opsched::evaluate(c, kExample, Allocation({5, 2}));
    EXPECT_TRUE(out.act);
    EXPECT_EQ(out.reason, DecisionReason::TargetViolated);

    c.mode = TargetMode{1.0, std::nullopt};
    EXPECT_EQ(opsched::evaluate(c, kExample, Allocation({6, 2})).reason, DecisionReason::UnreachableTarget);
}

TEST(EvaluateTarget, MeasuredViolationOnlyScalesOut)
{
    ControlConfig c;
    c.mode = TargetMode{1.5, std::nullopt};
    auto slow = snapshot(4, {4, 1}, {1, 1}, 2.0);
    auto d = opsched::evaluate(c, slow, Allocation({7, 3}));
    EXPECT_FALSE(d.act);
    EXPECT_EQ(d.reason, DecisionReason::NoGain);
}

TEST(EvaluateTarget, MachineQuantum)
{
    ControlConfig c;
    c.mode = TargetMode{1.5, std::nullopt};
    c.processors_per_machine = 5;
    auto d = opsched::evaluate(c, kExample, Allocation({10, 10}));
    EXPECT_EQ(d.proposed.total(), 10);
}

class Rejecting : public opsched::Negotiator {
public:
    opsched::NegotiationResult apply(const Allocation&) override
    {
        ++calls;
        return opsched::NegotiationResult::reject("cluster busy");
    }
    int calls = 0;
};

TEST(Controller, RejectionLeavesStateAndIsLogged)
{
    opsched::Controller ctl(Allocation({4, 4}));
    Rejecting neg;
    auto d = ctl.step(cap(8), kExample, neg);
    EXPECT_TRUE(d.rejected);
    EXPECT_EQ(d.rejection, "cluster busy");
    EXPECT_EQ(ctl.current(), Allocation({4, 4}));
    EXPECT_EQ(neg.calls, 1);
    EXPECT_EQ(ctl.log().size(), 1u);
}

TEST(Controller, CooldownAfterAppliedRebalance)
{
    opsched::Controller ctl(Allocation({5, 3}));
    opsched::DryRunNegotiator neg;
    EXPECT_TRUE(ctl.step(cap(8), kExample, neg).act);
    EXPECT_EQ(ctl.current(), Allocation({6, 2}));
    // The rates shift so a different plan becomes better right away.
    auto shifted = snapshot(4, {1, 4}, {1, 1});
    EXPECT_EQ(ctl.step(cap(8), shifted, neg).reason, DecisionReason::Cooldown);
    EXPECT_EQ(ctl.step(cap(8), shifted, neg).reason, DecisionReason::Cooldown);
    EXPECT_TRUE(ctl.step(cap(8), shifted, neg).act);
    EXPECT_EQ(neg.applied().size(), 2u);
    EXPECT_EQ(ctl.log().size(), 4u);
}

TEST(Controller, ConvergesUnderStationaryRates)
{
    opsched::Controller ctl(Allocation({4, 4}));
    opsched::DryRunNegotiator neg;
    for (int n = 0; n < 10; ++n)
        ctl.step(cap(8), kExample, neg);
    EXPECT_EQ(neg.applied().size(), 1u);
    EXPECT_EQ(ctl.log().back().reason, DecisionReason::NoGain);
}

TEST(Loop, StationarySimulationSettlesAfterOneRebalance)
{
    opsched::SimConfig sim;
    sim.topology = opsched::Topology({{0, "a", 10.0}, {1, "b", 8.0}}, {{0, 1}, {0, 0}}, {20, 0});
    sim.allocation = Allocation({7, 3});
    ControlConfig c = cap(10);
    opsched::LoopSchedule s;
    s.intervals = 12;
    s.sampling.pull_interval = 120.0;
    auto res = opsched::run_control_loop(sim, c, s);
    EXPECT_EQ(res.rebalances, 1u);
    auto best = oracle::enumerate({20, {20, 20}, {10, 8}}, 10);
    EXPECT_EQ(res.final_allocation, Allocation(best.k));
    EXPECT_EQ(res.intervals.size(), 12u);
    for (const auto& r : res.intervals)
        EXPECT_EQ(r.decision.interval, r.interval);
}

TEST(Loop, PassiveIntervalsNeverAct)
{
    opsched::SimConfig sim;
    sim.topology = opsched::Topology({{0, "a", 10.0}, {1, "b", 8.0}}, {{0, 1}, {0, 0}}, {20, 0});
    sim.allocation = Allocation({7, 3});
    opsched::LoopSchedule s;
    s.intervals = 6;
    s.passive_intervals = 4;
    s.sampling.pull_interval = 120.0;
    auto res = opsched::run_control_loop(sim, cap(10), s);
    for (std::size_t i = 0; i < 4; ++i)
        EXPECT_EQ(res.intervals[i].decision.reason, DecisionReason::Passive);
    EXPECT_TRUE(res.intervals[4].decision.act);
    EXPECT_EQ(res.rebalances, 1u);
}

}  // namespace
