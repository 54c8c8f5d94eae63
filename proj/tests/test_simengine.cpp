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

#include <cmath>

#include <gtest/gtest.h>

#include "opsched/simengine.hpp"
#include "oracle.hpp"

namespace {

using opsched::Allocation;
using opsched::SimConfig;
using opsched::Topology;

Topology chain()
{
    return Topology({{0, "extract", 10.0}, {1, "match", 8.0}, {2, "agg", 12.0}},
                    {{0, 1, 0}, {0, 0, 1}, {0, 0, 0}}, {20, 0, 0});
}

SimConfig single(double lambda, double mu, std::int64_t k, std::uint64_t horizon = 200000)
{
    SimConfig c;
    c.topology = Topology({{0, "q", mu}}, {{0.0}}, {lambda});
    c.allocation = Allocation({k});
    c.horizon = horizon;
    c.seed = 3;
    return c;
}

TEST(Simulator, SingleServerMatchesClosedForm)
{
    auto r = opsched::run_simulation(single(1.0, 2.0, 1));
    EXPECT_NEAR(r.mean_sojourn, 1.0, 0.03);
    EXPECT_EQ(r.completed, 180000u);
}

TEST(Simulator, DeterministicServiceBeatsExponential)
{
    auto md1 = single(0.8, 1.0, 1);
    md1.service.kind = opsched::ServiceDistribution::Kind::Deterministic;
    auto mm1 = single(0.8, 1.0, 1);
    const double d = opsched::run_simulation(md1).mean_sojourn;
    const double m = opsched::run_simulation(mm1).mean_sojourn;
    EXPECT_LT(d, m);
    // Pollaczek-Khinchine: M/D/1 sojourn = 1/mu + rho/(2 mu (1 - rho)) = 3.
    EXPECT_NEAR(d, 3.0, 0.15);
}

TEST(Simulator, UniformServicePreservesMean)
{
    auto c = single(1.0, 4.0, 2);
    c.service.kind = opsched::ServiceDistribution::Kind::Uniform;
    c.service.lo = 1.0;
    c.service.hi = 3.0;
    auto r = opsched::run_simulation(c);
    EXPECT_NEAR(r.per_operator[0].mean_service, 0.25, 0.25 * 0.01);
}

TEST(Simulator, SameSeedIsBitIdentical)
{
    SimConfig c;
    c.topology = chain();
    c.allocation = Allocation({3, 4, 2});
    c.horizon = 50000;
    c.seed = 42;
    auto a = opsched::run_simulation(c);
    auto b = opsched::run_simulation(c);
    EXPECT_EQ(a.mean_sojourn, b.mean_sojourn);
    EXPECT_EQ(a.p99, b.p99);
    EXPECT_EQ(a.per_operator[1].utilization, b.per_operator[1].utilization);
    c.seed = 43;
    EXPECT_NE(opsched::run_simulation(c).mean_sojourn, a.mean_sojourn);
}

// Little's law, the utilization identity and rate fidelity per operator.
TEST(Simulator, OperationalLawsHold)
{
    SimConfig c;
    c.topology = Topology({{0, "a", 6.0}, {1, "b", 5.0}, {2, "c", 9.0}},
                          {{0, 1, 0}, {0.3, 0, 0.6}, {0, 0, 0}}, {8, 0, 0});
    c.allocation = Allocation({3, 4, 2});
    c.horizon = 300000;
    c.seed = 9;
    auto r = opsched::run_simulation(c);
    auto rates = opsched::solve_traffic(c.topology);
    for (std::size_t i = 0; i < 3; ++i) {
        const auto& o = r.per_operator[i];
        SCOPED_TRACE(o.name);
        const double lambda = rates.lambdas[i];
        EXPECT_NEAR(o.observed_lambda, lambda, 0.02 * lambda);
        EXPECT_NEAR(o.observed_mu, c.topology.op(i).service_rate, 0.02 * c.topology.op(i).service_rate);
        EXPECT_NEAR(o.utilization, lambda / (c.allocation[i] * c.topology.op(i).service_rate), 0.02);
        const double little = o.observed_lambda * (o.mean_queue_wait + o.mean_service);
        EXPECT_NEAR(o.mean_in_system, little, 0.03 * little);
    }
}

TEST(Simulator, HashDispatchIsSlowerThanSharedQueue)
{
    SimConfig c = single(3.0, 1.0, 4, 100000);
    const double fifo = opsched::run_simulation(c).mean_sojourn;
    c.dispatch = opsched::Dispatch::Hash;
    const double hash = opsched::run_simulation(c).mean_sojourn;
    EXPECT_GT(hash, fifo);
}

TEST(Simulator, OverloadIsDetected)
{
    SimConfig c = single(2.0, 1.0, 1, 100000);
    c.queue_cap = 1000;
    try {
        opsched::run_simulation(c);
        FAIL();
    } catch (const opsched::SimulationUnstableError& e) {
        EXPECT_EQ(e.operator_id(), 0u);
    }
}

TEST(Simulator, ConfigValidation)
{
    SimConfig c = single(1.0, 2.0, 1);
    c.warmup = c.horizon;
    EXPECT_THROW(opsched::run_simulation(c), std::invalid_argument);
    c = single(1.0, 2.0, 1);
    c.allocation = Allocation({1, 1});
    EXPECT_THROW(opsched::run_simulation(c), std::invalid_argument);
    EXPECT_EQ(single(1, 2, 1, 1000).effective_warmup(), 100u);
}

TEST(Simulator, CompareWithModelOnChain)
{
    SimConfig c;
    c.topology = chain();
    c.allocation = Allocation({5, 5, 4});
    c.horizon = 200000;
    auto r = opsched::compare_with_model(c);
    ASSERT_TRUE(r.relative_error.has_value());
    EXPECT_LT(std::abs(*r.relative_error), 0.03);
    EXPECT_LE(r.p50, r.p95);
    EXPECT_LE(r.p95, r.p99);
}

TEST(Intervals, SampledCountersScaleBack)
{
    auto topo = chain();
    for (std::uint64_t nm : {1u, 7u}) {
        opsched::Simulator sim(topo, Allocation({4, 4, 3}), {}, {}, 5, opsched::Dispatch::Fifo, 10000000,
                               {nm, 500.0});
        opsched::OperatorAggregator agg(3, {nm, 500.0});
        sim.run_interval(100.0);
        auto m = sim.run_interval(500.0);
        auto d = agg.aggregate(m.samples, m.global);
        EXPECT_DOUBLE_EQ(m.global.window_start, 100.0);
        EXPECT_DOUBLE_EQ(sim.now(), 600.0);
        for (std::size_t i = 0; i < 3; ++i) {
            EXPECT_NEAR(d.lambdas[i], 20.0, 20.0 * 0.05);
            EXPECT_NEAR(d.mus[i], topo.op(i).service_rate, topo.op(i).service_rate * 0.05);
        }
        EXPECT_NEAR(d.lambda0, 20.0, 1.0);
    }
}

TEST(Intervals, SetAllocationAndServiceRateTakeEffect)
{
    auto topo = chain();
    opsched::Simulator sim(topo, Allocation({3, 3, 2}), {}, {}, 5);
    auto before = sim.run_interval(2000.0);
    sim.set_allocation(Allocation({6, 6, 5}));
    EXPECT_EQ(sim.allocation(), Allocation({6, 6, 5}));
    sim.run_interval(200.0);
    auto after = sim.run_interval(2000.0);
    const double t0 = before.global.sojourn_time_total / static_cast<double>(before.global.completed_tuples);
    const double t1 = after.global.sojourn_time_total / static_cast<double>(after.global.completed_tuples);
    EXPECT_LT(t1, t0);
    EXPECT_THROW(sim.set_allocation(Allocation({1, 1})), std::invalid_argument);
    EXPECT_THROW(sim.set_service_rate(0, 0.0), std::invalid_argument);

    sim.set_service_rate(0, 5.0);
    sim.run_interval(200.0);
    opsched::OperatorAggregator agg(3, {});
    auto m = sim.run_interval(2000.0);
    auto d = agg.aggregate(m.samples, m.global);
    EXPECT_NEAR(d.mus[0], 5.0, 0.25);
}

}  // namespace
