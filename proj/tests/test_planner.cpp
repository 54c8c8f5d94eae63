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
#include <numeric>

#include <gtest/gtest.h>

#include "opsched/planner.hpp"
#include "oracle.hpp"

namespace {

using opsched::Allocation;
using opsched::RateProfile;

const RateProfile kExample{4, {4, 1}, {1, 1}};

double total(const opsched::Plan& p) { return p.estimate.total.seconds(); }

TEST(Assign, PlannerExample)
{
    auto p = opsched::assign_processors(kExample, 8);
    ASSERT_TRUE(p.feasible);
    EXPECT_EQ(p.allocation, Allocation({6, 2}));
    EXPECT_NEAR(total(p), 1.475713756025213, 1e-12);
    ASSERT_EQ(p.trace.size(), 1u);
    EXPECT_EQ(p.trace[0].op, 0u);
    EXPECT_NEAR(p.trace[0].delta, 1.646928525682697, 1e-12);
}

TEST(Assign, InsufficientBudgetReportsDeficit)
{
    auto p = opsched::assign_processors({1, {4, 1}, {1, 1}}, 6);
    EXPECT_FALSE(p.feasible);
    EXPECT_EQ(p.deficit, 1);
}

TEST(Assign, ExactMinimumNeedsNoSteps)
{
    auto p = opsched::assign_processors(kExample, 7);
    ASSERT_TRUE(p.feasible);
    EXPECT_EQ(p.allocation, Allocation({5, 2}));
    EXPECT_TRUE(p.trace.empty());
}

TEST(Assign, TiesGoToLowestIndex)
{
    auto p = opsched::assign_processors({2, {1, 1}, {1, 1}}, 5);
    ASSERT_TRUE(p.feasible);
    EXPECT_EQ(p.allocation, Allocation({3, 2}));
}

TEST(Assign, NoTrafficStaysAtMinimum)
{
    auto p = opsched::assign_processors({1, {0, 0}, {1, 1}}, 10);
    EXPECT_TRUE(p.feasible);
    EXPECT_EQ(p.allocation, Allocation({1, 1}));
}

TEST(Assign, EvaluationCountIsLinear)
{
    RateProfile r{10, {10, 7, 3}, {1, 1, 1}};
    const std::int64_t minimum = 11 + 8 + 4;
    for (std::int64_t kmax : {23, 24, 50, 192}) {
        auto p = opsched::assign_processors(r, kmax);
        EXPECT_EQ(p.delta_evaluations, static_cast<std::uint64_t>((kmax - minimum) * 3));
        EXPECT_EQ(p.allocation.total(), kmax);
    }
}

TEST(Provision, PlannerExample)
{
    auto p = opsched::provision_min_resources(kExample, 1.5);
    ASSERT_TRUE(p.feasible);
    EXPECT_EQ(p.allocation, Allocation({6, 2}));
    EXPECT_EQ(p.processors_used, 8);
}

TEST(Provision, LooseTargetReturnsMinimum)
{
    auto p = opsched::provision_min_resources(kExample, 1e6);
    EXPECT_EQ(p.allocation, Allocation({5, 2}));
}

TEST(Provision, TargetAtFloorIsUnreachable)
{
    try {
        opsched::provision_min_resources(kExample, 1.25);
        FAIL();
    } catch (const opsched::UnreachableTargetError& e) {
        EXPECT_DOUBLE_EQ(e.bound(), 1.25);
    }
    EXPECT_THROW(opsched::provision_min_resources(kExample, 0.0), std::invalid_argument);
}

TEST(Provision, CapStopsSearch)
{
    auto p = opsched::provision_min_resources(kExample, 1.2501, 9);
    EXPECT_FALSE(p.feasible);
    EXPECT_EQ(p.processors_used, 9);
}

TEST(BruteForce, MatchesExampleAndGuardsSize)
{
    auto b = opsched::brute_force_optimal(kExample, 8);
    EXPECT_EQ(b.allocation, Allocation({6, 2}));
    EXPECT_NEAR(total(b), total(opsched::assign_processors(kExample, 8)), 1e-12);
    RateProfile big{1, std::vector<double>(10, 1.0), std::vector<double>(10, 2.0)};
    EXPECT_THROW(opsched::brute_force_optimal(big, 200), opsched::EnumerationTooLargeError);
    EXPECT_DOUBLE_EQ(opsched::enumeration_count(2, 8), 28.0);
}

TEST(Planner, RejectsInvalidRates)
{
    EXPECT_THROW(opsched::assign_processors({0, {1}, {1}}, 3), std::invalid_argument);
    EXPECT_THROW(opsched::assign_processors({1, {1}, {0}}, 3), std::invalid_argument);
}

// Property: greedy equals the independent exhaustive optimum and admits no
// improving single-processor exchange.
TEST(PlannerProperty, GreedyIsOptimal)
{
    oracle::Gen g(424242);
    for (int trial = 0; trial < 400; ++trial) {
        auto r = g.profile(4, 4.0);
        std::int64_t minimum = 0;
        for (std::size_t i = 0; i < r.size(); ++i)
            minimum += oracle::stable_min(r.lambdas[i], r.mus[i]);
        const std::int64_t kmax = minimum + g.integer(0, 8);
        auto p = opsched::assign_processors(r, kmax);
        auto best = oracle::enumerate(r, kmax);
        SCOPED_TRACE(trial);
        ASSERT_TRUE(p.feasible);
        ASSERT_NEAR(total(p), static_cast<double>(best.value), 1e-9 * static_cast<double>(best.value));
        ASSERT_TRUE(oracle::exchange_stable(r, p.allocation.counts));
    }
}

// Property: the greedy optimum improves with budget at diminishing rates.
TEST(PlannerProperty, OptimumConvexInBudget)
{
    oracle::Gen g(17);
    for (int trial = 0; trial < 100; ++trial) {
        auto r = g.profile(5);
        const auto minimum = opsched::minimum_allocation(r).total();
        std::vector<double> v;
        for (std::int64_t k = minimum; k < minimum + 12; ++k)
            v.push_back(total(opsched::assign_processors(r, k)));
        for (std::size_t i = 0; i + 1 < v.size(); ++i)
            ASSERT_LE(v[i + 1], v[i]);
        for (std::size_t i = 0; i + 2 < v.size(); ++i)
            ASSERT_GE(v[i] - v[i + 1], (v[i + 1] - v[i + 2]) * (1 - 1e-9) - 1e-15);
    }
}

// Property: provisioning returns K whose optimum meets the target while the
// K-1 optimum does not.
TEST(PlannerProperty, ProvisionIsMinimal)
{
    oracle::Gen g(31337);
    for (int trial = 0; trial < 150; ++trial) {
        auto r = g.profile(3, 3.0);
        const double floor = opsched::sojourn_lower_bound(r);
        const auto minimum = opsched::minimum_allocation(r).total();
        const double start = total(opsched::assign_processors(r, minimum));
        const double tmax = floor + g.uniform(0.02, 1.2) * (start - floor);
        auto p = opsched::provision_min_resources(r, tmax);
        SCOPED_TRACE(trial);
        ASSERT_TRUE(p.feasible);
        const auto k = p.processors_used;
        ASSERT_LE(static_cast<double>(oracle::enumerate(r, k).value), tmax * (1 + 1e-12));
        if (k > minimum) {
            ASSERT_GT(static_cast<double>(oracle::enumerate(r, k - 1).value), tmax * (1 - 1e-12));
        }
    }
}

}  // namespace
