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
#include <limits>

#include <gtest/gtest.h>

#include "opsched/queueing.hpp"
#include "oracle.hpp"

namespace {

using opsched::Allocation;
using opsched::erlang_sojourn;
using opsched::Sojourn;

TEST(Erlang, SingleServerClosedForm)
{
    EXPECT_DOUBLE_EQ(erlang_sojourn(1, 2, 1).seconds(), 1.0);
    for (int i = 1; i <= 9; ++i) {
        const double rho = i / 10.0;
        const double mu = 3.0;
        const double got = erlang_sojourn(rho * mu, mu, 1).seconds();
        const double want = static_cast<double>(oracle::mm1_sojourn(rho * mu, mu));
        EXPECT_NEAR(got, want, 1e-10 * want);
    }
}

TEST(Erlang, TwoServersAtUnitLoad)
{
    EXPECT_NEAR(erlang_sojourn(1, 1, 2).seconds(), 4.0 / 3.0, 1e-12);
}

TEST(Erlang, UnstableAtOrAboveCapacity)
{
    EXPECT_TRUE(erlang_sojourn(2, 1, 2).is_unstable());
    EXPECT_TRUE(erlang_sojourn(5, 1, 3).is_unstable());
    EXPECT_TRUE(erlang_sojourn(1, 1, 2).is_finite());
}

TEST(Erlang, ZeroArrivalsIsPureService)
{
    EXPECT_DOUBLE_EQ(erlang_sojourn(0, 4, 3).seconds(), 0.25);
}

TEST(Erlang, RejectsBadArguments)
{
    EXPECT_THROW(erlang_sojourn(1, 0, 1), std::invalid_argument);
    EXPECT_THROW(erlang_sojourn(-1, 1, 1), std::invalid_argument);
    EXPECT_THROW(erlang_sojourn(1, 1, 0), std::invalid_argument);
    EXPECT_THROW(erlang_sojourn(NAN, 1, 1), std::invalid_argument);
}

TEST(Erlang, RecurrenceMatchesFactorialForm)
{
    for (int k = 1; k <= 20; ++k) {
        for (int step = 1; step <= 120; ++step) {
            const double a = step / 8.0;
            if (k <= a)
                continue;
            const double mu = 1.7;
            const double got = erlang_sojourn(a * mu, mu, k).seconds();
            const double want = static_cast<double>(oracle::mmk_sojourn(a * mu, mu, k));
            ASSERT_NEAR(got, want, 1e-10 * want) << "k=" << k << " a=" << a;
        }
    }
}

TEST(Erlang, LargeCountsStayFinite)
{
    auto s = erlang_sojourn(900.0, 1.0, 1000);
    ASSERT_TRUE(s.is_finite());
    EXPECT_GE(s.seconds(), 1.0);
    EXPECT_LT(s.seconds(), 1.01);
}

TEST(Erlang, ErlangCFromB)
{
    // Single server: probability of waiting equals utilization.
    EXPECT_NEAR(opsched::erlang_c(0.6, 1), 0.6, 1e-15);
    EXPECT_NEAR(opsched::erlang_b(1.0, 1), 0.5, 1e-15);
}

TEST(MinStable, FloorPlusOne)
{
    EXPECT_EQ(opsched::min_stable_count(4, 1), 5);
    EXPECT_EQ(opsched::min_stable_count(3.9, 1), 4);
    EXPECT_EQ(opsched::min_stable_count(0, 1), 1);
    EXPECT_EQ(opsched::min_stable_count(1, 1), 2);
}

TEST(MarginalBenefit, PlannerExampleValues)
{
    EXPECT_NEAR(opsched::marginal_benefit(4, 1, 5), 1.646928525682697, 1e-12);
    EXPECT_NEAR(opsched::marginal_benefit(1, 1, 2), 0.287878787878788, 1e-12);
    EXPECT_EQ(opsched::marginal_benefit(4, 1, 4), opsched::kMaxBenefit);
    EXPECT_EQ(opsched::marginal_benefit(0, 1, 4), 0.0);
}

TEST(SojournOrder, UnstableAboveEverything)
{
    EXPECT_LT(Sojourn::finite(1e300), Sojourn::unstable());
    EXPECT_FALSE(Sojourn::unstable() < Sojourn::unstable());
    EXPECT_EQ(Sojourn::unstable(), Sojourn::unstable());
    EXPECT_THROW((void)Sojourn::unstable().seconds(), std::logic_error);
    EXPECT_EQ(Sojourn::unstable().to_string(), "UNSTABLE");
}

TEST(Network, WeightedMean)
{
    opsched::RateProfile r{4, {4, 1}, {1, 1}};
    auto e = opsched::network_sojourn(r, Allocation({6, 2}));
    EXPECT_NEAR(e.total.seconds(), 1.475713756025213, 1e-12);
    EXPECT_NEAR(e.per_operator[0].seconds(), 1.142380422691880, 1e-12);
    EXPECT_TRUE(e.stable);
    auto start = opsched::network_sojourn(r, Allocation({5, 2}));
    EXPECT_NEAR(start.total.seconds(), 1.887445887445887, 1e-12);
}

TEST(Network, UnstableStationMakesTotalUnstable)
{
    opsched::RateProfile r{4, {4, 1}, {1, 1}};
    auto e = opsched::network_sojourn(r, Allocation({4, 2}));
    EXPECT_TRUE(e.total.is_unstable());
    EXPECT_FALSE(e.stable);
}

TEST(Network, IdleOperatorCarriesNoWeight)
{
    opsched::RateProfile r{2, {2, 0}, {4, 1}};
    auto e = opsched::network_sojourn(r, Allocation({1, 1}));
    EXPECT_NEAR(e.total.seconds(), 0.5, 1e-15);
}

TEST(Network, DimensionAndRateErrors)
{
    opsched::RateProfile r{4, {4, 1}, {1, 1}};
    EXPECT_THROW(opsched::network_sojourn(r, Allocation({6})), std::invalid_argument);
    opsched::RateProfile bad{0, {4, 1}, {1, 1}};
    EXPECT_THROW(opsched::network_sojourn(bad, Allocation({6, 2})), std::invalid_argument);
}

TEST(Network, LowerBoundIsServiceFloor)
{
    opsched::RateProfile r{4, {4, 1}, {1, 1}};
    EXPECT_NEAR(opsched::sojourn_lower_bound(r), 1.25, 1e-15);
}

TEST(ErlangCurve, MatchesDirectEvaluationBitForBit)
{
    opsched::ErlangCurve c(7.3, 1.1, opsched::min_stable_count(7.3, 1.1));
    for (int step = 0; step < 50; ++step) {
        const auto k = c.count();
        ASSERT_EQ(c.current(), erlang_sojourn(7.3, 1.1, k));
        ASSERT_EQ(c.next(), erlang_sojourn(7.3, 1.1, k + 1));
        ASSERT_EQ(c.benefit(), opsched::marginal_benefit(7.3, 1.1, k));
        c.advance();
    }
}

// Property: in the stable region E[T] decreases in k with strictly
// shrinking forward differences.
TEST(ErlangProperty, MonotoneAndConvex)
{
    oracle::Gen g(99);
    for (int trial = 0; trial < 10000; ++trial) {
        const double mu = g.uniform(0.1, 50.0);
        const double lambda = g.uniform(0.0, 40.0) * mu;
        const auto k0 = opsched::min_stable_count(lambda, mu);
        const auto k = k0 + g.integer(0, 30);
        const double e0 = erlang_sojourn(lambda, mu, k).seconds();
        const double e1 = erlang_sojourn(lambda, mu, k + 1).seconds();
        const double e2 = erlang_sojourn(lambda, mu, k + 2).seconds();
        ASSERT_GE(e0, e1);
        ASSERT_GE(e0 - e1, e1 - e2) << lambda << " " << mu << " " << k;
        ASSERT_GE(e1, 1.0 / mu * (1.0 - 1e-15));
    }
}

// Property: more load never helps.
TEST(ErlangProperty, IncreasingInLoad)
{
    oracle::Gen g(5);
    for (int trial = 0; trial < 2000; ++trial) {
        const double mu = g.uniform(0.5, 5.0);
        const int k = static_cast<int>(g.integer(1, 20));
        const double l1 = g.uniform(0.0, k * mu * 0.99);
        const double l2 = g.uniform(l1, k * mu * 0.99);
        ASSERT_LE(erlang_sojourn(l1, mu, k).seconds(), erlang_sojourn(l2, mu, k).seconds() * (1 + 1e-14));
    }
}

TEST(Allocation, FormattingAndValidity)
{
    Allocation a({6, 2});
    EXPECT_EQ(a.to_string(), "6:2");
    EXPECT_EQ(a.total(), 8);
    EXPECT_TRUE(a.valid());
    EXPECT_FALSE(Allocation({6, 0}).valid());
    EXPECT_FALSE(Allocation().valid());
}

}  // namespace
