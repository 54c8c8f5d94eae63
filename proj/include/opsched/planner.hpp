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

// Processor allocation for an operator network.
//
//  - assign_processors: minimize the expected sojourn under a processor cap.
//  - provision_min_resources: fewest processors meeting a sojourn target.
//  - brute_force_optimal: exhaustive enumeration, used as a test oracle.
//
// Both greedy routines start from the smallest stable count per operator and
// repeatedly give one processor to the operator with the largest weighted
// marginal benefit lambda_i * (E[T_i](k_i) - E[T_i](k_i + 1)). Because each
// E[T_i] is convex in k_i this yields the exact optimum for every budget
// along the way.

#ifndef OPSCHED_PLANNER_HPP
#define OPSCHED_PLANNER_HPP

#include <cstddef>
#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "opsched/queueing.hpp"
#include "opsched/topology.hpp"

namespace opsched {

struct PlanStep {
    std::int64_t step = 0;
    std::size_t op = 0;
    double delta = 0.0;
};

struct Plan {
    Allocation allocation;
    SojournEstimate estimate;
    std::int64_t processors_used = 0;
    bool feasible = false;
    // Processors missing to reach the stable minimum (CAP mode infeasible).
    std::int64_t deficit = 0;
    std::vector<PlanStep> trace;
    // Number of per-operator benefit evaluations performed.
    std::uint64_t delta_evaluations = 0;
};

/// Raised by provision_min_resources when the target is at or below the
/// k -> infinity floor of the network mean.
class UnreachableTargetError : public std::runtime_error {
public:
    UnreachableTargetError(double target, double bound)
        : std::runtime_error("unreachable target: T_max = " + std::to_string(target) +
                             " s but the lower bound is " + std::to_string(bound) + " s"),
          target_(target),
          bound_(bound)
    {
    }
    double target() const { return target_; }
    double bound() const { return bound_; }

private:
    double target_;
    double bound_;
};

class EnumerationTooLargeError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

inline constexpr std::int64_t kDefaultProvisionHeadroom = 10000;
inline constexpr double kMaxEnumeration = 1e7;

/// Stable minimum per operator.
inline Allocation minimum_allocation(const RateProfile& rates)
{
    std::vector<std::int64_t> k(rates.size());
    for (std::size_t i = 0; i < rates.size(); ++i)
        k[i] = min_stable_count(rates.lambdas[i], rates.mus[i]);
    return Allocation(std::move(k));
}

namespace detail {

inline void require_valid(const RateProfile& rates)
{
    auto rep = validate_rate_profile(rates);
    if (!rep.ok())
        throw std::invalid_argument("invalid rate profile: " + rep.to_string());
}

// Greedy engine shared by both planning modes.
class GreedyAllocator {
public:
    explicit GreedyAllocator(const RateProfile& rates) : rates_(rates)
    {
        auto k0 = minimum_allocation(rates);
        curves_.reserve(rates.size());
        for (std::size_t i = 0; i < rates.size(); ++i)
            curves_.emplace_back(rates.lambdas[i], rates.mus[i], k0[i]);
    }

    std::int64_t total() const
    {
        std::int64_t s = 0;
        for (const auto& c : curves_)
            s += c.count();
        return s;
    }

    bool any_traffic() const
    {
        for (double l : rates_.lambdas)
            if (l > 0.0)
                return true;
        return false;
    }

    Sojourn current_total() const
    {
        std::vector<Sojourn> per;
        per.reserve(curves_.size());
        for (const auto& c : curves_)
            per.push_back(c.current());
        return weighted_total(rates_, per);
    }

    // Adds one processor to the arg max of delta; lowest index wins ties.
    void add_one(Plan& plan)
    {
        std::size_t best = 0;
        double best_delta = -1.0;
        for (std::size_t i = 0; i < curves_.size(); ++i) {
            double d = curves_[i].benefit();
            ++plan.delta_evaluations;
            if (d > best_delta) {
                best_delta = d;
                best = i;
            }
        }
        curves_[best].advance();
        plan.trace.push_back({static_cast<std::int64_t>(plan.trace.size()), best, best_delta});
    }

    Allocation allocation() const
    {
        std::vector<std::int64_t> k;
        k.reserve(curves_.size());
        for (const auto& c : curves_)
            k.push_back(c.count());
        return Allocation(std::move(k));
    }

private:
    const RateProfile& rates_;
    std::vector<ErlangCurve> curves_;
};

inline void finish(Plan& plan, const RateProfile& rates, const Allocation& alloc)
{
    plan.allocation = alloc;
    plan.processors_used = alloc.total();
    plan.estimate = network_sojourn(rates, alloc);
}

}  // namespace detail

/// Minimizes E[T] subject to sum k_i <= k_max. When the stable minimum
/// already exceeds k_max the plan is infeasible and carries the deficit.
inline Plan assign_processors(const RateProfile& rates, std::int64_t k_max)
{
    detail::require_valid(rates);
    detail::GreedyAllocator greedy(rates);
    Plan plan;
    const std::int64_t minimum = greedy.total();
    if (minimum > k_max) {
        plan.feasible = false;
        plan.deficit = minimum - k_max;
        detail::finish(plan, rates, greedy.allocation());
        return plan;
    }
    // With no traffic anywhere every delta is zero; stay at the minimum.
    if (greedy.any_traffic()) {
        while (greedy.total() < k_max)
            greedy.add_one(plan);
    }
    plan.feasible = true;
    detail::finish(plan, rates, greedy.allocation());
    return plan;
}

/// Fewest processors whose optimal placement meets t_max (seconds). Stops
/// at k_cap processors (default: stable minimum + 10^4) with an infeasible
/// plan.
inline Plan provision_min_resources(const RateProfile& rates, double t_max,
                                    std::optional<std::int64_t> k_cap = std::nullopt)
{
    detail::require_valid(rates);
    if (!(t_max > 0.0))
        throw std::invalid_argument("T_max must be > 0");
    const double bound = sojourn_lower_bound(rates);
    if (t_max <= bound)
        throw UnreachableTargetError(t_max, bound);

    detail::GreedyAllocator greedy(rates);
    const std::int64_t cap = k_cap.value_or(greedy.total() + kDefaultProvisionHeadroom);
    Plan plan;
    Sojourn total = greedy.current_total();
    while (!(total <= Sojourn::finite(t_max)) && greedy.total() < cap) {
        greedy.add_one(plan);
        total = greedy.current_total();
    }
    detail::finish(plan, rates, greedy.allocation());
    plan.feasible = plan.estimate.total <= Sojourn::finite(t_max);
    return plan;
}

/// Number of allocations with every k_i >= 1 and sum <= k_max, C(k_max, n).
inline double enumeration_count(std::size_t n, std::int64_t k_max)
{
    if (k_max < static_cast<std::int64_t>(n))
        return 0.0;
    double c = 1.0;
    for (std::size_t j = 1; j <= n; ++j)
        c = c * static_cast<double>(k_max - static_cast<std::int64_t>(n) + static_cast<std::int64_t>(j)) /
            static_cast<double>(j);
    return c;
}

/// Exhaustive minimum of E[T] over all allocations with sum <= k_max.
/// Ties go to the lexicographically smallest allocation.
inline Plan brute_force_optimal(const RateProfile& rates, std::int64_t k_max)
{
    detail::require_valid(rates);
    const std::size_t n = rates.size();
    const double count = enumeration_count(n, k_max);
    if (count > kMaxEnumeration)
        throw EnumerationTooLargeError("brute force would enumerate " + std::to_string(count) +
                                       " allocations (limit 1e7)");
    Plan plan;
    auto minimum = minimum_allocation(rates);
    if (minimum.total() > k_max) {
        plan.feasible = false;
        plan.deficit = minimum.total() - k_max;
        detail::finish(plan, rates, minimum);
        return plan;
    }

    // table[i][k] = E[T_i](k) for k = 1 .. k_max - (n - 1)
    const std::int64_t kmax_each = k_max - static_cast<std::int64_t>(n) + 1;
    std::vector<std::vector<Sojourn>> table(n);
    for (std::size_t i = 0; i < n; ++i) {
        table[i].resize(static_cast<std::size_t>(kmax_each) + 1);
        for (std::int64_t k = 1; k <= kmax_each; ++k)
            table[i][static_cast<std::size_t>(k)] = erlang_sojourn(rates.lambdas[i], rates.mus[i], k);
    }

    std::vector<std::int64_t> cur(n, 1);
    std::vector<std::int64_t> best;
    Sojourn best_total = Sojourn::unstable();
    bool have_best = false;
    std::vector<Sojourn> per(n);

    // Lexicographic enumeration by recursion over operator index.
    auto recurse = [&](auto&& self, std::size_t i, std::int64_t remaining) -> void {
        if (i == n) {
            for (std::size_t j = 0; j < n; ++j)
                per[j] = table[j][static_cast<std::size_t>(cur[j])];
            Sojourn t = weighted_total(rates, per);
            if (!have_best || t < best_total) {
                best_total = t;
                best = cur;
                have_best = true;
            }
            return;
        }
        const std::int64_t reserve = static_cast<std::int64_t>(n - i - 1);
        for (std::int64_t k = 1; k <= remaining - reserve; ++k) {
            cur[i] = k;
            self(self, i + 1, remaining - k);
        }
    };
    recurse(recurse, 0, k_max);

    plan.feasible = true;
    detail::finish(plan, rates, Allocation(best));
    return plan;
}

}  // namespace opsched

#endif  // OPSCHED_PLANNER_HPP
