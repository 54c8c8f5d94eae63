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

// Operator network description and the open-network traffic equations.
//
// A topology is a set of operators, an N x N routing matrix p[i][j] (the
// probability that a tuple finishing at operator i is forwarded to operator
// j; the row deficit is the exit probability) and a vector of external
// arrival rates. All rates are per second.

#ifndef OPSCHED_TOPOLOGY_HPP
#define OPSCHED_TOPOLOGY_HPP

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <numeric>
#include <sstream>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace opsched {

struct OperatorSpec {
    std::size_t id = 0;
    std::string name;
    double service_rate = 0.0;  // per processor, tuples/s
};

class Topology {
public:
    Topology() = default;
    Topology(std::vector<OperatorSpec> operators,
             std::vector<std::vector<double>> routing,
             std::vector<double> external_rates)
        : operators_(std::move(operators)),
          routing_(std::move(routing)),
          external_rates_(std::move(external_rates))
    {
    }

    std::size_t size() const { return operators_.size(); }
    const std::vector<OperatorSpec>& operators() const { return operators_; }
    const OperatorSpec& op(std::size_t i) const { return operators_.at(i); }
    const std::vector<std::vector<double>>& routing() const { return routing_; }
    double routing(std::size_t from, std::size_t to) const { return routing_[from][to]; }
    const std::vector<double>& external_rates() const { return external_rates_; }

    double exit_probability(std::size_t i) const
    {
        double row = std::accumulate(routing_[i].begin(), routing_[i].end(), 0.0);
        return std::max(0.0, 1.0 - row);
    }

    std::vector<double> service_rates() const
    {
        std::vector<double> mus;
        mus.reserve(operators_.size());
        for (const auto& o : operators_)
            mus.push_back(o.service_rate);
        return mus;
    }

private:
    std::vector<OperatorSpec> operators_;
    std::vector<std::vector<double>> routing_;
    std::vector<double> external_rates_;
};

/// Per-operator arrival and service rates plus the total external rate.
/// This is the full input of the queueing model.
struct RateProfile {
    double lambda0 = 0.0;
    std::vector<double> lambdas;
    std::vector<double> mus;

    std::size_t size() const { return lambdas.size(); }
};

struct ValidationReport {
    std::vector<std::string> violations;

    bool ok() const { return violations.empty(); }

    std::string to_string() const
    {
        std::ostringstream os;
        for (std::size_t i = 0; i < violations.size(); ++i)
            os << (i ? "; " : "") << violations[i];
        return os.str();
    }
};

/// Thrown when a topology is not an open network: some operators receive
/// traffic but no exit is reachable from them.
class TrafficDivergenceError : public std::runtime_error {
public:
    TrafficDivergenceError(const std::string& what, std::vector<std::size_t> component)
        : std::runtime_error(what), component_(std::move(component))
    {
    }
    const std::vector<std::size_t>& component() const { return component_; }

private:
    std::vector<std::size_t> component_;
};

namespace detail {

inline constexpr double kRowTolerance = 1e-12;
inline constexpr int kFixedPointIterationCap = 100000;
inline constexpr double kFixedPointRelTol = 1e-12;

inline std::string fmt_double(double v)
{
    std::ostringstream os;
    os.precision(12);
    os << v;
    return os.str();
}

// Operators reachable from an external source along positive-probability
// edges.
inline std::vector<bool> traffic_reachable(const Topology& t)
{
    const std::size_t n = t.size();
    std::vector<bool> seen(n, false);
    std::vector<std::size_t> stack;
    for (std::size_t j = 0; j < n; ++j) {
        if (t.external_rates()[j] > 0.0) {
            seen[j] = true;
            stack.push_back(j);
        }
    }
    while (!stack.empty()) {
        std::size_t i = stack.back();
        stack.pop_back();
        for (std::size_t j = 0; j < n; ++j) {
            if (t.routing(i, j) > 0.0 && !seen[j]) {
                seen[j] = true;
                stack.push_back(j);
            }
        }
    }
    return seen;
}

// Operators from which some exit (positive row deficit) can be reached.
inline std::vector<bool> reaches_exit(const Topology& t)
{
    const std::size_t n = t.size();
    std::vector<bool> good(n, false);
    for (std::size_t i = 0; i < n; ++i)
        good[i] = t.exit_probability(i) > kRowTolerance;
    bool changed = true;
    while (changed) {
        changed = false;
        for (std::size_t i = 0; i < n; ++i) {
            if (good[i])
                continue;
            for (std::size_t j = 0; j < n; ++j) {
                if (t.routing(i, j) > 0.0 && good[j]) {
                    good[i] = true;
                    changed = true;
                    break;
                }
            }
        }
    }
    return good;
}

// Traffic-carrying operators that cannot reach an exit; empty iff open.
inline std::vector<std::size_t> trapped_operators(const Topology& t)
{
    auto live = traffic_reachable(t);
    auto exits = reaches_exit(t);
    std::vector<std::size_t> trapped;
    for (std::size_t i = 0; i < t.size(); ++i)
        if (live[i] && !exits[i])
            trapped.push_back(i);
    return trapped;
}

inline std::string name_list(const Topology& t, const std::vector<std::size_t>& ids)
{
    std::string out = "{";
    for (std::size_t k = 0; k < ids.size(); ++k) {
        out += (k ? ", " : "");
        out += t.op(ids[k]).name.empty() ? std::to_string(ids[k]) : t.op(ids[k]).name;
    }
    return out + "}";
}

}  // namespace detail

/// Checks every structural invariant; violations are returned, never thrown.
inline ValidationReport validate_topology(const Topology& t)
{
    ValidationReport r;
    const std::size_t n = t.size();
    if (n == 0) {
        r.violations.push_back("topology has no operators");
        return r;
    }
    for (std::size_t i = 0; i < n; ++i) {
        const auto& o = t.op(i);
        if (o.id != i)
            r.violations.push_back("operator " + std::to_string(i) + " has id " +
                                   std::to_string(o.id) + " (ids must be dense 0..N-1)");
        if (!std::isfinite(o.service_rate) || o.service_rate <= 0.0)
            r.violations.push_back("operator " + std::to_string(i) + " service_rate " +
                                   detail::fmt_double(o.service_rate) +
                                   " must be finite and > 0");
    }
    if (t.routing().size() != n) {
        r.violations.push_back("routing has " + std::to_string(t.routing().size()) +
                               " rows, expected " + std::to_string(n));
        return r;
    }
    bool routing_ok = true;
    for (std::size_t i = 0; i < n; ++i) {
        const auto& row = t.routing()[i];
        if (row.size() != n) {
            r.violations.push_back("row " + std::to_string(i) + " has " +
                                   std::to_string(row.size()) + " entries, expected " +
                                   std::to_string(n));
            routing_ok = false;
            continue;
        }
        double sum = 0.0;
        for (std::size_t j = 0; j < n; ++j) {
            double p = row[j];
            if (!std::isfinite(p) || p < 0.0 || p > 1.0) {
                r.violations.push_back("row " + std::to_string(i) + " entry " +
                                       std::to_string(j) + " = " + detail::fmt_double(p) +
                                       " is not a probability");
                routing_ok = false;
            }
            sum += p;
        }
        if (sum > 1.0 + detail::kRowTolerance) {
            r.violations.push_back("row " + std::to_string(i) + " sums to " +
                                   detail::fmt_double(sum) + " > 1");
            routing_ok = false;
        }
    }
    if (t.external_rates().size() != n) {
        r.violations.push_back("external_rates has " +
                               std::to_string(t.external_rates().size()) +
                               " entries, expected " + std::to_string(n));
        return r;
    }
    double total = 0.0;
    for (std::size_t j = 0; j < n; ++j) {
        double a = t.external_rates()[j];
        if (!std::isfinite(a) || a < 0.0)
            r.violations.push_back("external rate of operator " + std::to_string(j) + " = " +
                                   detail::fmt_double(a) + " must be finite and >= 0");
        else
            total += a;
    }
    if (!(total > 0.0))
        r.violations.push_back("total external rate must be > 0");

    if (routing_ok && total > 0.0) {
        auto trapped = detail::trapped_operators(t);
        if (!trapped.empty())
            r.violations.push_back("no exit reachable / traffic equations diverge for operators " +
                                   detail::name_list(t, trapped));
    }
    return r;
}

/// Fixed-point iteration lambda <- a + P^T lambda, to relative change < 1e-12.
inline std::vector<double> solve_traffic_iterative(const Topology& t)
{
    const std::size_t n = t.size();
    std::vector<double> lam = t.external_rates();
    std::vector<double> next(n);
    for (int it = 0; it < detail::kFixedPointIterationCap; ++it) {
        double max_delta = 0.0;
        double max_val = 0.0;
        for (std::size_t j = 0; j < n; ++j) {
            double v = t.external_rates()[j];
            for (std::size_t i = 0; i < n; ++i)
                v += lam[i] * t.routing(i, j);
            next[j] = v;
            max_delta = std::max(max_delta, std::abs(v - lam[j]));
            max_val = std::max(max_val, std::abs(v));
        }
        lam.swap(next);
        if (max_delta <= detail::kFixedPointRelTol * max_val)
            return lam;
    }
    auto trapped = detail::trapped_operators(t);
    throw TrafficDivergenceError("traffic fixed point did not converge within " +
                                     std::to_string(detail::kFixedPointIterationCap) +
                                     " iterations; no exit reachable for operators " +
                                     detail::name_list(t, trapped),
                                 trapped);
}

/// Direct solve of (I - P^T) lambda = a restricted to traffic-reachable
/// operators (Gaussian elimination with partial pivoting).
inline std::vector<double> solve_traffic_direct(const Topology& t)
{
    const std::size_t n = t.size();
    auto live = detail::traffic_reachable(t);
    std::vector<std::size_t> idx;
    for (std::size_t i = 0; i < n; ++i)
        if (live[i])
            idx.push_back(i);
    const std::size_t m = idx.size();

    std::vector<std::vector<double>> a(m, std::vector<double>(m + 1, 0.0));
    for (std::size_t r = 0; r < m; ++r) {
        std::size_t j = idx[r];
        for (std::size_t c = 0; c < m; ++c) {
            std::size_t i = idx[c];
            a[r][c] = (i == j ? 1.0 : 0.0) - t.routing(i, j);
        }
        a[r][m] = t.external_rates()[j];
    }
    for (std::size_t col = 0; col < m; ++col) {
        std::size_t piv = col;
        for (std::size_t r = col + 1; r < m; ++r)
            if (std::abs(a[r][col]) > std::abs(a[piv][col]))
                piv = r;
        if (std::abs(a[piv][col]) < 1e-14) {
            auto trapped = detail::trapped_operators(t);
            throw TrafficDivergenceError("traffic equations are singular; no exit reachable for operators " +
                                             detail::name_list(t, trapped),
                                         trapped);
        }
        std::swap(a[piv], a[col]);
        for (std::size_t r = col + 1; r < m; ++r) {
            double f = a[r][col] / a[col][col];
            if (f == 0.0)
                continue;
            for (std::size_t c = col; c <= m; ++c)
                a[r][c] -= f * a[col][c];
        }
    }
    std::vector<double> x(m, 0.0);
    for (std::size_t r = m; r-- > 0;) {
        double v = a[r][m];
        for (std::size_t c = r + 1; c < m; ++c)
            v -= a[r][c] * x[c];
        x[r] = v / a[r][r];
    }
    std::vector<double> lam(n, 0.0);
    for (std::size_t r = 0; r < m; ++r)
        lam[idx[r]] = x[r];
    return lam;
}

/// Steady-state per-operator arrival rates. Both solution routes are
/// computed and must agree to 1e-9 relative; the direct solution is returned.
inline RateProfile solve_traffic(const Topology& t)
{
    auto report = validate_topology(t);
    if (!report.ok()) {
        auto trapped = detail::trapped_operators(t);
        if (!trapped.empty())
            throw TrafficDivergenceError(report.to_string(), trapped);
        throw std::invalid_argument("invalid topology: " + report.to_string());
    }
    auto direct = solve_traffic_direct(t);
    auto iter = solve_traffic_iterative(t);
    for (std::size_t j = 0; j < t.size(); ++j) {
        double scale = std::max({std::abs(direct[j]), std::abs(iter[j]), 1e-300});
        if (std::abs(direct[j] - iter[j]) > 1e-9 * scale)
            throw std::logic_error("traffic solutions disagree at operator " + std::to_string(j) +
                                   ": direct " + detail::fmt_double(direct[j]) + ", iterative " +
                                   detail::fmt_double(iter[j]));
    }
    RateProfile rp;
    rp.lambda0 = std::accumulate(t.external_rates().begin(), t.external_rates().end(), 0.0);
    rp.lambdas = std::move(direct);
    rp.mus = t.service_rates();
    return rp;
}

/// Structural checks for a rate profile supplied directly (measured rates).
inline ValidationReport validate_rate_profile(const RateProfile& r)
{
    ValidationReport rep;
    if (!(std::isfinite(r.lambda0) && r.lambda0 > 0.0))
        rep.violations.push_back("lambda0 = " + detail::fmt_double(r.lambda0) +
                                 " must be finite and > 0");
    if (r.lambdas.size() != r.mus.size())
        rep.violations.push_back("lambdas has " + std::to_string(r.lambdas.size()) +
                                 " entries but mus has " + std::to_string(r.mus.size()));
    if (r.lambdas.empty())
        rep.violations.push_back("rate profile has no operators");
    for (std::size_t i = 0; i < r.lambdas.size(); ++i)
        if (!(std::isfinite(r.lambdas[i]) && r.lambdas[i] >= 0.0))
            rep.violations.push_back("lambda[" + std::to_string(i) + "] = " +
                                     detail::fmt_double(r.lambdas[i]) + " must be finite and >= 0");
    for (std::size_t i = 0; i < r.mus.size(); ++i)
        if (!(std::isfinite(r.mus[i]) && r.mus[i] > 0.0))
            rep.violations.push_back("mu[" + std::to_string(i) + "] = " +
                                     detail::fmt_double(r.mus[i]) + " must be finite and > 0");
    return rep;
}

}  // namespace opsched

#endif  // OPSCHED_TOPOLOGY_HPP
