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

// M/M/k sojourn times per operator and their traffic-weighted network mean.
//
// The waiting term is evaluated through the Erlang-B recurrence
//   B(0) = 1,  B(l) = a B(l-1) / (l + a B(l-1)),  a = lambda / mu
// followed by Erlang-C
//   C = k B(k) / (k - a (1 - B(k))),  Wq = C / (k mu - lambda),
// which never forms a^k or k! and so stays finite for large k and rates.

#ifndef OPSCHED_QUEUEING_HPP
#define OPSCHED_QUEUEING_HPP

#include <cmath>
#include <compare>
#include <cstddef>
#include <cstdint>
#include <limits>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include "opsched/topology.hpp"

namespace opsched {

/// Expected time in seconds, or the distinguished UNSTABLE value. UNSTABLE
/// orders after every finite value and never takes part in arithmetic.
class Sojourn {
public:
    constexpr Sojourn() = default;

    static constexpr Sojourn finite(double seconds) { return Sojourn(seconds, false); }
    static constexpr Sojourn unstable() { return Sojourn(0.0, true); }

    constexpr bool is_unstable() const { return unstable_; }
    constexpr bool is_finite() const { return !unstable_; }

    double seconds() const
    {
        if (unstable_)
            throw std::logic_error("seconds() requested on an UNSTABLE sojourn");
        return value_;
    }

    friend constexpr bool operator==(const Sojourn& a, const Sojourn& b)
    {
        return a.unstable_ == b.unstable_ && (a.unstable_ || a.value_ == b.value_);
    }

    friend constexpr std::partial_ordering operator<=>(const Sojourn& a, const Sojourn& b)
    {
        if (a.unstable_ || b.unstable_) {
            if (a.unstable_ && b.unstable_)
                return std::partial_ordering::equivalent;
            return a.unstable_ ? std::partial_ordering::greater : std::partial_ordering::less;
        }
        return a.value_ <=> b.value_;
    }

    std::string to_string() const
    {
        if (unstable_)
            return "UNSTABLE";
        std::ostringstream os;
        os.precision(10);
        os << value_;
        return os.str();
    }

private:
    constexpr Sojourn(double v, bool u) : value_(v), unstable_(u) {}

    double value_ = 0.0;
    bool unstable_ = false;
};

/// Processor counts per operator; every count is at least one.
struct Allocation {
    std::vector<std::int64_t> counts;

    Allocation() = default;
    explicit Allocation(std::vector<std::int64_t> c) : counts(std::move(c)) {}

    std::size_t size() const { return counts.size(); }
    std::int64_t operator[](std::size_t i) const { return counts[i]; }
    std::int64_t& operator[](std::size_t i) { return counts[i]; }

    std::int64_t total() const
    {
        std::int64_t s = 0;
        for (auto c : counts)
            s += c;
        return s;
    }

    bool valid() const
    {
        if (counts.empty())
            return false;
        for (auto c : counts)
            if (c < 1)
                return false;
        return true;
    }

    /// Colon-separated form, e.g. "6:2".
    std::string to_string() const
    {
        std::string s;
        for (std::size_t i = 0; i < counts.size(); ++i) {
            if (i)
                s += ':';
            s += std::to_string(counts[i]);
        }
        return s;
    }

    friend bool operator==(const Allocation&, const Allocation&) = default;
};

struct SojournEstimate {
    std::vector<Sojourn> per_operator;
    Sojourn total;
    bool stable = true;
};

namespace detail {

inline void check_rates(double lambda, double mu)
{
    if (!(mu > 0.0) || !std::isfinite(mu))
        throw std::invalid_argument("service rate must be finite and > 0");
    if (!(lambda >= 0.0) || !std::isfinite(lambda))
        throw std::invalid_argument("arrival rate must be finite and >= 0");
}

inline void check_args(double lambda, double mu, std::int64_t k)
{
    check_rates(lambda, mu);
    if (k < 1)
        throw std::invalid_argument("processor count must be >= 1");
}

inline double erlang_b_step(double offered, double prev, std::int64_t l)
{
    double t = offered * prev;
    return t / (static_cast<double>(l) + t);
}

// Sojourn from the Erlang-B value at k.
inline Sojourn sojourn_from_erlang_b(double lambda, double mu, std::int64_t k, double b)
{
    const double offered = lambda / mu;
    const double kd = static_cast<double>(k);
    if (kd <= offered)
        return Sojourn::unstable();
    const double c = kd * b / (kd - offered * (1.0 - b));
    const double wq = c / (kd * mu - lambda);
    return Sojourn::finite(wq + 1.0 / mu);
}

}  // namespace detail

/// Erlang-B blocking probability B(k) for offered load a.
inline double erlang_b(double offered, std::int64_t k)
{
    double b = 1.0;
    for (std::int64_t l = 1; l <= k; ++l)
        b = detail::erlang_b_step(offered, b, l);
    return b;
}

/// Probability that an arrival waits in an M/M/k queue (k > a required).
inline double erlang_c(double offered, std::int64_t k)
{
    const double b = erlang_b(offered, k);
    const double kd = static_cast<double>(k);
    return kd * b / (kd - offered * (1.0 - b));
}

/// Expected sojourn (wait + service) of an M/M/k station. UNSTABLE when
/// k <= lambda/mu.
inline Sojourn erlang_sojourn(double lambda, double mu, std::int64_t k)
{
    detail::check_args(lambda, mu, k);
    if (static_cast<double>(k) <= lambda / mu)
        return Sojourn::unstable();
    return detail::sojourn_from_erlang_b(lambda, mu, k, erlang_b(lambda / mu, k));
}

/// Smallest strictly stable processor count, floor(lambda/mu) + 1.
inline std::int64_t min_stable_count(double lambda, double mu)
{
    detail::check_rates(lambda, mu);
    const double ratio = std::floor(lambda / mu);
    if (ratio >= static_cast<double>(std::numeric_limits<std::int64_t>::max() / 2))
        throw std::invalid_argument("offered load too large for a processor count");
    return static_cast<std::int64_t>(ratio) + 1;
}

/// Benefit assigned to adding a processor to an unstable operator; larger
/// than any finite benefit.
inline constexpr double kMaxBenefit = std::numeric_limits<double>::max();

/// lambda * (E[T](k) - E[T](k+1)), or kMaxBenefit when k is unstable.
inline double marginal_benefit(double lambda, double mu, std::int64_t k)
{
    detail::check_args(lambda, mu, k);
    if (lambda == 0.0)
        return 0.0;
    const Sojourn cur = erlang_sojourn(lambda, mu, k);
    if (cur.is_unstable())
        return kMaxBenefit;
    const Sojourn next = erlang_sojourn(lambda, mu, k + 1);
    return lambda * (cur.seconds() - next.seconds());
}

/// Incremental evaluator of one operator's sojourn curve. Values match
/// erlang_sojourn() bit for bit since the same recurrence is advanced one
/// step at a time.
class ErlangCurve {
public:
    ErlangCurve(double lambda, double mu, std::int64_t k)
        : lambda_(lambda), mu_(mu), k_(k)
    {
        detail::check_args(lambda, mu, k);
        b_ = erlang_b(lambda / mu, k);
        b_next_ = detail::erlang_b_step(lambda / mu, b_, k + 1);
    }

    std::int64_t count() const { return k_; }
    double lambda() const { return lambda_; }
    double mu() const { return mu_; }

    Sojourn current() const { return detail::sojourn_from_erlang_b(lambda_, mu_, k_, b_); }
    Sojourn next() const { return detail::sojourn_from_erlang_b(lambda_, mu_, k_ + 1, b_next_); }

    double benefit() const
    {
        if (lambda_ == 0.0)
            return 0.0;
        const Sojourn cur = current();
        if (cur.is_unstable())
            return kMaxBenefit;
        return lambda_ * (cur.seconds() - next().seconds());
    }

    void advance()
    {
        ++k_;
        b_ = b_next_;
        b_next_ = detail::erlang_b_step(lambda_ / mu_, b_, k_ + 1);
    }

private:
    double lambda_;
    double mu_;
    std::int64_t k_;
    double b_ = 1.0;
    double b_next_ = 1.0;
};

/// Traffic-weighted mean of per-operator sojourns; operators with zero
/// arrival rate carry zero weight.
inline Sojourn weighted_total(const RateProfile& rates, const std::vector<Sojourn>& per_operator)
{
    double sum = 0.0;
    for (std::size_t i = 0; i < per_operator.size(); ++i) {
        if (rates.lambdas[i] == 0.0)
            continue;
        if (per_operator[i].is_unstable())
            return Sojourn::unstable();
        sum += rates.lambdas[i] * per_operator[i].seconds();
    }
    return Sojourn::finite(sum / rates.lambda0);
}

inline SojournEstimate network_sojourn(const RateProfile& rates, const Allocation& alloc)
{
    if (rates.lambdas.size() != rates.mus.size() || alloc.size() != rates.lambdas.size())
        throw std::invalid_argument("dimension mismatch: " + std::to_string(rates.lambdas.size()) +
                                    " arrival rates, " + std::to_string(rates.mus.size()) +
                                    " service rates, " + std::to_string(alloc.size()) +
                                    " processor counts");
    if (!(rates.lambda0 > 0.0))
        throw std::invalid_argument("lambda0 must be > 0");
    SojournEstimate est;
    est.per_operator.reserve(alloc.size());
    for (std::size_t i = 0; i < alloc.size(); ++i)
        est.per_operator.push_back(erlang_sojourn(rates.lambdas[i], rates.mus[i], alloc[i]));
    est.total = weighted_total(rates, est.per_operator);
    est.stable = est.total.is_finite();
    return est;
}

/// The k -> infinity floor of the network mean, (1/lambda0) sum lambda_i/mu_i.
inline double sojourn_lower_bound(const RateProfile& rates)
{
    double sum = 0.0;
    for (std::size_t i = 0; i < rates.size(); ++i)
        sum += rates.lambdas[i] / rates.mus[i];
    return sum / rates.lambda0;
}

}  // namespace opsched

#endif  // OPSCHED_QUEUEING_HPP
