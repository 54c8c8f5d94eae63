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

// Measurement side: per-instance samples are aggregated to operator-level
// rates once per pull interval, then smoothed across intervals.

#ifndef OPSCHED_METRICS_HPP
#define OPSCHED_METRICS_HPP

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <deque>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <variant>
#include <vector>

#include "opsched/topology.hpp"

namespace opsched {

/// Counters reported by one operator instance for one pull interval. With
/// sampling, only every N_m-th local input tuple is recorded.
struct MetricSample {
    std::size_t operator_id = 0;
    std::size_t instance_id = 0;
    double window_start = 0.0;
    double window_end = 0.0;
    std::uint64_t arrivals = 0;       // enqueues at the tail of the operator queue
    double service_time_total = 0.0;  // busy seconds of the recorded tuples
    std::uint64_t served = 0;
};

/// Exact external-tuple counters for one pull interval.
struct GlobalSample {
    double window_start = 0.0;
    double window_end = 0.0;
    std::uint64_t external_arrivals = 0;
    std::uint64_t completed_tuples = 0;
    double sojourn_time_total = 0.0;
};

struct SamplingConfig {
    std::uint64_t sample_every = 1;  // N_m
    double pull_interval = 1.0;      // T_m, seconds
};

/// One interval's operator-level measurement d(n).
struct RawMetrics {
    std::vector<double> lambdas;
    std::vector<double> mus;
    double lambda0 = 0.0;
    double mean_sojourn = 0.0;
    // Consecutive intervals the operator's service rate was carried forward.
    std::vector<int> staleness;
};

struct AlphaSmoothing {
    double alpha = 0.5;
};

struct WindowSmoothing {
    std::size_t w = 3;
};

using SmoothingScheme = std::variant<AlphaSmoothing, WindowSmoothing>;

/// Smoothed snapshot D(n).
struct SmoothedMetrics {
    std::uint64_t interval = 0;  // n, starting at 1
    std::vector<double> lambdas;
    std::vector<double> mus;
    double lambda0 = 0.0;
    double mean_sojourn = 0.0;
    SmoothingScheme scheme;
    std::vector<int> staleness;
    // Most recent raw vectors, kept only for window smoothing.
    std::deque<RawMetrics> window;

    bool stale(int limit) const
    {
        return std::any_of(staleness.begin(), staleness.end(), [&](int s) { return s > limit; });
    }
};

/// Service rates may be carried forward this many intervals; beyond it the
/// operator is stale and planning pauses.
inline constexpr int kMaxCarryForward = 3;

class DataIntegrityError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Raised when measured rates cannot feed the model.
class MeasurementError : public std::runtime_error {
public:
    enum class Kind { StalledOperator, NoServiceData, NoExternalTraffic, NotFinite };

    MeasurementError(Kind kind, const std::string& what) : std::runtime_error(what), kind_(kind) {}
    Kind kind() const { return kind_; }

private:
    Kind kind_;
};

/// Operator-level aggregation across instances. Keeps the previous service
/// rate per operator so that idle operators can carry it forward.
class OperatorAggregator {
public:
    OperatorAggregator(std::size_t operators, SamplingConfig cfg)
        : cfg_(cfg), last_mu_(operators, 0.0), has_mu_(operators, false), staleness_(operators, 0)
    {
        if (cfg.sample_every < 1)
            throw std::invalid_argument("sample_every (N_m) must be >= 1");
        if (!(cfg.pull_interval > 0.0))
            throw std::invalid_argument("pull interval (T_m) must be > 0");
    }

    std::size_t size() const { return last_mu_.size(); }
    const SamplingConfig& config() const { return cfg_; }

    /// Produces d(n) for the interval described by `global`.
    RawMetrics aggregate(std::span<const MetricSample> samples, const GlobalSample& global)
    {
        const double length = global.window_end - global.window_start;
        if (!(length > 0.0))
            throw std::invalid_argument("interval window_end must be after window_start");
        const std::size_t n = size();
        std::vector<std::uint64_t> arrivals(n, 0);
        std::vector<std::uint64_t> served(n, 0);
        std::vector<double> busy(n, 0.0);
        for (const auto& s : samples) {
            if (s.operator_id >= n)
                throw std::invalid_argument("sample for unknown operator " + std::to_string(s.operator_id));
            if (!(s.window_end > s.window_start) || !(s.service_time_total >= 0.0))
                throw std::invalid_argument("malformed sample for operator " + std::to_string(s.operator_id));
            arrivals[s.operator_id] += s.arrivals;
            served[s.operator_id] += s.served;
            busy[s.operator_id] += s.service_time_total;
        }

        RawMetrics d;
        d.lambdas.resize(n);
        d.mus.resize(n);
        d.staleness.resize(n);
        for (std::size_t i = 0; i < n; ++i) {
            d.lambdas[i] = static_cast<double>(arrivals[i] * cfg_.sample_every) / length;
            if (served[i] > 0 && busy[i] > 0.0) {
                last_mu_[i] = static_cast<double>(served[i]) / busy[i];
                has_mu_[i] = true;
                staleness_[i] = 0;
            } else if (served[i] > 0) {
                throw DataIntegrityError("operator " + std::to_string(i) + " served " +
                                         std::to_string(served[i]) + " tuples with zero busy time");
            } else if (has_mu_[i]) {
                ++staleness_[i];
            }
            d.mus[i] = last_mu_[i];
            d.staleness[i] = staleness_[i];
        }
        d.lambda0 = static_cast<double>(global.external_arrivals) / length;
        if (global.completed_tuples > 0) {
            last_sojourn_ = global.sojourn_time_total / static_cast<double>(global.completed_tuples);
        }
        d.mean_sojourn = last_sojourn_;
        return d;
    }

private:
    SamplingConfig cfg_;
    std::vector<double> last_mu_;
    std::vector<bool> has_mu_;
    std::vector<int> staleness_;
    double last_sojourn_ = 0.0;
};

namespace detail {

inline double alpha_blend(double prev, double raw, double alpha)
{
    // The exact value lies between prev and raw; clamp away rounding drift.
    double v = alpha * prev + (1.0 - alpha) * raw;
    return std::clamp(v, std::min(prev, raw), std::max(prev, raw));
}

// Mean of values selected by `get`, offset by the first element so that a
// constant sequence averages to itself exactly.
template <typename Get>
double window_mean(const std::deque<RawMetrics>& w, Get get)
{
    const double base = get(w.front());
    double acc = 0.0;
    for (const auto& r : w)
        acc += get(r) - base;
    return base + acc / static_cast<double>(w.size());
}

inline void check_scheme(const SmoothingScheme& scheme)
{
    if (const auto* a = std::get_if<AlphaSmoothing>(&scheme)) {
        if (!(a->alpha >= 0.0 && a->alpha < 1.0))
            throw std::invalid_argument("alpha must lie in [0, 1)");
    } else if (std::get<WindowSmoothing>(scheme).w < 1) {
        throw std::invalid_argument("window size must be >= 1");
    }
}

}  // namespace detail

/// D(n) from D(n-1) and d(n). D(1) = d(1) for both schemes.
inline SmoothedMetrics smooth(const std::optional<SmoothedMetrics>& prev, const RawMetrics& raw,
                              const SmoothingScheme& scheme)
{
    detail::check_scheme(scheme);
    if (raw.lambdas.size() != raw.mus.size())
        throw std::invalid_argument("raw metrics have mismatched lambda/mu lengths");
    if (prev && prev->lambdas.size() != raw.lambdas.size())
        throw std::invalid_argument("dimension mismatch: smoothed state has " +
                                    std::to_string(prev->lambdas.size()) + " operators, raw has " +
                                    std::to_string(raw.lambdas.size()));

    SmoothedMetrics out;
    out.interval = prev ? prev->interval + 1 : 1;
    out.scheme = scheme;
    out.staleness = raw.staleness;
    const std::size_t n = raw.lambdas.size();

    if (const auto* a = std::get_if<AlphaSmoothing>(&scheme)) {
        if (!prev) {
            out.lambdas = raw.lambdas;
            out.mus = raw.mus;
            out.lambda0 = raw.lambda0;
            out.mean_sojourn = raw.mean_sojourn;
            return out;
        }
        out.lambdas.resize(n);
        out.mus.resize(n);
        for (std::size_t i = 0; i < n; ++i) {
            out.lambdas[i] = detail::alpha_blend(prev->lambdas[i], raw.lambdas[i], a->alpha);
            out.mus[i] = detail::alpha_blend(prev->mus[i], raw.mus[i], a->alpha);
        }
        out.lambda0 = detail::alpha_blend(prev->lambda0, raw.lambda0, a->alpha);
        out.mean_sojourn = detail::alpha_blend(prev->mean_sojourn, raw.mean_sojourn, a->alpha);
        return out;
    }

    const std::size_t w = std::get<WindowSmoothing>(scheme).w;
    if (prev)
        out.window = prev->window;
    out.window.push_back(raw);
    while (out.window.size() > w)
        out.window.pop_front();
    out.lambdas.resize(n);
    out.mus.resize(n);
    for (std::size_t i = 0; i < n; ++i) {
        out.lambdas[i] = detail::window_mean(out.window, [i](const RawMetrics& r) { return r.lambdas[i]; });
        out.mus[i] = detail::window_mean(out.window, [i](const RawMetrics& r) { return r.mus[i]; });
    }
    out.lambda0 = detail::window_mean(out.window, [](const RawMetrics& r) { return r.lambda0; });
    out.mean_sojourn = detail::window_mean(out.window, [](const RawMetrics& r) { return r.mean_sojourn; });
    return out;
}

/// Planner input from smoothed measurements.
inline RateProfile measured_profile(const SmoothedMetrics& sm)
{
    const std::size_t n = sm.lambdas.size();
    if (sm.mus.size() != n)
        throw std::invalid_argument("smoothed metrics have mismatched lambda/mu lengths");
    auto finite = [](double v) { return std::isfinite(v) && v >= 0.0; };
    if (!finite(sm.lambda0))
        throw MeasurementError(MeasurementError::Kind::NotFinite, "lambda0 is not finite");
    for (std::size_t i = 0; i < n; ++i)
        if (!finite(sm.lambdas[i]) || !finite(sm.mus[i]))
            throw MeasurementError(MeasurementError::Kind::NotFinite,
                                   "operator " + std::to_string(i) + " has non-finite rates");
    if (!(sm.lambda0 > 0.0))
        throw MeasurementError(MeasurementError::Kind::NoExternalTraffic,
                               "measured lambda0 is zero; the network mean is undefined");
    for (std::size_t i = 0; i < n; ++i) {
        if (sm.mus[i] > 0.0)
            continue;
        if (sm.lambdas[i] > 0.0)
            throw MeasurementError(MeasurementError::Kind::StalledOperator,
                                   "operator " + std::to_string(i) +
                                       " is stalled: arrivals observed but no service rate");
        throw MeasurementError(MeasurementError::Kind::NoServiceData,
                               "operator " + std::to_string(i) + " has no service-rate observations");
    }
    RateProfile rp;
    rp.lambda0 = sm.lambda0;
    rp.lambdas = sm.lambdas;
    rp.mus = sm.mus;
    return rp;
}

}  // namespace opsched

#endif  // OPSCHED_METRICS_HPP
