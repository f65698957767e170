#pragma once

// Deterministic synthetic inputs shared by the unit tests and the scripts
// that froze the reference values embedded in test_stats.cpp. Changing any
// recipe here invalidates those frozen numbers, so treat this file as
// append-only.

#include <cmath>
#include <cstdint>
#include <utility>
#include <vector>

#include "tsreason/core/rng.hpp"
#include "tsreason/core/time_series.hpp"

namespace tsreason::synth {

inline constexpr TimeAxis kHourly{1704067200, 3600};  // 2024-01-01T00:00:00Z

inline TimeSeries ar1(std::uint64_t seed, std::size_t n, double phi, double sd,
                      const std::string& name = "x") {
    Rng rng(seed);
    std::vector<double> v(n);
    v[0] = rng.normal(0.0, sd);
    for (std::size_t t = 1; t < n; ++t) v[t] = phi * v[t - 1] + rng.normal(0.0, sd);
    return TimeSeries(name, kHourly, std::move(v));
}

inline TimeSeries random_walk(std::uint64_t seed, std::size_t n) {
    Rng rng(seed);
    std::vector<double> v(n);
    double acc = 0.0;
    for (std::size_t t = 0; t < n; ++t) {
        acc += rng.normal();
        v[t] = acc;
    }
    return TimeSeries("w", kHourly, std::move(v));
}

inline TimeSeries normal_sample(std::uint64_t seed, std::size_t n, double mean, double sd,
                                const std::string& name = "s") {
    Rng rng(seed);
    std::vector<double> v(n);
    for (double& x : v) x = rng.normal(mean, sd);
    return TimeSeries(name, kHourly, std::move(v));
}

/// Driver/response pair where x leads y by two steps:
///   x: AR(1) phi=0.5, sd=1
///   y[t] = 0.8 x[t-1] - 0.4 x[t-2] + 0.3 y[t-1] + eps,  eps ~ N(0, 0.5)
/// First two y points are pure noise.
inline std::pair<TimeSeries, TimeSeries> granger_pair(std::uint64_t seed, std::size_t n) {
    Rng rng(seed);
    std::vector<double> x(n), y(n);
    x[0] = rng.normal();
    for (std::size_t t = 1; t < n; ++t) x[t] = 0.5 * x[t - 1] + rng.normal();
    y[0] = rng.normal(0.0, 0.5);
    y[1] = rng.normal(0.0, 0.5);
    for (std::size_t t = 2; t < n; ++t)
        y[t] = 0.8 * x[t - 1] - 0.4 * x[t - 2] + 0.3 * y[t - 1] + rng.normal(0.0, 0.5);
    return {TimeSeries("x", kHourly, std::move(x)), TimeSeries("y", kHourly, std::move(y))};
}

/// Linear trend + sinusoid of the given period + noise.
inline TimeSeries trend_seasonal(std::uint64_t seed, std::size_t n, std::size_t period,
                                 double slope = 0.05, double amp = 3.0, double noise_sd = 0.2) {
    Rng rng(seed);
    std::vector<double> v(n);
    constexpr double kTau = 6.283185307179586;
    for (std::size_t t = 0; t < n; ++t)
        v[t] = 10.0 + slope * static_cast<double>(t) +
               amp * std::sin(kTau * static_cast<double>(t % period) / static_cast<double>(period)) +
               rng.normal(0.0, noise_sd);
    return TimeSeries("ts", kHourly, std::move(v));
}

}  // namespace tsreason::synth
