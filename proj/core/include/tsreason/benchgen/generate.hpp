#pragma once

#include <cstdint>
#include <utility>

#include "tsreason/core/rng.hpp"
#include "tsreason/core/time_series.hpp"
#include "tsreason/core/value.hpp"

namespace tsreason::benchgen {

/// Synthetic minute-resolution demand curve: a dominant hourly cycle, a slow
/// modulation on top, AR(1) noise, and (optionally) weather-like covariate
/// columns that drive the load at a small lag. The series stays strictly
/// positive so percentage errors are well defined.
struct ElectricityConfig {
    std::uint64_t seed = 0;
    std::size_t length = 300;      // total rows (history plus horizon)
    std::size_t n_covariates = 0;  // 0, 1 or 2 (temperature, humidity)
    double base = 700.0;
    double hourly_amp = 80.0;  // 60-step cycle
    double drift_amp = 25.0;   // slow modulation, ~6 h period
    double noise_sigma = 6.0;
    double ar1 = 0.55;
};

/// Column 0 is "load"; covariate columns follow in declaration order.
Frame gen_electricity_like(const ElectricityConfig& cfg);

/// Hourly temperature-like series with injected point anomalies. Anomalies
/// are short (one or two steps), large relative to the noise floor, and kept
/// away from the series ends so seasonal decomposition sees them cleanly.
struct TemperatureConfig {
    std::uint64_t seed = 0;
    std::size_t length = 240;  // hours
    double base = 15.0;
    double daily_amp = 6.0;  // 24-step cycle
    double noise_sigma = 0.7;
    std::size_t n_anomalies = 0;
    double min_magnitude = 8.0;  // in units of noise_sigma
    double max_magnitude = 12.0;
};

struct AnomalySeries {
    TimeSeries values;
    BinVec truth;  // one bit per step
};

AnomalySeries gen_temperature_like(const TemperatureConfig& cfg);

/// Binary influence matrix: entry (i, j) = 1 means variable i drives
/// variable j. The diagonal is all ones (every variable "relates to itself",
/// matching how such matrices are usually reported); graders skip it.
using RelationMatrix = Matrix;

/// Draw a random acyclic relation over d variables with
/// k = llround(ratio * d * (d - 1)) directed edges. Edges are placed in the
/// upper triangle of a randomly relabeled vertex order, which guarantees a
/// DAG; ratios above 0.5 would need more edges than such an order can hold
/// and raise DomainError.
RelationMatrix sample_relation(std::size_t d, double ratio, Rng& rng);

/// Kahn's algorithm over the off-diagonal edges; returns a topological
/// order of the variables or raises CyclicRelation.
std::vector<std::size_t> topological_order(const RelationMatrix& relation);

/// Multivariate series driven by `relation`: each variable is trend + its own
/// seasonal cycle + lagged contributions from its parents + Gaussian noise.
/// Periods differ per variable so spectra stay distinguishable.
struct GenConfig {
    std::uint64_t seed = 0;
    std::size_t length = 500;  // rows after warm-up
    double trend_max = 0.004;  // |slope| upper bound, sign random
    double amp_lo = 0.8, amp_hi = 1.6;
    double noise_lo = 0.10, noise_hi = 0.20;
    std::size_t lag_lo = 1, lag_hi = 3;
    double coef_lo = 0.8, coef_hi = 1.2;
};

/// Returns the frame and echoes the relation actually used. Column names are
/// drawn from a fixed weather-style vocabulary (temperature, humidity, ...).
std::pair<Frame, RelationMatrix> gen_causal_dataset(const RelationMatrix& relation,
                                                    const GenConfig& cfg);

}  // namespace tsreason::benchgen
