#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include "tsreason/core/value.hpp"

namespace tsreason::stats {

/// Classical additive decomposition output; trend + seasonal + residual
/// reconstructs the input exactly.
struct DecompResult {
    TimeSeries trend;
    TimeSeries seasonal;
    TimeSeries residual;
};

enum class Fn { log, diff, zscore, abs, scale, clip };

struct FnSpec {
    Fn fn = Fn::abs;
    double c = 1.0;    // factor for scale
    double lo = 0.0;   // clip bounds
    double hi = 0.0;
};

/// Pointwise/window transform. log requires positive input (DomainError);
/// diff shortens by one (EmptyAfterDiff on a length-1 series); zscore uses
/// the sample standard deviation (ConstantSeries when zero).
TimeSeries apply(const TimeSeries& data, const FnSpec& spec);

/// Column-wise concatenation of two series/frames into one frame
/// (shared axis enforced, duplicate names rejected).
Frame concat(const Value& a, const Value& b);

/// Autocorrelation r_0..r_max_lag (biased normalization, r_0 == 1).
std::vector<double> acf(const TimeSeries& data, std::size_t max_lag);

/// Lag k in [0, max_lag] maximizing corr(x shifted by k, y); ties take the
/// smallest k.
std::int64_t max_corr_lag(const TimeSeries& x, const TimeSeries& y, std::size_t max_lag);

/// Classical additive decomposition: centered moving average trend (edges
/// extended with the nearest interior value), period-averaged seasonal
/// re-centered to sum zero, residual = data - trend - seasonal.
DecompResult decompose(const TimeSeries& data, std::size_t period);

enum class Feature { trend_slope, amplitude, period, sliding_variance, volatility };

/// Scalar summary or derived series:
///   trend_slope      least-squares slope against t = 0..n-1
///   amplitude        (max - min) / 2 after removing the fitted line
///   period           periodogram argmax over integer periods in [2, n/2]
///   sliding_variance rolling sample variance, window-leading timestamps
///   volatility       rolling stdev of one-step relative changes
Value feature(const TimeSeries& data, Feature kind, std::size_t window = 0);

/// Robust spike detection: indices where |x - median| > z * 1.4826 * MAD.
/// A constant series errors (ConstantSeries); a zero MAD on a non-constant
/// series keeps the threshold at zero so any deviation from the median flags.
IntVec detect_spikes(const TimeSeries& data, double z);

/// Anomaly threshold from anomaly-free scores: mean + 3 * sample stdev.
double calibrate_threshold(const TimeSeries& scores);

/// Binarize scores. Exactly one of threshold/percentile must be given
/// (BothOrNeitherGiven): threshold flags score > threshold; percentile p in
/// (0, 1) flags the top round(p * n) scores (ties flag fewer, never more
/// than ceil(p * n)).
BinVec threshold_to_binary(const TimeSeries& scores, std::optional<double> threshold,
                           std::optional<double> percentile);

}  // namespace tsreason::stats
