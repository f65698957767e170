#pragma once

#include <optional>
#include <string>

#include "tsreason/core/value.hpp"

namespace tsreason::stats {

enum class TestKind { adf, kpss, ks, ljung_box };

const char* to_string(TestKind kind);
std::optional<TestKind> test_kind_from_string(const std::string& name);

/// Hypothesis tests with a domain-level verdict at significance 0.05:
///   adf        unit-root test (regression with constant); verdict = stationary.
///              p-values are interpolated from the standard finite-sample
///              critical-value table, so they are coarse by design.
///   kpss       trend-stationarity test (Bartlett long-run variance);
///              verdict = trend-stationary.
///   ks         two-sample Kolmogorov-Smirnov (asymptotic p);
///              verdict = same distribution. Needs `b`.
///   ljung_box  white-noise test up to `lags` (required); verdict = white noise.
///
/// `lags` also sets the ADF augmentation order and the KPSS bandwidth;
/// defaults follow the usual n-dependent rules.
TestResult stat_test(TestKind kind, const TimeSeries& a, const TimeSeries* b = nullptr,
                     std::optional<int> lags = std::nullopt);

}  // namespace tsreason::stats
