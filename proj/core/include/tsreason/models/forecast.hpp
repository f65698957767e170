#pragma once

#include <cstddef>
#include <optional>
#include <string>

#include "tsreason/core/metrics.hpp"
#include "tsreason/core/time_series.hpp"
#include "tsreason/core/value.hpp"

namespace tsreason::models {

/// Forecast/scoring backend selection plus the knobs shared across backends.
/// period defaults to a periodogram estimate of the history; ar_order
/// defaults to that period clamped to what the sample size supports.
struct ModelSpec {
    std::string name;
    std::optional<int> period;
    std::optional<int> ar_order;
    double ridge_lambda = 1e-6;  // lagged_regression shrinkage
};

/// Forecast values plus the spec that produced them (with defaults resolved
/// where the backend needed them).
struct Forecast {
    TimeSeries values;
    ModelSpec model_used;
};

/// Names accepted by forecast_uni, in quality-rotation order.
bool is_forecast_model(const std::string& name);

/// Names accepted by anomaly_score.
bool is_anomaly_model(const std::string& name);

int resolve_period(const TimeSeries& history, const ModelSpec& spec);
int resolve_ar_order(std::size_t n, int period, std::optional<int> requested);

/// Univariate forecast of `horizon` steps past the end of history. Backends:
///   seasonal_naive  repeat the last full period
///   drift           last value plus h * (last - first) / (n - 1)
///   holt_winters    additive Holt-Winters, alpha/beta/gamma = 0.2/0.05/0.1
///   ar_ls           AR(p) least squares, iterated multi-step
///   theta           average of trend-line extrapolation and SES(0.2) of the
///                   theta-2 line 2y - line
Forecast forecast_uni(const TimeSeries& data, std::size_t horizon, const ModelSpec& spec);

/// Forecast the target from its own lags plus lags of the covariate columns
/// (ridge regression, intercept unpenalized). Future covariate values are
/// extended per column with seasonal_naive. An empty covariate frame reduces
/// this to ar_ls exactly when ridge_lambda is 0.
Forecast forecast_multi(const TimeSeries& target, const Frame& covariates, std::size_t horizon,
                        const ModelSpec& spec);

/// Fit AR(order) by least squares. Rank-deficient designs (constant series)
/// are an error here; forecast_uni's ar_ls path is tolerant instead.
ModelHandle fit_ar(const TimeSeries& data, int order);

/// Iterate a fitted AR handle `horizon` steps past the end of history.
TimeSeries forecast_with_handle(const ModelHandle& handle, const TimeSeries& history,
                                std::size_t horizon);

/// Pointwise anomaly scores (same axis as the input). Backends:
///   decomp_z     |decomposition residual| / stdev(residual), period
///                defaulting to 24
///   ar_residual  |one-step in-sample AR(5) error|, first p entries zero
TimeSeries anomaly_score(const TimeSeries& series, const ModelSpec& spec);

/// Hold out the trailing `horizon` points, refit on the rest, and report the
/// guarded MAPE of the refit forecast against the holdout. The holdout is
/// never seen by the fit.
Quality backtest(const TimeSeries& data, const Frame* covariates, std::size_t horizon,
                 const ModelSpec& spec);

}  // namespace tsreason::models
