#include "tsreason/models/forecast.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <vector>

#include "tsreason/core/error.hpp"
#include "tsreason/numerics/linreg.hpp"
#include "tsreason/stats/ops.hpp"

namespace tsreason::models {
namespace {

const char* kForecastModels[] = {"holt_winters", "ar_ls", "seasonal_naive", "drift", "theta",
                                 "lagged_regression"};

// [1, y_{t-1}..y_{t-p}] design shared by fit_ar, ar_ls and lagged_regression
// so their coefficient estimates agree exactly where they overlap.
void append_ar_design(const std::vector<double>& y, std::size_t p, Matrix& X,
                      std::vector<double>& target) {
    const std::size_t rows = y.size() - p;
    for (std::size_t r = 0; r < rows; ++r) {
        const std::size_t t = r + p;
        target[r] = y[t];
        X.at(r, 0) = 1.0;
        for (std::size_t k = 1; k <= p; ++k) X.at(r, k) = y[t - k];
    }
}

std::vector<double> fit_ar_coeffs(const std::vector<double>& y, std::size_t p,
                                  bool allow_rank_deficient) {
    const std::size_t rows = y.size() - p;
    Matrix X = Matrix::zeros(rows, p + 1);
    std::vector<double> target(rows);
    append_ar_design(y, p, X, target);
    return numerics::lstsq(X, target, 0.0, allow_rank_deficient).beta;
}

std::vector<double> iterate_ar(const std::vector<double>& history,
                               const std::vector<double>& beta, std::size_t horizon) {
    const std::size_t p = beta.size() - 1;
    std::vector<double> buf = history;
    buf.reserve(history.size() + horizon);
    for (std::size_t h = 0; h < horizon; ++h) {
        double next = beta[0];
        for (std::size_t k = 1; k <= p; ++k) next += beta[k] * buf[buf.size() - k];
        buf.push_back(next);
    }
    return {buf.end() - static_cast<std::ptrdiff_t>(horizon), buf.end()};
}

std::vector<double> seasonal_naive_values(const std::vector<double>& y, std::size_t period,
                                          std::size_t horizon) {
    std::vector<double> out(horizon);
    const std::size_t base = y.size() - period;
    for (std::size_t h = 0; h < horizon; ++h) out[h] = y[base + h % period];
    return out;
}

std::vector<double> holt_winters_values(const std::vector<double>& y, std::size_t period,
                                        std::size_t horizon) {
    const std::size_t n = y.size();
    if (n < 2 * period)
        fail("HistoryTooShort", "holt_winters needs two full periods (" +
                                    std::to_string(2 * period) + " points), got " +
                                    std::to_string(n));
    constexpr double alpha = 0.2, beta = 0.05, gamma = 0.1;

    double level = std::accumulate(y.begin(), y.begin() + static_cast<std::ptrdiff_t>(period), 0.0) /
                   static_cast<double>(period);
    double trend = 0.0;
    for (std::size_t i = 0; i < period; ++i) trend += (y[period + i] - y[i]);
    trend /= static_cast<double>(period) * static_cast<double>(period);
    std::vector<double> seasonal(period);
    for (std::size_t i = 0; i < period; ++i) seasonal[i] = y[i] - level;

    for (std::size_t t = period; t < n; ++t) {
        const double s_prev = seasonal[t % period];
        const double level_prev = level;
        level = alpha * (y[t] - s_prev) + (1.0 - alpha) * (level + trend);
        trend = beta * (level - level_prev) + (1.0 - beta) * trend;
        seasonal[t % period] = gamma * (y[t] - level) + (1.0 - gamma) * s_prev;
    }

    std::vector<double> out(horizon);
    for (std::size_t h = 0; h < horizon; ++h)
        out[h] = level + static_cast<double>(h + 1) * trend + seasonal[(n + h) % period];
    return out;
}

std::vector<double> theta_values(const std::vector<double>& y, std::size_t horizon) {
    const std::size_t n = y.size();
    if (n < 3) fail("HistoryTooShort", "theta needs at least 3 points");
    // Least-squares line a + b*t via the closed form.
    const double tn = static_cast<double>(n);
    const double tbar = (tn - 1.0) / 2.0;
    double sxx = 0.0, sxy = 0.0, ybar = 0.0;
    for (const double v : y) ybar += v;
    ybar /= tn;
    for (std::size_t t = 0; t < n; ++t) {
        const double dt = static_cast<double>(t) - tbar;
        sxx += dt * dt;
        sxy += dt * (y[t] - ybar);
    }
    const double b = sxy / sxx;
    const double a = ybar - b * tbar;

    // SES(0.2) level of the theta-2 line 2y - line.
    constexpr double alpha = 0.2;
    double ses = 2.0 * y[0] - a;
    for (std::size_t t = 1; t < n; ++t) {
        const double z = 2.0 * y[t] - (a + b * static_cast<double>(t));
        ses = alpha * z + (1.0 - alpha) * ses;
    }

    std::vector<double> out(horizon);
    for (std::size_t h = 0; h < horizon; ++h)
        out[h] = 0.5 * (a + b * static_cast<double>(n + h)) + 0.5 * ses;
    return out;
}

double sample_stdev(const std::vector<double>& v) {
    const double n = static_cast<double>(v.size());
    const double mean = std::accumulate(v.begin(), v.end(), 0.0) / n;
    double ss = 0.0;
    for (const double x : v) ss += (x - mean) * (x - mean);
    return std::sqrt(ss / (n - 1.0));
}

}  // namespace

bool is_forecast_model(const std::string& name) {
    for (const char* m : kForecastModels)
        if (name == m) return true;
    return false;
}

bool is_anomaly_model(const std::string& name) {
    return name == "decomp_z" || name == "ar_residual";
}

int resolve_period(const TimeSeries& history, const ModelSpec& spec) {
    const std::size_t n = history.size();
    if (spec.period) {
        if (*spec.period < 2) fail("DomainError", "period must be at least 2");
        if (static_cast<std::size_t>(*spec.period) > n / 2)
            fail("HistoryTooShort", "period " + std::to_string(*spec.period) +
                                        " exceeds half the series length " + std::to_string(n));
        return *spec.period;
    }
    return static_cast<int>(stats::feature(history, stats::Feature::period).scalar());
}

int resolve_ar_order(std::size_t n, int period, std::optional<int> requested) {
    const long feasible = (static_cast<long>(n) - 5) / 3;
    if (requested) {
        if (*requested < 1) fail("DomainError", "ar_order must be at least 1");
        if (*requested > feasible)
            fail("HistoryTooShort", "ar_order " + std::to_string(*requested) +
                                        " needs at least " + std::to_string(3 * *requested + 5) +
                                        " points, got " + std::to_string(n));
        return *requested;
    }
    if (feasible < 1) fail("HistoryTooShort", "too few points to fit an autoregression");
    return static_cast<int>(std::clamp<long>(period, 1, feasible));
}

Forecast forecast_uni(const TimeSeries& data, std::size_t horizon, const ModelSpec& spec) {
    if (horizon == 0) fail("DomainError", "forecast horizon must be positive");
    const auto& y = data.values();
    ModelSpec used = spec;
    std::vector<double> out;

    if (spec.name == "seasonal_naive") {
        const int period = resolve_period(data, spec);
        used.period = period;
        out = seasonal_naive_values(y, static_cast<std::size_t>(period), horizon);
    } else if (spec.name == "drift") {
        if (y.size() < 2) fail("HistoryTooShort", "drift needs at least 2 points");
        const double slope = (y.back() - y.front()) / static_cast<double>(y.size() - 1);
        out.resize(horizon);
        for (std::size_t h = 0; h < horizon; ++h)
            out[h] = y.back() + static_cast<double>(h + 1) * slope;
    } else if (spec.name == "holt_winters") {
        const int period = resolve_period(data, spec);
        used.period = period;
        out = holt_winters_values(y, static_cast<std::size_t>(period), horizon);
    } else if (spec.name == "ar_ls" || spec.name == "lagged_regression") {
        const int period = resolve_period(data, spec);
        const int p = resolve_ar_order(y.size(), period, spec.ar_order);
        used.period = period;
        used.ar_order = p;
        out = iterate_ar(y, fit_ar_coeffs(y, static_cast<std::size_t>(p),
                                          /*allow_rank_deficient=*/true),
                         horizon);
    } else if (spec.name == "theta") {
        out = theta_values(y, horizon);
    } else {
        fail("UnknownModel", "no forecast model named '" + spec.name + "'");
    }

    return Forecast{TimeSeries(data.name(), data.continuation_axis(), std::move(out)), used};
}

Forecast forecast_multi(const TimeSeries& target, const Frame& covariates, std::size_t horizon,
                        const ModelSpec& spec) {
    if (horizon == 0) fail("DomainError", "forecast horizon must be positive");
    if (!spec.name.empty() && spec.name != "lagged_regression" && spec.name != "ar_ls")
        fail("UnknownModel", "forecast_multi implements lagged_regression, got '" + spec.name + "'");
    if (!covariates.empty() && !(covariates.axis() == target.axis()))
        fail("LengthMismatch", "covariates are not aligned with the target");
    const auto& y = target.values();
    const std::size_t n = y.size();

    const int period = resolve_period(target, spec);
    const std::size_t p =
        static_cast<std::size_t>(resolve_ar_order(n, period, spec.ar_order));
    const std::size_t ncov = covariates.n_cols();
    const std::size_t rows = n - p;
    const std::size_t cols = 1 + p * (1 + ncov);
    if (rows < cols)
        fail("HistoryTooShort", "lagged_regression design has " + std::to_string(rows) +
                                    " rows for " + std::to_string(cols) + " coefficients");

    Matrix X = Matrix::zeros(rows, cols);
    std::vector<double> target_vec(rows);
    append_ar_design(y, p, X, target_vec);
    for (std::size_t c = 0; c < ncov; ++c) {
        const auto& xv = covariates.column(c).values();
        for (std::size_t r = 0; r < rows; ++r) {
            const std::size_t t = r + p;
            for (std::size_t k = 1; k <= p; ++k)
                X.at(r, 1 + p * (c + 1) + (k - 1)) = xv[t - k];
        }
    }
    const auto fit = numerics::lstsq(X, target_vec, spec.ridge_lambda,
                                     /*allow_rank_deficient=*/spec.ridge_lambda == 0.0);

    // Each covariate is extended into the future with seasonal_naive so its
    // lagged values stay defined while iterating.
    std::vector<std::vector<double>> cov_ext(ncov);
    for (std::size_t c = 0; c < ncov; ++c) {
        cov_ext[c] = covariates.column(c).values();
        ModelSpec cov_spec;
        cov_spec.period = spec.period;
        const std::size_t cp =
            static_cast<std::size_t>(resolve_period(covariates.column(c), cov_spec));
        const auto tail = seasonal_naive_values(cov_ext[c], cp, horizon);
        cov_ext[c].insert(cov_ext[c].end(), tail.begin(), tail.end());
    }

    std::vector<double> buf = y;
    buf.reserve(n + horizon);
    for (std::size_t h = 0; h < horizon; ++h) {
        const std::size_t t = n + h;
        double next = fit.beta[0];
        for (std::size_t k = 1; k <= p; ++k) next += fit.beta[k] * buf[t - k];
        for (std::size_t c = 0; c < ncov; ++c)
            for (std::size_t k = 1; k <= p; ++k)
                next += fit.beta[1 + p * (c + 1) + (k - 1)] * cov_ext[c][t - k];
        buf.push_back(next);
    }

    ModelSpec used = spec;
    used.name = "lagged_regression";
    used.period = period;
    used.ar_order = static_cast<int>(p);
    std::vector<double> out(buf.end() - static_cast<std::ptrdiff_t>(horizon), buf.end());
    return Forecast{TimeSeries(target.name(), target.continuation_axis(), std::move(out)), used};
}

ModelHandle fit_ar(const TimeSeries& data, int order) {
    if (order < 1) fail("DomainError", "ar order must be at least 1");
    const std::size_t p = static_cast<std::size_t>(order);
    if (data.size() < 3 * p + 5)
        fail("HistoryTooShort", "fitting AR(" + std::to_string(order) + ") needs at least " +
                                    std::to_string(3 * p + 5) + " points, got " +
                                    std::to_string(data.size()));
    const auto beta = fit_ar_coeffs(data.values(), p, /*allow_rank_deficient=*/false);
    ModelHandle handle;
    handle.id = "ar" + std::to_string(order);
    handle.intercept = beta[0];
    handle.coeffs.assign(beta.begin() + 1, beta.end());
    return handle;
}

TimeSeries forecast_with_handle(const ModelHandle& handle, const TimeSeries& history,
                                std::size_t horizon) {
    if (horizon == 0) fail("DomainError", "forecast horizon must be positive");
    if (handle.coeffs.empty()) fail("BadHandle", "model handle has no coefficients");
    if (history.size() < handle.coeffs.size())
        fail("HistoryTooShort", "history is shorter than the model order");
    std::vector<double> beta;
    beta.reserve(handle.coeffs.size() + 1);
    beta.push_back(handle.intercept);
    beta.insert(beta.end(), handle.coeffs.begin(), handle.coeffs.end());
    auto out = iterate_ar(history.values(), beta, horizon);
    return TimeSeries(history.name(), history.continuation_axis(), std::move(out));
}

TimeSeries anomaly_score(const TimeSeries& series, const ModelSpec& spec) {
    const auto& y = series.values();
    const std::size_t n = y.size();

    if (spec.name == "decomp_z" || spec.name.empty()) {
        const std::size_t period = static_cast<std::size_t>(spec.period.value_or(24));
        const auto decomp = stats::decompose(series, period);
        const auto& resid = decomp.residual.values();
        const double sd = sample_stdev(resid);
        std::vector<double> score(n, 0.0);
        if (sd >= 1e-12)
            for (std::size_t t = 0; t < n; ++t) score[t] = std::abs(resid[t]) / sd;
        return TimeSeries(series.name(), series.axis(), std::move(score));
    }
    if (spec.name == "ar_residual") {
        const std::size_t p = static_cast<std::size_t>(spec.ar_order.value_or(5));
        if (n < 20 || n < 3 * p + 5)
            fail("SeriesTooShort", "ar_residual needs at least " +
                                       std::to_string(std::max<std::size_t>(20, 3 * p + 5)) +
                                       " points, got " + std::to_string(n));
        const auto beta = fit_ar_coeffs(y, p, /*allow_rank_deficient=*/true);
        std::vector<double> score(n, 0.0);
        for (std::size_t t = p; t < n; ++t) {
            double pred = beta[0];
            for (std::size_t k = 1; k <= p; ++k) pred += beta[k] * y[t - k];
            score[t] = std::abs(y[t] - pred);
        }
        return TimeSeries(series.name(), series.axis(), std::move(score));
    }
    fail("UnknownModel", "no anomaly model named '" + spec.name + "'");
}

Quality backtest(const TimeSeries& data, const Frame* covariates, std::size_t horizon,
                 const ModelSpec& spec) {
    if (horizon == 0) fail("DomainError", "backtest horizon must be positive");
    const std::size_t n = data.size();
    if (n < 2 * horizon)
        fail("HistoryTooShort", "backtest with horizon " + std::to_string(horizon) +
                                    " needs at least " + std::to_string(2 * horizon) +
                                    " points, got " + std::to_string(n));
    const TimeSeries train = data.slice(0, n - horizon);
    const TimeSeries actual = data.slice(n - horizon, horizon);

    TimeSeries predicted;
    if (covariates != nullptr && !covariates->empty()) {
        Frame cov_train;
        for (const auto& col : covariates->columns())
            cov_train.add_column(col.slice(0, n - horizon));
        predicted = forecast_multi(train, cov_train, horizon, spec).values;
    } else {
        predicted = forecast_uni(train, horizon, spec).values;
    }
    return Quality{"mape", mape_guarded(actual.values(), predicted.values())};
}

}  // namespace tsreason::models
