#include "tsreason/stats/ops.hpp"

#include <algorithm>
#include <cmath>

#include "tsreason/core/error.hpp"
#include "tsreason/core/num_text.hpp"

namespace tsreason::stats {
namespace {

double mean_of(const std::vector<double>& v) {
    double s = 0.0;
    for (const double x : v) s += x;
    return s / static_cast<double>(v.size());
}

double sample_stdev(const std::vector<double>& v) {
    if (v.size() < 2) return 0.0;
    const double m = mean_of(v);
    double s = 0.0;
    for (const double x : v) s += (x - m) * (x - m);
    return std::sqrt(s / static_cast<double>(v.size() - 1));
}

double median_of(std::vector<double> v) {
    const std::size_t n = v.size();
    std::nth_element(v.begin(), v.begin() + n / 2, v.end());
    const double upper = v[n / 2];
    if (n % 2 == 1) return upper;
    std::nth_element(v.begin(), v.begin() + n / 2 - 1, v.end());
    return 0.5 * (v[n / 2 - 1] + upper);
}

bool is_constant(const std::vector<double>& v) {
    for (const double x : v) {
        if (x != v.front()) return false;
    }
    return true;
}

// Pearson correlation; 0 when either side is (numerically) constant.
double pearson(const double* x, const double* y, std::size_t n) {
    double mx = 0.0, my = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        mx += x[i];
        my += y[i];
    }
    mx /= static_cast<double>(n);
    my /= static_cast<double>(n);
    double sxy = 0.0, sxx = 0.0, syy = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        sxy += (x[i] - mx) * (y[i] - my);
        sxx += (x[i] - mx) * (x[i] - mx);
        syy += (y[i] - my) * (y[i] - my);
    }
    if (sxx < 1e-24 || syy < 1e-24) return 0.0;
    return sxy / std::sqrt(sxx * syy);
}

}  // namespace

TimeSeries apply(const TimeSeries& data, const FnSpec& spec) {
    const auto& x = data.values();
    switch (spec.fn) {
        case Fn::log: {
            std::vector<double> out(x.size());
            for (std::size_t i = 0; i < x.size(); ++i) {
                if (x[i] <= 0.0)
                    fail("DomainError", "log needs positive values; index " + std::to_string(i) +
                                            " is " + format_double(x[i]));
                out[i] = std::log(x[i]);
            }
            return data.with_values(std::move(out));
        }
        case Fn::diff: {
            if (x.size() < 2)
                fail("EmptyAfterDiff", "differencing a length-1 series leaves nothing");
            std::vector<double> out(x.size() - 1);
            for (std::size_t i = 1; i < x.size(); ++i) out[i - 1] = x[i] - x[i - 1];
            TimeAxis axis = data.axis();
            axis.start = data.axis().at(1);
            return TimeSeries(data.name(), axis, std::move(out));
        }
        case Fn::zscore: {
            const double s = sample_stdev(x);
            if (s == 0.0) fail("ConstantSeries", "zscore of a constant series is undefined");
            const double m = mean_of(x);
            std::vector<double> out(x.size());
            for (std::size_t i = 0; i < x.size(); ++i) out[i] = (x[i] - m) / s;
            return data.with_values(std::move(out));
        }
        case Fn::abs: {
            std::vector<double> out(x.size());
            for (std::size_t i = 0; i < x.size(); ++i) out[i] = std::abs(x[i]);
            return data.with_values(std::move(out));
        }
        case Fn::scale: {
            std::vector<double> out(x.size());
            for (std::size_t i = 0; i < x.size(); ++i) out[i] = spec.c * x[i];
            return data.with_values(std::move(out));
        }
        case Fn::clip: {
            if (spec.lo > spec.hi)
                fail("DomainError", "clip bounds are inverted (" + format_double(spec.lo) + " > " +
                                        format_double(spec.hi) + ")");
            std::vector<double> out(x.size());
            for (std::size_t i = 0; i < x.size(); ++i) out[i] = std::clamp(x[i], spec.lo, spec.hi);
            return data.with_values(std::move(out));
        }
    }
    fail("DomainError", "unknown transform");
}

Frame concat(const Value& a, const Value& b) {
    Frame out;
    const auto append = [&out](const Value& v) {
        if (v.is(Value::Kind::series)) {
            out.add_column(v.series());
        } else if (v.is(Value::Kind::frame)) {
            for (const auto& col : v.frame().columns()) out.add_column(col);
        } else {
            fail("TypeMismatch", std::string("concat needs series or frame inputs, got ") + v.kind_name());
        }
    };
    append(a);
    append(b);
    return out;
}

std::vector<double> acf(const TimeSeries& data, std::size_t max_lag) {
    const auto& x = data.values();
    const std::size_t n = x.size();
    if (max_lag >= n)
        fail("LagTooLarge", "acf max_lag " + std::to_string(max_lag) +
                                " needs a series longer than " + std::to_string(max_lag));
    const double m = mean_of(x);
    double denom = 0.0;
    for (const double v : x) denom += (v - m) * (v - m);
    if (denom == 0.0) fail("ConstantSeries", "acf of a constant series is undefined");
    std::vector<double> r(max_lag + 1);
    for (std::size_t k = 0; k <= max_lag; ++k) {
        double num = 0.0;
        for (std::size_t t = k; t < n; ++t) num += (x[t] - m) * (x[t - k] - m);
        r[k] = num / denom;
    }
    return r;
}

std::int64_t max_corr_lag(const TimeSeries& x, const TimeSeries& y, std::size_t max_lag) {
    const auto& xv = x.values();
    const auto& yv = y.values();
    if (xv.size() != yv.size())
        fail("LengthMismatch", "max_corr_lag needs equally long series (" +
                                   std::to_string(xv.size()) + " vs " + std::to_string(yv.size()) + ")");
    const std::size_t n = xv.size();
    if (max_lag >= n) fail("LagTooLarge", "max_corr_lag " + std::to_string(max_lag) + " >= series length");
    if (is_constant(xv) || is_constant(yv))
        fail("ConstantSeries", "correlation against a constant series is undefined");

    std::int64_t best_lag = 0;
    double best = -2.0;
    for (std::size_t k = 0; k <= max_lag; ++k) {
        // x lagged by k against y: pair x[t - k] with y[t].
        const double c = pearson(xv.data(), yv.data() + k, n - k);
        if (c > best) {
            best = c;
            best_lag = static_cast<std::int64_t>(k);
        }
    }
    return best_lag;
}

DecompResult decompose(const TimeSeries& data, std::size_t period) {
    if (period < 2) fail("DomainError", "decompose needs period >= 2");
    const auto& x = data.values();
    const std::size_t n = x.size();
    if (n < 2 * period)
        fail("SeriesTooShort", "decompose needs at least two full periods (" +
                                   std::to_string(2 * period) + " points), got " + std::to_string(n));

    // Centered moving average; for even periods the 2xMA with half weights at
    // the window ends.
    std::vector<double> trend(n, 0.0);
    const std::size_t half = period / 2;
    std::size_t first_valid, last_valid;
    if (period % 2 == 0) {
        first_valid = half;
        last_valid = n - 1 - half;
        for (std::size_t t = first_valid; t <= last_valid; ++t) {
            double s = 0.5 * x[t - half] + 0.5 * x[t + half];
            for (std::size_t j = t - half + 1; j < t + half; ++j) s += x[j];
            trend[t] = s / static_cast<double>(period);
        }
    } else {
        first_valid = half;
        last_valid = n - 1 - half;
        for (std::size_t t = first_valid; t <= last_valid; ++t) {
            double s = 0.0;
            for (std::size_t j = t - half; j <= t + half; ++j) s += x[j];
            trend[t] = s / static_cast<double>(period);
        }
    }
    for (std::size_t t = 0; t < first_valid; ++t) trend[t] = trend[first_valid];
    for (std::size_t t = last_valid + 1; t < n; ++t) trend[t] = trend[last_valid];

    // Seasonal: per-phase mean of the detrended data, re-centered to sum zero.
    std::vector<double> phase_sum(period, 0.0);
    std::vector<std::size_t> phase_count(period, 0);
    for (std::size_t t = 0; t < n; ++t) {
        phase_sum[t % period] += x[t] - trend[t];
        phase_count[t % period] += 1;
    }
    std::vector<double> phase_mean(period);
    double grand = 0.0;
    for (std::size_t p = 0; p < period; ++p) {
        phase_mean[p] = phase_sum[p] / static_cast<double>(phase_count[p]);
        grand += phase_mean[p];
    }
    grand /= static_cast<double>(period);
    for (double& v : phase_mean) v -= grand;

    std::vector<double> seasonal(n), residual(n);
    for (std::size_t t = 0; t < n; ++t) {
        seasonal[t] = phase_mean[t % period];
        residual[t] = x[t] - trend[t] - seasonal[t];
    }

    return DecompResult{
        TimeSeries("trend", data.axis(), std::move(trend)),
        TimeSeries("seasonal", data.axis(), std::move(seasonal)),
        TimeSeries("residual", data.axis(), std::move(residual)),
    };
}

Value feature(const TimeSeries& data, Feature kind, std::size_t window) {
    const auto& x = data.values();
    const std::size_t n = x.size();
    switch (kind) {
        case Feature::trend_slope: {
            if (n < 2) fail("SeriesTooShort", "trend_slope needs at least two points");
            const double tbar = static_cast<double>(n - 1) / 2.0;
            const double m = mean_of(x);
            double num = 0.0, den = 0.0;
            for (std::size_t t = 0; t < n; ++t) {
                const double dt = static_cast<double>(t) - tbar;
                num += dt * (x[t] - m);
                den += dt * dt;
            }
            return Value(num / den);
        }
        case Feature::amplitude: {
            if (n < 2) fail("SeriesTooShort", "amplitude needs at least two points");
            const double slope = feature(data, Feature::trend_slope).scalar();
            const double m = mean_of(x);
            const double tbar = static_cast<double>(n - 1) / 2.0;
            double lo = x[0] - (m - slope * tbar);
            double hi = lo;
            for (std::size_t t = 1; t < n; ++t) {
                const double detr = x[t] - (m + slope * (static_cast<double>(t) - tbar));
                lo = std::min(lo, detr);
                hi = std::max(hi, detr);
            }
            return Value((hi - lo) / 2.0);
        }
        case Feature::period: {
            if (n < 4) fail("SeriesTooShort", "period estimation needs at least four points");
            const double m = mean_of(x);
            double best_power = -1.0;
            std::size_t best_period = 2;
            for (std::size_t p = 2; p <= n / 2; ++p) {
                const double w = 2.0 * M_PI / static_cast<double>(p);
                double re = 0.0, im = 0.0;
                for (std::size_t t = 0; t < n; ++t) {
                    re += (x[t] - m) * std::cos(w * static_cast<double>(t));
                    im += (x[t] - m) * std::sin(w * static_cast<double>(t));
                }
                const double power = (re * re + im * im) / static_cast<double>(n);
                if (power > best_power) {
                    best_power = power;
                    best_period = p;
                }
            }
            return Value(static_cast<double>(best_period));
        }
        case Feature::sliding_variance: {
            if (window < 2) fail("DomainError", "sliding_variance needs window >= 2");
            if (window > n)
                fail("WindowTooLarge", "window " + std::to_string(window) + " > series length " +
                                           std::to_string(n));
            std::vector<double> out(n - window + 1);
            for (std::size_t t = 0; t + window <= n; ++t) {
                const std::vector<double> w(x.begin() + static_cast<std::ptrdiff_t>(t),
                                            x.begin() + static_cast<std::ptrdiff_t>(t + window));
                const double s = sample_stdev(w);
                out[t] = s * s;
            }
            return Value(TimeSeries(data.name(), data.axis(), std::move(out)));
        }
        case Feature::volatility: {
            if (window < 2) fail("DomainError", "volatility needs window >= 2");
            if (n < 2) fail("SeriesTooShort", "volatility needs at least two points");
            std::vector<double> rel(n - 1);
            for (std::size_t t = 1; t < n; ++t) {
                if (x[t - 1] == 0.0)
                    fail("DomainError", "relative change undefined: value at index " +
                                            std::to_string(t - 1) + " is zero");
                rel[t - 1] = (x[t] - x[t - 1]) / x[t - 1];
            }
            if (window > rel.size())
                fail("WindowTooLarge", "window " + std::to_string(window) +
                                           " > number of returns " + std::to_string(rel.size()));
            std::vector<double> out(rel.size() - window + 1);
            for (std::size_t t = 0; t + window <= rel.size(); ++t) {
                const std::vector<double> w(rel.begin() + static_cast<std::ptrdiff_t>(t),
                                            rel.begin() + static_cast<std::ptrdiff_t>(t + window));
                out[t] = sample_stdev(w);
            }
            TimeAxis axis = data.axis();
            axis.start = data.axis().at(1);
            return Value(TimeSeries(data.name(), axis, std::move(out)));
        }
    }
    fail("DomainError", "unknown feature kind");
}

IntVec detect_spikes(const TimeSeries& data, double z) {
    if (z <= 0.0) fail("DomainError", "spike threshold z must be positive");
    const auto& x = data.values();
    if (x.size() < 10) fail("SeriesTooShort", "spike detection needs at least 10 points");
    if (is_constant(x)) fail("ConstantSeries", "spike detection on a constant series is undefined");
    const double med = median_of(x);
    std::vector<double> dev(x.size());
    for (std::size_t i = 0; i < x.size(); ++i) dev[i] = std::abs(x[i] - med);
    const double mad = median_of(dev);
    const double threshold = z * 1.4826 * mad;
    IntVec out;
    for (std::size_t i = 0; i < x.size(); ++i) {
        if (dev[i] > threshold) out.values.push_back(static_cast<std::int64_t>(i));
    }
    return out;
}

double calibrate_threshold(const TimeSeries& scores) {
    const auto& x = scores.values();
    if (x.size() < 2) fail("SeriesTooShort", "threshold calibration needs at least two scores");
    const double s = sample_stdev(x);
    if (s == 0.0) fail("ConstantSeries", "cannot calibrate a threshold from constant scores");
    return mean_of(x) + 3.0 * s;
}

BinVec threshold_to_binary(const TimeSeries& scores, std::optional<double> threshold,
                           std::optional<double> percentile) {
    if (threshold.has_value() == percentile.has_value())
        fail("BothOrNeitherGiven", "give exactly one of threshold= or percentile=");
    const auto& x = scores.values();
    const std::size_t n = x.size();
    double cut;
    if (threshold) {
        cut = *threshold;
    } else {
        if (*percentile <= 0.0 || *percentile >= 1.0)
            fail("DomainError", "percentile must be strictly between 0 and 1, got " +
                                    format_double(*percentile));
        const auto k = static_cast<std::size_t>(
            std::llround(*percentile * static_cast<double>(n)));
        if (k == 0) {
            return BinVec{std::vector<std::uint8_t>(n, 0)};
        }
        if (k >= n) {
            return BinVec{std::vector<std::uint8_t>(n, 1)};
        }
        std::vector<double> sorted(x);
        std::sort(sorted.begin(), sorted.end());
        cut = sorted[n - k - 1];  // strictly-greater flags at most the top k
    }
    BinVec out;
    out.bits.resize(n);
    for (std::size_t i = 0; i < n; ++i) out.bits[i] = x[i] > cut ? 1 : 0;
    return out;
}

}  // namespace tsreason::stats
