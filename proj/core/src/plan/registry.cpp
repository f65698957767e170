#include "tsreason/plan/registry.hpp"

#include <algorithm>
#include <cmath>

#include "tsreason/constraints/constraint.hpp"
#include "tsreason/core/error.hpp"
#include "tsreason/models/forecast.hpp"
#include "tsreason/retrieval/client.hpp"
#include "tsreason/stats/granger.hpp"
#include "tsreason/stats/ops.hpp"
#include "tsreason/stats/stat_tests.hpp"

namespace tsreason::plan {

const char* to_string(ArgType t) {
    switch (t) {
        case ArgType::any: return "any";
        case ArgType::series: return "series";
        case ArgType::frame: return "frame";
        case ArgType::series_or_frame: return "series|frame";
        case ArgType::number: return "number";
        case ArgType::string: return "string";
        case ArgType::int_vec: return "intvec";
        case ArgType::bin_vec: return "binvec";
        case ArgType::matrix: return "matrix";
        case ArgType::model_handle: return "model";
        case ArgType::test_result: return "test_result";
    }
    return "?";
}

bool arg_type_admits(ArgType t, Value::Kind k) {
    switch (t) {
        case ArgType::any: return true;
        case ArgType::series: return k == Value::Kind::series;
        case ArgType::frame: return k == Value::Kind::frame;
        case ArgType::series_or_frame:
            return k == Value::Kind::series || k == Value::Kind::frame;
        case ArgType::number: return k == Value::Kind::scalar;
        case ArgType::string: return k == Value::Kind::text;
        case ArgType::int_vec: return k == Value::Kind::int_vec;
        case ArgType::bin_vec: return k == Value::Kind::bin_vec;
        case ArgType::matrix: return k == Value::Kind::matrix;
        case ArgType::model_handle: return k == Value::Kind::model_handle;
        case ArgType::test_result: return k == Value::Kind::test_result;
    }
    return false;
}

const Value& CallArgs::get(const std::string& name) const {
    const auto it = values_.find(name);
    if (it == values_.end()) fail("MissingArgument", "required argument '" + name + "' is missing");
    return it->second;
}

double CallArgs::number(const std::string& name) const { return get(name).scalar(); }

long CallArgs::integer(const std::string& name) const {
    const double v = get(name).scalar();
    if (v != std::floor(v) || std::abs(v) > 1e15)
        fail("TypeMismatch", "argument '" + name + "' must be an integer");
    return static_cast<long>(v);
}

const std::string& CallArgs::text(const std::string& name) const { return get(name).text().value; }

const TimeSeries& CallArgs::series(const std::string& name) const { return get(name).series(); }

const Frame& CallArgs::frame(const std::string& name) const { return get(name).frame(); }

std::optional<double> CallArgs::opt_number(const std::string& name) const {
    if (!has(name)) return std::nullopt;
    return number(name);
}

std::optional<long> CallArgs::opt_integer(const std::string& name) const {
    if (!has(name)) return std::nullopt;
    return integer(name);
}

std::optional<std::string> CallArgs::opt_text(const std::string& name) const {
    if (!has(name)) return std::nullopt;
    return text(name);
}

const ParamSpec* OperatorSpec::find_param(const std::string& name) const {
    for (const auto& p : params)
        if (p.name == name) return &p;
    return nullptr;
}

namespace {

models::ModelSpec model_spec_from(const CallArgs& a, const char* default_model) {
    models::ModelSpec spec;
    spec.name = a.opt_text("model").value_or(default_model);
    if (const auto p = a.opt_integer("period")) spec.period = static_cast<int>(*p);
    if (const auto o = a.opt_integer("ar_order")) spec.ar_order = static_cast<int>(*o);
    return spec;
}

std::size_t horizon_arg(const CallArgs& a) {
    const long h = a.integer("future_length");
    if (h < 1) fail("DomainError", "future_length must be at least 1");
    return static_cast<std::size_t>(h);
}

std::vector<std::string> split_list(const std::string& joined) {
    std::vector<std::string> out;
    std::size_t pos = 0;
    while (pos <= joined.size()) {
        std::size_t comma = joined.find(',', pos);
        if (comma == std::string::npos) comma = joined.size();
        std::string item = joined.substr(pos, comma - pos);
        const auto first = item.find_first_not_of(' ');
        const auto last = item.find_last_not_of(' ');
        if (first != std::string::npos) out.push_back(item.substr(first, last - first + 1));
        pos = comma + 1;
    }
    return out;
}

retrieval::Client& retrieval_client(ExecContext& ctx) {
    if (ctx.retrieval == nullptr)
        fail("RetrievalUnavailable", "no data retrieval client is configured for this run");
    return *ctx.retrieval;
}

retrieval::RetrievalQuery query_from(const CallArgs& a, retrieval::QueryKind kind,
                                     const char* location_param) {
    retrieval::RetrievalQuery q;
    q.kind = kind;
    q.location = a.text(location_param);
    q.start = a.text("start");
    q.end = a.text("end");
    q.variables = split_list(a.text("variables"));
    if (const auto r = a.opt_text("resolution")) {
        if (*r == "hourly") q.resolution = retrieval::Resolution::hourly;
        else if (*r == "daily") q.resolution = retrieval::Resolution::daily;
        else fail("BadQuery", "resolution must be 'hourly' or 'daily', got '" + *r + "'");
    }
    return q;
}

Value run_stat_test(stats::TestKind kind, const CallArgs& a, bool wants_b) {
    const TimeSeries& data = a.series("data");
    const TimeSeries* b = nullptr;
    TimeSeries other;
    if (wants_b) {
        other = a.series("other");
        b = &other;
    }
    std::optional<int> lags;
    if (const auto l = a.opt_integer("lags")) lags = static_cast<int>(*l);
    return stats::stat_test(kind, data, b, lags);
}

}  // namespace

void Registry::add(OperatorSpec spec) {
    order_.push_back(spec.name);
    ops_.emplace(spec.name, std::move(spec));
}

void Registry::alias(const std::string& from, const std::string& to) {
    aliases_.emplace(from, to);
}

const OperatorSpec* Registry::find(const std::string& name) const {
    if (const auto it = ops_.find(name); it != ops_.end()) return &it->second;
    if (const auto al = aliases_.find(name); al != aliases_.end()) {
        const auto it = ops_.find(al->second);
        return it == ops_.end() ? nullptr : &it->second;
    }
    return nullptr;
}

std::vector<std::string> Registry::aliases_of(const std::string& canonical) const {
    std::vector<std::string> out;
    for (const auto& [from, to] : aliases_)
        if (to == canonical) out.push_back(from);
    return out;
}

const Registry& Registry::instance() {
    static const Registry registry;
    return registry;
}

Registry::Registry() {
    using K = Value::Kind;

    // Forecasting and anomaly scoring.
    add({"forecast_uni",
         "univariate forecast of future_length steps; model is a backend name "
         "(holt_winters, ar_ls, seasonal_naive, drift, theta) or a fitted handle",
         {{"data", ArgType::series, true},
          {"future_length", ArgType::number, true},
          {"model", ArgType::any, false},
          {"period", ArgType::number, false},
          {"ar_order", ArgType::number, false}},
         K::series,
         true,
         [](const CallArgs& a, ExecContext&) -> Value {
             const TimeSeries& data = a.series("data");
             const std::size_t h = horizon_arg(a);
             if (a.has("model") && a.get("model").is(Value::Kind::model_handle))
                 return models::forecast_with_handle(a.get("model").model_handle(), data, h);
             return models::forecast_uni(data, h, model_spec_from(a, "holt_winters")).values;
         }});

    add({"forecast_multi",
         "forecast the target column of a frame from its own lags plus lags of "
         "the remaining columns (ridge lagged regression)",
         {{"data", ArgType::frame, true},
          {"future_length", ArgType::number, true},
          {"target", ArgType::string, false},
          {"model", ArgType::string, false},
          {"period", ArgType::number, false},
          {"ar_order", ArgType::number, false}},
         K::series,
         true,
         [](const CallArgs& a, ExecContext&) -> Value {
             const Frame& data = a.frame("data");
             if (data.empty()) fail("ShapeMismatch", "forecast_multi needs a non-empty frame");
             const std::string target =
                 a.opt_text("target").value_or(data.column(std::size_t{0}).name());
             Frame covariates;
             for (const auto& col : data.columns())
                 if (col.name() != target) covariates.add_column(col);
             return models::forecast_multi(data.column(target), covariates, horizon_arg(a),
                                           model_spec_from(a, "lagged_regression"))
                 .values;
         }});

    add({"anomaly_score",
         "per-timestamp anomaly scores from reconstruction error (decomp_z or ar_residual)",
         {{"data", ArgType::series, true},
          {"model", ArgType::string, false},
          {"period", ArgType::number, false},
          {"ar_order", ArgType::number, false}},
         K::series,
         true,
         [](const CallArgs& a, ExecContext&) -> Value {
             return models::anomaly_score(a.series("data"), model_spec_from(a, "decomp_z"));
         }});

    add({"fit_ar",
         "train an autoregressive forecaster of the given order; returns a model handle",
         {{"data", ArgType::series, true}, {"ar_order", ArgType::number, true}},
         K::model_handle,
         true,
         [](const CallArgs& a, ExecContext&) -> Value {
             return models::fit_ar(a.series("data"), static_cast<int>(a.integer("ar_order")));
         }});

    // Elementwise and structural transforms.
    add({"apply",
         "elementwise transform: fn is one of log, diff, zscore, abs, scale (c), clip (lo, hi)",
         {{"data", ArgType::series, true},
          {"fn", ArgType::string, true},
          {"c", ArgType::number, false},
          {"lo", ArgType::number, false},
          {"hi", ArgType::number, false}},
         K::series,
         true,
         [](const CallArgs& a, ExecContext&) -> Value {
             const std::string& fn = a.text("fn");
             stats::FnSpec spec;
             if (fn == "log") spec.fn = stats::Fn::log;
             else if (fn == "diff") spec.fn = stats::Fn::diff;
             else if (fn == "zscore") spec.fn = stats::Fn::zscore;
             else if (fn == "abs") spec.fn = stats::Fn::abs;
             else if (fn == "scale") {
                 spec.fn = stats::Fn::scale;
                 spec.c = a.number("c");
             } else if (fn == "clip") {
                 spec.fn = stats::Fn::clip;
                 spec.lo = a.number("lo");
                 spec.hi = a.number("hi");
             } else {
                 fail("DomainError", "unknown fn '" + fn + "'");
             }
             return stats::apply(a.series("data"), spec);
         }});

    add({"concat",
         "concatenate two series/frames column-wise into one frame",
         {{"a", ArgType::series_or_frame, true}, {"b", ArgType::series_or_frame, true}},
         K::frame,
         true,
         [](const CallArgs& a, ExecContext&) -> Value {
             return stats::concat(a.get("a"), a.get("b"));
         }});

    // Causality.
    add({"causal_matrix",
         "pairwise Granger-causality p-values between all columns",
         {{"data", ArgType::frame, true}, {"max_lag", ArgType::number, false}},
         K::matrix,
         true,
         [](const CallArgs& a, ExecContext&) -> Value {
             return stats::causal_matrix(a.frame("data"),
                                         static_cast<int>(a.opt_integer("max_lag").value_or(5)));
         }});

    add({"select_top_ratio",
         "binarize a p-value matrix keeping the given fraction of strongest relations",
         {{"pvals", ArgType::matrix, true}, {"ratio", ArgType::number, true}},
         K::matrix,
         true,
         [](const CallArgs& a, ExecContext&) -> Value {
             return stats::select_top_ratio(a.get("pvals").matrix(), a.number("ratio"));
         }});

    // Thresholding.
    add({"threshold_to_binary",
         "convert scores to 0/1 using a threshold value or a percentile fraction",
         {{"data", ArgType::series, true},
          {"threshold", ArgType::number, false},
          {"percentile", ArgType::number, false}},
         K::bin_vec,
         true,
         [](const CallArgs& a, ExecContext&) -> Value {
             return stats::threshold_to_binary(a.series("data"), a.opt_number("threshold"),
                                               a.opt_number("percentile"));
         }});

    add({"calibrate_threshold",
         "critical threshold of the scores' fitted normal: mean plus 3 standard deviations",
         {{"data", ArgType::series, true}},
         K::scalar,
         true,
         [](const CallArgs& a, ExecContext&) -> Value {
             return stats::calibrate_threshold(a.series("data"));
         }});

    add({"detect_spikes",
         "indices deviating from the median by more than z robust standard deviations",
         {{"data", ArgType::series, true}, {"z", ArgType::number, false}},
         K::int_vec,
         true,
         [](const CallArgs& a, ExecContext&) -> Value {
             return stats::detect_spikes(a.series("data"), a.opt_number("z").value_or(3.0));
         }});

    // Hypothesis tests.
    add({"adf_test",
         "augmented Dickey-Fuller test; verdict true means stationary",
         {{"data", ArgType::series, true}, {"lags", ArgType::number, false}},
         K::test_result,
         true,
         [](const CallArgs& a, ExecContext&) -> Value {
             return run_stat_test(stats::TestKind::adf, a, false);
         }});

    add({"kpss_test",
         "KPSS test against a linear trend; verdict true means trend-stationary",
         {{"data", ArgType::series, true}, {"lags", ArgType::number, false}},
         K::test_result,
         true,
         [](const CallArgs& a, ExecContext&) -> Value {
             return run_stat_test(stats::TestKind::kpss, a, false);
         }});

    add({"ks_test",
         "two-sample Kolmogorov-Smirnov test; verdict true means same distribution",
         {{"data", ArgType::series, true}, {"other", ArgType::series, true}},
         K::test_result,
         true,
         [](const CallArgs& a, ExecContext&) -> Value {
             return run_stat_test(stats::TestKind::ks, a, true);
         }});

    add({"ljung_box_test",
         "Ljung-Box portmanteau test; verdict true means white noise",
         {{"data", ArgType::series, true}, {"lags", ArgType::number, false}},
         K::test_result,
         true,
         [](const CallArgs& a, ExecContext&) -> Value {
             CallArgs with_default = a;
             if (!a.has("lags")) {
                 auto values = a.all();
                 values.emplace("lags", Value(10.0));
                 with_default = CallArgs(std::move(values));
             }
             return run_stat_test(stats::TestKind::ljung_box, with_default, false);
         }});

    // Correlation structure.
    add({"acf",
         "sample autocorrelations r_0..r_max_lag as a series indexed by lag",
         {{"data", ArgType::series, true}, {"max_lag", ArgType::number, false}},
         K::series,
         true,
         [](const CallArgs& a, ExecContext&) -> Value {
             const TimeSeries& data = a.series("data");
             const std::size_t def = std::min<std::size_t>(20, data.size() - 1);
             const std::size_t max_lag =
                 static_cast<std::size_t>(a.opt_integer("max_lag").value_or(
                     static_cast<long>(def)));
             const auto r = stats::acf(data, max_lag);
             return TimeSeries("acf", TimeAxis{0, data.axis().step_seconds},
                               std::vector<double>(r.begin(), r.end()));
         }});

    add({"max_corr_lag",
         "lag in [0, max_lag] at which x best correlates with (leads) y",
         {{"x", ArgType::series, true},
          {"y", ArgType::series, true},
          {"max_lag", ArgType::number, false}},
         K::scalar,
         true,
         [](const CallArgs& a, ExecContext&) -> Value {
             const TimeSeries& x = a.series("x");
             const long def = static_cast<long>(x.size() / 4);
             const long lag = a.opt_integer("max_lag").value_or(def);
             if (lag < 0) fail("DomainError", "max_lag must be non-negative");
             return static_cast<double>(
                 stats::max_corr_lag(x, a.series("y"), static_cast<std::size_t>(lag)));
         }});

    // Decomposition and series features.
    add({"decompose",
         "additive decomposition into trend, seasonal, and residual columns",
         {{"data", ArgType::series, true}, {"period", ArgType::number, false}},
         K::frame,
         true,
         [](const CallArgs& a, ExecContext&) -> Value {
             const TimeSeries& data = a.series("data");
             const long period = a.opt_integer("period").value_or(static_cast<long>(
                 stats::feature(data, stats::Feature::period).scalar()));
             auto parts = stats::decompose(data, static_cast<std::size_t>(period));
             return Frame({parts.trend, parts.seasonal, parts.residual});
         }});

    add({"noise_component",
         "residual left after removing trend and seasonality",
         {{"data", ArgType::series, true}, {"period", ArgType::number, false}},
         K::series,
         true,
         [](const CallArgs& a, ExecContext&) -> Value {
             const TimeSeries& data = a.series("data");
             const long period = a.opt_integer("period").value_or(static_cast<long>(
                 stats::feature(data, stats::Feature::period).scalar()));
             return stats::decompose(data, static_cast<std::size_t>(period)).residual;
         }});

    add({"trend_slope",
         "least-squares slope of the series against its time index",
         {{"data", ArgType::series, true}},
         K::scalar,
         true,
         [](const CallArgs& a, ExecContext&) -> Value {
             return stats::feature(a.series("data"), stats::Feature::trend_slope);
         }});

    add({"amplitude",
         "half the range of the detrended series",
         {{"data", ArgType::series, true}},
         K::scalar,
         true,
         [](const CallArgs& a, ExecContext&) -> Value {
             return stats::feature(a.series("data"), stats::Feature::amplitude);
         }});

    add({"estimate_period",
         "dominant integer period via the periodogram",
         {{"data", ArgType::series, true}},
         K::scalar,
         true,
         [](const CallArgs& a, ExecContext&) -> Value {
             return stats::feature(a.series("data"), stats::Feature::period);
         }});

    add({"sliding_variance",
         "rolling sample variance over the given window",
         {{"data", ArgType::series, true}, {"window", ArgType::number, true}},
         K::series,
         true,
         [](const CallArgs& a, ExecContext&) -> Value {
             return stats::feature(a.series("data"), stats::Feature::sliding_variance,
                                   static_cast<std::size_t>(a.integer("window")));
         }});

    add({"volatility",
         "rolling standard deviation of one-step relative changes",
         {{"data", ArgType::series, true}, {"window", ArgType::number, true}},
         K::series,
         true,
         [](const CallArgs& a, ExecContext&) -> Value {
             return stats::feature(a.series("data"), stats::Feature::volatility,
                                   static_cast<std::size_t>(a.integer("window")));
         }});

    // Constraint handling.
    add({"project",
         "minimally repair a forecast to satisfy an operating constraint "
         "(kind: max_load, min_load, ramp_rate, variability)",
         {{"data", ArgType::series, true},
          {"kind", ArgType::string, true},
          {"value", ArgType::number, true},
          {"anchor", ArgType::any, false}},
         K::series,
         true,
         [](const CallArgs& a, ExecContext&) -> Value {
             constraints::ConstraintSpec spec;
             const std::string& kind_name = a.text("kind");
             const auto kind = constraints::kind_from_string(kind_name);
             if (!kind) fail("DomainError", "unknown constraint kind '" + kind_name + "'");
             spec.kind = *kind;
             spec.value = a.number("value");
             if (a.has("anchor")) {
                 const Value& anchor = a.get("anchor");
                 spec.anchor = anchor.is(Value::Kind::series) ? anchor.series().back()
                                                              : anchor.scalar();
             }
             return constraints::project(a.series("data"), spec);
         }});

    // External data retrieval.
    add({"fetch_weather",
         "retrieve weather variables for a \"lat,lon\" location over [start, end)",
         {{"location", ArgType::string, true},
          {"start", ArgType::string, true},
          {"end", ArgType::string, true},
          {"variables", ArgType::string, true},
          {"resolution", ArgType::string, false}},
         K::frame,
         true,
         [](const CallArgs& a, ExecContext& ctx) -> Value {
             return retrieval_client(ctx).fetch_weather(
                 query_from(a, retrieval::QueryKind::weather, "location"));
         }});

    add({"fetch_electricity",
         "retrieve electricity variables for a grid zone over [start, end)",
         {{"zone", ArgType::string, true},
          {"start", ArgType::string, true},
          {"end", ArgType::string, true},
          {"variables", ArgType::string, true},
          {"resolution", ArgType::string, false}},
         K::frame,
         true,
         [](const CallArgs& a, ExecContext& ctx) -> Value {
             return retrieval_client(ctx).fetch_electricity(
                 query_from(a, retrieval::QueryKind::electricity, "zone"));
         }});

    // Declared operators without an implementation in this build. The
    // validator turns these into UnimplementedOp diagnostics so a decomposer
    // can repair the plan instead of facing an unknown-name error.
    for (const char* name : {"getChptOP", "getCyclePatternOP", "detectFlippedOP",
                             "detectSpeedUpDownOP", "detectCutoffOP"}) {
        OperatorSpec spec;
        spec.name = name;
        spec.summary = "declared but not implemented in this build";
        spec.params = {{"data", ArgType::any, true}};
        spec.result = Value::Kind::series;
        spec.implemented = false;
        add(std::move(spec));
    }

    alias("UniPreOP", "forecast_uni");
    alias("MultiPreOP", "forecast_multi");
    alias("AnomalDetOP", "anomaly_score");
    alias("trainForecastOP", "fit_ar");
    alias("ApplyOP", "apply");
    alias("ConcatOP", "concat");
    alias("CausalMatrixOP", "causal_matrix");
    alias("selectTopRatioOP", "select_top_ratio");
    alias("convertBinaryOP", "threshold_to_binary");
    alias("thToBinaryOP", "threshold_to_binary");
    alias("calibrateThreshOP", "calibrate_threshold");
    alias("detectSpikesOP", "detect_spikes");
    alias("checkStationaryOP", "adf_test");
    alias("checkTrendStationaryOP", "kpss_test");
    alias("compareDisOP", "ks_test");
    alias("testWhiteNoiseOP", "ljung_box_test");
    alias("getAutoCorrOP", "acf");
    alias("getMaxCorrLagOP", "max_corr_lag");
    alias("decomposeOP", "decompose");
    alias("getNoiseCompOP", "noise_component");
    alias("getTrendOP", "trend_slope");
    alias("getTrendCoefOP", "trend_slope");
    alias("getAmplitudeOP", "amplitude");
    alias("getPeriodOP", "estimate_period");
    alias("getSlidingVarOP", "sliding_variance");
    alias("VolDetOP", "volatility");
    alias("projectConstraintOP", "project");
    alias("getEnvDataOP", "fetch_weather");
    alias("getElectricityDataOP", "fetch_electricity");
}

}  // namespace tsreason::plan
