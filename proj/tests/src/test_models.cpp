#include <doctest.h>

#include <cmath>
#include <functional>
#include <vector>

#include "tsreason/core/error.hpp"
#include "tsreason/core/metrics.hpp"
#include "tsreason/models/forecast.hpp"
#include "synth.hpp"

using namespace tsreason;
using models::ModelSpec;

namespace {

std::string error_code(const std::function<void()>& f) {
    try {
        f();
    } catch (const OpError& e) {
        return e.code();
    }
    return "";
}

TimeSeries sawtooth(std::size_t n, std::size_t period, double base = 100.0) {
    std::vector<double> v(n);
    for (std::size_t t = 0; t < n; ++t)
        v[t] = base + static_cast<double>(t % period);
    return TimeSeries("load", synth::kHourly, std::move(v));
}

TimeSeries line(std::size_t n, double intercept, double slope) {
    std::vector<double> v(n);
    for (std::size_t t = 0; t < n; ++t) v[t] = intercept + slope * static_cast<double>(t);
    return TimeSeries("load", synth::kHourly, std::move(v));
}

}  // namespace

TEST_CASE("model name checks") {
    for (const char* m : {"holt_winters", "ar_ls", "seasonal_naive", "drift", "theta",
                          "lagged_regression"})
        CHECK(models::is_forecast_model(m));
    CHECK(!models::is_forecast_model("transformer"));
    CHECK(models::is_anomaly_model("decomp_z"));
    CHECK(models::is_anomaly_model("ar_residual"));
    CHECK(!models::is_anomaly_model("holt_winters"));
}

TEST_CASE("seasonal naive repeats the last full period") {
    auto hist = sawtooth(40, 8);
    auto fc = models::forecast_uni(hist, 12, {"seasonal_naive", 8, std::nullopt});
    REQUIRE(fc.values.size() == 12);
    for (std::size_t h = 0; h < 12; ++h)
        CHECK(fc.values[h] == hist[40 - 8 + (h % 8)]);
    CHECK(fc.values.axis().start == hist.continuation_axis().start);
    CHECK(fc.model_used.name == "seasonal_naive");
}

TEST_CASE("drift extends the first-to-last line") {
    auto hist = line(30, 10.0, 0.5);
    auto fc = models::forecast_uni(hist, 5, {"drift", std::nullopt, std::nullopt});
    for (std::size_t h = 0; h < 5; ++h)
        CHECK(fc.values[h] ==
              doctest::Approx(hist.back() + (static_cast<double>(h) + 1.0) * 0.5).epsilon(1e-12));
}

TEST_CASE("theta halves the trend of a pure line") {
    auto hist = line(50, 5.0, 0.25);
    auto fc = models::forecast_uni(hist, 6, {"theta", std::nullopt, std::nullopt});
    // Averaging the line extrapolation with a flat SES level leaves exactly
    // half the slope, starting near the end of the history.
    for (std::size_t h = 1; h < 6; ++h)
        CHECK(fc.values[h] - fc.values[h - 1] == doctest::Approx(0.125).epsilon(1e-9));
    CHECK(fc.values[0] > hist.back() - 1.5);
    CHECK(fc.values[0] < hist.back() + 0.25 + 1.5);
}

TEST_CASE("holt winters tracks a clean seasonal pattern") {
    std::vector<double> v(96);
    for (std::size_t t = 0; t < v.size(); ++t)
        v[t] = 50.0 + 10.0 * std::sin(2.0 * M_PI * static_cast<double>(t) / 24.0);
    TimeSeries hist("load", synth::kHourly, v);
    auto fc = models::forecast_uni(hist, 24, {"holt_winters", 24, std::nullopt});
    std::vector<double> truth(24);
    for (std::size_t h = 0; h < 24; ++h)
        truth[h] = 50.0 + 10.0 * std::sin(2.0 * M_PI * static_cast<double>(96 + h) / 24.0);
    CHECK(mape_guarded(truth, fc.values.values()) < 0.02);
    CHECK(fc.model_used.period == 24);
}

TEST_CASE("ar_ls forecasts an autoregression better than naive repetition") {
    auto hist = synth::ar1(77, 220, 0.9, 1.0, "load");
    // Shift positive so MAPE is meaningful.
    std::vector<double> shifted = hist.values();
    for (double& x : shifted) x += 50.0;
    TimeSeries data("load", synth::kHourly, shifted);
    TimeSeries head = data.slice(0, 200);
    TimeSeries tail = data.slice(200, 20);

    auto fc = models::forecast_uni(head, 20, {"ar_ls", std::nullopt, 5});
    auto naive = std::vector<double>(20, head.back());
    CHECK(mape_guarded(tail.values(), fc.values.values()) <
          mape_guarded(tail.values(), naive) * 1.5);
    CHECK(fc.model_used.ar_order == 5);
}

TEST_CASE("forecast input validation") {
    auto hist = sawtooth(40, 8);
    CHECK(error_code([&] { models::forecast_uni(hist, 0, {"drift", {}, {}}); }) == "DomainError");
    CHECK(error_code([&] { models::forecast_uni(hist, 4, {"gru", {}, {}}); }) == "UnknownModel");
    CHECK(error_code([&] { models::forecast_uni(hist, 4, {"holt_winters", 30, {}}); }) ==
          "HistoryTooShort");
    CHECK(error_code([&] { models::forecast_uni(hist, 4, {"seasonal_naive", 1, {}}); }) ==
          "DomainError");
    CHECK(error_code([&] { models::forecast_uni(hist, 4, {"ar_ls", {}, 0}); }) == "DomainError");
}

TEST_CASE("resolve_period finds the dominant cycle") {
    std::vector<double> v(120);
    for (std::size_t t = 0; t < v.size(); ++t)
        v[t] = 20.0 + 5.0 * std::sin(2.0 * M_PI * static_cast<double>(t) / 24.0);
    TimeSeries s("x", synth::kHourly, v);
    CHECK(models::resolve_period(s, {"", std::nullopt, std::nullopt}) == 24);
    CHECK(models::resolve_period(s, {"", 12, std::nullopt}) == 12);
}

TEST_CASE("fit_ar recovers coefficients of a synthetic AR(2)") {
    // x[t] = 1.0 + 0.6 x[t-1] - 0.3 x[t-2] + eps, tiny noise.
    Rng rng(123);
    std::vector<double> v(400);
    v[0] = 1.0;
    v[1] = 1.0;
    for (std::size_t t = 2; t < v.size(); ++t)
        v[t] = 1.0 + 0.6 * v[t - 1] - 0.3 * v[t - 2] + rng.normal(0.0, 0.01);
    TimeSeries s("x", synth::kHourly, v);

    ModelHandle h = models::fit_ar(s, 2);
    REQUIRE(h.coeffs.size() == 2);
    CHECK(h.coeffs[0] == doctest::Approx(0.6).epsilon(0.02));
    CHECK(h.coeffs[1] == doctest::Approx(-0.3).epsilon(0.05));
    CHECK(h.intercept == doctest::Approx(1.0).epsilon(0.05));

    auto fc = models::forecast_with_handle(h, s, 10);
    CHECK(fc.size() == 10);
    CHECK(fc.axis().start == s.continuation_axis().start);

    TimeSeries flat("flat", synth::kHourly, std::vector<double>(40, 3.0));
    CHECK(error_code([&] { models::fit_ar(flat, 2); }) == "SingularRegression");
    CHECK(error_code([&] { models::fit_ar(s, 0); }) == "DomainError");
    CHECK(error_code([&] { models::forecast_with_handle(ModelHandle{}, s, 5); }) == "BadHandle");
}

TEST_CASE("forecast_multi with an empty frame reduces to ar_ls") {
    auto hist = synth::ar1(88, 150, 0.7, 1.0, "load");
    std::vector<double> shifted = hist.values();
    for (double& x : shifted) x += 100.0;
    TimeSeries data("load", synth::kHourly, shifted);

    ModelSpec spec{"lagged_regression", 24, 6};
    spec.ridge_lambda = 0.0;
    auto multi = models::forecast_multi(data, Frame{}, 12, spec);
    auto uni = models::forecast_uni(data, 12, {"ar_ls", 24, 6});
    REQUIRE(multi.values.size() == uni.values.size());
    for (std::size_t h = 0; h < 12; ++h)
        CHECK(multi.values[h] == doctest::Approx(uni.values[h]).epsilon(1e-9));
}

TEST_CASE("forecast_multi exploits a lagged covariate") {
    // load[t] = 100 + 2 * cov[t-2] + small noise: the covariate carries most
    // of the signal, so the multivariate model should beat the univariate one.
    Rng rng(321);
    const std::size_t n = 260;
    std::vector<double> cov(n), load(n);
    cov[0] = rng.normal();
    for (std::size_t t = 1; t < n; ++t) cov[t] = 0.8 * cov[t - 1] + rng.normal();
    for (std::size_t t = 0; t < n; ++t) {
        const double driver = t >= 2 ? cov[t - 2] : 0.0;
        load[t] = 100.0 + 2.0 * driver + rng.normal(0.0, 0.05);
    }
    TimeSeries target("load", synth::kHourly, std::vector<double>(load.begin(), load.end() - 10));
    Frame covs;
    covs.add_column(TimeSeries("temperature", synth::kHourly,
                               std::vector<double>(cov.begin(), cov.end() - 10)));
    std::vector<double> truth(load.end() - 10, load.end());

    ModelSpec spec{"lagged_regression", std::nullopt, 4};
    auto fc = models::forecast_multi(target, covs, 10, spec);
    auto uni = models::forecast_uni(target, 10, {"ar_ls", std::nullopt, 4});
    CHECK(mape_guarded(truth, fc.values.values()) <= mape_guarded(truth, uni.values.values()));
    CHECK(fc.model_used.name == "lagged_regression");

    Frame misaligned;
    misaligned.add_column(TimeSeries("temperature", synth::kHourly, {1, 2, 3}));
    CHECK(error_code([&] { models::forecast_multi(target, misaligned, 10, spec); }) ==
          "LengthMismatch");
    CHECK(error_code([&] { models::forecast_multi(target, covs, 10, {"ar_ls", {}, {}}); }) ==
          "UnknownModel");
}

TEST_CASE("anomaly scores peak at a planted anomaly") {
    std::vector<double> v(240);
    for (std::size_t t = 0; t < v.size(); ++t)
        v[t] = 15.0 + 6.0 * std::sin(2.0 * M_PI * static_cast<double>(t) / 24.0);
    v[100] += 30.0;
    TimeSeries s("t2m", synth::kHourly, v);

    auto dz = models::anomaly_score(s, {"decomp_z", 24, std::nullopt});
    REQUIRE(dz.size() == s.size());
    std::size_t argmax = 0;
    for (std::size_t t = 1; t < dz.size(); ++t)
        if (dz[t] > dz[argmax]) argmax = t;
    CHECK(argmax == 100);

    auto ar = models::anomaly_score(s, {"ar_residual", std::nullopt, 5});
    REQUIRE(ar.size() == s.size());
    for (std::size_t t = 0; t < 5; ++t) CHECK(ar[t] == 0.0);
    argmax = 0;
    for (std::size_t t = 1; t < ar.size(); ++t)
        if (ar[t] > ar[argmax]) argmax = t;
    CHECK(argmax == 100);

    CHECK(error_code([&] { models::anomaly_score(s, {"decomp", {}, {}}); }) == "UnknownModel");
}

TEST_CASE("backtest holds out the forecast horizon") {
    auto data = sawtooth(60, 6);
    ModelSpec spec{"seasonal_naive", 6, std::nullopt};
    Quality q = models::backtest(data, nullptr, 12, spec);
    CHECK(q.metric == "mape");

    // Manual reproduction: refit on the first 48 points, score on the last 12.
    auto head = data.slice(0, 48);
    auto tail = data.slice(48, 12);
    auto fc = models::forecast_uni(head, 12, spec);
    CHECK(q.value == doctest::Approx(mape_guarded(tail.values(), fc.values.values())).epsilon(1e-12));

    // Sawtooth is perfectly periodic so the backtest is exact.
    CHECK(q.value == doctest::Approx(0.0).scale(1.0).epsilon(1e-12));

    CHECK(error_code([&] { models::backtest(data, nullptr, 0, spec); }) == "DomainError");
    CHECK(error_code([&] { models::backtest(data.slice(0, 10), nullptr, 9, spec); }) ==
          "HistoryTooShort");
}
