#include <doctest.h>

#include <cmath>
#include <functional>
#include <vector>

#include "tsreason/core/error.hpp"
#include "tsreason/stats/granger.hpp"
#include "tsreason/stats/ops.hpp"
#include "tsreason/stats/stat_tests.hpp"
#include "synth.hpp"

using namespace tsreason;
using stats::TestKind;

namespace {

std::string error_code(const std::function<void()>& f) {
    try {
        f();
    } catch (const OpError& e) {
        return e.code();
    }
    return "";
}

}  // namespace

// The numeric constants below were frozen against scipy 1.15 / statsmodels
// 0.14 on the exact synth.hpp inputs (adfuller with maxlag fixed, kpss with
// regression="ct", ks_2samp, acorr_ljungbox, grangercausalitytests ssr_ftest,
// acf(adjusted=False), seasonal_decompose). Statistics agree to ~1e-9;
// p-values only where both sides use the same distribution.

TEST_CASE("adf statistic matches the reference implementation") {
    auto stationary = stats::stat_test(TestKind::adf, synth::ar1(42, 200, 0.6, 1.0), nullptr, 2);
    CHECK(stationary.statistic == doctest::Approx(-5.6056624081134645).epsilon(1e-9));
    CHECK(stationary.verdict);
    CHECK(stationary.p_value < 0.05);

    auto walk = stats::stat_test(TestKind::adf, synth::random_walk(43, 200), nullptr, 2);
    CHECK(walk.statistic == doctest::Approx(-2.0255267817457723).epsilon(1e-9));
    CHECK(!walk.verdict);
    CHECK(walk.p_value > 0.05);
    CHECK(walk.kind == "adf");
}

TEST_CASE("kpss statistic matches the reference implementation") {
    auto r = stats::stat_test(TestKind::kpss, synth::ar1(44, 240, 0.5, 1.0), nullptr, 8);
    CHECK(r.statistic == doctest::Approx(0.07429682406642245).epsilon(1e-9));
    CHECK(r.verdict);  // trend-stationary
}

TEST_CASE("ks two-sample statistic and asymptotic p") {
    auto a = synth::normal_sample(45, 120, 0.0, 1.0);
    auto b = synth::normal_sample(46, 150, 0.5, 1.2);
    auto r = stats::stat_test(TestKind::ks, a, &b);
    CHECK(r.statistic == doctest::Approx(0.38166666666666665).epsilon(1e-12));
    CHECK(r.p_value == doctest::Approx(3.871455062835304e-09).epsilon(1e-6));
    CHECK(!r.verdict);

    auto a2 = synth::normal_sample(52, 150, 0.0, 1.0);
    auto b2 = synth::normal_sample(53, 150, 0.0, 1.0);
    CHECK(stats::stat_test(TestKind::ks, a2, &b2).verdict);

    CHECK(error_code([&] { stats::stat_test(TestKind::ks, a, nullptr); }) == "MissingSecondSeries");
}

TEST_CASE("ljung box matches the reference implementation") {
    auto ar = stats::stat_test(TestKind::ljung_box, synth::ar1(47, 180, 0.7, 1.0), nullptr, 10);
    CHECK(ar.statistic == doctest::Approx(164.1715428646206).epsilon(1e-9));
    CHECK(ar.p_value < 1e-12);
    CHECK(!ar.verdict);  // serially correlated

    auto iid = stats::stat_test(TestKind::ljung_box, synth::normal_sample(48, 180, 0.0, 1.0),
                                nullptr, 10);
    CHECK(iid.statistic == doctest::Approx(12.612299638265583).epsilon(1e-9));
    CHECK(iid.p_value == doctest::Approx(0.246163326295163).epsilon(1e-6));
    CHECK(iid.verdict);
}

TEST_CASE("stat test input validation") {
    auto s = synth::ar1(1, 100, 0.5, 1.0);
    auto tiny = synth::ar1(1, 10, 0.5, 1.0);
    CHECK(error_code([&] { stats::stat_test(TestKind::adf, tiny); }) == "SeriesTooShort");
    CHECK(error_code([&] { stats::stat_test(TestKind::ljung_box, s); }) == "DomainError");
    CHECK(error_code([&] { stats::stat_test(TestKind::ljung_box, s, nullptr, 0); }) == "DomainError");
    CHECK(error_code([&] { stats::stat_test(TestKind::ljung_box, s, nullptr, 100); }) ==
          "LagTooLarge");
    CHECK(stats::test_kind_from_string("kpss") == TestKind::kpss);
    CHECK(!stats::test_kind_from_string("anova").has_value());
}

TEST_CASE("granger p-values match the reference implementation") {
    auto [x, y] = synth::granger_pair(49, 150);
    Frame f;
    f.add_column(x);
    f.add_column(y);
    Matrix m = stats::causal_matrix(f, 2);
    CHECK(m.rows == 2);
    CHECK(m.at(0, 0) == 0.0);
    CHECK(m.at(1, 1) == 0.0);
    CHECK(m.at(0, 1) < 1e-12);  // reference: 4.75e-36
    CHECK(m.at(1, 0) == doctest::Approx(0.1763793663628305).epsilon(1e-6));
}

TEST_CASE("causal matrix input validation") {
    Frame one;
    one.add_column(synth::ar1(2, 60, 0.5, 1.0, "a"));
    CHECK(error_code([&] { stats::causal_matrix(one, 2); }) == "ShapeMismatch");
    Frame two = one;
    two.add_column(synth::ar1(3, 60, 0.5, 1.0, "b"));
    CHECK(error_code([&] { stats::causal_matrix(two, 0); }) == "DomainError");
    CHECK(error_code([&] { stats::causal_matrix(two, 7); }) == "SeriesTooShort");
}

TEST_CASE("select_top_ratio keeps the k smallest p-values") {
    Matrix p = Matrix::zeros(3, 3);
    p.at(0, 1) = 0.001;
    p.at(0, 2) = 0.5;
    p.at(1, 0) = 0.2;
    p.at(1, 2) = 0.004;
    p.at(2, 0) = 0.9;
    p.at(2, 1) = 0.3;
    // ratio 1/3 over 6 slots -> k = 2.
    Matrix sel = stats::select_top_ratio(p, 1.0 / 3.0);
    CHECK(sel.at(0, 1) == 1.0);
    CHECK(sel.at(1, 2) == 1.0);
    double total = 0.0;
    for (double v : sel.data) total += v;
    CHECK(total == 2.0);

    CHECK(error_code([&] { stats::select_top_ratio(p, 1.5); }) == "DomainError");
    CHECK(error_code([&] { stats::select_top_ratio(Matrix::zeros(2, 3), 0.5); }) ==
          "ShapeMismatch");
}

TEST_CASE("acf matches the reference implementation") {
    const std::vector<double> expected{1.0,
                                       0.30868937375014505,
                                       0.10389217215308169,
                                       0.10232680344375851,
                                       0.03591602661145969,
                                       -0.16436209328646142,
                                       0.02619905059271398};
    auto r = stats::acf(synth::ar1(50, 64, 0.4, 1.0), 6);
    REQUIRE(r.size() == expected.size());
    for (std::size_t i = 0; i < r.size(); ++i)
        CHECK(r[i] == doctest::Approx(expected[i]).epsilon(1e-10));
}

TEST_CASE("max_corr_lag recovers a planted shift") {
    auto base = synth::ar1(54, 120, 0.8, 1.0);
    // y[t] = x[t - 3]: x leads y by exactly three steps.
    TimeSeries x = base.slice(3, 117);
    TimeSeries y = base.slice(0, 117).renamed("y");
    CHECK(stats::max_corr_lag(x, y, 6) == 3);
    CHECK(stats::max_corr_lag(base, base, 5) == 0);
    CHECK(error_code([&] { stats::max_corr_lag(x, base, 5); }) == "LengthMismatch");
    CHECK(error_code([&] { stats::max_corr_lag(x, y, 117); }) == "LagTooLarge");
}

TEST_CASE("decompose matches the reference trend and reconstructs exactly") {
    auto input = synth::trend_seasonal(51, 96, 12);
    auto dec = stats::decompose(input, 12);

    // Interior trend values from the reference 2x12 moving average.
    CHECK(dec.trend[6] == doctest::Approx(10.349927048815776).epsilon(1e-10));
    CHECK(dec.trend[30] == doctest::Approx(11.502416309141523).epsilon(1e-10));
    CHECK(dec.trend[60] == doctest::Approx(12.99736886082594).epsilon(1e-10));
    CHECK(dec.trend[89] == doctest::Approx(14.551529416817235).epsilon(1e-10));

    // trend + seasonal + residual == input, far below the 1e-9 gate.
    for (std::size_t t = 0; t < input.size(); ++t) {
        const double rec = dec.trend[t] + dec.seasonal[t] + dec.residual[t];
        CHECK(std::fabs(rec - input[t]) <= 1e-9);
    }

    // One seasonal cycle sums to ~zero and the pattern repeats exactly.
    double cycle = 0.0;
    for (std::size_t p = 0; p < 12; ++p) cycle += dec.seasonal[p];
    CHECK(std::fabs(cycle) < 1e-9);
    for (std::size_t t = 12; t < input.size(); ++t)
        CHECK(dec.seasonal[t] == dec.seasonal[t - 12]);

    CHECK(error_code([&] { stats::decompose(input, 1); }) == "DomainError");
    CHECK(error_code([&] { stats::decompose(input.slice(0, 20), 12); }) == "SeriesTooShort");
}

TEST_CASE("pointwise transforms") {
    TimeSeries s("x", synth::kHourly, {1.0, 4.0, 9.0});

    auto logd = stats::apply(s, {stats::Fn::log});
    CHECK(logd[1] == doctest::Approx(std::log(4.0)));
    TimeSeries neg("x", synth::kHourly, {1.0, -2.0});
    CHECK(error_code([&] { stats::apply(neg, {stats::Fn::log}); }) == "DomainError");

    auto diffed = stats::apply(s, {stats::Fn::diff});
    CHECK(diffed.values() == std::vector<double>{3.0, 5.0});
    CHECK(diffed.axis().start == s.axis().at(1));
    TimeSeries single("x", synth::kHourly, {5.0});
    CHECK(error_code([&] { stats::apply(single, {stats::Fn::diff}); }) == "EmptyAfterDiff");

    auto z = stats::apply(s, {stats::Fn::zscore});
    double mean = (z[0] + z[1] + z[2]) / 3.0;
    CHECK(std::fabs(mean) < 1e-12);
    TimeSeries flat("x", synth::kHourly, {2.0, 2.0, 2.0});
    CHECK(error_code([&] { stats::apply(flat, {stats::Fn::zscore}); }) == "ConstantSeries");

    TimeSeries pm("x", synth::kHourly, {-3.0, 2.0});
    CHECK(stats::apply(pm, {stats::Fn::abs}).values() == std::vector<double>{3.0, 2.0});

    stats::FnSpec scale{stats::Fn::scale};
    scale.c = 2.5;
    CHECK(stats::apply(pm, scale).values() == std::vector<double>{-7.5, 5.0});

    stats::FnSpec clip{stats::Fn::clip};
    clip.lo = -1.0;
    clip.hi = 1.5;
    CHECK(stats::apply(pm, clip).values() == std::vector<double>{-1.0, 1.5});
    clip.lo = 2.0;
    clip.hi = 1.0;
    CHECK(error_code([&] { stats::apply(pm, clip); }) == "DomainError");
}

TEST_CASE("concat builds frames and enforces alignment") {
    TimeSeries a("a", synth::kHourly, {1, 2, 3});
    TimeSeries b("b", synth::kHourly, {4, 5, 6});
    Frame f = stats::concat(Value(a), Value(b));
    CHECK(f.names() == std::vector<std::string>{"a", "b"});

    Frame g = stats::concat(Value(f), Value(TimeSeries("c", synth::kHourly, {7, 8, 9})));
    CHECK(g.n_cols() == 3);

    CHECK(error_code([&] { stats::concat(Value(a), Value(3.0)); }) == "TypeMismatch");
    CHECK(error_code([&] { stats::concat(Value(a), Value(a)); }) == "DuplicateColumn");
    TimeSeries off("d", TimeAxis{0, 60}, {1, 2, 3});
    CHECK(error_code([&] { stats::concat(Value(a), Value(off)); }) == "AxisMismatch");
}

TEST_CASE("scalar features") {
    // Pure line: slope recovered exactly, amplitude ~0.
    std::vector<double> line(48);
    for (std::size_t t = 0; t < line.size(); ++t) line[t] = 2.0 + 0.75 * static_cast<double>(t);
    TimeSeries ls("line", synth::kHourly, line);
    CHECK(stats::feature(ls, stats::Feature::trend_slope).scalar() ==
          doctest::Approx(0.75).epsilon(1e-12));
    CHECK(stats::feature(ls, stats::Feature::amplitude).scalar() ==
          doctest::Approx(0.0).scale(1.0).epsilon(1e-9));

    // Sinusoid: period and amplitude recovered.
    std::vector<double> wave(96);
    for (std::size_t t = 0; t < wave.size(); ++t)
        wave[t] = 5.0 + 2.0 * std::sin(2.0 * M_PI * static_cast<double>(t) / 16.0);
    TimeSeries ws("wave", synth::kHourly, wave);
    CHECK(stats::feature(ws, stats::Feature::period).scalar() == 16.0);
    CHECK(stats::feature(ws, stats::Feature::amplitude).scalar() ==
          doctest::Approx(2.0).epsilon(0.02));

    auto sv = stats::feature(ws, stats::Feature::sliding_variance, 8).series();
    CHECK(sv.size() == wave.size() - 7);
    CHECK(error_code([&] { stats::feature(ws, stats::Feature::sliding_variance, 1); }) ==
          "DomainError");
    CHECK(error_code([&] { stats::feature(ws, stats::Feature::sliding_variance, 1000); }) ==
          "WindowTooLarge");

    auto vol = stats::feature(ws, stats::Feature::volatility, 8).series();
    CHECK(vol.size() == wave.size() - 1 - 7);
}

TEST_CASE("spike detection flags planted outliers") {
    auto clean = synth::normal_sample(55, 200, 10.0, 0.5);
    auto v = clean.values();
    v[50] += 8.0;
    v[120] -= 7.0;
    TimeSeries spiky("t2m", synth::kHourly, v);

    IntVec hits = stats::detect_spikes(spiky, 5.0);
    REQUIRE(hits.values.size() == 2);
    CHECK(hits.values[0] == 50);
    CHECK(hits.values[1] == 120);

    TimeSeries flat("flat", synth::kHourly, std::vector<double>(20, 1.0));
    CHECK(error_code([&] { stats::detect_spikes(flat, 3.0); }) == "ConstantSeries");
    CHECK(error_code([&] { stats::detect_spikes(spiky, 0.0); }) == "DomainError");
}

TEST_CASE("threshold calibration and binarization") {
    TimeSeries scores("s", synth::kHourly, {1.0, 2.0, 3.0, 4.0});
    // mean 2.5, sample stdev sqrt(5/3).
    CHECK(stats::calibrate_threshold(scores) ==
          doctest::Approx(2.5 + 3.0 * std::sqrt(5.0 / 3.0)).epsilon(1e-12));

    BinVec via_threshold = stats::threshold_to_binary(scores, 2.5, std::nullopt);
    CHECK(via_threshold.bits == std::vector<std::uint8_t>{0, 0, 1, 1});

    BinVec via_pct = stats::threshold_to_binary(scores, std::nullopt, 0.25);
    CHECK(via_pct.bits == std::vector<std::uint8_t>{0, 0, 0, 1});

    CHECK(error_code([&] { stats::threshold_to_binary(scores, 2.5, 0.25); }) ==
          "BothOrNeitherGiven");
    CHECK(error_code([&] { stats::threshold_to_binary(scores, std::nullopt, std::nullopt); }) ==
          "BothOrNeitherGiven");
    CHECK(error_code([&] { stats::threshold_to_binary(scores, std::nullopt, 1.0); }) ==
          "DomainError");
}
