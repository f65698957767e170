#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <functional>
#include <string>
#include <vector>

#include "tsreason/constraints/constraint.hpp"
#include "tsreason/core/error.hpp"
#include "tsreason/core/rng.hpp"
#include "synth.hpp"

using namespace tsreason;
using constraints::ConstraintSpec;
using constraints::Kind;

namespace {

std::string error_code(const std::function<void()>& f) {
    try {
        f();
    } catch (const OpError& e) {
        return e.code();
    }
    return "";
}

double mean_of(const std::vector<double>& v) {
    double s = 0.0;
    for (const double x : v) s += x;
    return s / static_cast<double>(v.size());
}

double stdev_of(const std::vector<double>& v) {
    const double m = mean_of(v);
    double s = 0.0;
    for (const double x : v) s += (x - m) * (x - m);
    return std::sqrt(s / static_cast<double>(v.size() - 1));
}

TimeSeries random_forecast(Rng& rng) {
    const std::size_t n = static_cast<std::size_t>(rng.uniform_int(5, 60));
    const double base = rng.uniform(600.0, 800.0);
    const double scale = rng.uniform(1.0, 40.0);
    std::vector<double> v(n);
    for (double& x : v) x = base + rng.normal(0.0, scale);
    return TimeSeries("load", synth::kHourly, std::move(v));
}

ConstraintSpec random_spec(Kind kind, const TimeSeries& fc, Rng& rng) {
    ConstraintSpec spec;
    spec.kind = kind;
    const auto& y = fc.values();
    const auto [lo, hi] = std::minmax_element(y.begin(), y.end());
    switch (kind) {
        case Kind::max_load:
            // Sometimes binding, sometimes slack.
            spec.value = rng.uniform(*lo, *hi + 20.0);
            break;
        case Kind::min_load:
            spec.value = rng.uniform(*lo - 20.0, *hi);
            break;
        case Kind::ramp_rate:
            spec.value = rng.uniform(0.0, 60.0);
            spec.anchor = rng.uniform(590.0, 810.0);
            break;
        case Kind::variability:
            spec.value = rng.uniform(0.0, 50.0);
            break;
    }
    return spec;
}

}  // namespace

TEST_CASE("constraint clauses parse from question text") {
    auto max = constraints::parse_constraint(
        "Ensure that the maximum allowable system load does not exceed 812.5 MW.");
    REQUIRE(max.has_value());
    CHECK(max->kind == Kind::max_load);
    CHECK(max->value == 812.5);
    CHECK(!max->anchor.has_value());

    auto min = constraints::parse_constraint(
        "The load should be maintained above a minimum of 640.25 MW at all times.");
    REQUIRE(min.has_value());
    CHECK(min->kind == Kind::min_load);
    CHECK(min->value == 640.25);

    auto ramp = constraints::parse_constraint(
        "Limit the load ramp rate to ensure it does not exceed 15.5 MW per minute.");
    REQUIRE(ramp.has_value());
    CHECK(ramp->kind == Kind::ramp_rate);
    CHECK(ramp->value == 15.5);

    auto var = constraints::parse_constraint(
        "Manage the load variability so that it does not exceed 12.75 MW.");
    REQUIRE(var.has_value());
    CHECK(var->kind == Kind::variability);
    CHECK(var->value == 12.75);

    CHECK(!constraints::parse_constraint("What will the load be tomorrow?").has_value());
    CHECK(error_code([] {
              constraints::parse_constraint(
                  "the maximum allowable system load does not exceed 800 MW and "
                  "maintained above a minimum of 700 MW");
          }) == "AmbiguousConstraint");

    // Scientific notation survives the round trip.
    auto sci = constraints::parse_constraint(
        "the maximum allowable system load does not exceed 8.125e2 MW");
    REQUIRE(sci.has_value());
    CHECK(sci->value == 812.5);
}

TEST_CASE("check flags strict excess only") {
    TimeSeries fc("load", synth::kHourly, {700.0, 800.0, 805.0, 799.5});

    auto at_bound = constraints::check(fc, {Kind::max_load, 805.0, {}});
    CHECK(at_bound.empty());  // boundary is feasible

    auto over = constraints::check(fc, {Kind::max_load, 799.5, {}});
    REQUIRE(over.size() == 1);
    CHECK(over[0].indices == std::vector<std::size_t>{1, 2});
    CHECK(over[0].magnitude == doctest::Approx(5.5).epsilon(1e-12));

    auto under = constraints::check(fc, {Kind::min_load, 750.0, {}});
    REQUIRE(under.size() == 1);
    CHECK(under[0].indices == std::vector<std::size_t>{0});
    CHECK(under[0].magnitude == doctest::Approx(50.0).epsilon(1e-12));
}

TEST_CASE("ramp check includes the anchor step") {
    TimeSeries fc("load", synth::kHourly, {710.0, 715.0, 714.0});
    ConstraintSpec spec{Kind::ramp_rate, 6.0, 700.0};
    auto v = constraints::check(fc, spec);
    REQUIRE(v.size() == 1);
    // Only the anchor -> first point step (10) exceeds 6.
    CHECK(v[0].indices == std::vector<std::size_t>{0});
    CHECK(v[0].magnitude == doctest::Approx(4.0).epsilon(1e-12));

    spec.anchor.reset();
    CHECK(error_code([&] { constraints::check(fc, spec); }) == "MissingAnchor");
    CHECK(error_code([&] {
              constraints::check(fc, ConstraintSpec{Kind::ramp_rate, -1.0, 700.0});
          }) == "DomainError");
}

TEST_CASE("variability check uses the sample standard deviation") {
    TimeSeries fc("load", synth::kHourly, {700.0, 710.0, 690.0, 705.0});
    const double s = stdev_of(fc.values());
    CHECK(constraints::check(fc, {Kind::variability, s + 1e-9, {}}).empty());
    auto v = constraints::check(fc, {Kind::variability, s - 1e-6, {}});
    REQUIRE(v.size() == 1);
    CHECK(v[0].indices.size() == fc.size());  // the whole horizon participates
}

// The executor relies on project composing with check: a projected forecast
// must never fail validation afterwards, projection must be a no-op on
// feasible input, and projecting twice must change nothing.
TEST_CASE("projection properties hold over random forecast/bound pairs") {
    for (Kind kind : {Kind::max_load, Kind::min_load, Kind::ramp_rate, Kind::variability}) {
        Rng rng(900 + static_cast<std::uint64_t>(kind));
        int binding = 0;
        for (int iter = 0; iter < 1000; ++iter) {
            const TimeSeries fc = random_forecast(rng);
            const ConstraintSpec spec = random_spec(kind, fc, rng);

            const bool feasible_before = constraints::check(fc, spec).empty();
            const TimeSeries once = constraints::project(fc, spec);

            // Feasibility: the strict check accepts the projected series.
            REQUIRE(constraints::check(once, spec).empty());

            // Idempotence, bitwise.
            const TimeSeries twice = constraints::project(once, spec);
            REQUIRE(twice.values() == once.values());

            if (feasible_before) {
                REQUIRE(once.values() == fc.values());
            } else {
                ++binding;
                if (kind == Kind::variability) {
                    // Shrinking toward the mean preserves it.
                    const double before = mean_of(fc.values());
                    const double after = mean_of(once.values());
                    REQUIRE(std::fabs(after - before) <=
                            1e-9 * std::max(1.0, std::fabs(before)));
                }
            }
        }
        // The sampling ranges straddle the bound, so both branches ran often.
        CHECK(binding > 100);
        CHECK(binding < 1000);
    }
}

TEST_CASE("project_all satisfies compatible constraints jointly") {
    Rng rng(4242);
    for (int iter = 0; iter < 200; ++iter) {
        TimeSeries fc = random_forecast(rng);
        const double lo = rng.uniform(620.0, 680.0);
        const double hi = lo + rng.uniform(40.0, 120.0);
        std::vector<ConstraintSpec> specs{
            {Kind::max_load, hi, {}},
            {Kind::min_load, lo, {}},
            {Kind::ramp_rate, rng.uniform(20.0, 80.0), std::clamp(700.0, lo, hi)},
        };
        TimeSeries out = constraints::project_all(fc, specs);
        for (const auto& spec : specs) REQUIRE(constraints::check(out, spec).empty());
    }

    // max below min cannot be satisfied.
    TimeSeries fc("load", synth::kHourly, {700.0, 701.0, 702.0});
    std::vector<ConstraintSpec> impossible{
        {Kind::max_load, 600.0, {}},
        {Kind::min_load, 650.0, {}},
    };
    CHECK(error_code([&] { constraints::project_all(fc, impossible); }) ==
          "InfeasibleConstraint");
}
