#include <doctest.h>

#include <cmath>
#include <cstdint>
#include <filesystem>
#include <functional>
#include <limits>
#include <numeric>
#include <set>
#include <string>
#include <vector>

#include "tsreason/core/csv.hpp"
#include "tsreason/core/error.hpp"
#include "tsreason/core/metrics.hpp"
#include "tsreason/core/num_text.hpp"
#include "tsreason/core/rng.hpp"
#include "tsreason/core/task.hpp"
#include "tsreason/core/task_io.hpp"
#include "tsreason/core/time_axis.hpp"
#include "tsreason/core/time_series.hpp"
#include "tsreason/core/value.hpp"
#include "synth.hpp"

using namespace tsreason;

namespace {

std::string error_code(const std::function<void()>& f) {
    try {
        f();
    } catch (const OpError& e) {
        return e.code();
    }
    return "";
}

std::filesystem::path temp_dir(const std::string& tag) {
    auto dir = std::filesystem::temp_directory_path() / ("tsreason_core_" + tag);
    std::filesystem::remove_all(dir);
    std::filesystem::create_directories(dir);
    return dir;
}

}  // namespace

TEST_CASE("rng stream is frozen") {
    // These constants pin the exact draw sequence. Generated datasets are
    // reproduced from seeds alone, so any change here is a breaking change.
    Rng a(12345);
    CHECK(a.next_u64() == 12716877617435052285ULL);
    CHECK(a.next_u64() == 7386862472818278521ULL);
    CHECK(a.next_u64() == 6597103971274460346ULL);

    Rng b(12345);
    CHECK(b.uniform() == doctest::Approx(0.40044261704406114).epsilon(1e-15));
    Rng c(12345);
    CHECK(c.normal() == doctest::Approx(0.63069787373584973).epsilon(1e-15));

    CHECK(derive_seed(7, "predictive:max_load:no_cov", 0) == 9928133398313172041ULL);
    CHECK(derive_seed(7, "predictive:max_load:no_cov", 1) == 14424276140256176631ULL);
    CHECK(derive_seed(7, "x", 0) == 12161119916784371179ULL);
}

TEST_CASE("rng uniform_int covers the full inclusive range") {
    Rng rng(7);
    std::set<std::int64_t> seen;
    for (int i = 0; i < 2000; ++i) {
        const std::int64_t v = rng.uniform_int(-2, 3);
        REQUIRE(v >= -2);
        REQUIRE(v <= 3);
        seen.insert(v);
    }
    CHECK(seen.size() == 6);
}

TEST_CASE("rng shuffle permutes without losing elements") {
    Rng rng(11);
    std::vector<int> v(50);
    std::iota(v.begin(), v.end(), 0);
    auto original = v;
    rng.shuffle(v);
    CHECK(v != original);  // 50! orderings; identity would be astonishing
    std::sort(v.begin(), v.end());
    CHECK(v == original);
}

TEST_CASE("iso8601 round trip and rejection") {
    CHECK(format_iso8601(0) == "1970-01-01T00:00:00Z");
    CHECK(format_iso8601(1704067200) == "2024-01-01T00:00:00Z");
    CHECK(parse_iso8601("2024-01-01T06:30:00Z") == 1704090600);
    for (std::int64_t t : {0LL, 951782400LL, 1704067200LL, 4102444799LL})
        CHECK(parse_iso8601(format_iso8601(t)) == t);
    CHECK(error_code([] { parse_iso8601("2024-13-01T00:00:00Z"); }) == "BadTimestamp");
    CHECK(error_code([] { parse_iso8601("2024-01-01 00:00:00"); }) == "BadTimestamp");
    CHECK(error_code([] { parse_iso8601("not a date"); }) == "BadTimestamp");
}

TEST_CASE("series construction enforces invariants") {
    CHECK(error_code([] { TimeSeries("x", {0, 3600}, {}); }) == "EmptySeries");
    CHECK(error_code([] { TimeSeries("x", {0, 0}, {1.0}); }) == "BadAxis");
    CHECK(error_code([] { TimeSeries("x", {0, -60}, {1.0}); }) == "BadAxis");
    CHECK(error_code([] { TimeSeries("x", {0, 3600}, {1.0, std::nan("")}); }) == "NonFiniteValue");
    CHECK(error_code([] {
              TimeSeries("x", {0, 3600}, {1.0, std::numeric_limits<double>::infinity()});
          }) == "NonFiniteValue");
}

TEST_CASE("series slicing and continuation") {
    TimeSeries s("load", {1000, 60}, {1, 2, 3, 4, 5});
    auto part = s.slice(2, 3);
    CHECK(part.values() == std::vector<double>{3, 4, 5});
    CHECK(part.axis().start == 1120);
    CHECK(part.axis().step_seconds == 60);
    CHECK(part.name() == "load");

    CHECK(error_code([&] { s.slice(3, 3); }) == "BadSlice");
    CHECK(error_code([&] { s.slice(0, 0); }) == "BadSlice");

    auto cont = s.continuation_axis();
    CHECK(cont.start == 1000 + 5 * 60);
    CHECK(cont.step_seconds == 60);

    CHECK(s.renamed("demand").name() == "demand");
    CHECK(s.with_values({9, 8, 7, 6, 5}).axis() == s.axis());
}

TEST_CASE("frame keeps columns aligned and unique") {
    TimeAxis ax{0, 3600};
    Frame f;
    f.add_column(TimeSeries("a", ax, {1, 2, 3}));
    CHECK(error_code([&] { f.add_column(TimeSeries("b", ax, {1, 2})); }) == "LengthMismatch");
    CHECK(error_code([&] { f.add_column(TimeSeries("b", {60, 3600}, {1, 2, 3})); }) ==
          "AxisMismatch");
    CHECK(error_code([&] { f.add_column(TimeSeries("a", ax, {4, 5, 6})); }) == "DuplicateColumn");

    f.add_column(TimeSeries("b", ax, {4, 5, 6}));
    CHECK(f.n_cols() == 2);
    CHECK(f.n_rows() == 3);
    CHECK(f.names() == std::vector<std::string>{"a", "b"});
    CHECK(f.find("missing") == nullptr);
    CHECK(error_code([&] { f.column("missing"); }) == "UnknownColumn");
}

TEST_CASE("value accessors are checked") {
    Value v(3.5);
    CHECK(v.kind() == Value::Kind::scalar);
    CHECK(v.scalar() == 3.5);
    CHECK(error_code([&] { v.series(); }) == "TypeMismatch");

    Value s(TimeSeries("x", {0, 60}, {1, 2}));
    CHECK(s.shape_string() == "series[2]");
    Value m(Matrix::zeros(3, 4));
    CHECK(m.shape_string() == "matrix[3x4]");
    CHECK(Value(BinVec{{0, 1, 1}}).bin_vec().count_ones() == 2);
    CHECK(value_kind_from_string("series") == Value::Kind::series);
    CHECK(error_code([] { value_kind_from_string("blob"); }) == "BadValueKind");
}

TEST_CASE("format_double is shortest round trip") {
    for (double v : {0.1, 1.0 / 3.0, 1e300, -7.25e-12, 123456.0, -0.0, 694.4796}) {
        CHECK(parse_double(format_double(v)) == v);
    }
    CHECK(format_double(1.0) == "1");
    CHECK(format_double(0.5) == "0.5");
    CHECK(format_fixed(694.47961, 4) == "694.4796");
    CHECK(format_fixed(-2.0, 4) == "-2.0000");
    CHECK(format_fixed(0.123456, 2) == "0.12");
}

TEST_CASE("number parsing is strict") {
    CHECK(parse_double("-12.5e3") == -12500.0);
    CHECK(error_code([] { parse_double("12.5x"); }) == "BadNumber");
    CHECK(error_code([] { parse_double(""); }) == "BadNumber");
    CHECK(parse_int("-42") == -42);
    CHECK(error_code([] { parse_int("4.2"); }) == "BadNumber");
}

TEST_CASE("csv round trips frames exactly") {
    TimeAxis ax{1704067200, 60};
    Frame f;
    f.add_column(TimeSeries("load", ax, {700.125, 1.0 / 3.0, -0.25}));
    f.add_column(TimeSeries("temperature", ax, {15.5, 16.25, 17.75}));

    const std::string text = csv::to_string(f);
    Frame back = csv::frame_from_string(text);
    CHECK(back == f);

    TimeSeries s("x", ax, {1e-300, 2e300, 3.25});
    CHECK(csv::series_from_string(csv::to_string(s)) == s);
}

TEST_CASE("csv rejects malformed input") {
    CHECK(error_code([] { csv::frame_from_string(""); }) == "BadCsv");
    CHECK(error_code([] { csv::frame_from_string("time,load\n"); }) == "BadCsv");
    CHECK(error_code([] { csv::frame_from_string("timestamp,load\n"); }) == "BadCsv");
    CHECK(error_code([] {
              csv::frame_from_string("timestamp,load\n2024-01-01T00:00:00Z,1\n2024-01-01T00:01:00Z");
          }) == "BadCsv");
    CHECK(error_code([] {
              csv::frame_from_string("timestamp,load\n2024-01-01T00:00:00Z,abc\n");
          }) == "BadCsv");
    // Non-uniform spacing.
    CHECK(error_code([] {
              csv::frame_from_string(
                  "timestamp,load\n"
                  "2024-01-01T00:00:00Z,1\n"
                  "2024-01-01T00:01:00Z,2\n"
                  "2024-01-01T00:03:00Z,3\n");
          }) == "BadCsv");
    // read_series wants exactly one value column.
    CHECK(error_code([] {
              csv::series_from_string(
                  "timestamp,a,b\n2024-01-01T00:00:00Z,1,2\n2024-01-01T01:00:00Z,3,4\n");
          }) == "BadCsv");
}

TEST_CASE("csv file io") {
    auto dir = temp_dir("csv");
    TimeSeries s("load", {0, 900}, {10.5, 11.25, 9.75});
    csv::write_series(dir / "s.csv", s);
    CHECK(csv::read_series(dir / "s.csv") == s);
    CHECK(error_code([&] { csv::read_series(dir / "missing.csv"); }) == "IoError");
    std::filesystem::remove_all(dir);
}

TEST_CASE("mape") {
    CHECK(mape({100, 200}, {110, 180}) == doctest::Approx(0.1).epsilon(1e-12));
    CHECK(error_code([] { mape({100}, {1, 2}); }) == "LengthMismatch");
    CHECK(error_code([] { mape({}, {}); }) == "LengthMismatch");
    CHECK(error_code([] { mape({0.0}, {1.0}); }) == "ZeroDenominator");
    // Guarded variant floors the denominator instead of failing.
    CHECK(mape_guarded({0.0, 100.0}, {0.0, 100.0}) == 0.0);
    CHECK(std::isfinite(mape_guarded({0.0}, {1.0})));
}

TEST_CASE("f1 over binary masks") {
    BinVec truth{{1, 0, 1, 1, 0}};
    BinVec pred{{1, 1, 1, 0, 0}};
    // tp=2 fp=1 fn=1: precision 2/3, recall 2/3, f1 = 2/3.
    CHECK(f1_binary(truth, pred) == doctest::Approx(2.0 / 3.0).epsilon(1e-12));
    CHECK(f1_binary(BinVec{{0, 0}}, BinVec{{0, 0}}) == 1.0);
    CHECK(f1_binary(BinVec{{1, 1}}, BinVec{{0, 0}}) == 0.0);
    CHECK(error_code([] { f1_binary(BinVec{{1}}, BinVec{{1, 0}}); }) == "LengthMismatch");
}

TEST_CASE("pair accuracy counts off-diagonal agreement") {
    Matrix t = Matrix::zeros(3, 3);
    Matrix p = Matrix::zeros(3, 3);
    t.at(0, 1) = 1;
    t.at(1, 2) = 1;
    p.at(0, 1) = 1;
    p.at(2, 0) = 1;
    // 6 ordered off-diagonal pairs; they disagree on (1,2) and (2,0).
    CHECK(pair_accuracy(t, p) == doctest::Approx(4.0 / 6.0).epsilon(1e-12));
    // Diagonal is ignored entirely.
    Matrix q = p;
    q.at(0, 0) = 1;
    CHECK(pair_accuracy(t, q) == doctest::Approx(4.0 / 6.0).epsilon(1e-12));
    CHECK(error_code([&] { pair_accuracy(t, Matrix::zeros(2, 2)); }) == "ShapeMismatch");
    Matrix bad = Matrix::zeros(3, 3);
    bad.at(0, 1) = 0.5;
    CHECK(error_code([&] { pair_accuracy(t, bad); }) == "ShapeMismatch");
    CHECK(error_code([] { pair_accuracy(Matrix::zeros(1, 1), Matrix::zeros(1, 1)); }) ==
          "ShapeMismatch");
}

TEST_CASE("task io round trips a constrained forecast task") {
    TaskInstance task;
    task.id = "predictive_demo_000";
    task.family = "predictive:max_load:with_cov";
    task.kind = TaskKind::predictive;
    task.question = "Given the data, what will it be? Ensure it does not exceed 800.1234 MW.";
    task.horizon = 4;
    task.seed = 99;
    task.binding = true;
    task.constraint = constraints::ConstraintSpec{constraints::Kind::max_load, 800.1234, 750.0};
    task.output_contract = OutputContract{Value::Kind::series, {4}};

    TimeAxis ax{1704067200, 60};
    Frame env;
    env.add_column(TimeSeries("load", ax, {700, 702.5, 705, 703.25}));
    env.add_column(TimeSeries("temperature", ax, {15, 15.5, 16, 16.5}));
    task.env["VAL"] = Value(env);
    task.env["VAL_TARGET"] = Value(env.column("load"));
    task.ground_truth = Value(TimeSeries("load", {1704067200 + 4 * 60, 60}, {704, 706, 707, 705}));

    auto dir = temp_dir("taskio");
    write_task(dir, task);
    TaskInstance back = read_task(dir);

    CHECK(back.id == task.id);
    CHECK(back.family == task.family);
    CHECK(back.kind == task.kind);
    CHECK(back.question == task.question);
    CHECK(back.horizon == task.horizon);
    CHECK(back.seed == task.seed);
    CHECK(back.binding == task.binding);
    CHECK(back.constraint == task.constraint);
    CHECK(back.output_contract == task.output_contract);
    CHECK(back.env.at("VAL") == task.env.at("VAL"));
    CHECK(back.env.at("VAL_TARGET") == task.env.at("VAL_TARGET"));
    CHECK(back.ground_truth == task.ground_truth);
    std::filesystem::remove_all(dir);
}

TEST_CASE("task io round trips diagnostic truths") {
    TaskInstance task;
    task.id = "diag_demo_000";
    task.family = "diagnostic:causal";
    task.kind = TaskKind::diagnostic_causal;
    task.question = "Which variables drive which?";
    task.output_contract = OutputContract{Value::Kind::matrix, {3, 3}};
    task.knowledge.relation_ratio = 0.25;

    Frame env;
    TimeAxis ax{0, 3600};
    env.add_column(TimeSeries("temperature", ax, {1, 2, 3}));
    env.add_column(TimeSeries("humidity", ax, {2, 3, 4}));
    env.add_column(TimeSeries("pressure", ax, {5, 6, 7}));
    task.env["VAL"] = Value(env);
    Matrix truth = Matrix::zeros(3, 3);
    truth.at(0, 0) = truth.at(1, 1) = truth.at(2, 2) = 1;
    truth.at(0, 2) = 1;
    task.ground_truth = Value(truth);

    auto dir = temp_dir("taskio_diag");
    write_task(dir, task);
    TaskInstance back = read_task(dir);
    CHECK(back.kind == TaskKind::diagnostic_causal);
    CHECK(back.knowledge.relation_ratio == doctest::Approx(0.25));
    CHECK(back.ground_truth == task.ground_truth);
    CHECK(!back.constraint.has_value());

    CHECK(error_code([&] { read_task(dir / "nope"); }) == "BadTaskFile");
    std::filesystem::remove_all(dir);
}
