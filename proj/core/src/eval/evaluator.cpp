#include "tsreason/eval/evaluator.hpp"

#include <nlohmann/json.hpp>

#include <algorithm>
#include <cmath>
#include <cstdio>

#include "tsreason/constraints/constraint.hpp"
#include "tsreason/core/csv.hpp"
#include "tsreason/core/error.hpp"
#include "tsreason/core/metrics.hpp"
#include "tsreason/core/num_text.hpp"
#include "tsreason/util/fs.hpp"

namespace tsreason::eval {
namespace {

using nlohmann::json;

bool is_binary(double v) { return v == 0.0 || v == 1.0; }

bool shape_matches(const Value& output, const OutputContract& c) {
    if (output.kind() != c.kind) return false;
    switch (c.kind) {
        case Value::Kind::series:
            return c.shape.size() == 1 && output.series().size() == c.shape[0];
        case Value::Kind::bin_vec: {
            const auto& bits = output.bin_vec().bits;
            if (c.shape.size() != 1 || bits.size() != c.shape[0]) return false;
            return std::all_of(bits.begin(), bits.end(), [](std::uint8_t b) { return b <= 1; });
        }
        case Value::Kind::matrix: {
            const Matrix& m = output.matrix();
            if (c.shape.size() != 2 || m.rows != c.shape[0] || m.cols != c.shape[1]) return false;
            return std::all_of(m.data.begin(), m.data.end(), is_binary);
        }
        default:
            return c.shape.empty();
    }
}

double sample_stdev(const std::vector<double>& v) {
    if (v.size() < 2) return 0.0;
    double m = 0.0;
    for (const double x : v) m += x;
    m /= static_cast<double>(v.size());
    double s = 0.0;
    for (const double x : v) s += (x - m) * (x - m);
    return std::sqrt(s / static_cast<double>(v.size() - 1));
}

// A variability bound of (effectively) zero leaves only constant forecasts
// feasible; flagging those as trivial would make the task unsolvable.
bool constraint_forces_constant(const TaskInstance& task) {
    return task.constraint && task.constraint->kind == constraints::Kind::variability &&
           task.constraint->value < 1e-9;
}

bool mask_mixed(const BinVec& v) {
    bool any0 = false, any1 = false;
    for (const std::uint8_t b : v.bits) (b ? any1 : any0) = true;
    return any0 && any1;
}

// Off-diagonal cells only; the diagonal carries no information.
bool offdiag_mixed(const Matrix& m) {
    bool any0 = false, any1 = false;
    for (std::size_t i = 0; i < m.rows; ++i)
        for (std::size_t j = 0; j < m.cols; ++j)
            if (i != j) (m.at(i, j) != 0.0 ? any1 : any0) = true;
    return any0 && any1;
}

bool offdiag_constant(const Matrix& m) { return !offdiag_mixed(m); }

const Value& truth_of(const TaskInstance& task) {
    if (!task.ground_truth)
        fail("MissingGroundTruth", "task " + task.id + " carries no ground truth to grade against");
    return *task.ground_truth;
}

std::string format_failures(const std::map<std::string, std::size_t>& failures) {
    std::string out;
    for (const auto& [reason, count] : failures) {
        if (!out.empty()) out += ", ";
        out += reason + "=" + std::to_string(count);
    }
    return out;
}

json family_json(const FamilyReport& f) {
    json j = {{"family", f.family},
              {"total", f.total},
              {"passed", f.passed},
              {"success_rate", f.success_rate},
              {"failures", f.failures}};
    if (!f.metric.empty()) {
        j["metric"] = f.metric;
        j["mean"] = f.mean;
        j["stdev"] = f.stdev;
    }
    return j;
}

}  // namespace

const char* to_string(FailReason reason) {
    switch (reason) {
        case FailReason::ShapeMismatch: return "ShapeMismatch";
        case FailReason::ConstraintViolated: return "ConstraintViolated";
        case FailReason::TrivialOutput: return "TrivialOutput";
        case FailReason::UnreasonableMape: return "UnreasonableMape";
        case FailReason::ExecutionFailed: return "ExecutionFailed";
    }
    return "unknown";
}

std::optional<FailReason> validate_solution(const Value& output, const TaskInstance& task) {
    if (!shape_matches(output, task.output_contract)) return FailReason::ShapeMismatch;

    if (task.kind == TaskKind::predictive) {
        const TimeSeries& forecast = output.series();
        if (task.constraint && !constraints::check(forecast, *task.constraint).empty())
            return FailReason::ConstraintViolated;
        if (sample_stdev(forecast.values()) < 1e-9 && !constraint_forces_constant(task))
            return FailReason::TrivialOutput;
        if (mape(truth_of(task).series().values(), forecast.values()) >= 1.0)
            return FailReason::UnreasonableMape;
        return std::nullopt;
    }

    if (task.kind == TaskKind::diagnostic_anomaly) {
        const BinVec& truth = truth_of(task).bin_vec();
        const std::size_t ones = output.bin_vec().count_ones();
        const bool degenerate = ones == 0 || ones == output.bin_vec().bits.size();
        if (mask_mixed(truth) && degenerate) return FailReason::TrivialOutput;
        return std::nullopt;
    }

    const Matrix& truth = truth_of(task).matrix();
    if (offdiag_mixed(truth) && offdiag_constant(output.matrix()))
        return FailReason::TrivialOutput;
    return std::nullopt;
}

Quality score_solution(const Value& output, const TaskInstance& task) {
    switch (task.kind) {
        case TaskKind::predictive:
            return Quality{"mape",
                           mape(truth_of(task).series().values(), output.series().values())};
        case TaskKind::diagnostic_anomaly:
            return Quality{"f1", f1_binary(truth_of(task).bin_vec(), output.bin_vec())};
        case TaskKind::diagnostic_causal:
            return Quality{"pair_accuracy",
                           pair_accuracy(truth_of(task).matrix(), output.matrix())};
    }
    fail("DomainError", "unknown task kind");
}

EvalResult evaluate(const Value* output, const TaskInstance& task) {
    EvalResult result;
    result.task_id = task.id;
    result.family = task.family;
    if (output == nullptr) {
        result.reason = FailReason::ExecutionFailed;
        return result;
    }
    if (const auto reason = validate_solution(*output, task)) {
        result.reason = reason;
        return result;
    }
    result.passed = true;
    result.quality = score_solution(*output, task);
    return result;
}

Report aggregate(const std::vector<EvalResult>& results) {
    if (results.empty()) fail("EmptyResults", "nothing to aggregate");

    std::map<std::string, std::vector<const EvalResult*>> by_family;
    for (const EvalResult& r : results) by_family[r.family].push_back(&r);

    Report report;
    report.total = results.size();
    for (const auto& [family, rs] : by_family) {
        FamilyReport f;
        f.family = family;
        f.total = rs.size();
        std::vector<double> values;
        for (const EvalResult* r : rs) {
            if (r->passed) {
                ++f.passed;
                f.metric = r->quality->metric;
                values.push_back(r->quality->value);
            } else {
                const std::string key = to_string(*r->reason);
                ++f.failures[key];
                ++report.failures[key];
            }
        }
        f.success_rate = static_cast<double>(f.passed) / static_cast<double>(f.total);
        if (!values.empty()) {
            double m = 0.0;
            for (const double v : values) m += v;
            f.mean = m / static_cast<double>(values.size());
            f.stdev = sample_stdev(values);
        }
        report.passed += f.passed;
        report.families.push_back(std::move(f));
    }
    report.success_rate = static_cast<double>(report.passed) / static_cast<double>(report.total);
    return report;
}

std::string report_json(const Report& report) {
    json families = json::array();
    for (const FamilyReport& f : report.families) families.push_back(family_json(f));
    const json j = {{"schema", 1},
                    {"total", report.total},
                    {"passed", report.passed},
                    {"success_rate", report.success_rate},
                    {"failures", report.failures},
                    {"families", families}};
    return j.dump(2) + "\n";
}

std::string report_table(const Report& report) {
    std::string out;
    char line[256];
    std::snprintf(line, sizeof line, "%-36s %5s %8s %-14s %-18s %s\n", "family", "n",
                  "success", "metric", "mean (std)", "failures");
    out += line;
    out += std::string(100, '-') + "\n";
    for (const FamilyReport& f : report.families) {
        std::string moments;
        if (!f.metric.empty())
            moments = format_fixed(f.mean, 4) + " (" + format_fixed(f.stdev, 4) + ")";
        std::snprintf(line, sizeof line, "%-36s %5zu %8s %-14s %-18s %s\n", f.family.c_str(),
                      f.total, format_fixed(f.success_rate, 2).c_str(), f.metric.c_str(),
                      moments.c_str(), format_failures(f.failures).c_str());
        out += line;
    }
    out += std::string(100, '-') + "\n";
    std::snprintf(line, sizeof line, "%-36s %5zu %8s %-14s %-18s %s\n", "overall", report.total,
                  format_fixed(report.success_rate, 2).c_str(), "", "",
                  format_failures(report.failures).c_str());
    out += line;
    return out;
}

void write_answer(const std::filesystem::path& dir, const Value& answer) {
    std::filesystem::create_directories(dir);
    switch (answer.kind()) {
        case Value::Kind::series:
            csv::write_series(dir / "answer.csv", answer.series());
            return;
        case Value::Kind::bin_vec: {
            json bits = json::array();
            for (const std::uint8_t b : answer.bin_vec().bits) bits.push_back(static_cast<int>(b));
            util::write_text_atomic(dir / "answer.json",
                                    json{{"kind", "bin_vec"}, {"bits", bits}}.dump(2) + "\n");
            return;
        }
        case Value::Kind::matrix: {
            const Matrix& m = answer.matrix();
            util::write_text_atomic(
                dir / "answer.json",
                json{{"kind", "matrix"}, {"rows", m.rows}, {"cols", m.cols}, {"data", m.data}}
                        .dump(2) +
                    "\n");
            return;
        }
        case Value::Kind::scalar:
            util::write_text_atomic(
                dir / "answer.json",
                json{{"kind", "scalar"}, {"value", answer.scalar()}}.dump(2) + "\n");
            return;
        case Value::Kind::int_vec:
            util::write_text_atomic(
                dir / "answer.json",
                json{{"kind", "int_vec"}, {"values", answer.int_vec().values}}.dump(2) + "\n");
            return;
        default:
            fail("UnsupportedAnswer",
                 std::string("cannot persist answer of kind ") + answer.kind_name());
    }
}

std::optional<Value> read_answer(const std::filesystem::path& dir, const TaskInstance& task) {
    if (task.output_contract.kind == Value::Kind::series) {
        const auto path = dir / "answer.csv";
        if (!std::filesystem::exists(path)) return std::nullopt;
        try {
            return Value(csv::read_series(path));
        } catch (const OpError& e) {
            fail("BadAnswerFile", path.string() + ": " + e.what());
        }
    }

    const auto path = dir / "answer.json";
    if (!std::filesystem::exists(path)) return std::nullopt;
    json j = json::parse(util::read_text_file(path), nullptr, false);
    if (j.is_discarded() || !j.is_object())
        fail("BadAnswerFile", "not a JSON answer: " + path.string());
    try {
        const auto kind = j.at("kind").get<std::string>();
        if (kind == "bin_vec") {
            BinVec v;
            for (const auto& b : j.at("bits")) {
                const auto x = b.get<int>();
                if (x != 0 && x != 1) fail("BadAnswerFile", "mask bit outside {0,1}");
                v.bits.push_back(static_cast<std::uint8_t>(x));
            }
            return Value(std::move(v));
        }
        if (kind == "matrix") {
            Matrix m;
            m.rows = j.at("rows").get<std::size_t>();
            m.cols = j.at("cols").get<std::size_t>();
            m.data = j.at("data").get<std::vector<double>>();
            if (m.data.size() != m.rows * m.cols)
                fail("BadAnswerFile", "matrix data length does not match rows*cols");
            return Value(std::move(m));
        }
        if (kind == "scalar") return Value(j.at("value").get<double>());
        if (kind == "int_vec") {
            IntVec v;
            v.values = j.at("values").get<std::vector<std::int64_t>>();
            return Value(std::move(v));
        }
        fail("BadAnswerFile", "unsupported answer kind '" + kind + "' in " + path.string());
    } catch (const json::exception& e) {
        fail("BadAnswerFile", path.string() + ": " + e.what());
    }
}

}  // namespace tsreason::eval
