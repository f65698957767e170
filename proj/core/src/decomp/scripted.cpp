#include "tsreason/decomp/scripted.hpp"

#include <algorithm>
#include <cmath>
#include <regex>

#include "tsreason/constraints/constraint.hpp"
#include "tsreason/core/error.hpp"
#include "tsreason/core/num_text.hpp"
#include "tsreason/plan/ast.hpp"
#include "tsreason/plan/serialize.hpp"
#include "tsreason/stats/ops.hpp"

namespace tsreason::decomp {

namespace {

using plan::Expr;
using plan::Step;

bool starts_with(const std::string& s, std::string_view prefix) {
    return s.size() >= prefix.size() && s.compare(0, prefix.size(), prefix) == 0;
}

/// Implemented stand-ins for the declared-but-unimplemented operators, used
/// when feedback reports UnimplementedOp. Every pairing is argument
/// compatible (both sides take a single series).
const std::vector<std::pair<std::string, std::string>>& substitutions() {
    static const std::vector<std::pair<std::string, std::string>> table = {
        {"getChptOP", "detectSpikesOP"},
        {"getCyclePatternOP", "getPeriodOP"},
        {"detectFlippedOP", "detectSpikesOP"},
        {"detectSpeedUpDownOP", "detectSpikesOP"},
        {"detectCutoffOP", "detectSpikesOP"},
    };
    return table;
}

std::string substitute_unimplemented(std::string text) {
    for (const auto& [from, to] : substitutions()) {
        std::size_t pos = 0;
        while ((pos = text.find(from, pos)) != std::string::npos) {
            text.replace(pos, from.size(), to);
            pos += to.size();
        }
    }
    return text;
}

/// Environment variable holding the series the forecast backends consume.
/// Tasks with covariates keep the full frame in VAL and the target series
/// alone in VAL_TARGET.
std::string series_var(const TaskInstance& task) {
    return task.env.count("VAL_TARGET") ? "VAL_TARGET" : "VAL";
}

bool has_covariates(const TaskInstance& task) {
    const auto it = task.env.find("VAL");
    return it != task.env.end() && it->second.is(Value::Kind::frame) &&
           task.env.count("VAL_TARGET");
}

const TimeSeries& history_series(const TaskInstance& task) {
    const auto it = task.env.find(series_var(task));
    if (it == task.env.end() || !it->second.is(Value::Kind::series))
        fail("UnknownTaskKind", "task '" + task.id + "' has no history series to forecast");
    return it->second.series();
}

long long estimate_period(const TimeSeries& hist) {
    const Value v = stats::feature(hist, stats::Feature::period);
    return std::llround(v.scalar());
}

std::vector<std::string> rotation_for(const TaskInstance& task) {
    if (has_covariates(task))
        return {"lagged_regression", "holt_winters", "ar_ls", "seasonal_naive"};
    return {"holt_winters", "ar_ls", "seasonal_naive"};
}

plan::Plan predictive_plan(const TaskInstance& task, const std::string& model) {
    const std::string data = series_var(task);
    const TimeSeries& hist = history_series(task);
    const long long n = static_cast<long long>(hist.size());
    const long long period = estimate_period(hist);
    const auto horizon = static_cast<double>(task.horizon);

    const auto constraint = constraints::parse_constraint(task.question);
    const std::string forecast_target = constraint ? "FC" : "FINAL_RESULT";

    plan::Plan p;
    const long long max_backtest_order = (n - static_cast<long long>(task.horizon) - 5) / 3;
    if (model == "lagged_regression") {
        Step s;
        s.target = forecast_target;
        s.op = "MultiPreOP";
        s.args = {{"data", Expr::ident("VAL")},
                  {"future_length", Expr::num(horizon)},
                  {"model", Expr::str("lagged_regression")},
                  {"ar_order", Expr::num(8)},
                  {"target", Expr::str(hist.name())}};
        p.steps.push_back(std::move(s));
    } else if (model == "ar_ls" && n >= 200 && max_backtest_order >= 1) {
        // Long history: fit the AR model once and forecast through the handle,
        // keeping the order small enough that a history-minus-horizon backtest
        // can refit it.
        const long long order = std::clamp(period, 1LL, max_backtest_order);
        Step fit;
        fit.target = "MODEL";
        fit.op = "trainForecastOP";
        fit.args = {{"data", Expr::ident(data)}, {"ar_order", Expr::num(double(order))}};
        p.steps.push_back(std::move(fit));
        Step fc;
        fc.target = forecast_target;
        fc.op = "UniPreOP";
        fc.args = {{"data", Expr::ident(data)},
                   {"future_length", Expr::num(horizon)},
                   {"model", Expr::ident("MODEL")}};
        p.steps.push_back(std::move(fc));
    } else {
        Step s;
        s.target = forecast_target;
        s.op = "UniPreOP";
        s.args = {{"data", Expr::ident(data)},
                  {"future_length", Expr::num(horizon)},
                  {"model", Expr::str(model)},
                  {"period", Expr::num(double(period))}};
        p.steps.push_back(std::move(s));
    }

    if (constraint) {
        Step s;
        s.target = "FINAL_RESULT";
        s.op = "projectConstraintOP";
        s.args = {{"data", Expr::ident("FC")},
                  {"kind", Expr::str(constraints::to_string(constraint->kind))},
                  {"value", Expr::num(constraint->value)}};
        if (constraint->kind == constraints::Kind::ramp_rate)
            s.args.emplace("anchor", Expr::ident(data));
        p.steps.push_back(std::move(s));
    }
    return p;
}

plan::Plan anomaly_plan(const TaskInstance& task) {
    plan::Plan p;
    if (task.env.count("NORM_VAL")) {
        Step a;
        a.target = "NORM_SCORE";
        a.op = "AnomalDetOP";
        a.args = {{"data", Expr::ident("NORM_VAL")}};
        Step b;
        b.target = "THRES";
        b.op = "calibrateThreshOP";
        b.args = {{"data", Expr::ident("NORM_SCORE")}};
        Step c;
        c.target = "TEST_SCORE";
        c.op = "AnomalDetOP";
        c.args = {{"data", Expr::ident("VAL")}};
        Step d;
        d.target = "FINAL_RESULT";
        d.op = "convertBinaryOP";
        d.args = {{"data", Expr::ident("TEST_SCORE")}, {"threshold", Expr::ident("THRES")}};
        p.steps = {std::move(a), std::move(b), std::move(c), std::move(d)};
        return p;
    }
    Step a;
    a.target = "SCORE";
    a.op = "AnomalDetOP";
    a.args = {{"data", Expr::ident("VAL")}};
    Step b;
    b.target = "FINAL_RESULT";
    b.op = "thToBinaryOP";
    b.args = {{"data", Expr::ident("SCORE")}, {"percentile", Expr::ident("ANOMALY_RATE")}};
    p.steps = {std::move(a), std::move(b)};
    return p;
}

plan::Plan causal_plan(const TaskInstance& task) {
    double ratio = 0.0;
    static const std::regex ratio_re(R"(([0-9]+(?:\.[0-9]+)?)\s*% of the variable pairs)");
    std::smatch m;
    if (std::regex_search(task.question, m, ratio_re)) {
        ratio = parse_double(m[1].str()) / 100.0;
    } else if (task.knowledge.relation_ratio) {
        ratio = *task.knowledge.relation_ratio;
    } else {
        fail("UnknownTaskKind",
             "causal task '" + task.id + "' states no relation ratio to select by");
    }
    plan::Plan p;
    Step a;
    a.target = "PVALS";
    a.op = "CausalMatrixOP";
    a.args = {{"data", Expr::ident("VAL")}, {"max_lag", Expr::num(5)}};
    Step b;
    b.target = "FINAL_RESULT";
    b.op = "selectTopRatioOP";
    b.args = {{"pvals", Expr::ident("PVALS")}, {"ratio", Expr::num(ratio)}};
    p.steps = {std::move(a), std::move(b)};
    return p;
}

/// Pick the model with the lowest reported MAPE out of
/// "BUFFER_SUMMARY(holt_winters=0.31, ar12=0.24, ...)". Handle labels like
/// "ar12" map back to the ar_ls backend.
std::string min_mape_model(const std::string& summary, const std::string& fallback) {
    const auto open = summary.find('(');
    const auto close = summary.rfind(')');
    if (open == std::string::npos || close == std::string::npos || close <= open)
        return fallback;
    std::string best = fallback;
    double best_mape = std::numeric_limits<double>::infinity();
    std::string body = summary.substr(open + 1, close - open - 1);
    std::size_t pos = 0;
    while (pos < body.size()) {
        std::size_t end = body.find(", ", pos);
        if (end == std::string::npos) end = body.size();
        const std::string item = body.substr(pos, end - pos);
        pos = end + 2;
        const auto eq = item.find('=');
        if (eq == std::string::npos) continue;
        const std::string label = item.substr(0, eq);
        double mape = 0.0;
        try {
            mape = parse_double(item.substr(eq + 1));
        } catch (const OpError&) {
            continue;
        }
        if (mape < best_mape) {
            best_mape = mape;
            best = label;
        }
    }
    if (starts_with(best, "ar") &&
        std::all_of(best.begin() + 2, best.end(), [](char c) { return std::isdigit(c) != 0; }) &&
        best.size() > 2)
        return "ar_ls";
    return best;
}

}  // namespace

std::string ScriptedDecomposer::propose(const TaskInstance& task,
                                        const std::vector<FeedbackTurn>& history) {
    if (!history.empty()) {
        const FeedbackTurn& last = history.back();
        if (last.feedback.find("code=UnimplementedOp") != std::string::npos)
            return substitute_unimplemented(last.proposal);
        if (starts_with(last.feedback, "BUFFER_SUMMARY(") && task.kind == TaskKind::predictive) {
            const std::string model =
                min_mape_model(last.feedback, rotation_for(task).front());
            return plan::serialize_plan(predictive_plan(task, model));
        }
    }

    switch (task.kind) {
        case TaskKind::predictive: {
            const auto rotation = rotation_for(task);
            std::size_t quality_turns = 0;
            for (const auto& t : history)
                if (starts_with(t.feedback, "QUALITY(")) ++quality_turns;
            plan::Plan p = predictive_plan(task, rotation[quality_turns % rotation.size()]);
            if (options_.use_unimplemented_first && history.empty()) {
                Step extra;
                extra.target = "EXTRA";
                extra.op = "getChptOP";
                extra.args = {{"data", Expr::ident(series_var(task))}};
                p.steps.insert(p.steps.begin(), std::move(extra));
            }
            return plan::serialize_plan(p);
        }
        case TaskKind::diagnostic_anomaly: {
            plan::Plan p = anomaly_plan(task);
            if (options_.use_unimplemented_first && history.empty()) {
                Step extra;
                extra.target = "EXTRA";
                extra.op = "getChptOP";
                extra.args = {{"data", Expr::ident("VAL")}};
                p.steps.insert(p.steps.begin(), std::move(extra));
            }
            return plan::serialize_plan(p);
        }
        case TaskKind::diagnostic_causal:
            return plan::serialize_plan(causal_plan(task));
    }
    fail("UnknownTaskKind", "task '" + task.id + "' has an unrecognized kind");
}

}  // namespace tsreason::decomp
