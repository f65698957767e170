#pragma once

#include <map>
#include <optional>
#include <string>

#include "tsreason/core/metrics.hpp"
#include "tsreason/core/task.hpp"
#include "tsreason/core/value.hpp"
#include "tsreason/plan/ast.hpp"
#include "tsreason/plan/registry.hpp"

namespace tsreason::exec {

/// A step-level execution failure, structured so the decomposer can repair
/// the plan: which step, which operator, and a stable error code.
struct ExecError {
    std::size_t step_index = 0;
    std::string target;
    std::string op;
    std::string code;
    std::string message;
};

/// Result of running one plan: either the final value plus every variable
/// binding, or the first error encountered.
struct ExecOutcome {
    bool success = false;
    Value result;
    std::map<std::string, Value> bindings;
    std::optional<ExecError> error;

    static ExecOutcome ok(Value result, std::map<std::string, Value> bindings);
    static ExecOutcome failed(ExecError error);
};

/// Evaluate an argument expression against variable bindings. Lists of
/// integers become an intvec; lists of strings collapse to comma-joined text
/// (the form the retrieval operators take). Throws OpError on unbound
/// identifiers, placeholders, and mixed lists.
Value eval_expr(const plan::Expr& expr, const std::map<std::string, Value>& bindings);

/// Run the plan over the environment. Steps execute in order, each target is
/// bound once, and the result is the FINAL_RESULT/last-target variable.
/// Operator failures are captured as ExecError, never thrown.
ExecOutcome execute_plan(const plan::Plan& plan, const std::map<std::string, Value>& env,
                         plan::ExecContext& ctx);

/// Backtest quality of the model a forecast step chose, plus the label used
/// in QUALITY/BUFFER_SUMMARY feedback.
struct ForecastQuality {
    Quality quality;
    std::string model;
};

/// Quality of the plan's forecast step on a predictive task: refit the
/// step's model on history minus the final task-horizon points and report
/// guarded MAPE against that holdout. Absent for non-forecast steps,
/// non-predictive tasks, and histories too short to backtest.
std::optional<ForecastQuality> forecast_step_quality(const plan::Step& step,
                                                     const std::map<std::string, Value>& bindings,
                                                     const TaskInstance& task);

/// forecast_step_quality without the model label.
std::optional<Quality> intermediate_quality(const plan::Step& step,
                                            const std::map<std::string, Value>& bindings,
                                            const TaskInstance& task);

}  // namespace tsreason::exec
