#include "tsreason/exec/executor.hpp"

#include <cmath>

#include "tsreason/core/error.hpp"
#include "tsreason/models/forecast.hpp"

namespace tsreason::exec {

ExecOutcome ExecOutcome::ok(Value result, std::map<std::string, Value> bindings) {
    ExecOutcome o;
    o.success = true;
    o.result = std::move(result);
    o.bindings = std::move(bindings);
    return o;
}

ExecOutcome ExecOutcome::failed(ExecError error) {
    ExecOutcome o;
    o.success = false;
    o.error = std::move(error);
    return o;
}

Value eval_expr(const plan::Expr& expr, const std::map<std::string, Value>& bindings) {
    using Kind = plan::Expr::Kind;
    switch (expr.kind) {
        case Kind::number:
            return Value(expr.number);
        case Kind::string:
            return Value(Text{expr.text});
        case Kind::placeholder:
            fail("TypeMismatch",
                 "placeholder {" + expr.text + "} was not replaced with a concrete value");
        case Kind::identifier: {
            const auto it = bindings.find(expr.text);
            if (it == bindings.end())
                fail("UnboundVariable", "variable '" + expr.text + "' is not defined");
            return it->second;
        }
        case Kind::list: {
            bool all_int = true;
            bool all_str = true;
            for (const auto& item : expr.items) {
                if (item.kind != Kind::number || item.number != std::floor(item.number))
                    all_int = false;
                if (item.kind != Kind::string) all_str = false;
            }
            if (expr.items.empty() || all_int) {
                IntVec v;
                v.values.reserve(expr.items.size());
                for (const auto& item : expr.items)
                    v.values.push_back(static_cast<std::int64_t>(item.number));
                return Value(std::move(v));
            }
            if (all_str) {
                std::string joined;
                for (const auto& item : expr.items) {
                    if (!joined.empty()) joined.push_back(',');
                    joined += item.text;
                }
                return Value(Text{std::move(joined)});
            }
            fail("TypeMismatch", "list literals must be all integers or all strings");
        }
    }
    fail("TypeMismatch", "unrecognized expression");
}

ExecOutcome execute_plan(const plan::Plan& plan, const std::map<std::string, Value>& env,
                         plan::ExecContext& ctx) {
    if (plan.empty())
        return ExecOutcome::failed({0, "", "", "NoResult", "the plan has no steps"});

    const auto& registry = plan::Registry::instance();
    std::map<std::string, Value> bindings = env;

    for (std::size_t i = 0; i < plan.steps.size(); ++i) {
        const plan::Step& step = plan.steps[i];
        const auto describe = [&](const std::string& code, const std::string& message) {
            return ExecError{i, step.target, step.op, code,
                             "step '" + step.target + "' (" + step.op + "): " + message};
        };

        const plan::OperatorSpec* op = registry.find(step.op);
        if (op == nullptr)
            return ExecOutcome::failed(describe("UnknownOp", "no operator with this name"));
        if (!op->implemented)
            return ExecOutcome::failed(
                describe("UnimplementedOp", "operator is declared but not implemented"));

        try {
            std::map<std::string, Value> args;
            for (const auto& [name, expr] : step.args) {
                if (op->find_param(name) == nullptr)
                    fail("ArityMismatch",
                         "operator '" + step.op + "' has no parameter named '" + name + "'");
                args.emplace(name, eval_expr(expr, bindings));
            }
            for (const auto& p : op->params)
                if (p.required && !args.count(p.name))
                    fail("ArityMismatch",
                         "operator '" + step.op + "' requires argument '" + p.name + "'");
            Value result = op->fn(plan::CallArgs(std::move(args)), ctx);
            bindings.insert_or_assign(step.target, std::move(result));
        } catch (const OpError& e) {
            return ExecOutcome::failed(describe(e.code(), e.what()));
        } catch (const std::exception& e) {
            return ExecOutcome::failed(describe("InternalError", e.what()));
        }
    }

    // Copy out the result before the map is moved; argument evaluation order
    // would otherwise be free to empty `bindings` first.
    Value result = bindings.at(plan.result_name());
    return ExecOutcome::ok(std::move(result), std::move(bindings));
}

namespace {

// Resolve the canonical operator name for a step (empty when unknown).
std::string canonical_op(const std::string& name) {
    const auto* spec = plan::Registry::instance().find(name);
    return spec ? spec->name : "";
}

}  // namespace

std::optional<ForecastQuality> forecast_step_quality(const plan::Step& step,
                                                     const std::map<std::string, Value>& bindings,
                                                     const TaskInstance& task) {
    if (task.kind != TaskKind::predictive || task.horizon == 0) return std::nullopt;
    const std::string op = canonical_op(step.op);
    if (op != "forecast_uni" && op != "forecast_multi") return std::nullopt;

    try {
        models::ModelSpec spec;
        std::string label;
        if (const auto it = step.args.find("model"); it != step.args.end()) {
            const Value model = eval_expr(it->second, bindings);
            if (model.is(Value::Kind::model_handle)) {
                const ModelHandle& handle = model.model_handle();
                spec.name = "ar_ls";
                spec.ar_order = static_cast<int>(handle.coeffs.size());
                label = handle.id;
            } else {
                spec.name = model.text().value;
                label = spec.name;
            }
        } else {
            spec.name = op == "forecast_uni" ? "holt_winters" : "lagged_regression";
            label = spec.name;
        }
        if (const auto it = step.args.find("period"); it != step.args.end())
            spec.period = static_cast<int>(eval_expr(it->second, bindings).scalar());
        if (const auto it = step.args.find("ar_order"); it != step.args.end())
            spec.ar_order = static_cast<int>(eval_expr(it->second, bindings).scalar());

        const Value data = eval_expr(step.args.at("data"), bindings);
        Quality q{"mape", 0.0};
        if (op == "forecast_multi") {
            const Frame& frame = data.frame();
            std::string target = frame.column(std::size_t{0}).name();
            if (const auto it = step.args.find("target"); it != step.args.end())
                target = eval_expr(it->second, bindings).text().value;
            Frame covariates;
            for (const auto& col : frame.columns())
                if (col.name() != target) covariates.add_column(col);
            q = models::backtest(frame.column(target), &covariates, task.horizon, spec);
        } else {
            q = models::backtest(data.series(), nullptr, task.horizon, spec);
        }
        return ForecastQuality{q, label};
    } catch (const OpError&) {
        return std::nullopt;  // not backtestable; treat as quality-free
    }
}

std::optional<Quality> intermediate_quality(const plan::Step& step,
                                            const std::map<std::string, Value>& bindings,
                                            const TaskInstance& task) {
    const auto fq = forecast_step_quality(step, bindings, task);
    if (!fq) return std::nullopt;
    return fq->quality;
}

}  // namespace tsreason::exec
