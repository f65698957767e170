#include "tsreason/plan/validate.hpp"

#include <cmath>
#include <optional>
#include <set>

namespace tsreason::plan {

const char* to_string(Severity s) { return s == Severity::error ? "error" : "warning"; }

const char* to_string(DiagCode c) {
    switch (c) {
        case DiagCode::UnknownOp: return "UnknownOp";
        case DiagCode::UnboundVariable: return "UnboundVariable";
        case DiagCode::ArityMismatch: return "ArityMismatch";
        case DiagCode::TypeMismatch: return "TypeMismatch";
        case DiagCode::UnimplementedOp: return "UnimplementedOp";
        case DiagCode::DuplicateTarget: return "DuplicateTarget";
    }
    return "?";
}

namespace {

// Static kind of an argument expression; nullopt when it cannot be known
// (identifier bound by a step whose operator was itself invalid).
struct StaticKind {
    std::optional<Value::Kind> kind;
    bool valid = true;  // false once a diagnostic was already emitted for it
};

class Checker {
public:
    Checker(const Plan& plan, const std::map<std::string, Value::Kind>& env,
            const Registry& registry, const OutputContract* contract)
        : plan_(plan), registry_(registry), contract_(contract) {
        for (const auto& [name, kind] : env) bound_[name] = kind;
    }

    std::vector<Diagnostic> run() {
        for (std::size_t i = 0; i < plan_.steps.size(); ++i) check_step(i);
        check_contract();
        return std::move(diags_);
    }

private:
    void emit(Severity sev, std::size_t step, DiagCode code, std::string message) {
        diags_.push_back({sev, step, code, std::move(message)});
    }

    void check_step(std::size_t i) {
        const Step& step = plan_.steps[i];

        if (targets_.count(step.target))
            emit(Severity::error, i, DiagCode::DuplicateTarget,
                 "target '" + step.target + "' is assigned more than once");

        const OperatorSpec* op = registry_.find(step.op);
        if (op == nullptr) {
            emit(Severity::error, i, DiagCode::UnknownOp,
                 "no operator named '" + step.op + "'");
        } else if (!op->implemented) {
            emit(Severity::error, i, DiagCode::UnimplementedOp,
                 "operator '" + step.op + "' is declared but not implemented");
        }

        if (op != nullptr) {
            for (const auto& p : op->params) {
                if (p.required && !step.args.count(p.name))
                    emit(Severity::error, i, DiagCode::ArityMismatch,
                         "operator '" + step.op + "' requires argument '" + p.name + "'");
            }
        }

        for (const auto& [name, expr] : step.args) {
            const ParamSpec* param = op ? op->find_param(name) : nullptr;
            if (op != nullptr && param == nullptr) {
                emit(Severity::error, i, DiagCode::ArityMismatch,
                     "operator '" + step.op + "' has no parameter named '" + name + "'");
                continue;
            }
            const StaticKind sk = kind_of(expr, i, name);
            if (!sk.valid || !sk.kind || param == nullptr) continue;
            if (!arg_type_admits(param->type, *sk.kind))
                emit(Severity::error, i, DiagCode::TypeMismatch,
                     "argument '" + name + "' of '" + step.op + "' expects " +
                         to_string(param->type) + ", got " + Value::kind_name(*sk.kind));
        }

        targets_.insert(step.target);
        if (op != nullptr && op->implemented)
            bound_[step.target] = op->result;
        else
            bound_[step.target] = std::nullopt;  // bound, kind unknown
    }

    StaticKind kind_of(const Expr& expr, std::size_t step, const std::string& arg) {
        switch (expr.kind) {
            case Expr::Kind::number:
                return {Value::Kind::scalar, true};
            case Expr::Kind::string:
                return {Value::Kind::text, true};
            case Expr::Kind::placeholder:
                emit(Severity::error, step, DiagCode::TypeMismatch,
                     "argument '" + arg + "' is the placeholder {" + expr.text +
                         "}; replace it with a concrete value");
                return {std::nullopt, false};
            case Expr::Kind::identifier: {
                const auto it = bound_.find(expr.text);
                if (it == bound_.end()) {
                    emit(Severity::error, step, DiagCode::UnboundVariable,
                         "variable '" + expr.text + "' is not defined at this point");
                    return {std::nullopt, false};
                }
                return {it->second, true};
            }
            case Expr::Kind::list: {
                bool all_int = !expr.items.empty();
                bool all_str = !expr.items.empty();
                for (const auto& item : expr.items) {
                    if (item.kind != Expr::Kind::number || item.number != std::floor(item.number))
                        all_int = false;
                    if (item.kind != Expr::Kind::string) all_str = false;
                }
                if (expr.items.empty() || all_int) return {Value::Kind::int_vec, true};
                if (all_str) return {Value::Kind::text, true};
                emit(Severity::error, step, DiagCode::TypeMismatch,
                     "argument '" + arg +
                         "': list literals must be all integers or all strings");
                return {std::nullopt, false};
            }
        }
        return {std::nullopt, true};
    }

    void check_contract() {
        if (contract_ == nullptr || plan_.steps.empty()) return;
        const std::string result = plan_.result_name();
        std::size_t idx = plan_.steps.size() - 1;
        for (std::size_t i = 0; i < plan_.steps.size(); ++i)
            if (plan_.steps[i].target == result) idx = i;
        const auto it = bound_.find(result);
        if (it == bound_.end() || !it->second) return;
        const Value::Kind got = *it->second;
        const Value::Kind want = contract_->kind;
        // A series answer satisfies a series contract and vice versa; the only
        // static information is the kind.
        if (got != want)
            emit(Severity::warning, idx, DiagCode::TypeMismatch,
                 std::string("final result '") + result + "' has kind " +
                     Value::kind_name(got) + " but the task expects " + Value::kind_name(want));
    }

    const Plan& plan_;
    const Registry& registry_;
    const OutputContract* contract_;
    std::map<std::string, std::optional<Value::Kind>> bound_;
    std::set<std::string> targets_;
    std::vector<Diagnostic> diags_;
};

}  // namespace

std::vector<Diagnostic> validate_plan(const Plan& plan,
                                      const std::map<std::string, Value::Kind>& env,
                                      const Registry& registry, const OutputContract* contract) {
    return Checker(plan, env, registry, contract).run();
}

bool diagnostics_clean(const std::vector<Diagnostic>& diags) {
    for (const auto& d : diags)
        if (d.severity == Severity::error) return false;
    return true;
}

std::string render_diagnostics(const std::vector<Diagnostic>& diags) {
    std::string out;
    for (const auto& d : diags) {
        if (!out.empty()) out.push_back('\n');
        out += std::string(to_string(d.severity)) + " step " + std::to_string(d.step_index) +
               " [" + to_string(d.code) + "]: " + d.message;
    }
    return out;
}

}  // namespace tsreason::plan
