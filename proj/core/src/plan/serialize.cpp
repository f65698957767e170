#include "tsreason/plan/serialize.hpp"

#include "tsreason/core/num_text.hpp"

namespace tsreason::plan {

std::string serialize_expr(const Expr& expr) {
    switch (expr.kind) {
        case Expr::Kind::identifier:
            return expr.text;
        case Expr::Kind::number:
            return format_double(expr.number);
        case Expr::Kind::string: {
            std::string out = "\"";
            for (const char c : expr.text) {
                switch (c) {
                    case '"': out += "\\\""; break;
                    case '\\': out += "\\\\"; break;
                    case '\n': out += "\\n"; break;
                    case '\t': out += "\\t"; break;
                    default: out.push_back(c);
                }
            }
            out.push_back('"');
            return out;
        }
        case Expr::Kind::list: {
            std::string out = "[";
            for (std::size_t i = 0; i < expr.items.size(); ++i) {
                if (i) out += ", ";
                out += serialize_expr(expr.items[i]);
            }
            out.push_back(']');
            return out;
        }
        case Expr::Kind::placeholder:
            return "{" + expr.text + "}";
    }
    return "";
}

std::string serialize_step(const Step& step) {
    std::string out = step.target + " = " + step.op + "(";
    bool first = true;
    for (const auto& [name, expr] : step.args) {
        if (!first) out += ", ";
        first = false;
        out += name + "=" + serialize_expr(expr);
    }
    out.push_back(')');
    return out;
}

std::string serialize_plan(const Plan& plan) {
    std::string out;
    for (std::size_t i = 0; i < plan.steps.size(); ++i) {
        if (i) out.push_back('\n');
        out += serialize_step(plan.steps[i]);
    }
    return out;
}

}  // namespace tsreason::plan
