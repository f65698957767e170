#pragma once

#include <map>
#include <string>
#include <vector>

namespace tsreason::plan {

/// Argument expression. The grammar has no nesting beyond one list level and
/// no arithmetic, so a flat tagged struct beats a recursive variant here.
/// placeholder covers `{NAME}` tokens that prompts use for to-be-filled
/// arguments; the parser accepts them so the validator can reject them with a
/// targeted message instead of a syntax error.
struct Expr {
    enum class Kind { identifier, number, string, list, placeholder };

    Kind kind = Kind::number;
    std::string text;         // identifier / string body / placeholder name
    double number = 0.0;
    std::vector<Expr> items;  // list elements

    static Expr ident(std::string name);
    static Expr num(double v);
    static Expr str(std::string s);
    static Expr list(std::vector<Expr> items);

    bool operator==(const Expr&) const = default;
};

/// One assignment statement: `target = op(name=expr, ...)`.
/// Keyword arguments only; the map keeps them sorted, which is also the
/// canonical serialization order.
struct Step {
    std::string target;
    std::string op;
    std::map<std::string, Expr> args;

    bool operator==(const Step&) const = default;
};

/// Straight-line operator program. The result variable is the last step's
/// target, except that a step named FINAL_RESULT wins when present.
struct Plan {
    std::vector<Step> steps;

    bool operator==(const Plan&) const = default;
    bool empty() const { return steps.empty(); }
    /// Name of the variable holding the plan's result ("" for empty plans).
    std::string result_name() const;
};

}  // namespace tsreason::plan
