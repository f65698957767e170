#pragma once

#include <string>

#include "tsreason/plan/ast.hpp"

namespace tsreason::plan {

/// Canonical text form: one statement per line, keyword arguments in sorted
/// order, numbers rendered shortest-round-trip, no trailing newline.
/// parse_plan(serialize_plan(p)) is structurally equal to p, and
/// serialization is the identity on which buffer-memory dedup compares plans.
std::string serialize_plan(const Plan& plan);

std::string serialize_step(const Step& step);
std::string serialize_expr(const Expr& expr);

}  // namespace tsreason::plan
