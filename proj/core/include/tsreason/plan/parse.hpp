#pragma once

#include <string>

#include "tsreason/plan/ast.hpp"

namespace tsreason::plan {

/// Parse plan text: one `TARGET = Op(kw=expr, ...)` statement per line, blank
/// lines and `#` comments ignored, an optional surrounding ``` fence stripped.
/// Throws OpError("SyntaxError") with line and column on malformed input.
Plan parse_plan(const std::string& text);

}  // namespace tsreason::plan
