#pragma once

#include <map>
#include <string>
#include <vector>

#include "tsreason/core/task.hpp"
#include "tsreason/plan/ast.hpp"
#include "tsreason/plan/registry.hpp"

namespace tsreason::plan {

enum class Severity { error, warning };

enum class DiagCode {
    UnknownOp,
    UnboundVariable,
    ArityMismatch,
    TypeMismatch,
    UnimplementedOp,
    DuplicateTarget,
};

const char* to_string(Severity s);
const char* to_string(DiagCode c);

struct Diagnostic {
    Severity severity = Severity::error;
    std::size_t step_index = 0;
    DiagCode code = DiagCode::UnknownOp;
    std::string message;
};

/// Static checks before execution: operator known and implemented, every
/// identifier bound (environment variable or earlier target), keyword arity,
/// argument kinds, unique targets, no unreplaced {PLACEHOLDER}s. When
/// `contract` is given and the final result's inferred kind cannot satisfy
/// it, a warning is appended. An empty result means the plan is safe to run.
std::vector<Diagnostic> validate_plan(const Plan& plan,
                                      const std::map<std::string, Value::Kind>& env,
                                      const Registry& registry = Registry::instance(),
                                      const OutputContract* contract = nullptr);

/// True when no error-severity diagnostic is present.
bool diagnostics_clean(const std::vector<Diagnostic>& diags);

/// Render diagnostics one per line, e.g.
/// "error step 2 [UnknownOp]: no operator named 'trainADOP'".
std::string render_diagnostics(const std::vector<Diagnostic>& diags);

}  // namespace tsreason::plan
