#pragma once

#include <optional>
#include <string>
#include <vector>

#include "tsreason/core/time_series.hpp"

namespace tsreason::constraints {

enum class Kind { max_load, min_load, ramp_rate, variability };

const char* to_string(Kind kind);
std::optional<Kind> kind_from_string(const std::string& name);

/// One operating constraint over a forecast horizon, in engineering units.
/// `anchor` is the last observed level before the horizon; ramp_rate needs it
/// to bound the very first step.
struct ConstraintSpec {
    Kind kind = Kind::max_load;
    double value = 0.0;
    std::optional<double> anchor;

    bool operator==(const ConstraintSpec&) const = default;
};

struct Violation {
    Kind kind;
    std::vector<std::size_t> indices;  // offending positions, never empty
    double magnitude = 0.0;            // worst excess beyond the bound
};

/// Scan a task question for one of the known constraint clauses
/// ("...does not exceed X MW", "...maintained above a minimum of X MW", ...).
/// Returns nullopt when no clause is present; throws
/// OpError("AmbiguousConstraint") when more than one matches. The anchor is
/// never part of the text; callers fill it from the data.
std::optional<ConstraintSpec> parse_constraint(const std::string& question);

/// All violations of `spec` in `forecast`. Boundary values are feasible
/// (only strict excess violates).
std::vector<Violation> check(const TimeSeries& forecast, const ConstraintSpec& spec);

/// Minimal repair of `forecast` so that check(result, spec) is empty:
/// clipping for level bounds, forward clamping from the anchor for ramp_rate,
/// a mean-preserving shrink toward the mean for variability. Feasible inputs
/// pass through unchanged.
TimeSeries project(const TimeSeries& forecast, const ConstraintSpec& spec);

/// Round-robin projection over several constraints (at most 10 passes);
/// throws OpError("InfeasibleConstraint") if they cannot be satisfied jointly.
TimeSeries project_all(TimeSeries forecast, const std::vector<ConstraintSpec>& specs);

}  // namespace tsreason::constraints
