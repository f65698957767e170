#pragma once

#include <filesystem>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "tsreason/core/task.hpp"
#include "tsreason/core/value.hpp"

namespace tsreason::eval {

/// Stage-1 failure reasons, ordered: the first failing check wins.
enum class FailReason {
    ShapeMismatch,       // wrong kind, wrong dimensions, or non-binary labels
    ConstraintViolated,  // forecast breaks the task's operating constraint
    TrivialOutput,       // constant forecast / degenerate labels
    UnreasonableMape,    // predictive error of 100% or more
    ExecutionFailed,     // the agent produced no answer at all
};
const char* to_string(FailReason reason);

struct EvalResult {
    std::string task_id;
    std::string family;
    bool passed = false;
    std::optional<FailReason> reason;  // set iff failed
    std::optional<Quality> quality;    // set iff passed
};

/// Solution validation. Checks, in order: output matches the task's contract
/// (kind, shape, binary labels where applicable); the constraint holds;
/// the output is not trivial (constant forecast, all-0/all-1 labels against
/// a mixed truth) unless the constraint itself forces constancy; predictive
/// error is below 100%. Returns the first failing reason, or nullopt.
std::optional<FailReason> validate_solution(const Value& output, const TaskInstance& task);

/// Quality assessment; callers run it only after validation passed.
/// Predictive tasks score MAPE against the true future, anomaly tasks binary
/// F1, causal tasks pairwise accuracy over the off-diagonal cells.
Quality score_solution(const Value& output, const TaskInstance& task);

/// Both stages; a null output means the agent failed to produce an answer.
EvalResult evaluate(const Value* output, const TaskInstance& task);

struct FamilyReport {
    std::string family;
    std::size_t total = 0;
    std::size_t passed = 0;
    double success_rate = 0.0;
    std::string metric;  // empty when nothing passed
    double mean = 0.0;   // over passes only
    double stdev = 0.0;  // sample stdev; 0 for a single pass
    std::map<std::string, std::size_t> failures;
};

struct Report {
    std::size_t total = 0;
    std::size_t passed = 0;
    double success_rate = 0.0;
    std::vector<FamilyReport> families;  // sorted by family name
    std::map<std::string, std::size_t> failures;
};

/// Grouped success rates and metric moments; metric means are taken over
/// succeeded tasks only. Raises EmptyResults on an empty list.
Report aggregate(const std::vector<EvalResult>& results);

/// Deterministic JSON rendering ({"schema": 1, ...}, sorted keys).
std::string report_json(const Report& report);

/// Fixed-width text table: one row per family with success rate and
/// mean (std) of the family metric, failure counts appended.
std::string report_table(const Report& report);

/// Answers live next to the run output: series answers as `answer.csv`,
/// label masks and matrices as `answer.json`.
void write_answer(const std::filesystem::path& dir, const Value& answer);

/// nullopt when no answer file exists; OpError("BadAnswerFile") when one
/// exists but cannot be decoded to the task's contract kind.
std::optional<Value> read_answer(const std::filesystem::path& dir, const TaskInstance& task);

}  // namespace tsreason::eval
