#pragma once

#include <optional>
#include <string>
#include <vector>

#include "tsreason/core/task.hpp"
#include "tsreason/decomp/decomposer.hpp"
#include "tsreason/exec/executor.hpp"

namespace tsreason::retrieval {
class Client;
}

namespace tsreason::exec {

struct EpisodeOptions {
    int budget = 6;                     // max decomposer proposals per task
    double tau = 0.1;                   // accept a forecast once its MAPE is at or below this
    bool strip_project = false;         // ablation: drop constraint-projection steps after parsing
    retrieval::Client* retrieval = nullptr;  // required only for plans that fetch external data
};

/// One proposal/evaluate/feedback round, as recorded in the trace.
struct IterationRecord {
    std::string plan_text;       // raw decomposer output
    std::string canonical_plan;  // serialized form actually executed (empty if parsing failed)
    std::vector<std::string> diagnostics;
    bool success = false;
    std::optional<ExecError> error;
    std::optional<ForecastQuality> quality;
    std::string feedback;  // what was sent back to the decomposer; empty on acceptance
    bool accepted = false;
};

/// A successful forecast plan held back because its backtest MAPE exceeded
/// tau. If the budget runs out, the best of these becomes the answer.
struct BufferEntry {
    std::string canonical_plan;
    ExecOutcome outcome;
    Quality quality;
    std::string model;
};

struct EpisodeTrace {
    std::string task_id;
    std::vector<IterationRecord> iterations;
    ExecOutcome final;
    std::optional<ForecastQuality> final_quality;
    std::vector<BufferEntry> buffer;
    int accepted_iteration = -1;  // -1 when the answer came from the buffer or the run failed
    bool from_buffer = false;
};

/// Run the propose/execute/feedback loop for one task.
///
/// Each round the decomposer proposes a program given the task and all prior
/// (proposal, feedback) turns. Parse or validation failures and operator
/// errors are fed back as ERROR(...) lines. A successful forecast plan is
/// accepted outright when its backtest MAPE is at or below tau; otherwise it
/// is buffered and the decomposer is told QUALITY(model=..., mape=...). When
/// the decomposer re-proposes a plan already in the buffer it receives one
/// BUFFER_SUMMARY(...) of every buffered model's MAPE; a repeat after that is
/// accepted as the deliberate final choice. On budget exhaustion the
/// lowest-MAPE buffered plan wins, or the last failure stands.
EpisodeTrace run_episode(const TaskInstance& task, decomp::Decomposer& decomposer,
                         const EpisodeOptions& options = {});

/// Trace as a stable JSON document (sorted keys, 2-space indent) for
/// persistence and golden-file comparison.
std::string trace_json(const EpisodeTrace& trace);

}  // namespace tsreason::exec
