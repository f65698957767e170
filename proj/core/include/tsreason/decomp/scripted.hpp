#pragma once

#include "tsreason/decomp/decomposer.hpp"

namespace tsreason::decomp {

struct ScriptedOptions {
    /// Fault injection for feedback-loop tests: the first proposal for a
    /// predictive or anomaly task carries a leading step that calls a
    /// declared-but-unimplemented operator, exercising the repair path.
    bool use_unimplemented_first = false;
};

/// Deterministic template decomposer: a pure function of the task and the
/// feedback history, so episode traces are exactly reproducible.
///
/// Predictive tasks get a forecast step plus a constraint projection, with
/// the model backend rotating holt_winters → ar_ls → seasonal_naive on
/// QUALITY feedback (tasks with covariates try lagged_regression first).
/// Long histories route ar_ls through an explicit trainForecastOP handle.
/// Anomaly tasks emit the reference calibration pipeline when anomaly-free
/// data is available, otherwise the rate-percentile variant. Causal tasks
/// emit causal_matrix → select_top_ratio with the ratio the question states.
///
/// Repairs: UnimplementedOp feedback substitutes the implemented counterpart
/// of the offending operator; BUFFER_SUMMARY feedback re-proposes the plan of
/// the minimum-MAPE model listed.
class ScriptedDecomposer : public Decomposer {
public:
    explicit ScriptedDecomposer(ScriptedOptions options = {}) : options_(options) {}

    std::string propose(const TaskInstance& task,
                        const std::vector<FeedbackTurn>& history) override;
    std::string name() const override { return "scripted"; }

private:
    ScriptedOptions options_;
};

}  // namespace tsreason::decomp
