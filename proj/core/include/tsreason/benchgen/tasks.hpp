#pragma once

#include <cstdint>
#include <map>
#include <string>

#include "tsreason/core/task.hpp"
#include "tsreason/core/time_series.hpp"

namespace tsreason::benchgen {

/// Fill every "{name}" placeholder in the named question template from
/// `params`. Raises UnknownTemplate for an unknown id and MissingPlaceholder
/// when the template references a name that was not supplied. Values are
/// inserted verbatim (callers format numbers themselves).
std::string render_question(const std::string& template_id,
                            const std::map<std::string, std::string>& params);

struct PredictiveTaskConfig {
    std::uint64_t seed = 0;
    std::string id;
    std::string family;
    constraints::Kind constraint_kind = constraints::Kind::max_load;
    bool with_covariates = false;

    /// Multi-grid callers pass one pre-built column (history plus horizon)
    /// instead of letting the task generate its own series. The last
    /// `prepared_horizon` rows become the ground truth.
    const TimeSeries* prepared = nullptr;
    std::size_t prepared_horizon = 48;
};

/// Forecasting task: minute-level load history in VAL, one operating
/// constraint in the question, the true future as ground truth. With
/// covariates VAL becomes a frame (load first) and VAL_TARGET carries the
/// bare load series. The constraint bound is sampled so that roughly three
/// quarters of instances are binding (a perfect unconstrained forecast would
/// violate it), rounded to 4 decimals before it is stored or rendered so the
/// question text and the stored spec agree exactly.
TaskInstance make_predictive_task(const PredictiveTaskConfig& cfg);

enum class DiagnosticVariant { reference, anomaly_rate, causal };
const char* to_string(DiagnosticVariant variant);

struct DiagnosticTaskConfig {
    std::uint64_t seed = 0;
    std::string id;
    std::string family;
    DiagnosticVariant variant = DiagnosticVariant::reference;
};

/// reference: anomaly detection with a clean NORM_VAL sample alongside VAL.
/// anomaly_rate: detection with the exact anomalous fraction in ANOMALY_RATE
/// (and in the question). causal: multivariate frame in VAL, binary influence
/// matrix as ground truth, true edge density stated in the question.
TaskInstance make_diagnostic_task(const DiagnosticTaskConfig& cfg);

}  // namespace tsreason::benchgen
