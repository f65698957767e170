#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "tsreason/constraints/constraint.hpp"
#include "tsreason/core/metrics.hpp"
#include "tsreason/core/value.hpp"

namespace tsreason {

enum class TaskKind { predictive, diagnostic_anomaly, diagnostic_causal };

const char* to_string(TaskKind kind);
TaskKind task_kind_from_string(const std::string& name);

/// What a correct answer must look like: value kind plus shape
/// ([h] for vectors, [d, d] for matrices, empty when unconstrained).
struct OutputContract {
    Value::Kind kind = Value::Kind::series;
    std::vector<std::size_t> shape;

    bool operator==(const OutputContract&) const = default;
};

/// Side information stated in the question rather than carried in data.
struct Knowledge {
    std::optional<double> anomaly_rate;    // fraction of anomalous steps
    std::optional<double> relation_ratio;  // off-diagonal edge density

    bool operator==(const Knowledge&) const = default;
};

/// One benchmark problem: a natural language question plus named input
/// values, with the ground truth and grading contract attached.
struct TaskInstance {
    std::string id;
    std::string family;  // e.g. "predictive:max_load:no_cov"
    TaskKind kind = TaskKind::predictive;
    std::string question;
    std::map<std::string, Value> env;
    std::optional<constraints::ConstraintSpec> constraint;
    Knowledge knowledge;
    std::size_t horizon = 0;  // predictive only
    OutputContract output_contract;
    std::optional<Value> ground_truth;
    bool binding = false;  // generator bookkeeping: constraint binds the truth
    std::uint64_t seed = 0;
};

}  // namespace tsreason
