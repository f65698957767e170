#include "tsreason/core/task.hpp"

#include "tsreason/core/error.hpp"

namespace tsreason {

const char* to_string(TaskKind kind) {
    switch (kind) {
        case TaskKind::predictive: return "predictive";
        case TaskKind::diagnostic_anomaly: return "diagnostic_anomaly";
        case TaskKind::diagnostic_causal: return "diagnostic_causal";
    }
    return "unknown";
}

TaskKind task_kind_from_string(const std::string& name) {
    if (name == "predictive") return TaskKind::predictive;
    if (name == "diagnostic_anomaly") return TaskKind::diagnostic_anomaly;
    if (name == "diagnostic_causal") return TaskKind::diagnostic_causal;
    fail("UnknownTaskKind", "unknown task kind '" + name + "'");
}

}  // namespace tsreason
