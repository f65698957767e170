#pragma once

#include <string>
#include <vector>

#include "tsreason/core/task.hpp"

namespace tsreason::decomp {

/// One completed round of the refinement loop: what the decomposer proposed
/// and the structured feedback the executor sent back (ERROR/QUALITY/
/// BUFFER_SUMMARY lines). Carrying both sides keeps decomposers stateless:
/// an LLM decomposer rebuilds the whole conversation from the history alone.
struct FeedbackTurn {
    std::string proposal;
    std::string feedback;
};

/// Maps a task plus feedback history to plan text. Implementations must be
/// pure functions of their inputs (and configuration) so episodes replay
/// deterministically.
class Decomposer {
public:
    virtual ~Decomposer() = default;

    virtual std::string propose(const TaskInstance& task,
                                const std::vector<FeedbackTurn>& history) = 0;

    /// Short label for traces and reports ("scripted", "llm").
    virtual std::string name() const = 0;
};

}  // namespace tsreason::decomp
