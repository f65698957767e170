#pragma once

#include <string>
#include <utility>
#include <vector>

#include "tsreason/core/task.hpp"
#include "tsreason/decomp/decomposer.hpp"
#include "tsreason/plan/registry.hpp"

namespace tsreason::decomp {

/// The parts of an in-context-learning prompt, kept separate so the chat
/// client can map them onto message roles and tests can inspect each part.
struct PromptBundle {
    std::string operator_defs;
    std::vector<std::pair<std::string, std::string>> icl_examples;  // (question, program)
    std::string instructions;
    std::string question;  // task question plus the answer-format suffix
    std::vector<FeedbackTurn> feedback;
};

struct ChatMessage {
    std::string role;  // "system" | "user" | "assistant"
    std::string content;
};

/// The fixed instruction block sent with every request.
const std::string& instruction_block();

/// Suffix appended to each task question asking for a fenced program.
const std::string& question_suffix();

/// Built-in worked examples (question, program): one anomaly-detection
/// pipeline, one constrained forecast, one causal-discovery program.
const std::vector<std::pair<std::string, std::string>>& icl_examples();

/// Assemble the prompt for a task: operator definitions rendered from the
/// registry, the worked examples, the question, the instruction block, and
/// any feedback turns so far.
PromptBundle build_prompt(const TaskInstance& task, const std::vector<FeedbackTurn>& history,
                          const plan::Registry& catalog = plan::Registry::instance());

/// One definition block per catalog operator: signature line, summary,
/// parameter list with kinds, result kind, and accepted alternate names.
std::string render_operator_defs(const plan::Registry& catalog);

/// The bundle as one plain-text document (defs, examples, question,
/// instructions, feedback), for logging and single-prompt endpoints.
std::string render_text(const PromptBundle& bundle);

/// The bundle as chat messages: instructions as the system turn, everything
/// else as the first user turn, then feedback history as alternating
/// assistant/user turns.
std::vector<ChatMessage> to_messages(const PromptBundle& bundle);

/// Body of the last fenced code block in a completion (``` or ```python).
/// Throws OpError("NoCodeBlockInResponse") when no complete block exists.
std::string extract_code_block(const std::string& completion);

}  // namespace tsreason::decomp
