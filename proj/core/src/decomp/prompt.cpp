#include "tsreason/decomp/prompt.hpp"

#include "tsreason/core/error.hpp"

namespace tsreason::decomp {

namespace {

/// Prefer the CamelCase *OP alias for the signature line so the prompt reads
/// like the worked examples; the canonical name stays listed below it.
std::string display_name(const plan::Registry& catalog, const std::string& canonical,
                         std::vector<std::string>& other_names) {
    other_names = catalog.aliases_of(canonical);
    if (other_names.empty()) return canonical;
    std::string display = other_names.front();
    other_names.erase(other_names.begin());
    other_names.insert(other_names.begin(), canonical);
    return display;
}

}  // namespace

std::string render_operator_defs(const plan::Registry& catalog) {
    std::string out;
    for (const std::string& canonical : catalog.names()) {
        const plan::OperatorSpec* op = catalog.find(canonical);
        std::vector<std::string> other_names;
        const std::string display = display_name(catalog, canonical, other_names);

        out += "def " + display + "(";
        for (std::size_t i = 0; i < op->params.size(); ++i) {
            if (i > 0) out += ", ";
            out += op->params[i].name;
        }
        out += "):\n";
        out += "    " + op->summary + "\n";
        if (!op->implemented) out += "    (declared, not yet available)\n";
        out += "    Input:\n";
        for (const auto& p : op->params) {
            out += "    - " + p.name + ": " + to_string(p.type) +
                   (p.required ? " (required)" : " (optional)") + "\n";
        }
        out += "    Output:\n";
        out += "    - " + std::string(Value::kind_name(op->result)) + "\n";
        if (!other_names.empty()) {
            out += "    Also accepted as: ";
            for (std::size_t i = 0; i < other_names.size(); ++i) {
                if (i > 0) out += ", ";
                out += other_names[i];
            }
            out += "\n";
        }
        out += "\n";
    }
    return out;
}

PromptBundle build_prompt(const TaskInstance& task, const std::vector<FeedbackTurn>& history,
                          const plan::Registry& catalog) {
    if (catalog.names().empty()) fail("EmptyCatalog", "operator catalog has no operators");
    PromptBundle bundle;
    bundle.operator_defs = render_operator_defs(catalog);
    bundle.icl_examples = icl_examples();
    bundle.instructions = instruction_block();
    bundle.question = task.question + " " + question_suffix();
    bundle.feedback = history;
    return bundle;
}

namespace {

std::string examples_and_question(const PromptBundle& bundle) {
    std::string out;
    out += "Example:\n\n";
    for (const auto& [question, program] : bundle.icl_examples) {
        out += "Question:\n" + question + "\nProgram:\n\n```python\n" + program + "\n```\n\n";
    }
    out += "Question:\n\n" + bundle.question + "\n";
    return out;
}

}  // namespace

std::string render_text(const PromptBundle& bundle) {
    std::string out = bundle.operator_defs + "\n";
    out += examples_and_question(bundle);
    out += "\n" + bundle.instructions + "\n";
    for (const auto& turn : bundle.feedback) {
        out += "\nProposal:\n\n```python\n" + turn.proposal + "\n```\n\nFeedback:\n" +
               turn.feedback + "\n";
    }
    return out;
}

std::vector<ChatMessage> to_messages(const PromptBundle& bundle) {
    std::vector<ChatMessage> messages;
    messages.push_back({"system", bundle.instructions});
    messages.push_back({"user", bundle.operator_defs + "\n" + examples_and_question(bundle)});
    for (const auto& turn : bundle.feedback) {
        messages.push_back({"assistant", "```python\n" + turn.proposal + "\n```"});
        messages.push_back({"user", turn.feedback});
    }
    return messages;
}

std::string extract_code_block(const std::string& completion) {
    // Scan fences in order; the block between the last complete fence pair
    // wins. An opening fence may carry an info string ("```python").
    std::size_t pos = 0;
    std::string last_block;
    bool found = false;
    while (true) {
        const std::size_t open = completion.find("```", pos);
        if (open == std::string::npos) break;
        std::size_t body = completion.find('\n', open);
        if (body == std::string::npos) break;
        ++body;
        const std::size_t close = completion.find("```", body);
        if (close == std::string::npos) break;
        std::string block = completion.substr(body, close - body);
        while (!block.empty() && (block.back() == '\n' || block.back() == '\r')) block.pop_back();
        last_block = std::move(block);
        found = true;
        pos = close + 3;
    }
    if (!found)
        fail("NoCodeBlockInResponse", "completion contains no complete fenced code block");
    return last_block;
}

}  // namespace tsreason::decomp
