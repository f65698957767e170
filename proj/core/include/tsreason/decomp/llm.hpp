#pragma once

#include <functional>
#include <string>

#include "tsreason/decomp/decomposer.hpp"

namespace tsreason::decomp {

enum class LlmMode {
    live,    // call the endpoint, no fixture IO
    replay,  // serve cached completions only; never opens a connection
    record,  // call the endpoint on a fixture miss and save the completion
};

struct LlmConfig {
    LlmMode mode = LlmMode::replay;
    std::string endpoint = "https://api.openai.com/v1/chat/completions";
    std::string model = "gpt-4o";
    std::string fixture_dir = "fixtures/llm";
    std::string api_key;  // blank: read TS_REASONER_API_KEY when a call is needed
    double temperature = 0.0;
    double top_p = 1.0;
    int max_attempts = 3;  // transient failures retried with exponential backoff
};

/// Chat-completion decomposer with record/replay fixtures.
///
/// The request body is canonical (sorted keys), so its SHA-256 names the
/// fixture file: <fixture_dir>/<hash>.json. Replay mode reads exactly that
/// file and throws OpError("FixtureMissing") naming the path when absent,
/// which is also how new fixtures get identified for recording. The model's
/// program is the last fenced code block of the completion.
class LlmDecomposer : public Decomposer {
public:
    /// Posts `body` to `endpoint` with auth `api_key`, returns the raw
    /// response body. Swappable for tests.
    using Transport = std::function<std::string(const std::string& endpoint,
                                                const std::string& api_key,
                                                const std::string& body)>;

    explicit LlmDecomposer(LlmConfig config);
    LlmDecomposer(LlmConfig config, Transport transport);

    std::string propose(const TaskInstance& task,
                        const std::vector<FeedbackTurn>& history) override;
    std::string name() const override { return "llm"; }

    /// Canonical request body for a task + history (what gets hashed).
    std::string canonical_request(const TaskInstance& task,
                                  const std::vector<FeedbackTurn>& history) const;
    /// Fixture path the request would resolve to.
    std::string fixture_path(const std::string& request_body) const;

    int network_calls() const { return network_calls_; }

private:
    std::string complete(const std::string& request_body);
    std::string call_endpoint(const std::string& request_body);

    LlmConfig config_;
    Transport transport_;  // null until a live call is actually needed
    int network_calls_ = 0;
};

}  // namespace tsreason::decomp
