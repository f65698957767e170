#define CPPHTTPLIB_OPENSSL_SUPPORT
#include "tsreason/decomp/llm.hpp"

#include <chrono>
#include <cstdlib>
#include <filesystem>
#include <httplib.h>
#include <nlohmann/json.hpp>
#include <thread>

#include "tsreason/core/error.hpp"
#include "tsreason/decomp/prompt.hpp"
#include "tsreason/util/fs.hpp"
#include "tsreason/util/hash.hpp"

namespace tsreason::decomp {

namespace {

/// Split "https://host[:port]/path" for httplib, which takes them separately.
std::pair<std::string, std::string> split_endpoint(const std::string& endpoint) {
    const auto scheme = endpoint.find("://");
    if (scheme == std::string::npos)
        fail("BadEndpoint", "endpoint '" + endpoint + "' has no scheme");
    const auto slash = endpoint.find('/', scheme + 3);
    if (slash == std::string::npos) return {endpoint, "/"};
    return {endpoint.substr(0, slash), endpoint.substr(slash)};
}

std::string default_transport(const std::string& endpoint, const std::string& api_key,
                              const std::string& body) {
    const auto [base, path] = split_endpoint(endpoint);
    httplib::Client client(base);
    client.set_connection_timeout(10);
    client.set_read_timeout(120);
    httplib::Headers headers = {{"Authorization", "Bearer " + api_key}};
    auto res = client.Post(path, headers, body, "application/json");
    if (!res)
        fail("TransientHttpError",
             "POST " + endpoint + " failed: " + httplib::to_string(res.error()));
    if (res->status == 401 || res->status == 403)
        fail("AuthMissing", "endpoint rejected the API key (HTTP " +
                                std::to_string(res->status) + ")");
    if (res->status == 429 || res->status >= 500)
        fail("TransientHttpError", "HTTP " + std::to_string(res->status) + " from " + endpoint);
    if (res->status < 200 || res->status >= 300)
        fail("UpstreamError", "HTTP " + std::to_string(res->status) + " from " + endpoint +
                                  ": " + res->body.substr(0, 200));
    return res->body;
}

std::string content_of_response(const std::string& response_body) {
    nlohmann::json j = nlohmann::json::parse(response_body, nullptr, false);
    if (j.is_discarded()) fail("BadResponse", "completion response is not valid JSON");
    if (!j.contains("choices") || !j["choices"].is_array() || j["choices"].empty())
        fail("BadResponse", "completion response has no choices");
    const auto& message = j["choices"][0]["message"];
    if (!message.contains("content") || !message["content"].is_string())
        fail("BadResponse", "completion response has no message content");
    return message["content"].get<std::string>();
}

}  // namespace

LlmDecomposer::LlmDecomposer(LlmConfig config) : config_(std::move(config)) {}

LlmDecomposer::LlmDecomposer(LlmConfig config, Transport transport)
    : config_(std::move(config)), transport_(std::move(transport)) {}

std::string LlmDecomposer::canonical_request(const TaskInstance& task,
                                             const std::vector<FeedbackTurn>& history) const {
    const PromptBundle bundle = build_prompt(task, history);
    nlohmann::json j;
    j["model"] = config_.model;
    j["temperature"] = config_.temperature;
    j["top_p"] = config_.top_p;
    auto& messages = j["messages"] = nlohmann::json::array();
    for (const ChatMessage& m : to_messages(bundle))
        messages.push_back({{"role", m.role}, {"content", m.content}});
    return j.dump();
}

std::string LlmDecomposer::fixture_path(const std::string& request_body) const {
    return (std::filesystem::path(config_.fixture_dir) /
            (util::sha256_hex(request_body) + ".json"))
        .string();
}

std::string LlmDecomposer::call_endpoint(const std::string& request_body) {
    std::string api_key = config_.api_key;
    if (api_key.empty()) {
        const char* env = std::getenv("TS_REASONER_API_KEY");
        if (env != nullptr) api_key = env;
    }
    if (api_key.empty())
        fail("AuthMissing",
             "no API key: set TS_REASONER_API_KEY or LlmConfig.api_key for live calls");

    if (!transport_) transport_ = default_transport;
    std::string last_error;
    for (int attempt = 0; attempt < config_.max_attempts; ++attempt) {
        if (attempt > 0)
            std::this_thread::sleep_for(std::chrono::milliseconds(100 << attempt));
        try {
            ++network_calls_;
            return transport_(config_.endpoint, api_key, request_body);
        } catch (const OpError& e) {
            if (std::string(e.code()) != "TransientHttpError") throw;
            last_error = e.what();
        }
    }
    fail("EndpointUnreachable", "gave up after " + std::to_string(config_.max_attempts) +
                                    " attempts: " + last_error);
}

std::string LlmDecomposer::complete(const std::string& request_body) {
    if (config_.mode == LlmMode::live)
        return content_of_response(call_endpoint(request_body));

    const std::filesystem::path path = fixture_path(request_body);
    if (std::filesystem::exists(path)) {
        nlohmann::json j = nlohmann::json::parse(util::read_text_file(path), nullptr, false);
        if (j.is_discarded() || !j.contains("response") || !j["response"].contains("content"))
            fail("BadResponse", "fixture '" + path.string() + "' is malformed");
        return j["response"]["content"].get<std::string>();
    }
    if (config_.mode == LlmMode::replay)
        fail("FixtureMissing", "no replay fixture at '" + path.string() +
                                   "'; run in record mode to create it");

    const std::string content = content_of_response(call_endpoint(request_body));
    nlohmann::json fixture;
    fixture["request"] = nlohmann::json::parse(request_body);
    fixture["response"] = {{"content", content}};
    util::write_text_atomic(path, fixture.dump(2) + "\n");
    return content;
}

std::string LlmDecomposer::propose(const TaskInstance& task,
                                   const std::vector<FeedbackTurn>& history) {
    const std::string completion = complete(canonical_request(task, history));
    return extract_code_block(completion);
}

}  // namespace tsreason::decomp
