#include "alphaforge/llm/http_provider.h"

#include <httplib.h>
#include <json.hpp>

#include <cstdlib>
#include <thread>

namespace alphaforge::llm {

using nlohmann::json;

HttpProvider::HttpProvider(HttpConfig config, Sleeper sleeper) : config_(std::move(config)), sleeper_(std::move(sleeper)) {
    if (config_.endpoint.empty()) throw LlmError("HTTP provider needs an endpoint URL");
    if (config_.max_retries < 0) throw LlmError("max_retries must be non-negative");
    if (!sleeper_) sleeper_ = [](std::chrono::milliseconds d) { std::this_thread::sleep_for(d); };
}

std::string HttpProvider::request_body(const std::string& prompt) const {
    json body{
        {"model", config_.model},
        {"temperature", 0},
        {"messages", json::array({{{"role", "user"}, {"content", prompt}}})},
    };
    return body.dump();
}

std::string HttpProvider::message_content(const std::string& body) {
    try {
        auto doc = json::parse(body);
        const auto& content = doc.at("choices").at(0).at("message").at("content");
        if (!content.is_string()) throw LlmError("chat response content is not text", body);
        return content.get<std::string>();
    } catch (const json::exception& e) {
        throw LlmError(std::string("unexpected chat response: ") + e.what(), body);
    }
}

std::string HttpProvider::chat(const std::string& prompt) {
    httplib::Client client(config_.endpoint);
    client.set_connection_timeout(config_.timeout);
    client.set_read_timeout(config_.timeout);
    client.set_write_timeout(config_.timeout);

    httplib::Headers headers;
    if (!config_.api_key_env.empty()) {
        if (const char* key = std::getenv(config_.api_key_env.c_str()); key && *key) {
            headers.emplace("Authorization", std::string("Bearer ") + key);
        }
    }
    const std::string body = request_body(prompt);

    std::string last_error;
    auto backoff = config_.initial_backoff;
    for (int attempt = 0; attempt <= config_.max_retries; ++attempt) {
        if (attempt > 0) {
            sleeper_(backoff);
            backoff *= 2;
        }
        auto res = client.Post(config_.path, headers, body, "application/json");
        if (!res) {
            last_error = "transport error: " + httplib::to_string(res.error());
            continue;
        }
        if (res->status == 200) return message_content(res->body);
        last_error = "HTTP " + std::to_string(res->status);
        if (res->status != 429 && res->status < 500) throw LlmError(last_error, res->body);
    }
    throw LlmError("request failed after " + std::to_string(config_.max_retries + 1) + " attempts: " + last_error);
}

}  // namespace alphaforge::llm
