#pragma once

#include "alphaforge/llm/provider.h"

#include <chrono>
#include <functional>
#include <string>

namespace alphaforge::llm {

struct HttpConfig {
    /// Base URL, e.g. "https://api.openai.com"; the chat path is appended.
    std::string endpoint;
    std::string path = "/v1/chat/completions";
    std::string model = "gpt-4o";
    /// Name of the environment variable holding the bearer token; unset means no header.
    std::string api_key_env = "ALPHAFORGE_API_KEY";
    int max_retries = 3;
    std::chrono::milliseconds initial_backoff{500};
    std::chrono::seconds timeout{60};
};

/// Chat-completion client. Transport errors, 429 and 5xx responses are retried
/// with exponential backoff; other HTTP errors fail at once.
class HttpProvider : public Provider {
public:
    using Sleeper = std::function<void(std::chrono::milliseconds)>;

    explicit HttpProvider(HttpConfig config, Sleeper sleeper = {});

    std::string chat(const std::string& prompt) override;
    std::string name() const override { return "http"; }

    /// Request body sent for `prompt`.
    std::string request_body(const std::string& prompt) const;
    /// Extracts the message text from a chat-completion response body.
    static std::string message_content(const std::string& body);

private:
    HttpConfig config_;
    Sleeper sleeper_;
};

}  // namespace alphaforge::llm
