#pragma once

#include <optional>
#include <string>
#include <string_view>

#include "backend.hpp"
#include "json.hpp"

namespace devjudge {

using Json = nlohmann::ordered_json;

struct OpenAICompatOptions {
  std::string endpoint = "https://api.openai.com/v1";  // base URL or full .../chat/completions URL
  std::string model = "gpt-4o-2024-05-13";
  std::string api_key;
  TokenPricing pricing{};
  std::size_t context_budget = 400000;
  double timeout_seconds = 120.0;
};

/// Name of the environment variable holding the API key.
inline constexpr const char* kApiKeyEnv = "DEVJUDGE_API_KEY";

/// Reads DEVJUDGE_API_KEY, falling back to OPENAI_API_KEY.
std::optional<std::string> api_key_from_environment();

struct EndpointParts {
  std::string scheme_host_port;  // "https://host:443"
  std::string path;              // "/v1/chat/completions"
};

EndpointParts split_endpoint(std::string_view endpoint);

Json build_chat_request(std::string_view model, std::string_view system_prompt, std::string_view user_prompt);
/// Extracts the reply text and token usage; throws BackendUnavailable on a
/// response without choices.
ChatReply parse_chat_response(std::string_view body, const TokenPricing& pricing);

// Chat-completions over HTTP(S). Each call opens its own client, so
// concurrent calls are safe.
class OpenAICompatBackend final : public JudgmentBackend {
 public:
  explicit OpenAICompatBackend(OpenAICompatOptions options);

  [[nodiscard]] std::size_t context_budget() const noexcept override { return options_.context_budget; }
  [[nodiscard]] std::string name() const override { return "openai-compat:" + options_.model; }

 protected:
  ChatReply complete(std::string_view system_prompt, std::string_view user_prompt) override;

 private:
  OpenAICompatOptions options_;
  EndpointParts endpoint_;
};

}  // namespace devjudge
