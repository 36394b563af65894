#include "devjudge/openai_backend.hpp"

#include <chrono>
#include <cmath>
#include <cstdlib>

#include "devjudge/error.hpp"
#include "devjudge/text.hpp"
#include "httplib.h"

namespace devjudge {

std::optional<std::string> api_key_from_environment() {
  for (const char* name : {kApiKeyEnv, "OPENAI_API_KEY"}) {
    if (const char* value = std::getenv(name); value != nullptr && *value != '\0') return std::string(value);
  }
  return std::nullopt;
}

EndpointParts split_endpoint(std::string_view endpoint) {
  std::string url(text::trim(endpoint));
  const auto scheme_end = url.find("://");
  if (scheme_end == std::string::npos) {
    throw Error(ErrorKind::InvalidConfig, "endpoint needs an http:// or https:// scheme: " + url);
  }
  const auto scheme = text::to_lower(url.substr(0, scheme_end));
  if (scheme != "http" && scheme != "https") {
    throw Error(ErrorKind::InvalidConfig, "unsupported endpoint scheme: " + scheme);
  }
  const auto path_start = url.find('/', scheme_end + 3);
  EndpointParts parts;
  parts.scheme_host_port = url.substr(0, path_start);
  if (parts.scheme_host_port.size() == scheme_end + 3) throw Error(ErrorKind::InvalidConfig, "endpoint has no host");
  std::string path = path_start == std::string::npos ? "" : url.substr(path_start);
  while (path.ends_with("/")) path.pop_back();
  if (!path.ends_with("/chat/completions")) path += "/chat/completions";
  parts.path = path;
  return parts;
}

Json build_chat_request(std::string_view model, std::string_view system_prompt, std::string_view user_prompt) {
  Json messages = Json::array();
  messages.push_back(Json{{"role", "system"}, {"content", std::string(system_prompt)}});
  messages.push_back(Json{{"role", "user"}, {"content", std::string(user_prompt)}});
  return Json{{"model", std::string(model)}, {"messages", std::move(messages)}, {"temperature", 0}};
}

ChatReply parse_chat_response(std::string_view body, const TokenPricing& pricing) {
  Json doc;
  try {
    doc = Json::parse(body);
  } catch (const Json::parse_error& e) {
    throw Error(ErrorKind::BackendUnavailable, std::string("response is not JSON: ") + e.what());
  }
  if (!doc.is_object() || !doc.contains("choices") || !doc["choices"].is_array() || doc["choices"].empty()) {
    throw Error(ErrorKind::BackendUnavailable, "response has no choices");
  }
  const auto& message = doc["choices"][0].value("message", Json::object());
  ChatReply reply;
  if (message.contains("content") && message["content"].is_string()) reply.text = message["content"].get<std::string>();
  if (doc.contains("usage") && doc["usage"].is_object()) {
    const auto& u = doc["usage"];
    reply.usage.input_tokens = u.value("prompt_tokens", 0LL);
    reply.usage.output_tokens = u.value("completion_tokens", 0LL);
  }
  reply.usage.cost = pricing.cost(reply.usage.input_tokens, reply.usage.output_tokens);
  return reply;
}

OpenAICompatBackend::OpenAICompatBackend(OpenAICompatOptions options)
    : options_(std::move(options)), endpoint_(split_endpoint(options_.endpoint)) {
#ifndef CPPHTTPLIB_OPENSSL_SUPPORT
  if (text::starts_with(text::to_lower(endpoint_.scheme_host_port), "https://")) {
    throw Error(ErrorKind::InvalidConfig, "this build has no TLS support; use an http:// endpoint");
  }
#endif
}

ChatReply OpenAICompatBackend::complete(std::string_view system_prompt, std::string_view user_prompt) {
  const auto started = std::chrono::steady_clock::now();
  httplib::Client client(endpoint_.scheme_host_port);
  const auto secs = static_cast<time_t>(options_.timeout_seconds);
  const auto usecs = static_cast<time_t>((options_.timeout_seconds - static_cast<double>(secs)) * 1e6);
  client.set_connection_timeout(secs, usecs);
  client.set_read_timeout(secs, usecs);
  client.set_write_timeout(secs, usecs);

  httplib::Headers headers;
  if (!options_.api_key.empty()) headers.emplace("Authorization", "Bearer " + options_.api_key);
  const auto body = build_chat_request(options_.model, system_prompt, user_prompt).dump();
  auto res = client.Post(endpoint_.path, headers, body, "application/json");
  if (!res) {
    throw Error(ErrorKind::BackendUnavailable,
                endpoint_.scheme_host_port + ": " + httplib::to_string(res.error()));
  }
  if (res->status < 200 || res->status >= 300) {
    auto detail = std::string(text::trim(res->body.substr(0, 300)));
    throw Error(ErrorKind::BackendUnavailable, "HTTP " + std::to_string(res->status) + ": " + detail);
  }
  auto reply = parse_chat_response(res->body, options_.pricing);
  reply.usage.wall_time =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - started).count();
  return reply;
}

}  // namespace devjudge
