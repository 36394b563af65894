#pragma once

#include <cstddef>
#include <memory>
#include <mutex>
#include <string>
#include <string_view>

namespace devjudge {

struct UsageLedger {
  long long input_tokens = 0;
  long long output_tokens = 0;
  double cost = 0.0;       // USD
  double wall_time = 0.0;  // seconds

  UsageLedger& operator+=(const UsageLedger& other) noexcept {
    input_tokens += other.input_tokens;
    output_tokens += other.output_tokens;
    cost += other.cost;
    wall_time += other.wall_time;
    return *this;
  }
  friend UsageLedger operator+(UsageLedger a, const UsageLedger& b) noexcept { return a += b; }
  friend bool operator==(const UsageLedger&, const UsageLedger&) = default;
};

/// Per-token prices in USD. Defaults are the gpt-4o-2024-05-13 list prices.
struct TokenPricing {
  double input_per_token = 5.0e-6;
  double output_per_token = 15.0e-6;

  [[nodiscard]] double cost(long long input_tokens, long long output_tokens) const noexcept {
    return static_cast<double>(input_tokens) * input_per_token +
           static_cast<double>(output_tokens) * output_per_token;
  }
};

struct ChatReply {
  std::string text;
  UsageLedger usage;
};

// Anything that can answer a (system, user) prompt pair. Implementations
// override complete(); chat() adds the call to the shared usage meter.
class JudgmentBackend {
 public:
  virtual ~JudgmentBackend() = default;

  ChatReply chat(std::string_view system_prompt, std::string_view user_prompt);

  /// Largest prompt (system + user, in bytes) the backend accepts.
  [[nodiscard]] virtual std::size_t context_budget() const noexcept = 0;
  /// False when calls must be serialised by the caller.
  [[nodiscard]] virtual bool concurrent_safe() const noexcept { return true; }
  [[nodiscard]] virtual std::string name() const = 0;

  [[nodiscard]] UsageLedger usage() const;

 protected:
  virtual ChatReply complete(std::string_view system_prompt, std::string_view user_prompt) = 0;

 private:
  mutable std::mutex meter_mutex_;
  UsageLedger meter_;
};

}  // namespace devjudge
