#pragma once

#include <string>
#include <string_view>
#include <vector>

#include "backend.hpp"
#include "json.hpp"

namespace devjudge {

using Json = nlohmann::ordered_json;

// Deterministic stand-in for a chat model, driven by a small rule file. It
// recognises which judge module is calling from the system prompt and answers
// in that module's reply format:
//   locate   -> $path$ for every path the criteria mention (plus extra rules)
//   retrieve -> <RELEVANT STEPS> with every rendered step mentioning a criteria
//               path or a configured keyword
//   plan     -> the configured module order
//   ask      -> <SATISFIED> iff every path the criteria mention was located,
//               refined by keyword rules
// Usage is synthesised from prompt lengths so reports stay byte-stable.
class RuleOracleBackend final : public JudgmentBackend {
 public:
  struct KeywordRule {
    std::string criteria_contains;
    std::vector<std::string> evidence_contains;  // all must occur (case-insensitive)
  };
  struct LocateRule {
    std::string criteria_contains;
    std::vector<std::string> paths;
  };
  struct Rules {
    bool require_paths = true;
    bool no_path_decision = false;  // decision when criteria mention no path and no rule applies
    std::vector<KeywordRule> keyword_rules;
    std::vector<LocateRule> locate_rules;
    std::vector<std::string> retrieve_keywords;
    std::vector<std::string> plan_order{"locate", "read", "search", "retrieve", "memory", "ask"};
    std::size_t context_budget = 400000;
    std::size_t bytes_per_token = 4;
    TokenPricing pricing{};
  };

  RuleOracleBackend() = default;
  explicit RuleOracleBackend(Rules rules) : rules_(std::move(rules)) {}

  static Rules rules_from_json(const Json& doc);
  static RuleOracleBackend from_file(const std::string& path);

  [[nodiscard]] std::size_t context_budget() const noexcept override { return rules_.context_budget; }
  [[nodiscard]] std::string name() const override { return "oracle"; }
  [[nodiscard]] const Rules& rules() const noexcept { return rules_; }

 protected:
  ChatReply complete(std::string_view system_prompt, std::string_view user_prompt) override;

 private:
  [[nodiscard]] std::string answer_locate(std::string_view user) const;
  [[nodiscard]] std::string answer_retrieve(std::string_view user) const;
  [[nodiscard]] std::string answer_ask(std::string_view user) const;
  [[nodiscard]] std::string answer_plan() const;

  Rules rules_;
};

}  // namespace devjudge
