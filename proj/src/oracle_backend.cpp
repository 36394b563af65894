#include "devjudge/oracle_backend.hpp"

#include <algorithm>

#include "devjudge/error.hpp"
#include "devjudge/evidence.hpp"
#include "devjudge/prompts.hpp"
#include "devjudge/text.hpp"
#include "json_util.hpp"

namespace devjudge {

namespace {

// Text between `open` and `close` (the last occurrence of close after open).
std::string_view between(std::string_view s, std::string_view open, std::string_view close) {
  const auto a = s.find(open);
  if (a == std::string_view::npos) return {};
  const auto begin = a + open.size();
  const auto b = s.rfind(close);
  if (b == std::string_view::npos || b < begin) return s.substr(begin);
  return s.substr(begin, b - begin);
}

std::string bare(std::string_view p) {
  std::string s(text::trim(p));
  while (s.starts_with("./")) s.erase(0, 2);
  while (s.starts_with("/")) s.erase(0, 1);
  while (s.ends_with("/")) s.pop_back();
  return s;
}

bool same_path(std::string_view mention, std::string_view found) {
  const auto m = bare(mention);
  const auto f = bare(found);
  if (m.empty() || f.empty()) return false;
  return m == f || f.ends_with("/" + m) || m.ends_with("/" + f);
}

// Paths the evidence shows: lines of the located-files block and file headers.
std::vector<std::string> evidence_paths(std::string_view evidence) {
  std::vector<std::string> out;
  bool in_located = false;
  for (const auto& line : text::split_lines(evidence)) {
    if (line.starts_with("### ")) {
      in_located = line == "### Located files";
      if (line.starts_with("### File: ")) out.push_back(line.substr(10));
      continue;
    }
    if (in_located && !text::trim(line).empty()) out.emplace_back(text::trim(line));
  }
  return out;
}

long long tokens_for(std::size_t bytes, std::size_t per_token) {
  const auto n = std::max<std::size_t>(per_token, 1);
  return static_cast<long long>((bytes + n - 1) / n);
}

}  // namespace

ChatReply RuleOracleBackend::complete(std::string_view system_prompt, std::string_view user_prompt) {
  std::string reply;
  if (system_prompt == prompts::judge_system()) {
    reply = answer_ask(user_prompt);
  } else if (system_prompt == prompts::locate_system()) {
    reply = answer_locate(user_prompt);
  } else if (system_prompt == prompts::retrieve_system()) {
    reply = answer_retrieve(user_prompt);
  } else if (system_prompt == prompts::planning_system()) {
    reply = answer_plan();
  } else {
    throw Error(ErrorKind::BackendUnavailable, "oracle backend does not recognise the system prompt");
  }
  ChatReply out;
  out.usage.input_tokens = tokens_for(system_prompt.size() + user_prompt.size(), rules_.bytes_per_token);
  out.usage.output_tokens = tokens_for(reply.size(), rules_.bytes_per_token);
  out.usage.cost = rules_.pricing.cost(out.usage.input_tokens, out.usage.output_tokens);
  out.text = std::move(reply);
  return out;
}

std::string RuleOracleBackend::answer_locate(std::string_view user) const {
  const auto criteria = between(user, "This is the criteria related to the task:\n", "\n\nFollow the format");
  std::vector<std::string> paths = extract_path_mentions(criteria);
  for (const auto& rule : rules_.locate_rules) {
    if (!text::icontains(criteria, rule.criteria_contains)) continue;
    for (const auto& p : rule.paths) {
      if (std::find(paths.begin(), paths.end(), p) == paths.end()) paths.push_back(p);
    }
  }
  if (paths.empty()) return "No matching files.";
  std::string out;
  for (const auto& p : paths) out += "$" + p + "$\n";
  return out;
}

std::string RuleOracleBackend::answer_retrieve(std::string_view user) const {
  const auto trajectory = between(user, "Provided below is the trajectory of the developer agent:\n",
                                  "\n\nThis is the criteria related to the task:\n");
  const auto criteria_start = user.rfind("\n\nThis is the criteria related to the task:\n");
  std::string_view criteria;
  if (criteria_start != std::string_view::npos) {
    criteria = between(user.substr(criteria_start), "This is the criteria related to the task:\n",
                       "\n\nIdentify the steps");
  }
  std::vector<std::string> needles;
  for (const auto& p : extract_path_mentions(criteria)) {
    const auto b = bare(p);
    if (b.empty()) continue;
    needles.push_back(b);
    const auto slash = b.rfind('/');
    if (slash != std::string::npos && slash + 1 < b.size()) needles.push_back(b.substr(slash + 1));
  }
  for (const auto& k : rules_.retrieve_keywords) {
    if (text::icontains(criteria, k)) needles.push_back(k);
  }

  // Rendered steps start with "[step N]" at the beginning of a line.
  std::vector<std::string_view> steps;
  std::size_t start = 0;
  for (std::size_t pos = trajectory.find("[step "); pos != std::string_view::npos;
       pos = trajectory.find("[step ", pos + 1)) {
    if (pos != 0 && trajectory[pos - 1] != '\n') continue;
    if (pos > start) steps.push_back(text::trim(trajectory.substr(start, pos - start)));
    start = pos;
  }
  if (start < trajectory.size()) steps.push_back(text::trim(trajectory.substr(start)));

  std::string out = "<RELEVANT STEPS>\n";
  bool any = false;
  for (auto step : steps) {
    if (step.empty()) continue;
    const bool hit = std::any_of(needles.begin(), needles.end(),
                                 [&](const std::string& n) { return text::icontains(step, n); });
    if (!hit) continue;
    if (any) out += "\n\n";
    out += step;
    any = true;
  }
  if (!any) out += "No steps reference the files in the criteria.";
  return out;
}

std::string RuleOracleBackend::answer_ask(std::string_view user) const {
  const auto evidence = between(user, "Provided below is relevant information about the project:\n",
                                "\n\nKindly perform an evaluation of the following criteria:\n");
  const auto tail_at = user.rfind("\n\nKindly perform an evaluation of the following criteria:\n");
  std::string_view criteria;
  if (tail_at != std::string_view::npos) {
    criteria = between(user.substr(tail_at), "Kindly perform an evaluation of the following criteria:\n",
                       "\n\nAs per the guidelines");
  }

  const auto mentions = extract_path_mentions(criteria);
  const auto seen = evidence_paths(evidence);
  std::vector<std::string> missing;
  for (const auto& m : mentions) {
    const bool found =
        std::any_of(seen.begin(), seen.end(), [&](const std::string& f) { return same_path(m, f); });
    if (!found) missing.push_back(m);
  }

  bool decision = mentions.empty() ? rules_.no_path_decision : (!rules_.require_paths || missing.empty());
  std::string why = mentions.empty() ? "No file paths to check in the criteria."
                    : missing.empty() ? "All referenced paths are present in the evidence."
                                      : "Missing from the evidence: " + text::join(missing, ", ") + ".";
  bool any_rule = false;
  for (const auto& rule : rules_.keyword_rules) {
    if (!text::icontains(criteria, rule.criteria_contains)) continue;
    const bool ok = std::all_of(rule.evidence_contains.begin(), rule.evidence_contains.end(),
                                [&](const std::string& k) { return text::icontains(evidence, k); });
    if (!any_rule && mentions.empty()) decision = true;
    any_rule = true;
    if (!ok) {
      decision = false;
      why += " Evidence lacks " + text::join(rule.evidence_contains, " + ") + ".";
    }
  }
  return std::string(decision ? "<SATISFIED> " : "<UNSATISFIED> ") + why;
}

std::string RuleOracleBackend::answer_plan() const { return text::join(rules_.plan_order, ", "); }

RuleOracleBackend::Rules RuleOracleBackend::rules_from_json(const Json& doc) {
  constexpr std::string_view where = "oracle rules";
  detail::require_object(doc, where);
  Rules r;
  auto strings = [&](const Json& v, std::string_view field) {
    if (!v.is_array()) throw Error(ErrorKind::SchemaViolation, std::string(where) + ": " + std::string(field) + " must be an array");
    std::vector<std::string> out;
    for (const auto& s : v) {
      if (!s.is_string()) throw Error(ErrorKind::SchemaViolation, std::string(where) + ": " + std::string(field) + " must hold strings");
      out.push_back(s.get<std::string>());
    }
    return out;
  };
  for (const auto& [key, value] : doc.items()) {
    if (key == "require_paths") {
      r.require_paths = detail::require_bool(doc, key, where);
    } else if (key == "no_path_decision") {
      r.no_path_decision = detail::require_bool(doc, key, where);
    } else if (key == "keyword_rules" || key == "locate_rules") {
      if (!value.is_array()) throw Error(ErrorKind::SchemaViolation, std::string(where) + ": " + key + " must be an array");
      for (const auto& rule : value) {
        const auto when = detail::require_string(rule, "criteria_contains", key);
        if (key == "keyword_rules") {
          r.keyword_rules.push_back({when, strings(detail::require(rule, "evidence_contains", key), "evidence_contains")});
        } else {
          r.locate_rules.push_back({when, strings(detail::require(rule, "paths", key), "paths")});
        }
      }
    } else if (key == "retrieve_keywords") {
      r.retrieve_keywords = strings(value, key);
    } else if (key == "plan_order") {
      r.plan_order = strings(value, key);
    } else if (key == "context_budget" || key == "bytes_per_token") {
      const auto n = detail::require_integer(doc, key, where);
      if (n <= 0) throw Error(ErrorKind::SchemaViolation, std::string(where) + ": " + key + " must be positive");
      (key == "context_budget" ? r.context_budget : r.bytes_per_token) = static_cast<std::size_t>(n);
    } else if (key == "pricing") {
      r.pricing.input_per_token = detail::require_number(value, "input_per_token", "pricing");
      r.pricing.output_per_token = detail::require_number(value, "output_per_token", "pricing");
    } else {
      throw Error(ErrorKind::SchemaViolation, std::string(where) + ": unknown key \"" + key + "\"");
    }
  }
  return r;
}

RuleOracleBackend RuleOracleBackend::from_file(const std::string& path) {
  return RuleOracleBackend(rules_from_json(detail::parse_document(detail::read_file(path))));
}

}  // namespace devjudge
