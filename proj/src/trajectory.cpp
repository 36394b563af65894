#include "devjudge/trajectory.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "devjudge/error.hpp"
#include "devjudge/text.hpp"
#include "json_util.hpp"

namespace devjudge {

namespace {

Json nullable(const std::optional<std::string>& v) { return v ? Json(*v) : Json(nullptr); }

void require_non_negative(double value, const std::string& where) {
  if (value < 0.0 || std::isnan(value)) throw Error(ErrorKind::SchemaViolation, where + ": must be non-negative");
}

TrajectoryStep parse_step(const Json& s, std::size_t position) {
  const auto where = "steps[" + std::to_string(position) + "]";
  detail::require_object(s, where);
  TrajectoryStep step;
  const auto index = detail::require_integer(s, "step", where);
  if (index < 0) throw Error(ErrorKind::SchemaViolation, where + ".step: must be >= 0");
  step.step = static_cast<int>(index);
  step.user_message = detail::nullable_string(s, "user_message", where, false);

  const auto& agent = detail::require(s, "agent", where);
  detail::require_object(agent, where + ".agent");
  step.agent_thought = detail::nullable_string(agent, "thought", where + ".agent", false);
  step.agent_action = detail::nullable_string(agent, "action", where + ".agent", false);
  step.agent_name = detail::nullable_string(agent, "agent_name", where + ".agent", false);
  step.agent_extra = detail::collect_extra(agent, {"thought", "action", "agent_name"});

  step.environment = detail::nullable_string(s, "environment", where, false);

  const auto uwhere = where + ".step_usage";
  const auto& usage = detail::require(s, "step_usage", where);
  detail::require_object(usage, uwhere);
  step.step_usage.input_tokens = detail::require_integer(usage, "input_tokens", uwhere);
  step.step_usage.output_tokens = detail::require_integer(usage, "output_tokens", uwhere);
  step.step_usage.model = detail::require_string(usage, "model", uwhere);
  step.step_usage.cost = detail::require_number(usage, "cost", uwhere);
  step.step_usage.llm_inference_time = detail::require_number(usage, "llm_inference_time", uwhere);
  step.step_usage.step_execution_time = detail::require_number(usage, "step_execution_time", uwhere);
  require_non_negative(static_cast<double>(step.step_usage.input_tokens), uwhere + ".input_tokens");
  require_non_negative(static_cast<double>(step.step_usage.output_tokens), uwhere + ".output_tokens");
  require_non_negative(step.step_usage.cost, uwhere + ".cost");
  require_non_negative(step.step_usage.llm_inference_time, uwhere + ".llm_inference_time");
  require_non_negative(step.step_usage.step_execution_time, uwhere + ".step_execution_time");
  step.step_usage.extra = detail::collect_extra(
      usage, {"input_tokens", "output_tokens", "model", "cost", "llm_inference_time", "step_execution_time"});

  const auto awhere = where + ".accumulated_usage";
  const auto& acc = detail::require(s, "accumulated_usage", where);
  detail::require_object(acc, awhere);
  step.accumulated_usage.accumulated_cost = detail::require_number(acc, "accumulated_cost", awhere);
  step.accumulated_usage.accumulated_time = detail::require_number(acc, "accumulated_time", awhere);
  require_non_negative(step.accumulated_usage.accumulated_cost, awhere + ".accumulated_cost");
  require_non_negative(step.accumulated_usage.accumulated_time, awhere + ".accumulated_time");
  step.accumulated_usage.extra = detail::collect_extra(acc, {"accumulated_cost", "accumulated_time"});

  step.extra = detail::collect_extra(
      s, {"step", "user_message", "agent", "environment", "step_usage", "accumulated_usage"});
  return step;
}

}  // namespace

Trajectory trajectory_from_json(const Json& doc) {
  if (!doc.is_array()) throw Error(ErrorKind::SchemaViolation, "trajectory: expected an array of steps");
  Trajectory t;
  t.steps.reserve(doc.size());
  for (std::size_t i = 0; i < doc.size(); ++i) {
    auto step = parse_step(doc[i], i);
    if (step.step != static_cast<int>(i)) {
      throw Error(ErrorKind::NonContiguousSteps,
                  "position " + std::to_string(i) + " holds step " + std::to_string(step.step));
    }
    t.steps.push_back(std::move(step));
  }
  return t;
}

Trajectory parse_trajectory(std::string_view raw_document) {
  return trajectory_from_json(detail::parse_document(raw_document));
}

Trajectory load_trajectory_file(const std::string& path) { return parse_trajectory(detail::read_file(path)); }

Json trajectory_to_json(const Trajectory& trajectory) {
  Json doc = Json::array();
  for (const auto& s : trajectory.steps) {
    Json js = Json::object();
    js["step"] = s.step;
    js["user_message"] = nullable(s.user_message);
    Json agent = Json::object();
    agent["thought"] = nullable(s.agent_thought);
    agent["action"] = nullable(s.agent_action);
    if (s.agent_name) agent["agent_name"] = *s.agent_name;
    detail::append_extra(agent, s.agent_extra);
    js["agent"] = std::move(agent);
    js["environment"] = nullable(s.environment);
    Json usage = Json::object();
    usage["input_tokens"] = s.step_usage.input_tokens;
    usage["output_tokens"] = s.step_usage.output_tokens;
    usage["model"] = s.step_usage.model;
    usage["cost"] = s.step_usage.cost;
    usage["llm_inference_time"] = s.step_usage.llm_inference_time;
    usage["step_execution_time"] = s.step_usage.step_execution_time;
    detail::append_extra(usage, s.step_usage.extra);
    js["step_usage"] = std::move(usage);
    Json acc = Json::object();
    acc["accumulated_cost"] = s.accumulated_usage.accumulated_cost;
    acc["accumulated_time"] = s.accumulated_usage.accumulated_time;
    detail::append_extra(acc, s.accumulated_usage.extra);
    js["accumulated_usage"] = std::move(acc);
    detail::append_extra(js, s.extra);
    doc.push_back(std::move(js));
  }
  return doc;
}

std::string serialize_trajectory(const Trajectory& trajectory, int indent) {
  return trajectory_to_json(trajectory).dump(indent) + "\n";
}

std::optional<LedgerMismatch> reconcile_usage(const Trajectory& trajectory, LedgerTolerance tolerance) {
  double cost = 0.0;
  double time = 0.0;
  for (const auto& s : trajectory.steps) {
    cost += s.step_usage.cost;
    time += s.step_usage.step_execution_time;
    if (std::abs(s.accumulated_usage.accumulated_cost - cost) > tolerance.cost) {
      return LedgerMismatch{s.step, LedgerMismatch::Field::Cost, cost, s.accumulated_usage.accumulated_cost};
    }
    if (std::abs(s.accumulated_usage.accumulated_time - time) > tolerance.time) {
      return LedgerMismatch{s.step, LedgerMismatch::Field::Time, time, s.accumulated_usage.accumulated_time};
    }
  }
  return std::nullopt;
}

std::string_view to_string(Cut cut) noexcept {
  switch (cut) {
    case Cut::Head: return "head";
    case Cut::Middle: return "middle";
    case Cut::Tail: return "tail";
    case Cut::None: return "none";
  }
  return "none";
}

std::optional<Cut> parse_cut(std::string_view name) {
  for (Cut c : {Cut::Head, Cut::Middle, Cut::Tail, Cut::None}) {
    if (text::iequals(name, to_string(c))) return c;
  }
  return std::nullopt;
}

std::string render_step(const TrajectoryStep& step) {
  std::string out = "[step " + std::to_string(step.step) + "]";
  if (step.user_message) out += " user: " + *step.user_message;
  out += " thought: " + step.agent_thought.value_or("");
  if (step.agent_action) out += " action: " + *step.agent_action;
  if (step.environment) out += " environment: " + *step.environment;
  return out;
}

std::string render_trajectory(const Trajectory& trajectory) {
  std::string out;
  for (std::size_t i = 0; i < trajectory.steps.size(); ++i) {
    if (i) out += "\n\n";
    out += render_step(trajectory.steps[i]);
  }
  return out;
}

namespace {

constexpr std::size_t kSeparator = 2;  // "\n\n" between rendered steps

std::string hard_prefix(std::string_view text, std::size_t budget) {
  return std::string(text.substr(0, text::utf8_floor(text, budget)));
}

std::string hard_suffix(std::string_view text, std::size_t budget) {
  const auto start = text::utf8_ceil(text, text.size() - std::min(budget, text.size()));
  return std::string(text.substr(start));
}

std::size_t joined_size(const std::vector<std::string>& parts) {
  std::size_t total = 0;
  for (const auto& p : parts) total += p.size();
  return parts.empty() ? 0 : total + kSeparator * (parts.size() - 1);
}

// Splits `available` bytes across parts: parts smaller than their fair share
// keep everything, the rest divide what is left evenly.
std::vector<std::size_t> water_fill(const std::vector<std::string>& parts, std::size_t available) {
  std::vector<std::size_t> order(parts.size());
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(),
                   [&](std::size_t a, std::size_t b) { return parts[a].size() < parts[b].size(); });
  std::vector<std::size_t> allowance(parts.size(), 0);
  std::size_t remaining = available;
  for (std::size_t k = 0; k < order.size(); ++k) {
    const std::size_t share = remaining / (order.size() - k);
    const std::size_t take = std::min(parts[order[k]].size(), share);
    allowance[order[k]] = take;
    remaining -= take;
  }
  return allowance;
}

}  // namespace

std::string cut_text(std::string_view text, Cut region, std::size_t budget) {
  if (text.size() <= budget) return std::string(text);
  const std::size_t marker = kElisionMarker.size();
  const std::size_t overhead = region == Cut::Middle ? marker + 2 : marker + 1;
  if (region == Cut::None || budget <= overhead) {
    return region == Cut::Head ? hard_suffix(text, budget) : hard_prefix(text, budget);
  }
  const std::size_t keep = budget - overhead;
  switch (region) {
    case Cut::Head:
      return std::string(kElisionMarker) + "\n" + hard_suffix(text, keep);
    case Cut::Tail:
      return hard_prefix(text, keep) + "\n" + std::string(kElisionMarker);
    case Cut::Middle: {
      const std::size_t tail = keep / 2;
      const std::size_t head = keep - tail;
      return hard_prefix(text, head) + "\n" + std::string(kElisionMarker) + "\n" + hard_suffix(text, tail);
    }
    case Cut::None:
      break;
  }
  return hard_prefix(text, budget);
}

std::string truncate(const Trajectory& trajectory, const TruncationStrategy& strategy) {
  std::vector<std::string> parts;
  parts.reserve(trajectory.steps.size());
  for (const auto& s : trajectory.steps) parts.push_back(render_step(s));

  const std::size_t budget = std::max<std::size_t>(strategy.budget, 1);
  if (joined_size(parts) <= budget) return render_trajectory(trajectory);

  if (strategy.trajectory_cut != Cut::None) {
    while (parts.size() > 1 && joined_size(parts) > budget) {
      switch (strategy.trajectory_cut) {
        case Cut::Head: parts.erase(parts.begin()); break;
        case Cut::Tail: parts.pop_back(); break;
        case Cut::Middle: parts.erase(parts.begin() + static_cast<std::ptrdiff_t>(parts.size() / 2)); break;
        case Cut::None: break;
      }
    }
  }

  if (strategy.step_cut != Cut::None && joined_size(parts) > budget) {
    const std::size_t separators = kSeparator * (parts.size() - 1);
    if (budget > separators) {
      const auto allowance = water_fill(parts, budget - separators);
      for (std::size_t i = 0; i < parts.size(); ++i) parts[i] = cut_text(parts[i], strategy.step_cut, allowance[i]);
    }
  }

  std::string out;
  for (std::size_t i = 0; i < parts.size(); ++i) {
    if (i) out += "\n\n";
    out += parts[i];
  }
  if (out.size() > budget) {
    out = strategy.trajectory_cut == Cut::Head ? hard_suffix(out, budget) : hard_prefix(out, budget);
  }
  return out;
}

bool detect_self_termination(const Trajectory& trajectory, double time_limit_seconds) {
  if (trajectory.steps.empty()) throw Error(ErrorKind::EmptyTrajectory, "no steps to inspect");
  const auto& last = trajectory.steps.back();
  if (!(last.accumulated_usage.accumulated_time < 0.95 * time_limit_seconds)) return false;
  if (last.environment) {
    if (text::icontains(*last.environment, "error") || text::icontains(*last.environment, "traceback")) {
      return false;
    }
  }
  return last.agent_thought.has_value() && !text::trim(*last.agent_thought).empty();
}

}  // namespace devjudge
