#pragma once

#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "json.hpp"

namespace devjudge {

using Json = nlohmann::ordered_json;

struct StepUsage {
  long long input_tokens = 0;
  long long output_tokens = 0;
  std::string model;
  double cost = 0.0;                 // USD
  double llm_inference_time = 0.0;   // seconds
  double step_execution_time = 0.0;  // seconds
  Json extra = Json::object();
};

struct AccumulatedUsage {
  double accumulated_cost = 0.0;
  double accumulated_time = 0.0;
  Json extra = Json::object();
};

struct TrajectoryStep {
  int step = 0;
  std::optional<std::string> user_message;
  std::optional<std::string> agent_thought;
  std::optional<std::string> agent_action;
  std::optional<std::string> agent_name;
  std::optional<std::string> environment;
  StepUsage step_usage;
  AccumulatedUsage accumulated_usage;
  Json agent_extra = Json::object();
  Json extra = Json::object();
};

struct Trajectory {
  std::vector<TrajectoryStep> steps;

  [[nodiscard]] bool empty() const noexcept { return steps.empty(); }
};

Trajectory parse_trajectory(std::string_view raw_document);
Trajectory trajectory_from_json(const Json& doc);
Json trajectory_to_json(const Trajectory& trajectory);
std::string serialize_trajectory(const Trajectory& trajectory, int indent = 4);
Trajectory load_trajectory_file(const std::string& path);

struct LedgerTolerance {
  double cost = 1e-9;  // USD
  double time = 1e-3;  // seconds
};

struct LedgerMismatch {
  enum class Field { Cost, Time };
  int step = 0;
  Field field = Field::Cost;
  double expected = 0.0;
  double found = 0.0;
};

/// Checks every accumulated ledger entry against the running sum of step
/// entries; returns the first offending step, cost checked before time.
std::optional<LedgerMismatch> reconcile_usage(const Trajectory& trajectory,
                                              LedgerTolerance tolerance = {});

enum class Cut { Head, Middle, Tail, None };

std::string_view to_string(Cut cut) noexcept;
std::optional<Cut> parse_cut(std::string_view name);

struct TruncationStrategy {
  Cut trajectory_cut = Cut::Head;
  Cut step_cut = Cut::Middle;
  std::size_t budget = 60000;  // bytes of rendered text
};

/// Line inserted where characters were removed from a step.
inline constexpr std::string_view kElisionMarker = "\xE2\x80\xA6[truncated]\xE2\x80\xA6";

std::string render_step(const TrajectoryStep& step);
std::string render_trajectory(const Trajectory& trajectory);

/// Renders the trajectory and removes content until it fits in
/// strategy.budget. Whole steps are dropped from the trajectory_cut region
/// first (at least one step is kept), then each remaining step is cut in its
/// step_cut region. Text that still does not fit is hard-cut at the end.
std::string truncate(const Trajectory& trajectory, const TruncationStrategy& strategy);

/// Removes bytes from one region of text so the result fits in `budget`
/// bytes, inserting the elision marker where text was removed.
std::string cut_text(std::string_view text, Cut region, std::size_t budget);

inline constexpr double kDefaultTimeLimitSeconds = 1800.0;

bool detect_self_termination(const Trajectory& trajectory,
                             double time_limit_seconds = kDefaultTimeLimitSeconds);

}  // namespace devjudge
