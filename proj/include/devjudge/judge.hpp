#pragma once

#include <filesystem>
#include <optional>
#include <set>
#include <string>
#include <string_view>
#include <vector>

#include "backend.hpp"
#include "evidence.hpp"
#include "task.hpp"
#include "trajectory.hpp"
#include "verdict.hpp"
#include "workspace.hpp"

namespace devjudge {

enum class Setting { BlackBox, GrayBox };

std::string_view to_string(Setting setting) noexcept;
std::optional<Setting> parse_setting(std::string_view name);

struct JudgeConfig {
  Setting setting = Setting::BlackBox;
  std::set<Module> enabled_modules{Module::Graph, Module::Locate, Module::Read};
  TruncationStrategy truncation{};
  std::size_t search_k = 3;
  int max_retries = 2;
  bool judge_preferences = false;
  ReadOptions read{};
  GraphOptions graph{};

  /// graph + locate + read, plus retrieve in the gray-box setting.
  static JudgeConfig defaults(Setting setting);

  [[nodiscard]] bool enabled(Module m) const { return enabled_modules.count(m) != 0; }
  /// Throws InvalidConfig when retrieve is on outside the gray-box setting or
  /// a workspace module is on without the graph.
  void validate() const;
};

/// "locate,read,retrieve" -> modules; "ask" is accepted and ignored.
std::set<Module> parse_module_list(std::string_view list);
std::string format_module_list(const std::set<Module>& modules);
/// "head:middle:60000" -> strategy.
TruncationStrategy parse_truncation(std::string_view spec);

struct ParsedJudgment {
  Decision decision = Decision::Unsatisfied;
  double confidence = 0.0;
  std::string justification;
};

/// First <SATISFIED>/<UNSATISFIED> token wins; std::nullopt when neither occurs.
std::optional<ParsedJudgment> parse_judgment(std::string_view reply);

struct AskResult {
  Verdict verdict;
  UsageLedger usage;
  int attempts = 0;
};

AskResult ask(int requirement_id, std::string_view criteria, const Evidence& evidence, JudgmentBackend& backend,
              int max_retries);

struct RequirementOutcome {
  Verdict verdict;
  UsageLedger usage;
  std::vector<std::string> warnings;
};

struct JudgeContext {
  const WorkspaceGraph& graph;
  const SearchIndex* index = nullptr;  // required when search is enabled
  const Trajectory* trajectory = nullptr;
  JudgmentMemory* memory = nullptr;  // required when memory is enabled
};

RequirementOutcome judge_requirement(int requirement_id, std::string_view criteria,
                                     const std::vector<int>& prerequisites, const JudgeContext& context,
                                     const JudgeConfig& config, JudgmentBackend& backend);

struct JudgeReport {
  std::string task_name;
  std::vector<Verdict> verdicts;  // ordered by requirement_id
  std::vector<Verdict> preference_verdicts;
  UsageLedger usage;
  JudgeConfig config;
  std::vector<std::string> warnings;
  WorkspaceStats workspace;
};

JudgeReport judge_task(const Task& task, const std::filesystem::path& workspace_root,
                       const Trajectory* trajectory, const JudgeConfig& config, JudgmentBackend& backend);

/// The task document with satisfied slots filled, plus a "judge" block.
Json report_to_json(const Task& task, const JudgeReport& report);
std::string serialize_report(const Task& task, const JudgeReport& report);

}  // namespace devjudge
