#include "devjudge/judge.hpp"

#include <algorithm>
#include <sstream>

#include "devjudge/error.hpp"
#include "devjudge/prompts.hpp"
#include "devjudge/text.hpp"

namespace devjudge {

std::string_view to_string(Setting setting) noexcept {
  return setting == Setting::BlackBox ? "black" : "gray";
}

std::optional<Setting> parse_setting(std::string_view name) {
  if (text::iequals(name, "black") || text::iequals(name, "black-box") || text::iequals(name, "blackbox")) {
    return Setting::BlackBox;
  }
  if (text::iequals(name, "gray") || text::iequals(name, "gray-box") || text::iequals(name, "graybox") ||
      text::iequals(name, "grey")) {
    return Setting::GrayBox;
  }
  return std::nullopt;
}

JudgeConfig JudgeConfig::defaults(Setting setting) {
  JudgeConfig config;
  config.setting = setting;
  if (setting == Setting::GrayBox) config.enabled_modules.insert(Module::Retrieve);
  return config;
}

void JudgeConfig::validate() const {
  if (enabled(Module::Retrieve) && setting != Setting::GrayBox) {
    throw Error(ErrorKind::InvalidConfig, "retrieve requires the gray-box setting");
  }
  if ((enabled(Module::Locate) || enabled(Module::Search)) && !enabled(Module::Graph)) {
    throw Error(ErrorKind::InvalidConfig, "locate and search require the graph module");
  }
  if (truncation.budget == 0) throw Error(ErrorKind::InvalidConfig, "truncation budget must be > 0");
  if (search_k == 0) throw Error(ErrorKind::InvalidConfig, "search_k must be >= 1");
  if (max_retries < 0) throw Error(ErrorKind::InvalidConfig, "max_retries must be >= 0");
}

std::set<Module> parse_module_list(std::string_view list) {
  std::set<Module> out;
  std::stringstream ss{std::string(list)};
  std::string item;
  while (std::getline(ss, item, ',')) {
    const auto name = text::trim(item);
    if (name.empty()) continue;
    auto m = parse_module(name);
    if (!m) throw Error(ErrorKind::InvalidConfig, "unknown module \"" + std::string(name) + "\"");
    if (*m != Module::Ask) out.insert(*m);
  }
  if (out.count(Module::Locate) || out.count(Module::Search)) out.insert(Module::Graph);
  return out;
}

std::string format_module_list(const std::set<Module>& modules) {
  std::vector<std::string> names;
  for (Module m : {Module::Graph, Module::Locate, Module::Read, Module::Search, Module::Retrieve, Module::Planning,
                   Module::Memory}) {
    if (modules.count(m)) names.emplace_back(to_string(m));
  }
  names.emplace_back("ask");
  return text::join(names, ",");
}

TruncationStrategy parse_truncation(std::string_view spec) {
  std::vector<std::string> parts;
  std::stringstream ss{std::string(spec)};
  std::string item;
  while (std::getline(ss, item, ':')) parts.emplace_back(text::trim(item));
  if (parts.size() != 3) throw Error(ErrorKind::InvalidConfig, "truncation must look like <traj>:<step>:<budget>");
  auto traj = parse_cut(parts[0]);
  auto step = parse_cut(parts[1]);
  if (!traj || !step) throw Error(ErrorKind::InvalidConfig, "truncation cuts are head|middle|tail|none");
  std::size_t budget = 0;
  try {
    std::size_t used = 0;
    const long long value = std::stoll(parts[2], &used);
    if (used != parts[2].size() || value <= 0) throw std::invalid_argument("budget");
    budget = static_cast<std::size_t>(value);
  } catch (const std::exception&) {
    throw Error(ErrorKind::InvalidConfig, "truncation budget must be a positive integer");
  }
  return {*traj, *step, budget};
}

std::optional<ParsedJudgment> parse_judgment(std::string_view reply) {
  constexpr std::string_view kSat = "<SATISFIED>";
  constexpr std::string_view kUnsat = "<UNSATISFIED>";
  const auto sat = reply.find(kSat);
  const auto unsat = reply.find(kUnsat);
  if (sat == std::string_view::npos && unsat == std::string_view::npos) return std::nullopt;
  ParsedJudgment out;
  std::size_t after = 0;
  if (unsat == std::string_view::npos || (sat != std::string_view::npos && sat < unsat)) {
    out.decision = Decision::Satisfied;
    after = sat + kSat.size();
  } else {
    out.decision = Decision::Unsatisfied;
    after = unsat + kUnsat.size();
  }
  const bool both = sat != std::string_view::npos && unsat != std::string_view::npos;
  out.confidence = both ? 0.5 : 1.0;
  out.justification = std::string(text::trim(reply.substr(after)));
  if (out.justification.empty()) out.justification = "(no justification given)";
  return out;
}

AskResult ask(int requirement_id, std::string_view criteria, const Evidence& evidence, JudgmentBackend& backend,
              int max_retries) {
  const auto prompt = prompts::ask_user(criteria, evidence.render());
  AskResult result;
  const int attempts = 1 + std::max(0, max_retries);
  for (int i = 0; i < attempts; ++i) {
    auto reply = backend.chat(prompts::judge_system(), prompt);
    result.usage += reply.usage;
    result.attempts = i + 1;
    if (auto parsed = parse_judgment(reply.text)) {
      result.verdict.requirement_id = requirement_id;
      result.verdict.decision = parsed->decision;
      result.verdict.confidence = parsed->confidence;
      result.verdict.justification = std::move(parsed->justification);
      result.verdict.evidence_used = evidence.refs();
      return result;
    }
  }
  throw Error(ErrorKind::MalformedJudgment, "requirement " + std::to_string(requirement_id) + ": no verdict token in " +
                                                std::to_string(attempts) + " replies");
}

namespace {

std::vector<std::string> criteria_targets(std::string_view criteria, const WorkspaceGraph& graph) {
  std::vector<std::string> out;
  for (const auto& mention : extract_path_mentions(criteria)) {
    auto p = normalize_workspace_path(mention, graph);
    if (p && std::find(out.begin(), out.end(), *p) == out.end()) out.push_back(*p);
    if (out.size() == kMaxLocatedPaths) break;
  }
  return out;
}

}  // namespace

RequirementOutcome judge_requirement(int requirement_id, std::string_view criteria,
                                     const std::vector<int>& prerequisites, const JudgeContext& context,
                                     const JudgeConfig& config, JudgmentBackend& backend) {
  if (config.enabled(Module::Retrieve) && context.trajectory == nullptr) {
    throw Error(ErrorKind::MissingTrajectory, "retrieve is enabled but no trajectory was supplied");
  }
  RequirementOutcome outcome;
  Evidence evidence;

  std::vector<Module> order;
  if (config.enabled(Module::Planning)) {
    std::set<Module> available{Module::Ask};
    for (Module m : default_module_order()) {
      if (config.enabled(m)) available.insert(m);
    }
    auto plan = plan_next(criteria, available, backend);
    outcome.usage += plan.usage;
    if (plan.fell_back) outcome.warnings.push_back("planning reply unparseable; using default order");
    order = std::move(plan.order);
  } else {
    for (Module m : default_module_order()) {
      if (m != Module::Ask && config.enabled(m)) order.push_back(m);
    }
  }

  std::vector<std::string> located;
  bool locate_ran = false;
  for (Module m : order) {
    try {
      switch (m) {
        case Module::Locate: {
          auto res = locate(criteria, context.graph, backend);
          outcome.usage += res.usage;
          for (const auto& p : res.paths) evidence.add({EvidenceSource::LocatedFile, p, p});
          located = std::move(res.paths);
          locate_ran = true;
          break;
        }
        case Module::Read: {
          const auto targets =
              locate_ran || config.enabled(Module::Locate) ? located : criteria_targets(criteria, context.graph);
          for (const auto& p : targets) evidence.add(read(p, context.graph, config.read));
          break;
        }
        case Module::Search:
          if (context.index == nullptr) throw Error(ErrorKind::EmptyIndex, "no search index supplied");
          search_evidence(criteria, *context.index, config.search_k, evidence);
          break;
        case Module::Retrieve: {
          auto res = retrieve(criteria, context.trajectory, config.truncation, backend);
          outcome.usage += res.usage;
          evidence.add(std::move(res.item));
          break;
        }
        case Module::Memory:
          if (context.memory != nullptr) {
            Requirement req;
            req.requirement_id = requirement_id;
            req.prerequisites = prerequisites;
            for (auto& item : context.memory->recall(req)) evidence.add(std::move(item));
          }
          break;
        default:
          break;
      }
    } catch (const Error& e) {
      if (e.kind() == ErrorKind::BackendUnavailable) throw;
      outcome.warnings.push_back("requirement " + std::to_string(requirement_id) + ": " +
                                 std::string(to_string(m)) + ": " + e.what());
    }
  }

  auto result = ask(requirement_id, criteria, evidence, backend, config.max_retries);
  outcome.usage += result.usage;
  outcome.verdict = std::move(result.verdict);
  if (config.enabled(Module::Memory) && context.memory != nullptr) context.memory->record(outcome.verdict);
  return outcome;
}

JudgeReport judge_task(const Task& task, const std::filesystem::path& workspace_root, const Trajectory* trajectory,
                       const JudgeConfig& config, JudgmentBackend& backend) {
  config.validate();
  if (auto cycle = validate_dag(task)) {
    std::vector<std::string> ids;
    for (int id : *cycle) ids.push_back(std::to_string(id));
    throw Error(ErrorKind::SchemaViolation, "task \"" + task.name + "\" has a prerequisite cycle [" +
                                                text::join(ids, ",") + "]");
  }
  if (config.enabled(Module::Retrieve) && trajectory == nullptr) {
    throw Error(ErrorKind::MissingTrajectory, "task \"" + task.name + "\": retrieve enabled without a trajectory");
  }

  const auto graph = build_graph(workspace_root, config.graph);
  std::optional<SearchIndex> index;
  if (config.enabled(Module::Search)) index = SearchIndex::build(graph);
  JudgmentMemory memory;
  JudgeContext context{graph, index ? &*index : nullptr, trajectory, &memory};

  JudgeReport report;
  report.task_name = task.name;
  report.config = config;
  report.workspace = workspace_stats(graph);

  for (int id : topological_order(task)) {
    const auto& req = task.requirements[static_cast<std::size_t>(id)];
    auto outcome = judge_requirement(id, req.criteria, req.prerequisites, context, config, backend);
    report.usage += outcome.usage;
    report.verdicts.push_back(std::move(outcome.verdict));
    for (auto& w : outcome.warnings) report.warnings.push_back(std::move(w));
  }
  std::sort(report.verdicts.begin(), report.verdicts.end(),
            [](const Verdict& a, const Verdict& b) { return a.requirement_id < b.requirement_id; });

  if (config.judge_preferences) {
    JudgeConfig pref_config = config;
    pref_config.enabled_modules.erase(Module::Memory);
    JudgeContext pref_context{graph, context.index, trajectory, nullptr};
    for (const auto& pref : task.preferences) {
      auto outcome = judge_requirement(pref.preference_id, pref.criteria, {}, pref_context, pref_config, backend);
      report.usage += outcome.usage;
      report.preference_verdicts.push_back(std::move(outcome.verdict));
      for (auto& w : outcome.warnings) report.warnings.push_back("preference " + std::move(w));
    }
  }
  return report;
}

namespace {

Json verdict_to_json(const Verdict& v, std::string_view id_key) {
  Json j = Json::object();
  j[std::string(id_key)] = v.requirement_id;
  j["decision"] = v.satisfied() ? "SATISFIED" : "UNSATISFIED";
  j["confidence"] = v.confidence;
  j["justification"] = v.justification;
  j["evidence_used"] = Json::array();
  for (const auto& ref : v.evidence_used) {
    j["evidence_used"].push_back(Json{{"source", to_string(ref.source)}, {"ref", ref.path_or_ref}});
  }
  return j;
}

}  // namespace

Json report_to_json(const Task& task, const JudgeReport& report) {
  Task judged = task;
  for (const auto& v : report.verdicts) {
    if (v.requirement_id >= 0 && static_cast<std::size_t>(v.requirement_id) < judged.requirements.size()) {
      judged.requirements[static_cast<std::size_t>(v.requirement_id)].satisfied = v.satisfied();
    }
  }
  for (const auto& v : report.preference_verdicts) {
    if (v.requirement_id >= 0 && static_cast<std::size_t>(v.requirement_id) < judged.preferences.size()) {
      judged.preferences[static_cast<std::size_t>(v.requirement_id)].satisfied = v.satisfied();
    }
  }
  judged.extra.erase("judge");
  Json doc = task_to_json(judged);

  Json judge = Json::object();
  judge["verdicts"] = Json::array();
  for (const auto& v : report.verdicts) judge["verdicts"].push_back(verdict_to_json(v, "requirement_id"));
  if (!report.preference_verdicts.empty()) {
    judge["preference_verdicts"] = Json::array();
    for (const auto& v : report.preference_verdicts) {
      judge["preference_verdicts"].push_back(verdict_to_json(v, "preference_id"));
    }
  }
  judge["usage"] = Json{{"input_tokens", report.usage.input_tokens},
                        {"output_tokens", report.usage.output_tokens},
                        {"cost", report.usage.cost},
                        {"wall_time", report.usage.wall_time}};
  const auto& c = report.config;
  judge["config"] = Json{{"setting", to_string(c.setting)},
                         {"modules", format_module_list(c.enabled_modules)},
                         {"truncation",
                          {{"trajectory_cut", to_string(c.truncation.trajectory_cut)},
                           {"step_cut", to_string(c.truncation.step_cut)},
                           {"budget", c.truncation.budget}}},
                         {"search_k", c.search_k},
                         {"max_retries", c.max_retries}};
  judge["workspace"] = Json{{"saved_code_files", report.workspace.saved_code_files},
                            {"saved_code_lines", report.workspace.saved_code_lines},
                            {"saved_files", report.workspace.saved_files}};
  judge["warnings"] = report.warnings;
  doc["judge"] = std::move(judge);
  return doc;
}

std::string serialize_report(const Task& task, const JudgeReport& report) {
  return report_to_json(task, report).dump(4) + "\n";
}

}  // namespace devjudge
