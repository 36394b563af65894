#include "devjudge/cli.hpp"

#include <omp.h>

#include <algorithm>
#include <filesystem>
#include <fstream>
#include <memory>
#include <optional>
#include <sstream>

#include "CLI11.hpp"
#include "devjudge/error.hpp"
#include "devjudge/judge.hpp"
#include "devjudge/metrics.hpp"
#include "devjudge/openai_backend.hpp"
#include "devjudge/oracle_backend.hpp"
#include "devjudge/search.hpp"
#include "devjudge/text.hpp"
#include "json_util.hpp"

namespace devjudge::cli {

namespace fs = std::filesystem;

namespace {

int exit_code_for(const Error& e) {
  switch (e.kind()) {
    case ErrorKind::InvalidConfig: return kConfigError;
    case ErrorKind::BackendUnavailable: return kBackendFailure;
    default: return kDomainError;
  }
}

void write_file(const fs::path& path, std::string_view content) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw Error(ErrorKind::InvalidConfig, "cannot write " + path.string());
  out << content;
}

std::string file_safe(std::string_view name) {
  std::string out;
  for (char c : name) {
    const auto u = static_cast<unsigned char>(c);
    out += (std::isalnum(u) || c == '-' || c == '_' || c == '.') ? c : '_';
  }
  if (out.empty() || out.front() == '.') out.insert(out.begin(), '_');
  return out;
}

std::string replace_all(std::string s, std::string_view from, std::string_view to) {
  for (auto pos = s.find(from); pos != std::string::npos; pos = s.find(from, pos + to.size())) {
    s.replace(pos, from.size(), to);
  }
  return s;
}

Json usage_json(const UsageLedger& u) {
  return Json{{"input_tokens", u.input_tokens},
              {"output_tokens", u.output_tokens},
              {"cost", u.cost},
              {"wall_time", u.wall_time}};
}

// ---------------------------------------------------------------- validate

enum class DocKind { Auto, Task, Trajectory };

int cmd_validate(const std::vector<std::string>& paths, DocKind kind, double cost_tol, double time_tol,
                 std::ostream& out) {
  int failures = 0;
  for (const auto& path : paths) {
    try {
      const auto doc = detail::parse_document(detail::read_file(path));
      DocKind k = kind;
      if (k == DocKind::Auto) k = doc.is_array() ? DocKind::Trajectory : DocKind::Task;
      if (k == DocKind::Task) {
        const auto task = task_from_json(doc);
        if (auto cycle = validate_dag(task)) {
          std::vector<std::string> ids;
          for (int id : *cycle) ids.push_back(std::to_string(id));
          throw Error(ErrorKind::SchemaViolation, "prerequisite cycle " + text::join(ids, " -> "));
        }
        out << "ok " << path << ": task \"" << task.name << "\", " << task.requirements.size() << " requirements, "
            << task.preferences.size() << " preferences\n";
      } else {
        const auto traj = trajectory_from_json(doc);
        if (auto m = reconcile_usage(traj, LedgerTolerance{cost_tol, time_tol})) {
          std::ostringstream msg;
          msg << "ledger mismatch at step " << m->step << " ("
              << (m->field == LedgerMismatch::Field::Cost ? "accumulated_cost" : "accumulated_time")
              << "): expected " << text::format_number(m->expected, 12) << ", found "
              << text::format_number(m->found, 12);
          throw Error(ErrorKind::SchemaViolation, msg.str());
        }
        out << "ok " << path << ": trajectory, " << traj.steps.size() << " steps\n";
      }
    } catch (const Error& e) {
      ++failures;
      out << "FAIL " << path << ": " << e.what() << "\n";
    }
  }
  return failures == 0 ? kOk : kDomainError;
}

// ---------------------------------------------------------------- judge

struct JudgeFlags {
  std::string manifest;
  std::optional<std::string> setting, modules, truncate, backend, endpoint, model, rules, out, label;
  std::optional<int> jobs;
  bool preferences = false;
};

struct TaskEntry {
  fs::path task_path;
  std::optional<Task> task;
  fs::path workspace;
  std::optional<fs::path> trajectory_path;
  std::string error;
  std::optional<JudgeReport> report;
  bool fatal = false;
};

std::unique_ptr<JudgmentBackend> make_backend(const std::string& kind, const Json& spec, const fs::path& base,
                                              const JudgeFlags& flags, std::ostream& err) {
  if (kind == "oracle") {
    std::optional<std::string> rules = flags.rules;
    if (!rules && spec.contains("rules")) rules = (base / spec["rules"].get<std::string>()).string();
    if (!rules) return std::make_unique<RuleOracleBackend>();
    try {
      auto doc = detail::parse_document(detail::read_file(*rules));
      return std::make_unique<RuleOracleBackend>(RuleOracleBackend::rules_from_json(doc));
    } catch (const Error& e) {
      throw Error(ErrorKind::InvalidConfig, "rules file " + *rules + ": " + e.what());
    }
  }
  if (kind == "openai-compat") {
    OpenAICompatOptions options;
    if (spec.contains("endpoint")) options.endpoint = spec["endpoint"].get<std::string>();
    if (spec.contains("model")) options.model = spec["model"].get<std::string>();
    if (spec.contains("context_budget")) options.context_budget = spec["context_budget"].get<std::size_t>();
    if (spec.contains("timeout_seconds")) options.timeout_seconds = spec["timeout_seconds"].get<double>();
    if (spec.contains("pricing")) {
      options.pricing.input_per_token = spec["pricing"].value("input_per_token", options.pricing.input_per_token);
      options.pricing.output_per_token = spec["pricing"].value("output_per_token", options.pricing.output_per_token);
    }
    if (flags.endpoint) options.endpoint = *flags.endpoint;
    if (flags.model) options.model = *flags.model;
    if (auto key = api_key_from_environment()) {
      options.api_key = *key;
    } else {
      err << "note: " << kApiKeyEnv << " is not set; sending requests without credentials\n";
    }
    return std::make_unique<OpenAICompatBackend>(std::move(options));
  }
  throw Error(ErrorKind::InvalidConfig, "unknown backend \"" + kind + "\" (expected oracle or openai-compat)");
}

JudgeConfig config_from(const Json& spec, const JudgeFlags& flags) {
  auto get_string = [&](const char* key) -> std::optional<std::string> {
    if (!spec.contains(key)) return std::nullopt;
    if (!spec[key].is_string()) throw Error(ErrorKind::InvalidConfig, std::string("config.") + key + " must be a string");
    return spec[key].get<std::string>();
  };
  auto setting_name = flags.setting ? flags.setting : get_string("setting");
  Setting setting = Setting::BlackBox;
  if (setting_name) {
    auto s = parse_setting(*setting_name);
    if (!s) throw Error(ErrorKind::InvalidConfig, "setting must be black or gray, got \"" + *setting_name + "\"");
    setting = *s;
  }
  auto config = JudgeConfig::defaults(setting);
  if (auto m = flags.modules ? flags.modules : get_string("modules")) config.enabled_modules = parse_module_list(*m);
  if (auto t = flags.truncate ? flags.truncate : get_string("truncate")) config.truncation = parse_truncation(*t);
  try {
    if (spec.contains("search_k")) config.search_k = spec["search_k"].get<std::size_t>();
    if (spec.contains("max_retries")) config.max_retries = spec["max_retries"].get<int>();
    if (spec.contains("judge_preferences")) config.judge_preferences = spec["judge_preferences"].get<bool>();
    if (spec.contains("read_max_bytes")) config.read.max_bytes = spec["read_max_bytes"].get<std::size_t>();
    if (spec.contains("chunk_max_lines")) config.graph.chunk_max_lines = spec["chunk_max_lines"].get<std::size_t>();
  } catch (const Json::exception& e) {
    throw Error(ErrorKind::InvalidConfig, std::string("config: ") + e.what());
  }
  if (flags.preferences) config.judge_preferences = true;
  config.validate();
  return config;
}

int cmd_judge(const JudgeFlags& flags, std::ostream& out, std::ostream& err) {
  Json manifest;
  try {
    manifest = detail::parse_document(detail::read_file(flags.manifest));
  } catch (const Error& e) {
    throw Error(ErrorKind::InvalidConfig, "manifest " + flags.manifest + ": " + e.what());
  }
  if (!manifest.is_object() || !manifest.contains("tasks") || !manifest["tasks"].is_array() ||
      !manifest.contains("workspace_root") || !manifest["workspace_root"].is_string()) {
    throw Error(ErrorKind::InvalidConfig, "manifest needs \"tasks\" (array) and \"workspace_root\" (string)");
  }
  const fs::path base = fs::absolute(flags.manifest).parent_path();
  const Json config_spec = manifest.value("config", Json::object());
  const Json backend_spec = manifest.value("backend", Json::object());
  const auto config = config_from(config_spec, flags);
  const std::string backend_kind = flags.backend.value_or(backend_spec.value("kind", std::string("oracle")));
  auto backend = make_backend(backend_kind, backend_spec, base, flags, err);
  const std::string label = flags.label.value_or(manifest.value("label", std::string("agent-judge")));

  fs::path out_dir = flags.out ? fs::path(*flags.out)
                               : base / manifest.value("output_dir", std::string("devjudge-out"));
  std::error_code ec;
  fs::create_directories(out_dir, ec);
  if (ec) throw Error(ErrorKind::InvalidConfig, "cannot create " + out_dir.string() + ": " + ec.message());

  const auto ws_pattern = manifest["workspace_root"].get<std::string>();
  const std::optional<std::string> traj_pattern =
      manifest.contains("trajectory_root") && manifest["trajectory_root"].is_string()
          ? std::optional<std::string>(manifest["trajectory_root"].get<std::string>())
          : std::nullopt;

  std::vector<TaskEntry> entries;
  for (const auto& t : manifest["tasks"]) {
    if (!t.is_string()) throw Error(ErrorKind::InvalidConfig, "manifest tasks must be paths");
    TaskEntry e;
    e.task_path = base / t.get<std::string>();
    try {
      e.task = load_task_file(e.task_path.string());
      const auto stem = e.task_path.stem().string();
      auto resolve = [&](const std::string& pattern) {
        return base / replace_all(replace_all(pattern, "{name}", e.task->name), "{stem}", stem);
      };
      e.workspace = resolve(ws_pattern);
      if (traj_pattern) {
        const auto p = resolve(*traj_pattern);
        if (fs::exists(p)) e.trajectory_path = p;
      }
    } catch (const Error& ex) {
      e.error = ex.what();
    }
    entries.push_back(std::move(e));
  }

  int jobs = flags.jobs.value_or(1);
  if (jobs < 1) throw Error(ErrorKind::InvalidConfig, "--jobs must be >= 1");
  if (!backend->concurrent_safe()) jobs = 1;

  const auto n = static_cast<std::ptrdiff_t>(entries.size());
#pragma omp parallel for schedule(dynamic, 1) num_threads(jobs) if (jobs > 1)
  for (std::ptrdiff_t i = 0; i < n; ++i) {
    auto& e = entries[static_cast<std::size_t>(i)];
    if (!e.task) continue;
    try {
      std::optional<Trajectory> trajectory;
      if (e.trajectory_path) trajectory = load_trajectory_file(e.trajectory_path->string());
      e.report = judge_task(*e.task, e.workspace, trajectory ? &*trajectory : nullptr, config, *backend);
    } catch (const Error& ex) {
      e.error = ex.what();
      e.fatal = ex.kind() == ErrorKind::BackendUnavailable;
    } catch (const std::exception& ex) {
      e.error = ex.what();
    }
  }

  std::vector<Task> judged_tasks;
  VerdictVector all;
  std::vector<LabeledVerdict> rows;
  Json task_rows = Json::array();
  UsageLedger total;
  bool fatal = false;
  std::set<std::string> used_names;
  for (const auto& e : entries) {
    Json row = Json::object();
    row["task_file"] = fs::relative(e.task_path, base).generic_string();
    if (e.task) row["name"] = e.task->name;
    if (!e.report) {
      row["status"] = "failed";
      row["error"] = e.error;
      fatal = fatal || e.fatal;
      err << "task " << row["task_file"].get<std::string>() << " failed: " << e.error << "\n";
      task_rows.push_back(std::move(row));
      continue;
    }
    const auto& task = *e.task;
    const auto& report = *e.report;
    auto file_name = file_safe(task.name);
    while (!used_names.insert(file_name).second) file_name += "_";
    file_name += ".report.json";
    write_file(out_dir / file_name, serialize_report(task, report));

    VerdictVector own;
    for (const auto& v : report.verdicts) {
      own.emplace(VerdictKey{task.name, v.requirement_id}, v.satisfied());
      all[VerdictKey{task.name, v.requirement_id}] = v.satisfied();
      rows.push_back({label, VerdictKey{task.name, v.requirement_id}, v.satisfied(), v.confidence});
    }
    const std::span<const Task> one(&task, 1);
    row["status"] = "ok";
    row["report"] = file_name;
    if (!own.empty()) {
      row["requirements_met_independent"] = requirements_met_independent(own);
      row["requirements_met_dependent"] = requirements_met_dependent(one, own);
    }
    row["solved"] = task_solve_rate(one, own) == 1.0;
    row["warnings"] = report.warnings.size();
    row["usage"] = usage_json(report.usage);
    total += report.usage;
    judged_tasks.push_back(task);
    task_rows.push_back(std::move(row));
  }

  Json aggregate = Json::object();
  aggregate["tasks_total"] = entries.size();
  aggregate["tasks_judged"] = judged_tasks.size();
  aggregate["tasks_failed"] = entries.size() - judged_tasks.size();
  aggregate["requirements"] = all.size();
  if (!all.empty()) {
    aggregate["requirements_met_independent"] = requirements_met_independent(all);
    aggregate["requirements_met_dependent"] = requirements_met_dependent(judged_tasks, all);
  }
  if (!judged_tasks.empty()) aggregate["task_solve_rate"] = task_solve_rate(judged_tasks, all);
  aggregate["usage"] = usage_json(total);

  Json summary = Json::object();
  summary["label"] = label;
  summary["backend"] = backend->name();
  summary["config"] = Json{{"setting", to_string(config.setting)},
                           {"modules", format_module_list(config.enabled_modules)},
                           {"truncate", std::string(to_string(config.truncation.trajectory_cut)) + ":" +
                                            std::string(to_string(config.truncation.step_cut)) + ":" +
                                            std::to_string(config.truncation.budget)}};
  summary["aggregate"] = std::move(aggregate);
  summary["tasks"] = std::move(task_rows);
  write_file(out_dir / "summary.json", summary.dump(4) + "\n");

  std::ostringstream csv;
  write_verdict_table(csv, rows);
  write_file(out_dir / "verdicts.csv", csv.str());

  out << "judged " << judged_tasks.size() << "/" << entries.size() << " tasks";
  if (!all.empty()) {
    out << "; requirements met (I) " << text::format_number(100.0 * requirements_met_independent(all), 2)
        << "%, (D) " << text::format_number(100.0 * requirements_met_dependent(judged_tasks, all), 2) << "%";
  }
  out << "; output in " << out_dir.string() << "\n";
  return fatal ? kBackendFailure : kOk;
}

// ---------------------------------------------------------------- stats

int cmd_stats(const std::vector<std::string>& tables, const std::string& consensus_arg,
              const std::vector<std::string>& task_files, const std::optional<std::string>& out_dir,
              std::ostream& out, std::ostream& err) {
  std::vector<LabeledVerdict> rows;
  for (const auto& path : tables) {
    std::ifstream in(path);
    if (!in) throw Error(ErrorKind::MalformedDocument, "cannot read " + path);
    auto part = read_verdict_table(in);
    rows.insert(rows.end(), part.begin(), part.end());
  }
  const auto matrix = matrix_from_rows(rows);
  if (matrix.judges.empty()) throw Error(ErrorKind::EmptyInput, "no verdict rows found");

  std::map<std::pair<std::string, VerdictKey>, double> confidences;
  for (const auto& r : rows) {
    if (r.confidence) confidences[{r.judge, r.key}] = *r.confidence;
  }

  VerdictVector consensus;
  std::string consensus_label = consensus_arg;
  if (matrix.contains(consensus_arg)) {
    consensus = matrix.at(consensus_arg);
  } else if (fs::is_regular_file(consensus_arg)) {
    std::ifstream in(consensus_arg);
    const auto cm = matrix_from_rows(read_verdict_table(in));
    if (cm.judges.empty()) throw Error(ErrorKind::EmptyInput, "consensus file has no rows");
    consensus = cm.vectors.size() == 1 ? cm.vectors.front() : majority_vote(cm);
    consensus_label = cm.vectors.size() == 1 ? cm.judges.front() : "majority(" + consensus_arg + ")";
  } else if (consensus_arg == "majority") {
    consensus = majority_vote(matrix);
  } else {
    err << "consensus \"" << consensus_arg << "\" is neither a judge label in the tables nor a file\n";
    return kDomainError;
  }

  std::vector<Task> tasks;
  for (const auto& f : task_files) tasks.push_back(load_task_file(f));

  const double ref_i = requirements_met_independent(consensus);
  std::optional<double> ref_d;
  if (!tasks.empty()) ref_d = requirements_met_dependent(tasks, consensus);

  if (out_dir) {
    std::error_code ec;
    fs::create_directories(*out_dir, ec);
    if (ec) throw Error(ErrorKind::InvalidConfig, "cannot create " + *out_dir);
  }

  Json report = Json::object();
  report["consensus"] = consensus_label;
  report["requirements"] = consensus.size();
  Json judges = Json::array();
  for (std::size_t j = 0; j < matrix.judges.size(); ++j) {
    const auto& label = matrix.judges[j];
    const auto& v = matrix.vectors[j];
    Json row = Json::object();
    row["judge"] = label;
    row["requirements_met_independent"] = requirements_met_independent(v);
    row["alignment_rate"] = alignment_rate(v, consensus);
    row["shift_independent_pp"] = judge_shift(requirements_met_independent(v), ref_i);
    if (ref_d) {
      const double d = requirements_met_dependent(tasks, v);
      row["requirements_met_dependent"] = d;
      row["shift_dependent_pp"] = judge_shift(d, *ref_d);
      row["task_solve_rate"] = task_solve_rate(tasks, v);
    }
    std::vector<std::pair<double, bool>> items;
    for (const auto& [key, truth] : consensus) {
      auto it = confidences.find({label, key});
      if (it == confidences.end()) {
        items.clear();
        break;
      }
      // Confidence is in the judge's own verdict; flip it into P(satisfied).
      const bool said = v.at(key);
      items.emplace_back(said ? it->second : 1.0 - it->second, truth);
    }
    if (!items.empty()) {
      const auto curve = pr_curve(items);
      row["average_precision"] = curve.average_precision;
      row["pr_points"] = curve.points.size();
      if (out_dir) {
        std::ostringstream csv;
        write_pr_csv(csv, curve);
        write_file(fs::path(*out_dir) / ("pr_" + file_safe(label) + ".csv"), csv.str());
      }
    }
    judges.push_back(std::move(row));
  }
  report["judges"] = std::move(judges);

  Json pairs = Json::array();
  for (std::size_t a = 0; a < matrix.judges.size(); ++a) {
    for (std::size_t b = a + 1; b < matrix.judges.size(); ++b) {
      pairs.push_back(Json{{"a", matrix.judges[a]},
                           {"b", matrix.judges[b]},
                           {"disagreement_rate", disagreement_rate(matrix.vectors[a], matrix.vectors[b])}});
    }
  }
  report["disagreement"] = std::move(pairs);

  if (matrix.judges.size() >= 2) {
    const auto majority = majority_vote(matrix);
    report["majority_vote"] = Json{{"requirements_met_independent", requirements_met_independent(majority)},
                                   {"alignment_rate", alignment_rate(majority, consensus)}};
    if (out_dir) {
      std::vector<LabeledVerdict> mrows;
      for (const auto& [key, value] : majority) mrows.push_back({"majority", key, value, std::nullopt});
      std::ostringstream csv;
      write_verdict_table(csv, mrows);
      write_file(fs::path(*out_dir) / "majority.csv", csv.str());
    }
  }

  const auto text_out = report.dump(4) + "\n";
  if (out_dir) write_file(fs::path(*out_dir) / "stats.json", text_out);
  out << text_out;
  return kOk;
}

// ---------------------------------------------------------------- graph / query

int cmd_graph(const std::string& root, bool as_json, std::ostream& out) {
  const auto graph = build_graph(root);
  if (as_json) {
    out << graph.dump().dump(2) << "\n";
    return kOk;
  }
  out << graph.render_tree("/" + graph.root_dir().filename().string());
  const auto stats = workspace_stats(graph);
  out << "\ncode files: " << stats.saved_code_files << ", code lines: " << stats.saved_code_lines
      << ", files: " << stats.saved_files << "\n";
  return kOk;
}

int cmd_query(const std::string& root, const std::string& query, std::size_t k, bool fuzzy, std::ostream& out) {
  const auto graph = build_graph(root);
  const auto index = SearchIndex::build(graph);
  const auto hits = fuzzy ? fuzzy_search(query, index, k) : search(query, index, k);
  for (const auto& h : hits) {
    out << text::format_number(h.score, 6) << "\t" << h.path << ":" << h.start_line << "\n";
  }
  return kOk;
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"devjudge: evidence-gathering judge for code-generation agent outputs", "devjudge"};
  app.require_subcommand(1);
  app.set_version_flag("--version", "devjudge 0.1.0");

  auto* validate = app.add_subcommand("validate", "Validate task and trajectory documents");
  std::vector<std::string> validate_paths;
  std::string validate_kind = "auto";
  double cost_tol = LedgerTolerance{}.cost;
  double time_tol = LedgerTolerance{}.time;
  validate->add_option("paths", validate_paths, "Documents to check")->required();
  validate->add_option("--kind", validate_kind, "auto|task|trajectory")
      ->check(CLI::IsMember({"auto", "task", "trajectory"}));
  validate->add_option("--cost-tolerance", cost_tol, "Ledger tolerance for accumulated cost (USD)");
  validate->add_option("--time-tolerance", time_tol, "Ledger tolerance for accumulated time (s)");

  auto* judge = app.add_subcommand("judge", "Judge every task listed in a run manifest");
  JudgeFlags jf;
  judge->add_option("manifest", jf.manifest, "Run manifest (JSON)")->required();
  judge->add_option("--setting", jf.setting, "black|gray");
  judge->add_option("--modules", jf.modules, "Comma list: graph,locate,read,search,retrieve,planning,memory");
  judge->add_option("--truncate", jf.truncate, "<traj>:<step>:<budget>, cuts head|middle|tail|none");
  judge->add_option("--backend", jf.backend, "oracle|openai-compat");
  judge->add_option("--endpoint", jf.endpoint, "Chat-completions base URL");
  judge->add_option("--model", jf.model, "Model name for openai-compat");
  judge->add_option("--rules", jf.rules, "Rule file for the oracle backend");
  judge->add_option("--jobs", jf.jobs, "Tasks judged in parallel (default 1)");
  judge->add_option("--out", jf.out, "Output directory");
  judge->add_option("--label", jf.label, "Judge label written to verdicts.csv");
  judge->add_flag("--preferences", jf.preferences, "Also judge preferences");

  auto* stats = app.add_subcommand("stats", "Agreement, shift and PR statistics over verdict tables");
  std::vector<std::string> tables, task_files;
  std::string consensus;
  std::optional<std::string> stats_out;
  stats->add_option("tables", tables, "Verdict tables (judge,task,requirement_id,verdict[,confidence])")
      ->required();
  stats->add_option("--consensus", consensus, "Judge label, verdict-table file, or 'majority'")->required();
  stats->add_option("--tasks", task_files, "Task files, enabling dependent metrics");
  stats->add_option("--out", stats_out, "Directory for stats.json and CSV exports");

  auto* graph = app.add_subcommand("graph", "Print the workspace graph");
  std::string graph_root;
  bool graph_json = false;
  graph->add_option("root", graph_root, "Workspace directory")->required();
  graph->add_flag("--json", graph_json, "Dump nodes and edges as JSON");

  auto* query = app.add_subcommand("query", "Search a workspace's code snippets");
  std::string query_root, query_text;
  std::size_t query_k = 3;
  bool query_fuzzy = false;
  query->add_option("root", query_root, "Workspace directory")->required();
  query->add_option("query", query_text, "Query text")->required();
  query->add_option("-k", query_k, "Number of hits");
  query->add_flag("--fuzzy", query_fuzzy, "Edit-distance search instead of BM25");

  std::vector<std::string> reversed(args.rbegin(), args.rend());
  try {
    app.parse(reversed);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kOk : kConfigError;
  }

  try {
    if (validate->parsed()) {
      const auto kind = validate_kind == "task"         ? DocKind::Task
                        : validate_kind == "trajectory" ? DocKind::Trajectory
                                                        : DocKind::Auto;
      return cmd_validate(validate_paths, kind, cost_tol, time_tol, out);
    }
    if (judge->parsed()) return cmd_judge(jf, out, err);
    if (stats->parsed()) return cmd_stats(tables, consensus, task_files, stats_out, out, err);
    if (graph->parsed()) return cmd_graph(graph_root, graph_json, out);
    if (query->parsed()) return cmd_query(query_root, query_text, query_k, query_fuzzy, out);
  } catch (const Error& e) {
    err << "error: " << e.what() << "\n";
    return exit_code_for(e);
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return kDomainError;
  }
  return kConfigError;
}

}  // namespace devjudge::cli
