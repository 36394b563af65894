#include "doctest.h"

#include <fstream>

#include "devjudge/cli.hpp"
#include "devjudge/metrics.hpp"
#include "devjudge/task.hpp"
#include "support.hpp"

using namespace devjudge;
using testing_support::data_dir;
using testing_support::slurp;
using testing_support::spit;
using testing_support::TempDir;
namespace fs = std::filesystem;

namespace {

struct Run {
  int code;
  std::string out;
  std::string err;
};

Run run(std::vector<std::string> args) {
  std::ostringstream out, err;
  const int code = cli::run(args, out, err);
  return {code, out.str(), err.str()};
}

std::string e2e(const std::string& rel) { return (data_dir() / "e2e" / rel).string(); }
std::string stats_file(const std::string& rel) { return (data_dir() / "stats" / rel).string(); }

VerdictMatrix load_matrix(const std::string& path) {
  std::ifstream in(path);
  return matrix_from_rows(read_verdict_table(in));
}

}  // namespace

TEST_CASE("validate") {
  auto r = run({"validate", (data_dir() / "sample_task.json").string(), (data_dir() / "trajectory_sample.json").string()});
  CHECK(r.code == 0);
  CHECK(r.out.find("ok") != std::string::npos);

  TempDir dir;
  auto task = nlohmann::ordered_json::parse(slurp(e2e("tasks/chain.json")));
  task["requirements"][0]["prerequisites"] = {2};
  spit(dir / "cycle.json", task.dump(2));
  r = run({"validate", (dir / "cycle.json").string()});
  CHECK(r.code == 1);
  CHECK(r.out.find("cycle") != std::string::npos);
  CHECK(r.out.find("0 -> 2") != std::string::npos);

  auto traj = nlohmann::ordered_json::parse(slurp(data_dir() / "trajectory_sample.json"));
  traj[1]["accumulated_usage"]["accumulated_cost"] = 0.05;
  spit(dir / "ledger.json", traj.dump(2));
  r = run({"validate", (dir / "ledger.json").string()});
  CHECK(r.code == 1);
  CHECK(r.out.find("step 1") != std::string::npos);

  spit(dir / "junk.json", "{not json");
  CHECK(run({"validate", (dir / "junk.json").string(), (data_dir() / "sample_task.json").string()}).code == 1);
  CHECK(run({"validate"}).code == 2);
  CHECK(run({"--help"}).code == 0);
}

TEST_CASE("judge writes reports and a summary") {
  TempDir out;
  auto r = run({"judge", e2e("manifest_sabotaged.json"), "--out", out.path().string()});
  REQUIRE(r.code == 0);
  CHECK(fs::exists(out / "chain_hidden_state_visualization.report.json"));
  CHECK(fs::exists(out / "diamond_tabular_classifier.report.json"));
  const auto summary = nlohmann::json::parse(slurp(out / "summary.json"));
  CHECK(summary["aggregate"]["tasks_judged"] == 2);
  CHECK(summary["aggregate"]["requirements"] == 7);
  const auto& chain = summary["tasks"][0];
  CHECK(chain["requirements_met_independent"].get<double>() == doctest::Approx(2.0 / 3.0));
  CHECK(chain["requirements_met_dependent"].get<double>() == doctest::Approx(1.0 / 3.0));
  CHECK(summary["tasks"][1]["requirements_met_dependent"].get<double>() == doctest::Approx(0.5));

  const auto report = parse_task(slurp(out / "chain_hidden_state_visualization.report.json"));
  CHECK(report.requirements[1].satisfied == false);
  CHECK(slurp(out / "verdicts.csv").starts_with("judge,task,requirement_id,verdict"));
}

TEST_CASE("judge output is byte-identical across runs and job counts") {
  std::vector<std::string> files{"chain_hidden_state_visualization.report.json",
                                 "diamond_tabular_classifier.report.json", "summary.json", "verdicts.csv"};
  std::map<std::string, std::string> first;
  for (int i = 0; i < 4; ++i) {
    TempDir out;
    std::vector<std::string> args{"judge", e2e("manifest_good.json"), "--out", out.path().string()};
    if (i == 3) {
      args.push_back("--jobs");
      args.push_back("2");
    }
    REQUIRE(run(args).code == 0);
    for (const auto& f : files) {
      const auto bytes = slurp(out / f);
      if (i == 0) {
        first[f] = bytes;
      } else {
        CHECK(bytes == first[f]);
      }
    }
  }
}

TEST_CASE("gray-box run with a missing trajectory fails only that task") {
  TempDir dir;
  spit(dir / "traj/chain.json", slurp(data_dir() / "trajectory_sample.json"));
  nlohmann::ordered_json manifest{
      {"tasks", {e2e("tasks/chain.json"), e2e("tasks/diamond.json")}},
      {"workspace_root", (data_dir() / "e2e/workspaces").string() + "/{stem}/good"},
      {"trajectory_root", "traj/{stem}.json"},
      {"config", {{"setting", "gray"}, {"modules", "graph,locate,read,retrieve"}}},
  };
  spit(dir / "manifest.json", manifest.dump(2));
  const auto r = run({"judge", (dir / "manifest.json").string(), "--out", (dir / "out").string()});
  CHECK(r.code == 0);
  const auto summary = nlohmann::json::parse(slurp(dir / "out/summary.json"));
  CHECK(summary["aggregate"]["tasks_judged"] == 1);
  CHECK(summary["aggregate"]["tasks_failed"] == 1);
  CHECK(summary["tasks"][0]["status"] == "ok");
  CHECK(summary["tasks"][1]["status"] == "failed");
  CHECK(summary["tasks"][1]["error"].get<std::string>().find("MissingTrajectory") != std::string::npos);
}

TEST_CASE("judge exit codes") {
  TempDir out;
  auto r = run({"judge", e2e("manifest_good.json"), "--out", out.path().string(), "--backend", "openai-compat",
                "--endpoint", "http://127.0.0.1:1/v1"});
  CHECK(r.code == 3);
  r = run({"judge", e2e("manifest_good.json"), "--out", out.path().string(), "--setting", "purple"});
  CHECK(r.code == 2);
  r = run({"judge", e2e("manifest_good.json"), "--out", out.path().string(), "--modules", "retrieve"});
  CHECK(r.code == 2);
  r = run({"judge", (out / "nope.json").string()});
  CHECK(r.code == 2);
  // There is deliberately no flag for credentials.
  r = run({"judge", e2e("manifest_good.json"), "--api-key", "secret"});
  CHECK(r.code == 2);
}

TEST_CASE("stats over the fixture trio") {
  TempDir out;
  auto r = run({"stats", stats_file("humans.csv"), stats_file("agent.csv"), "--consensus", "majority", "--tasks",
                e2e("tasks/chain.json"), e2e("tasks/diamond.json"), "--out", out.path().string()});
  REQUIRE(r.code == 0);
  const auto stats = nlohmann::json::parse(slurp(out / "stats.json"));

  // Recompute with the library directly.
  VerdictMatrix humans = load_matrix(stats_file("humans.csv"));
  const auto agent = load_matrix(stats_file("agent.csv"));
  VerdictMatrix all = humans;
  all.add("agent", agent.vectors[0]);
  const auto consensus = majority_vote(all);
  const std::vector<Task> tasks{load_task_file(e2e("tasks/chain.json")), load_task_file(e2e("tasks/diamond.json"))};
  REQUIRE(stats["judges"].size() == 4);
  for (const auto& row : stats["judges"]) {
    const auto& v = all.at(row["judge"].get<std::string>());
    CHECK(row["alignment_rate"].get<double>() == doctest::Approx(alignment_rate(v, consensus)));
    CHECK(row["requirements_met_dependent"].get<double>() == doctest::Approx(requirements_met_dependent(tasks, v)));
    CHECK(row["shift_independent_pp"].get<double>() ==
          doctest::Approx(judge_shift(requirements_met_independent(v), requirements_met_independent(consensus))));
  }
  CHECK(stats["judges"][3].contains("average_precision"));
  CHECK(fs::exists(out / "pr_agent.csv"));
  CHECK(fs::exists(out / "majority.csv"));
  CHECK(stats["disagreement"].size() == 6);
  for (const auto& pair : stats["disagreement"]) {
    CHECK(pair["disagreement_rate"].get<double>() ==
          doctest::Approx(disagreement_rate(all.at(pair["a"].get<std::string>()), all.at(pair["b"].get<std::string>()))));
  }
}

TEST_CASE("stats edge cases") {
  TempDir dir;
  std::string rows = "judge,task,requirement_id,verdict\n";
  for (auto j : {"a", "b", "c"}) {
    for (int i = 0; i < 4; ++i) rows += std::string(j) + ",t," + std::to_string(i) + "," + (i % 2 ? "1" : "0") + "\n";
  }
  spit(dir / "same.csv", rows);
  auto r = run({"stats", (dir / "same.csv").string(), "--consensus", "a"});
  REQUIRE(r.code == 0);
  const auto stats = nlohmann::json::parse(r.out);
  for (const auto& pair : stats["disagreement"]) CHECK(pair["disagreement_rate"] == 0.0);

  r = run({"stats", (dir / "same.csv").string(), "--consensus", "nobody"});
  CHECK(r.code == 1);
  CHECK(r.err.find("nobody") != std::string::npos);

  spit(dir / "ragged.csv", "a,t,0,1\nb,t,1,1\n");
  CHECK(run({"stats", (dir / "ragged.csv").string(), "--consensus", "a"}).code == 1);
}

TEST_CASE("graph and query") {
  const auto ws = e2e("workspaces/diamond/good");
  auto r = run({"graph", ws});
  CHECK(r.code == 0);
  CHECK(r.out.find("data_loader.py") != std::string::npos);
  r = run({"graph", ws, "--json"});
  CHECK(r.code == 0);
  CHECK(nlohmann::json::parse(r.out).contains("nodes"));
  r = run({"query", ws, "load the data", "-k", "1"});
  CHECK(r.code == 0);
  CHECK(r.out.find("src/data_loader.py") != std::string::npos);
  CHECK(run({"graph", e2e("workspaces/missing")}).code == 1);
}
