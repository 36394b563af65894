#include "doctest.h"

#include <random>

#include "devjudge/error.hpp"
#include "devjudge/evidence.hpp"
#include "devjudge/oracle_backend.hpp"
#include "devjudge/prompts.hpp"
#include "support.hpp"

using namespace devjudge;
using testing_support::ScriptedBackend;
using testing_support::spit;
using testing_support::TempDir;

namespace {

ErrorKind kind_of(const std::function<void()>& fn) {
  try {
    fn();
  } catch (const Error& e) {
    return e.kind();
  }
  FAIL("no error thrown");
  return ErrorKind::InvalidConfig;
}

TrajectoryStep make_step(int n, std::string thought, std::string env) {
  TrajectoryStep s;
  s.step = n;
  s.agent_thought = std::move(thought);
  s.environment = std::move(env);
  return s;
}

}  // namespace

TEST_CASE("evidence bookkeeping") {
  Evidence ev;
  CHECK(ev.empty());
  ev.add({EvidenceSource::MemoryRecall, "requirement 0", "mem"});
  ev.add({EvidenceSource::FileContent, "src/a.py", "1| x\n"});
  ev.add({EvidenceSource::LocatedFile, "src/a.py", "src/a.py"});
  ev.add({EvidenceSource::LocatedFile, "src/b.py", "src/b.py"});
  CHECK(ev.total_chars() == 3 + 5 + 8 + 8);
  CHECK_THROWS_AS(ev.add({EvidenceSource::SearchHit, "x", ""}), Error);
  CHECK(ev.total_chars() == 24);
  CHECK(ev.refs().size() == 4);
  CHECK(ev.render() ==
        "### Located files\nsrc/a.py\nsrc/b.py\n"
        "### File: src/a.py\n1| x\n\n"
        "### Prior judgment: requirement 0\nmem");
}

TEST_CASE("path mentions") {
  CHECK(extract_path_mentions("Save the figure to `results/figures/plot.png`, see https://x.org/a/b.") ==
        std::vector<std::string>{"results/figures/plot.png"});
  CHECK(extract_path_mentions("Implemented in \"model.py\" and src/data_loader.py.") ==
        std::vector<std::string>{"model.py", "src/data_loader.py"});
  CHECK(extract_path_mentions("no paths at all").empty());
}

TEST_CASE("locate") {
  TempDir dir;
  for (auto f : {"src/db.py", "src/logging.py", "src/a.py", "src/b.py", "src/c.py", "src/d.py", "src/e.py"}) {
    spit(dir / f, "x = 1\n");
  }
  const auto g = build_graph(dir.path());

  ScriptedBackend paper_reply({"$/project/src/db.py$\n$/project/src/logging.py$"});
  auto r = locate("database logging", g, paper_reply);
  CHECK(r.paths == std::vector<std::string>{"src/db.py", "src/logging.py"});
  REQUIRE(paper_reply.prompts.size() == 1);
  CHECK(paper_reply.prompts[0].first == prompts::locate_system());
  CHECK(paper_reply.prompts[0].second.find("database logging") != std::string::npos);
  CHECK(paper_reply.prompts[0].second.find("logging.py") != std::string::npos);
  CHECK(r.usage == paper_reply.per_call);

  ScriptedBackend seven({"$src/a.py$ $src/b.py$ $src/c.py$ $src/d.py$ $src/e.py$ $src/db.py$ $src/logging.py$"});
  r = locate("x", g, seven);
  CHECK(r.paths == std::vector<std::string>{"src/a.py", "src/b.py", "src/c.py", "src/d.py", "src/e.py"});

  ScriptedBackend none({"no matching files"});
  CHECK(locate("x", g, none).paths.empty());

  ScriptedBackend ghosts({"$src/missing.py$ $../etc/passwd$ $src/a.py$ $src/a.py$"});
  CHECK(locate("x", g, ghosts).paths == std::vector<std::string>{"src/a.py"});
}

TEST_CASE("locate property: at most five paths, all present in the graph") {
  TempDir dir;
  std::vector<std::string> files;
  for (int i = 0; i < 12; ++i) {
    files.push_back("pkg/m" + std::to_string(i) + ".py");
    spit(dir / files.back(), "pass\n");
  }
  const auto g = build_graph(dir.path());
  std::mt19937 rng(5);
  for (int trial = 0; trial < 200; ++trial) {
    std::string reply;
    const int n = static_cast<int>(rng() % 15);
    for (int i = 0; i < n; ++i) {
      switch (rng() % 4) {
        case 0: reply += "$" + files[rng() % files.size()] + "$\n"; break;
        case 1: reply += "$/project/" + files[rng() % files.size()] + "$ "; break;
        case 2: reply += "$ghost" + std::to_string(rng() % 5) + ".py$"; break;
        default: reply += "text $ with stray dollar\n"; break;
      }
    }
    const auto paths = select_located_paths(reply, g);
    CHECK(paths.size() <= kMaxLocatedPaths);
    for (const auto& p : paths) CHECK(g.find(p));
  }
}

TEST_CASE("read") {
  TempDir dir;
  spit(dir / "src/a.py", "import os\nx = 1\nprint(x)\n");
  spit(dir / "img.png", std::string("\x89PNG\r\n\x1a\n", 8) + std::string(2040, '\0'));
  spit(dir / "notes.txt", "plain\n");
  std::string log;
  for (int i = 0; log.size() < 1024 * 1024; ++i) log += "log line " + std::to_string(i) + "\n";
  log.resize(1024 * 1024);
  spit(dir / "run.log", log);
  const auto g = build_graph(dir.path());

  auto item = read("src/a.py", g);
  CHECK(item.source == EvidenceSource::FileContent);
  CHECK(item.path_or_ref == "src/a.py");
  CHECK(item.payload == "1| import os\n2| x = 1\n3| print(x)\n");
  CHECK(read("/project/src/a.py", g).payload == item.payload);
  CHECK(read("notes.txt", g).payload == "plain\n");
  CHECK(read("img.png", g).payload == "binary file, 2048 bytes");

  const auto big = read("run.log", g).payload;
  const std::size_t half = 32 * 1024;
  const auto expected = log.substr(0, half) + "\n" + std::string(kElisionMarker) + "\n" + log.substr(log.size() - half);
  CHECK(big.size() == expected.size());
  CHECK(big == expected);

  CHECK(kind_of([&] { read("nope.py", g); }) == ErrorKind::PathNotInWorkspace);

  // Determinism and pluggable readers.
  CHECK(read("run.log", g).payload == big);
  ReadOptions opts;
  opts.readers[".png"] = [](const std::filesystem::path&, const Node& n) {
    return "image " + n.path + " (" + std::to_string(n.byte_size) + " bytes)";
  };
  CHECK(read("img.png", g, opts).payload == "image img.png (2048 bytes)");
}

TEST_CASE("middle_truncate") {
  CHECK(middle_truncate("short", 10) == "short");
  const std::string s(100, 'a');
  const auto out = middle_truncate(s, 10);
  CHECK(out == "aaaaa\n" + std::string(kElisionMarker) + "\naaaaa");
}

TEST_CASE("retrieve finds the failing step") {
  Trajectory t;
  t.steps.push_back(make_step(0, "Read the task", "ok"));
  t.steps.push_back(make_step(1, "Write src/train.py", "File written"));
  t.steps.push_back(make_step(2, "Run training", "epoch 1 loss 0.3"));
  t.steps.push_back(make_step(3, "Compute metrics", "done"));
  t.steps.push_back(make_step(4, "Save accuracy", "FileNotFoundError: results/metrics"));
  RuleOracleBackend backend;
  const auto r = retrieve("Accuracy is saved under results/metrics/.", &t, TruncationStrategy{}, backend);
  CHECK(r.item.source == EvidenceSource::TrajectorySteps);
  CHECK(r.item.payload.find("FileNotFoundError: results/metrics") != std::string::npos);
  CHECK(r.item.payload.find("[step 4]") != std::string::npos);
  CHECK(r.item.payload.find("[step 2]") == std::string::npos);
  CHECK(r.usage.input_tokens > 0);
}

TEST_CASE("retrieve preconditions and prompt contents") {
  ScriptedBackend backend({"<RELEVANT STEPS>\n[step 0] ..."});
  Trajectory empty;
  CHECK(kind_of([&] { retrieve("x", &empty, TruncationStrategy{}, backend); }) == ErrorKind::MissingTrajectory);
  CHECK(kind_of([&] { retrieve("x", nullptr, TruncationStrategy{}, backend); }) == ErrorKind::MissingTrajectory);

  Trajectory t;
  for (int i = 0; i < 5; ++i) t.steps.push_back(make_step(i, "thought " + std::to_string(i), "env"));
  const auto r = retrieve("criteria", &t, TruncationStrategy{}, backend);
  CHECK(r.prompt.find(render_trajectory(t)) != std::string::npos);
  CHECK(r.item.payload == "[step 0] ...");

  ScriptedBackend tiny({"x"}, 100);
  CHECK(kind_of([&] { retrieve("criteria", &t, TruncationStrategy{}, tiny); }) == ErrorKind::InvalidConfig);
}

TEST_CASE("retrieve never exceeds the context budget") {
  std::mt19937 rng(77);
  const std::vector<Cut> cuts{Cut::Head, Cut::Middle, Cut::Tail, Cut::None};
  for (int trial = 0; trial < 100; ++trial) {
    Trajectory t;
    const int n = 1 + static_cast<int>(rng() % 20);
    for (int i = 0; i < n; ++i) {
      t.steps.push_back(make_step(i, std::string(rng() % 3000, 'a' + static_cast<char>(i % 26)),
                                  "é" + std::string(rng() % 2000, 'z')));
    }
    const std::string criteria = "requirement number " + std::to_string(trial);
    const auto context = prompts::retrieve_overhead(criteria) + 1 + rng() % 40000;
    ScriptedBackend backend({"<RELEVANT STEPS> none"}, context);
    TruncationStrategy s{cuts[rng() % 4], cuts[rng() % 4], 1 + rng() % 60000};
    retrieve(criteria, &t, s, backend);
    REQUIRE(backend.prompts.size() == 1);
    CHECK(backend.prompts[0].first.size() + backend.prompts[0].second.size() <= context);
  }
}

TEST_CASE("extract_relevant_steps") {
  CHECK(extract_relevant_steps("preamble <RELEVANT STEPS>: step 4 failed") == "step 4 failed");
  CHECK(extract_relevant_steps("**<RELEVANT STEPS>**:\n\nstep 1") == "step 1");
  CHECK(extract_relevant_steps("  no marker  ") == "no marker");
}

TEST_CASE("search_evidence keeps positive hits only") {
  const auto index = SearchIndex::from_sources({{"a.py", 3, "def hidden():\n  pass\n", {}}, {"b.py", 1, "x\n", {}}});
  Evidence ev;
  const auto hits = search_evidence("hidden", index, 3, ev);
  REQUIRE(hits.size() == 1);
  REQUIRE(ev.items().size() == 1);
  CHECK(ev.items()[0].path_or_ref == "a.py:L3-L4");
  CHECK(ev.items()[0].source == EvidenceSource::SearchHit);
}

TEST_CASE("memory recall") {
  JudgmentMemory memory;
  Requirement r1;
  r1.requirement_id = 1;
  r1.prerequisites = {0};
  CHECK(memory.recall(r1).empty());

  Verdict v0;
  v0.requirement_id = 0;
  v0.decision = Decision::Satisfied;
  v0.justification = "data loader present";
  memory.record(v0);
  const auto items = memory.recall(r1);
  REQUIRE(items.size() == 1);
  CHECK(items[0].source == EvidenceSource::MemoryRecall);
  CHECK(items[0].payload.find("satisfied") != std::string::npos);
  CHECK(items[0].payload.find("data loader present") != std::string::npos);

  Requirement root;
  root.requirement_id = 2;
  CHECK(memory.recall(root).empty());
}

TEST_CASE("plan_next") {
  const std::set<Module> avail{Module::Locate, Module::Read, Module::Ask};
  ScriptedBackend direct({"locate, read, ask"});
  CHECK(plan_next("c", avail, direct).order == std::vector<Module>{Module::Locate, Module::Read, Module::Ask});

  ScriptedBackend unavailable({"search, read, locate, ask"});
  const auto r = plan_next("c", avail, unavailable);
  CHECK(r.order == std::vector<Module>{Module::Read, Module::Locate, Module::Ask});
  CHECK_FALSE(r.fell_back);

  ScriptedBackend garbage({"??? 42"});
  const auto g = plan_next("c", avail, garbage);
  CHECK(g.fell_back);
  CHECK(g.order == std::vector<Module>{Module::Locate, Module::Read, Module::Ask});

  CHECK(kind_of([&] { plan_next("c", {}, garbage); }) == ErrorKind::InvalidConfig);
}

TEST_CASE("module names") {
  CHECK(parse_module("Locate") == Module::Locate);
  CHECK(parse_module("plan") == Module::Planning);
  CHECK_FALSE(parse_module("telepathy"));
  for (auto m : default_module_order()) CHECK(parse_module(to_string(m)) == m);
}
