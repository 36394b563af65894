#include "doctest.h"

#include <random>

#include "devjudge/error.hpp"
#include "devjudge/text.hpp"
#include "devjudge/trajectory.hpp"
#include "support.hpp"

using namespace devjudge;
using testing_support::data_dir;
using testing_support::slurp;

namespace {

Trajectory sample() { return load_trajectory_file((data_dir() / "trajectory_sample.json").string()); }

TrajectoryStep make_step(int index, std::string thought, double cost, double time) {
  TrajectoryStep s;
  s.step = index;
  s.agent_thought = std::move(thought);
  s.step_usage.model = "m";
  s.step_usage.cost = cost;
  s.step_usage.step_execution_time = time;
  return s;
}

// Steps with exact running sums.
Trajectory synth(std::mt19937& rng, int n) {
  std::uniform_real_distribution<double> cost(0.0, 0.2);
  std::uniform_real_distribution<double> time(0.0, 30.0);
  Trajectory t;
  double c = 0;
  double w = 0;
  for (int i = 0; i < n; ++i) {
    auto s = make_step(i, "t" + std::to_string(i), cost(rng), time(rng));
    c += s.step_usage.cost;
    w += s.step_usage.step_execution_time;
    s.accumulated_usage.accumulated_cost = c;
    s.accumulated_usage.accumulated_time = w;
    t.steps.push_back(s);
  }
  return t;
}

std::string random_text(std::mt19937& rng, std::size_t max_len) {
  static const std::vector<std::string> pieces{"a", "bc", " ", "\n", "Error", "\xE2\x80\xA6", "\xC3\xA9", "xyz", "::"};
  std::uniform_int_distribution<std::size_t> len(0, max_len);
  std::uniform_int_distribution<std::size_t> pick(0, pieces.size() - 1);
  std::string out;
  const auto target = len(rng);
  while (out.size() < target) out += pieces[pick(rng)];
  return out;
}

}  // namespace

TEST_CASE("sample trajectory parses with exact usage values") {
  const auto t = sample();
  REQUIRE(t.steps.size() == 3);
  const auto& s0 = t.steps[0];
  CHECK(s0.step_usage.input_tokens == 4331);
  CHECK(s0.step_usage.output_tokens == 220);
  CHECK(s0.step_usage.cost == 0.024955);
  CHECK(s0.step_usage.model == "gpt-4o-2024-05-13");
  CHECK(s0.user_message.has_value());
  CHECK_FALSE(t.steps[1].user_message.has_value());
  CHECK_FALSE(s0.agent_name.has_value());
  CHECK(t.steps[1].accumulated_usage.accumulated_cost == 0.04959000000000001);
}

TEST_CASE("sample step cost equals tokens at the listed model prices") {
  // 4331 input tokens at $5/M plus 220 output tokens at $15/M.
  const auto u = sample().steps[0].step_usage;
  CHECK(std::abs(u.input_tokens * 5e-6 + u.output_tokens * 15e-6 - u.cost) < 1e-12);
}

TEST_CASE("round trip keeps every field") {
  const auto raw = slurp(data_dir() / "trajectory_sample.json");
  const auto t = parse_trajectory(raw);
  // Same content; key order within step_usage is normalised.
  CHECK(nlohmann::json(trajectory_to_json(t)) == nlohmann::json::parse(raw));
  CHECK(serialize_trajectory(parse_trajectory(serialize_trajectory(t))) == serialize_trajectory(t));
}

TEST_CASE("round trip keeps 17 significant digits") {
  std::mt19937 rng(5);
  for (int i = 0; i < 50; ++i) {
    const auto t = synth(rng, 4);
    const auto back = parse_trajectory(serialize_trajectory(t));
    for (std::size_t k = 0; k < t.steps.size(); ++k) {
      CHECK(back.steps[k].step_usage.cost == t.steps[k].step_usage.cost);
      CHECK(back.steps[k].accumulated_usage.accumulated_time == t.steps[k].accumulated_usage.accumulated_time);
    }
  }
}

TEST_CASE("agent_name and extra fields are optional and preserved") {
  auto doc = nlohmann::ordered_json::parse(slurp(data_dir() / "trajectory_sample.json"));
  doc[0]["agent"]["agent_name"] = "CodeActAgent";
  doc[0]["agent"]["tool"] = "bash";
  doc[1]["observation_id"] = 17;
  const auto t = trajectory_from_json(doc);
  CHECK(t.steps[0].agent_name == "CodeActAgent");
  CHECK(nlohmann::json(trajectory_to_json(t)) == nlohmann::json(doc));
}

TEST_CASE("structural errors") {
  CHECK(parse_trajectory("[]").empty());
  auto doc = nlohmann::ordered_json::parse(slurp(data_dir() / "trajectory_sample.json"));
  auto gap = doc;
  gap.erase(1);
  try {
    trajectory_from_json(gap);
    FAIL("expected NonContiguousSteps");
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::NonContiguousSteps);
  }
  auto negative = doc;
  negative[0]["step_usage"]["cost"] = -1.0;
  CHECK_THROWS_AS(trajectory_from_json(negative), Error);
  auto missing = doc;
  missing[0].erase("step_usage");
  CHECK_THROWS_AS(trajectory_from_json(missing), Error);
  CHECK_THROWS_AS(parse_trajectory("[{"), Error);
  CHECK_THROWS_AS(parse_trajectory("{}"), Error);
}

TEST_CASE("reconcile_usage on the sample") {
  const auto t = sample();
  CHECK(std::abs(t.steps[0].step_usage.cost + t.steps[1].step_usage.cost - 0.04959) < 1e-9);
  CHECK(reconcile_usage(t) == std::nullopt);
  // The sample's accumulated times drift from the summed step times by ~1e-5 s.
  const auto strict = reconcile_usage(t, LedgerTolerance{1e-9, 1e-6});
  REQUIRE(strict.has_value());
  CHECK(strict->field == LedgerMismatch::Field::Time);
}

TEST_CASE("reconcile_usage examples") {
  Trajectory one;
  one.steps.push_back(make_step(0, "t", 0.5, 1.0));
  one.steps[0].accumulated_usage = {0.5, 1.0, {}};
  CHECK(reconcile_usage(one) == std::nullopt);

  auto t = sample();
  t.steps[1].accumulated_usage.accumulated_cost += 0.01;
  const auto m = reconcile_usage(t, LedgerTolerance{1e-6, 1e-3});
  REQUIRE(m.has_value());
  CHECK(m->step == 1);
  CHECK(m->field == LedgerMismatch::Field::Cost);
}

TEST_CASE("reconcile_usage property: exact sums pass, any single perturbation fails") {
  std::mt19937 rng(11);
  for (int trial = 0; trial < 100; ++trial) {
    auto t = synth(rng, 1 + trial % 8);
    REQUIRE(reconcile_usage(t) == std::nullopt);
    const auto k = std::uniform_int_distribution<std::size_t>(0, t.steps.size() - 1)(rng);
    const bool cost_field = trial % 2 == 0;
    if (cost_field) {
      t.steps[k].accumulated_usage.accumulated_cost += 1e-6;
    } else {
      t.steps[k].accumulated_usage.accumulated_time += 2e-3;
    }
    const auto m = reconcile_usage(t);
    REQUIRE(m.has_value());
    CHECK(m->step == static_cast<int>(k));
    CHECK((m->field == LedgerMismatch::Field::Cost) == cost_field);
  }
}

TEST_CASE("render format") {
  auto s = make_step(3, "think", 0, 0);
  s.agent_action = "ls";
  s.environment = "a.txt";
  CHECK(render_step(s) == "[step 3] thought: think action: ls environment: a.txt");
  s.user_message = "hi";
  s.environment.reset();
  CHECK(render_step(s) == "[step 3] user: hi thought: think action: ls");
  Trajectory t;
  t.steps = {make_step(0, "a", 0, 0), make_step(1, "b", 0, 0)};
  CHECK(render_trajectory(t) == "[step 0] thought: a\n\n[step 1] thought: b");
}

TEST_CASE("truncate: under budget is a no-op") {
  const auto t = sample();
  const auto full = render_trajectory(t);
  for (Cut a : {Cut::Head, Cut::Middle, Cut::Tail, Cut::None}) {
    for (Cut b : {Cut::Head, Cut::Middle, Cut::Tail, Cut::None}) {
      CHECK(truncate(t, {a, b, full.size()}) == full);
      CHECK(truncate(t, {a, b, full.size() + 200}) == full);
    }
  }
}

TEST_CASE("truncate: head removal keeps the suffix steps verbatim") {
  Trajectory t;
  for (int i = 0; i < 5; ++i) t.steps.push_back(make_step(i, std::string(40, static_cast<char>('a' + i)), 0, 0));
  const auto s3 = render_step(t.steps[3]);
  const auto s4 = render_step(t.steps[4]);
  const auto two = s3 + "\n\n" + s4;
  CHECK(truncate(t, {Cut::Head, Cut::None, two.size()}) == two);
  CHECK(truncate(t, {Cut::Tail, Cut::None, two.size()}) ==
        render_step(t.steps[0]) + "\n\n" + render_step(t.steps[1]));
  // Middle removal drops from the centre outwards.
  const auto mid = truncate(t, {Cut::Middle, Cut::None, two.size()});
  CHECK(mid == render_step(t.steps[0]) + "\n\n" + render_step(t.steps[4]));
}

TEST_CASE("truncate: middle step cut keeps both ends around the marker") {
  Trajectory t;
  std::string thought;
  for (int i = 0; i < 1000; ++i) thought += static_cast<char>('a' + i % 26);
  t.steps.push_back(make_step(0, thought, 0, 0));
  const auto rendered = render_step(t.steps[0]);
  const auto out = truncate(t, {Cut::None, Cut::Middle, 400});
  CHECK(out.size() == 400);
  const auto marker = "\n" + std::string(kElisionMarker) + "\n";
  const auto pos = out.find(marker);
  REQUIRE(pos != std::string::npos);
  const auto head = out.substr(0, pos);
  const auto tail = out.substr(pos + marker.size());
  // 400 bytes minus the marker and its two newlines, split head-biased.
  CHECK(head.size() + tail.size() == 400 - marker.size());
  CHECK(head.size() - tail.size() <= 1);
  CHECK(rendered.starts_with(head));
  CHECK(rendered.ends_with(tail));
}

TEST_CASE("cut_text regions") {
  const std::string s(100, 'x');
  CHECK(cut_text(s, Cut::Head, 100) == s);
  const auto head = cut_text(s, Cut::Head, 50);
  CHECK(head.starts_with(std::string(kElisionMarker) + "\n"));
  CHECK(head.size() == 50);
  const auto tail = cut_text(s, Cut::Tail, 50);
  CHECK(tail.ends_with("\n" + std::string(kElisionMarker)));
  CHECK(tail.size() == 50);
  CHECK(cut_text(s, Cut::None, 30) == std::string(30, 'x'));
  CHECK(cut_text(s, Cut::Middle, 5) == std::string(5, 'x'));
}

TEST_CASE("truncate property: output never exceeds the budget and stays valid UTF-8") {
  std::mt19937 rng(424242);
  const std::array cuts{Cut::Head, Cut::Middle, Cut::Tail, Cut::None};
  for (int trial = 0; trial < 200; ++trial) {
    Trajectory t;
    const int n = std::uniform_int_distribution<int>(1, 8)(rng);
    for (int i = 0; i < n; ++i) {
      auto s = make_step(i, random_text(rng, 300), 0, 0);
      if (rng() % 2) s.environment = random_text(rng, 500);
      if (rng() % 3 == 0) s.agent_action = random_text(rng, 80);
      t.steps.push_back(std::move(s));
    }
    const auto full = render_trajectory(t);
    const auto budget = std::uniform_int_distribution<std::size_t>(1, full.size() + 50)(rng);
    for (Cut a : cuts) {
      for (Cut b : cuts) {
        const auto out = truncate(t, {a, b, budget});
        CHECK(out.size() <= budget);
        CHECK(text::is_valid_utf8(out));
        if (full.size() <= budget) CHECK(out == full);
      }
    }
  }
}

TEST_CASE("cut names") {
  CHECK(parse_cut("MIDDLE") == Cut::Middle);
  CHECK_FALSE(parse_cut("centre").has_value());
  CHECK(to_string(Cut::Tail) == "tail");
}

TEST_CASE("self-termination rule") {
  Trajectory t;
  t.steps.push_back(make_step(0, "start", 0, 100));
  t.steps.push_back(make_step(1, "continue", 0, 100));
  t.steps.push_back(make_step(2, "done", 0, 100));
  t.steps[2].accumulated_usage.accumulated_time = 300;
  t.steps[2].environment = "saved results/metrics.txt";
  CHECK(detect_self_termination(t, 1800));

  auto late = t;
  late.steps[2].accumulated_usage.accumulated_time = 1799;
  CHECK_FALSE(detect_self_termination(late, 1800));

  auto crashed = t;
  crashed.steps[2].environment = "Traceback (most recent call last):\n  File \"x.py\"";
  CHECK_FALSE(detect_self_termination(crashed, 1800));

  auto errored = t;
  errored.steps[2].environment = "ValueError: bad shape";
  CHECK_FALSE(detect_self_termination(errored, 1800));

  auto incomplete = t;
  incomplete.steps[2].agent_thought.reset();
  CHECK_FALSE(detect_self_termination(incomplete, 1800));

  auto no_env = t;
  no_env.steps[2].environment.reset();
  CHECK(detect_self_termination(no_env, 1800));

  CHECK_THROWS_AS(detect_self_termination(Trajectory{}, 1800), Error);
  // The sample ends on a clean file listing well inside the limit.
  CHECK(detect_self_termination(sample()));
}
