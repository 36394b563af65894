#include "devjudge/metrics.hpp"

#include <algorithm>
#include <cmath>
#include <iomanip>
#include <istream>
#include <map>
#include <ostream>
#include <sstream>

#include "devjudge/error.hpp"
#include "devjudge/text.hpp"

namespace devjudge {

void VerdictMatrix::add(std::string judge, VerdictVector vector) {
  if (contains(judge)) throw Error(ErrorKind::KeyMismatch, "judge \"" + judge + "\" already present");
  if (!vectors.empty()) {
    const auto& ref = vectors.front();
    const bool same = ref.size() == vector.size() &&
                      std::equal(ref.begin(), ref.end(), vector.begin(),
                                 [](const auto& a, const auto& b) { return a.first == b.first; });
    if (!same) {
      throw Error(ErrorKind::KeyMismatch, "judge \"" + judge + "\" covers a different key set than \"" +
                                              judges.front() + "\"");
    }
  }
  judges.push_back(std::move(judge));
  vectors.push_back(std::move(vector));
}

const VerdictVector& VerdictMatrix::at(std::string_view judge) const {
  for (std::size_t i = 0; i < judges.size(); ++i) {
    if (judges[i] == judge) return vectors[i];
  }
  throw Error(ErrorKind::KeyMismatch, "no judge labelled \"" + std::string(judge) + "\"");
}

bool VerdictMatrix::contains(std::string_view judge) const {
  return std::find(judges.begin(), judges.end(), judge) != judges.end();
}

double requirements_met_independent(const VerdictVector& v) {
  if (v.empty()) throw Error(ErrorKind::EmptyVector, "requirements_met_independent needs at least one key");
  const auto met = std::count_if(v.begin(), v.end(), [](const auto& kv) { return kv.second; });
  return static_cast<double>(met) / static_cast<double>(v.size());
}

namespace {

std::map<std::string, const Task*> index_tasks(std::span<const Task> tasks) {
  std::map<std::string, const Task*> out;
  for (const auto& t : tasks) out.emplace(t.name, &t);
  return out;
}

const Task& task_of(const std::map<std::string, const Task*>& by_name, const VerdictKey& key) {
  auto it = by_name.find(key.task);
  if (it == by_name.end()) throw Error(ErrorKind::KeyWithoutTask, "no task named \"" + key.task + "\"");
  const auto& task = *it->second;
  if (key.requirement_id < 0 || static_cast<std::size_t>(key.requirement_id) >= task.requirements.size()) {
    throw Error(ErrorKind::KeyWithoutTask,
                "task \"" + key.task + "\" has no requirement " + std::to_string(key.requirement_id));
  }
  return task;
}

// met[i]: requirement i and all of its ancestors are true. Memoised DFS over
// the prerequisite relation; assumes an acyclic task.
std::vector<bool> dependent_met(const Task& task, const VerdictVector& v) {
  const auto n = task.requirements.size();
  std::vector<int> state(n, 0);  // 0 unvisited, 1 on stack, 2 done
  std::vector<bool> met(n, false);
  auto own = [&](std::size_t i) {
    auto it = v.find(VerdictKey{task.name, static_cast<int>(i)});
    return it != v.end() && it->second;
  };
  auto visit = [&](auto&& self, std::size_t i) -> bool {
    if (state[i] == 2) return met[i];
    if (state[i] == 1) throw Error(ErrorKind::SchemaViolation, "task \"" + task.name + "\" has a prerequisite cycle");
    state[i] = 1;
    bool ok = own(i);
    for (int p : task.requirements[i].prerequisites) {
      if (!self(self, static_cast<std::size_t>(p))) ok = false;
    }
    state[i] = 2;
    met[i] = ok;
    return ok;
  };
  for (std::size_t i = 0; i < n; ++i) visit(visit, i);
  return met;
}

}  // namespace

double requirements_met_dependent(std::span<const Task> tasks, const VerdictVector& v) {
  if (v.empty()) throw Error(ErrorKind::EmptyVector, "requirements_met_dependent needs at least one key");
  const auto by_name = index_tasks(tasks);
  std::map<std::string, std::vector<bool>> cache;
  std::size_t counted = 0;
  for (const auto& [key, value] : v) {
    const auto& task = task_of(by_name, key);
    auto it = cache.find(task.name);
    if (it == cache.end()) it = cache.emplace(task.name, dependent_met(task, v)).first;
    if (it->second[static_cast<std::size_t>(key.requirement_id)]) ++counted;
  }
  return static_cast<double>(counted) / static_cast<double>(v.size());
}

double task_solve_rate(std::span<const Task> tasks, const VerdictVector& v) {
  if (tasks.empty()) throw Error(ErrorKind::EmptyInput, "task_solve_rate needs at least one task");
  const auto by_name = index_tasks(tasks);
  for (const auto& [key, value] : v) task_of(by_name, key);
  std::size_t solved = 0;
  for (const auto& task : tasks) {
    const auto met = dependent_met(task, v);
    if (std::all_of(met.begin(), met.end(), [](bool b) { return b; })) ++solved;
  }
  return static_cast<double>(solved) / static_cast<double>(tasks.size());
}

double self_termination_rate(std::span<const Trajectory> trajectories, double time_limit_seconds) {
  if (trajectories.empty()) throw Error(ErrorKind::EmptyInput, "self_termination_rate needs trajectories");
  const auto n = std::count_if(trajectories.begin(), trajectories.end(), [&](const Trajectory& t) {
    return detect_self_termination(t, time_limit_seconds);
  });
  return static_cast<double>(n) / static_cast<double>(trajectories.size());
}

namespace {

std::size_t matches(const VerdictVector& a, const VerdictVector& b) {
  if (a.size() != b.size()) throw Error(ErrorKind::KeyMismatch, "verdict vectors differ in size");
  if (a.empty()) throw Error(ErrorKind::EmptyVector, "cannot compare empty verdict vectors");
  std::size_t same = 0;
  for (auto ia = a.begin(), ib = b.begin(); ia != a.end(); ++ia, ++ib) {
    if (!(ia->first == ib->first)) {
      throw Error(ErrorKind::KeyMismatch,
                  "key (" + ia->first.task + ", " + std::to_string(ia->first.requirement_id) + ") not shared");
    }
    if (ia->second == ib->second) ++same;
  }
  return same;
}

}  // namespace

double alignment_rate(const VerdictVector& judge, const VerdictVector& consensus) {
  return static_cast<double>(matches(judge, consensus)) / static_cast<double>(judge.size());
}

double disagreement_rate(const VerdictVector& a, const VerdictVector& b) { return 1.0 - alignment_rate(a, b); }

double judge_shift(double judge_metric, double reference_metric) {
  return 100.0 * std::fabs(judge_metric - reference_metric);
}

VerdictVector majority_vote(const VerdictMatrix& m) {
  if (m.vectors.size() < 2) throw Error(ErrorKind::FewerThanTwoJudges, "majority vote needs at least two judges");
  VerdictVector out;
  for (const auto& [key, first] : m.vectors.front()) {
    std::size_t yes = 0;
    for (const auto& v : m.vectors) {
      auto it = v.find(key);
      if (it == v.end()) throw Error(ErrorKind::KeyMismatch, "key missing for one judge");
      if (it->second) ++yes;
    }
    out.emplace(key, 2 * yes > m.vectors.size());
  }
  return out;
}

PRCurve pr_curve(std::span<const std::pair<double, bool>> items) {
  if (items.empty()) throw Error(ErrorKind::EmptyInput, "pr_curve needs at least one item");
  std::vector<std::pair<double, bool>> sorted(items.begin(), items.end());
  for (const auto& [c, _] : sorted) {
    if (std::isnan(c)) throw Error(ErrorKind::EmptyInput, "confidence must not be NaN");
  }
  std::sort(sorted.begin(), sorted.end(), [](const auto& a, const auto& b) { return a.first > b.first; });
  const auto positives = std::count_if(sorted.begin(), sorted.end(), [](const auto& p) { return p.second; });

  PRCurve curve;
  curve.points.push_back(PRPoint{});
  std::size_t tp = 0;
  std::size_t predicted = 0;
  double prev_recall = 0.0;
  for (std::size_t i = 0; i < sorted.size();) {
    const double t = sorted[i].first;
    while (i < sorted.size() && sorted[i].first == t) {
      if (sorted[i].second) ++tp;
      ++predicted;
      ++i;
    }
    PRPoint p;
    p.threshold = t;
    p.precision = static_cast<double>(tp) / static_cast<double>(predicted);
    p.recall = positives == 0 ? 0.0 : static_cast<double>(tp) / static_cast<double>(positives);
    curve.average_precision += (p.recall - prev_recall) * p.precision;
    prev_recall = p.recall;
    curve.points.push_back(p);
  }
  return curve;
}

double saved_pct(double ai, double human) {
  if (!(human > 0.0)) throw Error(ErrorKind::ZeroBaseline, "human baseline must be positive");
  return 100.0 * (1.0 - ai / human);
}

Savings savings(double ai_cost, double human_cost, double ai_time, double human_time) {
  return {saved_pct(ai_cost, human_cost), saved_pct(ai_time, human_time)};
}

namespace {

std::vector<std::string> split_csv_line(const std::string& line, std::size_t line_no) {
  std::vector<std::string> fields;
  std::string cur;
  bool quoted = false;
  for (std::size_t i = 0; i < line.size(); ++i) {
    const char c = line[i];
    if (quoted) {
      if (c == '"' && i + 1 < line.size() && line[i + 1] == '"') {
        cur += '"';
        ++i;
      } else if (c == '"') {
        quoted = false;
      } else {
        cur += c;
      }
    } else if (c == '"') {
      quoted = true;
    } else if (c == ',') {
      fields.push_back(std::move(cur));
      cur.clear();
    } else {
      cur += c;
    }
  }
  if (quoted) throw Error(ErrorKind::MalformedDocument, "line " + std::to_string(line_no) + ": unterminated quote");
  fields.push_back(std::move(cur));
  return fields;
}

std::string csv_field(std::string_view s) {
  if (s.find_first_of(",\"\n\r") == std::string_view::npos) return std::string(s);
  std::string out = "\"";
  for (char c : s) {
    if (c == '"') out += '"';
    out += c;
  }
  return out + "\"";
}

bool parse_verdict_cell(std::string_view cell, std::size_t line_no) {
  const auto v = text::to_lower(text::trim(cell));
  if (v == "1" || v == "true" || v == "t" || v == "yes" || v == "satisfied") return true;
  if (v == "0" || v == "false" || v == "f" || v == "no" || v == "unsatisfied") return false;
  throw Error(ErrorKind::MalformedDocument, "line " + std::to_string(line_no) + ": bad verdict \"" + v + "\"");
}

std::string fmt(double v) {
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  std::ostringstream ss;
  ss << std::setprecision(17) << v;
  return ss.str();
}

}  // namespace

std::vector<LabeledVerdict> read_verdict_table(std::istream& in) {
  std::vector<LabeledVerdict> rows;
  std::string line;
  std::size_t line_no = 0;
  bool header_checked = false;
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (text::trim(line).empty() || line.starts_with("#")) continue;
    auto f = split_csv_line(line, line_no);
    if (!header_checked) {
      header_checked = true;
      if (text::iequals(text::trim(f[0]), "judge")) continue;
    }
    if (f.size() != 4 && f.size() != 5) {
      throw Error(ErrorKind::MalformedDocument,
                  "line " + std::to_string(line_no) + ": expected judge,task,requirement_id,verdict[,confidence]");
    }
    LabeledVerdict row;
    row.judge = std::string(text::trim(f[0]));
    row.key.task = f[1];
    try {
      std::size_t used = 0;
      const auto id = std::string(text::trim(f[2]));
      row.key.requirement_id = std::stoi(id, &used);
      if (used != id.size()) throw std::invalid_argument(id);
    } catch (const std::exception&) {
      throw Error(ErrorKind::MalformedDocument, "line " + std::to_string(line_no) + ": bad requirement_id");
    }
    row.verdict = parse_verdict_cell(f[3], line_no);
    if (f.size() == 5 && !text::trim(f[4]).empty()) {
      try {
        row.confidence = std::stod(std::string(text::trim(f[4])));
      } catch (const std::exception&) {
        throw Error(ErrorKind::MalformedDocument, "line " + std::to_string(line_no) + ": bad confidence");
      }
    }
    rows.push_back(std::move(row));
  }
  return rows;
}

void write_verdict_table(std::ostream& out, const std::vector<LabeledVerdict>& rows) {
  const bool any_conf = std::any_of(rows.begin(), rows.end(), [](const auto& r) { return r.confidence.has_value(); });
  out << "judge,task,requirement_id,verdict" << (any_conf ? ",confidence" : "") << "\n";
  for (const auto& r : rows) {
    out << csv_field(r.judge) << ',' << csv_field(r.key.task) << ',' << r.key.requirement_id << ','
        << (r.verdict ? "true" : "false");
    if (any_conf) {
      out << ',';
      if (r.confidence) out << fmt(*r.confidence);
    }
    out << "\n";
  }
}

VerdictMatrix matrix_from_rows(const std::vector<LabeledVerdict>& rows) {
  std::vector<std::string> order;
  std::map<std::string, VerdictVector> by_judge;
  for (const auto& r : rows) {
    auto [it, fresh] = by_judge.try_emplace(r.judge);
    if (fresh) order.push_back(r.judge);
    if (!it->second.emplace(r.key, r.verdict).second) {
      throw Error(ErrorKind::KeyMismatch, "judge \"" + r.judge + "\" lists (" + r.key.task + ", " +
                                              std::to_string(r.key.requirement_id) + ") twice");
    }
  }
  VerdictMatrix m;
  for (const auto& j : order) m.add(j, std::move(by_judge[j]));
  return m;
}

void write_pr_csv(std::ostream& out, const PRCurve& curve) {
  out << "threshold,precision,recall\n";
  for (const auto& p : curve.points) out << fmt(p.threshold) << ',' << fmt(p.precision) << ',' << fmt(p.recall) << "\n";
}

}  // namespace devjudge
