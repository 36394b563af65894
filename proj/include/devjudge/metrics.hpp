#pragma once

#include <iosfwd>
#include <limits>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "task.hpp"
#include "trajectory.hpp"

namespace devjudge {

struct VerdictKey {
  std::string task;
  int requirement_id = 0;
  friend auto operator<=>(const VerdictKey&, const VerdictKey&) = default;
};

using VerdictVector = std::map<VerdictKey, bool>;

struct VerdictMatrix {
  std::vector<std::string> judges;
  std::vector<VerdictVector> vectors;  // parallel to judges

  /// Adds a judge; throws KeyMismatch if its key set differs from the others.
  void add(std::string judge, VerdictVector vector);
  [[nodiscard]] const VerdictVector& at(std::string_view judge) const;
  [[nodiscard]] bool contains(std::string_view judge) const;
};

double requirements_met_independent(const VerdictVector& v);
/// A requirement counts only if it and every ancestor in its prerequisite
/// closure are true. Ancestors missing from v count as unmet.
double requirements_met_dependent(std::span<const Task> tasks, const VerdictVector& v);
double task_solve_rate(std::span<const Task> tasks, const VerdictVector& v);
double self_termination_rate(std::span<const Trajectory> trajectories,
                             double time_limit_seconds = kDefaultTimeLimitSeconds);

double alignment_rate(const VerdictVector& judge, const VerdictVector& consensus);
double disagreement_rate(const VerdictVector& a, const VerdictVector& b);
/// |judge - reference| in percentage points.
double judge_shift(double judge_metric, double reference_metric);
/// Per-key majority; ties (even judge counts) resolve to false.
VerdictVector majority_vote(const VerdictMatrix& m);

struct PRPoint {
  double threshold = std::numeric_limits<double>::infinity();
  double precision = 1.0;
  double recall = 0.0;
};

struct PRCurve {
  // Starts with the (+inf, precision 1, recall 0) endpoint, then one point per
  // distinct confidence in descending order.
  std::vector<PRPoint> points;
  double average_precision = 0.0;
};

/// Items are (confidence, ground truth). Predictions at threshold t are the
/// items with confidence >= t. With no positives in the ground truth recall
/// is reported as 0.
PRCurve pr_curve(std::span<const std::pair<double, bool>> items);

struct Savings {
  double cost_saved_pct = 0.0;
  double time_saved_pct = 0.0;
};

double saved_pct(double ai, double human);
Savings savings(double ai_cost, double human_cost, double ai_time, double human_time);

// Delimited-table interchange: judge,task,requirement_id,verdict[,confidence]
struct LabeledVerdict {
  std::string judge;
  VerdictKey key;
  bool verdict = false;
  std::optional<double> confidence;
};

std::vector<LabeledVerdict> read_verdict_table(std::istream& in);
void write_verdict_table(std::ostream& out, const std::vector<LabeledVerdict>& rows);
VerdictMatrix matrix_from_rows(const std::vector<LabeledVerdict>& rows);
void write_pr_csv(std::ostream& out, const PRCurve& curve);

}  // namespace devjudge
