#pragma once

#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "json.hpp"

namespace devjudge {

using Json = nlohmann::ordered_json;

enum class Category {
  DatasetOrEnvironment,
  DataPrePostProcessing,
  MachineLearningMethod,
  SaveTrainedModel,
  PerformanceMetrics,
  HumanComputerInteraction,
  Visualization,
  Other,
};

/// Canonical DevAI spelling, e.g. "Dataset or Environment".
std::string_view category_name(Category c) noexcept;
/// Case-insensitive match against the eight canonical names (runs of
/// whitespace are treated as a single space).
std::optional<Category> parse_category(std::string_view label);

struct Requirement {
  int requirement_id = 0;
  std::vector<int> prerequisites;
  std::string criteria;
  Category category = Category::Other;
  // Spelling as found in the source document, kept for lossless rewrite.
  std::string category_label;
  std::optional<bool> satisfied;
  Json extra = Json::object();
};

struct Preference {
  int preference_id = 0;
  std::string criteria;
  std::optional<bool> satisfied;
  Json extra = Json::object();
};

struct Task {
  std::string name;
  std::string query;
  std::vector<std::string> tags;
  std::vector<Requirement> requirements;
  std::vector<Preference> preferences;
  bool is_kaggle_api_needed = false;
  bool is_training_needed = false;
  bool is_web_navigation_needed = false;
  // Unrecognised top-level fields; preserved on serialisation.
  Json extra = Json::object();
};

/// Constraint paragraphs appended to a task query to form the extended query.
struct ConstraintSet {
  std::string generic;
  std::string is_training_needed;
  std::string is_kaggle_api_needed;

  /// The stock 30-minute constraint texts.
  static ConstraintSet defaults();
  static ConstraintSet from_json(const Json& doc);
};

Task parse_task(std::string_view raw_document);
Task task_from_json(const Json& doc);
Json task_to_json(const Task& task);
std::string serialize_task(const Task& task, int indent = 4);
Task load_task_file(const std::string& path);

/// std::nullopt when the prerequisite relation is acyclic, otherwise one
/// witness cycle listed in traversal order starting from its smallest
/// reachable entry point.
std::optional<std::vector<int>> validate_dag(const Task& task);

/// Kahn's algorithm with an ascending-id ready queue. Requires an acyclic task.
std::vector<int> topological_order(const Task& task);

std::string extend_query(const Task& task, const ConstraintSet& constraints);

}  // namespace devjudge
