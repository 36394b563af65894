#include "devjudge/task.hpp"

#include <algorithm>
#include <array>
#include <functional>
#include <queue>
#include <set>

#include "devjudge/error.hpp"
#include "devjudge/text.hpp"
#include "json_util.hpp"

namespace devjudge {

namespace {

constexpr std::array<std::pair<Category, std::string_view>, 8> kCategoryNames{{
    {Category::DatasetOrEnvironment, "Dataset or Environment"},
    {Category::DataPrePostProcessing, "Data preprocessing and postprocessing"},
    {Category::MachineLearningMethod, "Machine Learning Method"},
    {Category::SaveTrainedModel, "Save Trained Model"},
    {Category::PerformanceMetrics, "Performance Metrics"},
    {Category::HumanComputerInteraction, "Human Computer Interaction"},
    {Category::Visualization, "Visualization"},
    {Category::Other, "Other"},
}};

std::string collapse_spaces(std::string_view s) {
  std::string out;
  bool in_space = false;
  for (char c : text::trim(s)) {
    const bool space = c == ' ' || c == '\t' || c == '\n' || c == '\r';
    if (space) {
      if (!in_space) out += ' ';
    } else {
      out += c;
    }
    in_space = space;
  }
  return out;
}

Json nullable(const std::optional<bool>& v) { return v ? Json(*v) : Json(nullptr); }

}  // namespace

std::string_view category_name(Category c) noexcept {
  for (const auto& [cat, name] : kCategoryNames) {
    if (cat == c) return name;
  }
  return "Other";
}

std::optional<Category> parse_category(std::string_view label) {
  const auto normalized = collapse_spaces(label);
  for (const auto& [cat, name] : kCategoryNames) {
    if (text::iequals(normalized, name)) return cat;
  }
  return std::nullopt;
}

ConstraintSet ConstraintSet::defaults() {
  return ConstraintSet{
      "This is a task that requires you to write, execute, and save source code. You have a hard time limit of "
      "30 minutes to produce your programmatic solution to the given task. This time limit includes execution "
      "time. The quality of your solution will be judged based on what you left in the working folder by the "
      "time 30 minutes expire. Additionally, the hardware you are running on is unknown, and the presence of a "
      "GPU is not guaranteed.",
      "Keep the time limit in mind when setting hyperparameters for training.",
      "You can use the Kaggle API credentials stored in `kaggle.json` in your current working directory.",
  };
}

ConstraintSet ConstraintSet::from_json(const Json& doc) {
  detail::require_object(doc, "constraints");
  ConstraintSet c{
      detail::require_string(doc, "generic", "constraints"),
      detail::require_string(doc, "is_training_needed", "constraints"),
      detail::require_string(doc, "is_kaggle_api_needed", "constraints"),
  };
  if (text::trim(c.generic).empty()) {
    throw Error(ErrorKind::SchemaViolation, "constraints.generic: must be non-empty");
  }
  return c;
}

Task task_from_json(const Json& doc) {
  detail::require_object(doc, "task");
  Task task;
  task.name = detail::require_string(doc, "name", "task");
  task.query = detail::require_string(doc, "query", "task");

  const auto& tags = detail::require(doc, "tags", "task");
  if (!tags.is_array()) throw Error(ErrorKind::SchemaViolation, "task.tags: expected an array");
  for (const auto& t : tags) {
    if (!t.is_string()) throw Error(ErrorKind::SchemaViolation, "task.tags: expected strings");
    task.tags.push_back(t.get<std::string>());
  }

  const auto& reqs = detail::require(doc, "requirements", "task");
  if (!reqs.is_array()) throw Error(ErrorKind::SchemaViolation, "task.requirements: expected an array");
  for (std::size_t i = 0; i < reqs.size(); ++i) {
    const auto& r = reqs[i];
    const auto where = "requirements[" + std::to_string(i) + "]";
    detail::require_object(r, where);
    Requirement req;
    req.requirement_id = static_cast<int>(detail::require_integer(r, "requirement_id", where));
    if (req.requirement_id != static_cast<int>(i)) {
      throw Error(ErrorKind::SchemaViolation,
                  where + ".requirement_id: expected " + std::to_string(i) + ", found " +
                      std::to_string(req.requirement_id));
    }
    const auto& prereqs = detail::require(r, "prerequisites", where);
    if (!prereqs.is_array()) throw Error(ErrorKind::SchemaViolation, where + ".prerequisites: expected an array");
    for (const auto& p : prereqs) {
      if (!p.is_number_integer()) {
        throw Error(ErrorKind::SchemaViolation, where + ".prerequisites: expected integers");
      }
      const int id = p.get<int>();
      if (std::find(req.prerequisites.begin(), req.prerequisites.end(), id) != req.prerequisites.end()) {
        throw Error(ErrorKind::SchemaViolation, where + ".prerequisites: duplicate id " + std::to_string(id));
      }
      req.prerequisites.push_back(id);
    }
    req.criteria = detail::require_string(r, "criteria", where);
    req.category_label = detail::require_string(r, "category", where);
    const auto cat = parse_category(req.category_label);
    if (!cat) throw Error(ErrorKind::UnknownCategory, where + ".category: \"" + req.category_label + "\"");
    req.category = *cat;
    req.satisfied = detail::nullable_bool(r, "satisfied", where);
    req.extra = detail::collect_extra(r, {"requirement_id", "prerequisites", "criteria", "category", "satisfied"});
    task.requirements.push_back(std::move(req));
  }
  const auto count = static_cast<int>(task.requirements.size());
  for (const auto& req : task.requirements) {
    for (int p : req.prerequisites) {
      if (p < 0 || p >= count) {
        throw Error(ErrorKind::UnknownPrerequisite, "requirement " + std::to_string(req.requirement_id) +
                                                        " lists prerequisite " + std::to_string(p));
      }
    }
  }

  if (auto it = doc.find("preferences"); it != doc.end() && !it->is_null()) {
    if (!it->is_array()) throw Error(ErrorKind::SchemaViolation, "task.preferences: expected an array");
    for (std::size_t i = 0; i < it->size(); ++i) {
      const auto& p = (*it)[i];
      const auto where = "preferences[" + std::to_string(i) + "]";
      detail::require_object(p, where);
      Preference pref;
      pref.preference_id = static_cast<int>(detail::require_integer(p, "preference_id", where));
      if (pref.preference_id != static_cast<int>(i)) {
        throw Error(ErrorKind::SchemaViolation, where + ".preference_id: expected " + std::to_string(i));
      }
      pref.criteria = detail::require_string(p, "criteria", where);
      pref.satisfied = detail::nullable_bool(p, "satisfied", where);
      pref.extra = detail::collect_extra(p, {"preference_id", "criteria", "satisfied"});
      task.preferences.push_back(std::move(pref));
    }
  }

  task.is_kaggle_api_needed = detail::require_bool(doc, "is_kaggle_api_needed", "task");
  task.is_training_needed = detail::require_bool(doc, "is_training_needed", "task");
  task.is_web_navigation_needed = detail::require_bool(doc, "is_web_navigation_needed", "task");
  task.extra = detail::collect_extra(doc, {"name", "query", "tags", "requirements", "preferences",
                                           "is_kaggle_api_needed", "is_training_needed",
                                           "is_web_navigation_needed"});
  return task;
}

Task parse_task(std::string_view raw_document) { return task_from_json(detail::parse_document(raw_document)); }

Task load_task_file(const std::string& path) { return parse_task(detail::read_file(path)); }

Json task_to_json(const Task& task) {
  Json doc = Json::object();
  doc["name"] = task.name;
  doc["query"] = task.query;
  doc["tags"] = task.tags;
  doc["requirements"] = Json::array();
  for (const auto& r : task.requirements) {
    Json jr = Json::object();
    jr["requirement_id"] = r.requirement_id;
    jr["prerequisites"] = r.prerequisites;
    jr["criteria"] = r.criteria;
    jr["category"] = r.category_label.empty() ? std::string(category_name(r.category)) : r.category_label;
    jr["satisfied"] = nullable(r.satisfied);
    detail::append_extra(jr, r.extra);
    doc["requirements"].push_back(std::move(jr));
  }
  doc["preferences"] = Json::array();
  for (const auto& p : task.preferences) {
    Json jp = Json::object();
    jp["preference_id"] = p.preference_id;
    jp["criteria"] = p.criteria;
    jp["satisfied"] = nullable(p.satisfied);
    detail::append_extra(jp, p.extra);
    doc["preferences"].push_back(std::move(jp));
  }
  doc["is_kaggle_api_needed"] = task.is_kaggle_api_needed;
  doc["is_training_needed"] = task.is_training_needed;
  doc["is_web_navigation_needed"] = task.is_web_navigation_needed;
  detail::append_extra(doc, task.extra);
  return doc;
}

std::string serialize_task(const Task& task, int indent) { return task_to_json(task).dump(indent) + "\n"; }

std::optional<std::vector<int>> validate_dag(const Task& task) {
  enum class Mark { White, Gray, Black };
  const auto n = task.requirements.size();
  std::vector<Mark> mark(n, Mark::White);
  std::vector<int> stack;
  std::optional<std::vector<int>> cycle;

  std::function<bool(int)> visit = [&](int id) {
    mark[id] = Mark::Gray;
    stack.push_back(id);
    auto prereqs = task.requirements[id].prerequisites;
    std::sort(prereqs.begin(), prereqs.end());
    for (int p : prereqs) {
      if (p < 0 || static_cast<std::size_t>(p) >= n) continue;
      if (mark[p] == Mark::Gray) {
        auto start = std::find(stack.begin(), stack.end(), p);
        cycle = std::vector<int>(start, stack.end());
        return true;
      }
      if (mark[p] == Mark::White && visit(p)) return true;
    }
    stack.pop_back();
    mark[id] = Mark::Black;
    return false;
  };

  for (std::size_t id = 0; id < n; ++id) {
    if (mark[id] == Mark::White && visit(static_cast<int>(id))) return cycle;
  }
  return std::nullopt;
}

std::vector<int> topological_order(const Task& task) {
  const auto n = task.requirements.size();
  std::vector<std::size_t> indegree(n, 0);
  std::vector<std::vector<int>> dependents(n);
  for (const auto& r : task.requirements) {
    for (int p : r.prerequisites) {
      if (p < 0 || static_cast<std::size_t>(p) >= n) continue;
      dependents[p].push_back(r.requirement_id);
      ++indegree[r.requirement_id];
    }
  }
  std::priority_queue<int, std::vector<int>, std::greater<>> ready;
  for (std::size_t i = 0; i < n; ++i) {
    if (indegree[i] == 0) ready.push(static_cast<int>(i));
  }
  std::vector<int> order;
  order.reserve(n);
  while (!ready.empty()) {
    const int id = ready.top();
    ready.pop();
    order.push_back(id);
    for (int d : dependents[id]) {
      if (--indegree[d] == 0) ready.push(d);
    }
  }
  if (order.size() != n) {
    throw Error(ErrorKind::SchemaViolation, "topological_order: prerequisite relation of task \"" + task.name +
                                                "\" is cyclic");
  }
  return order;
}

std::string extend_query(const Task& task, const ConstraintSet& constraints) {
  std::string out = task.query;
  out += "\n\n";
  out += constraints.generic;
  if (task.is_training_needed) {
    out += "\n\n";
    out += constraints.is_training_needed;
  }
  if (task.is_kaggle_api_needed) {
    out += "\n\n";
    out += constraints.is_kaggle_api_needed;
  }
  return out;
}

}  // namespace devjudge
