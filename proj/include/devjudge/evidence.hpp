#pragma once

#include <functional>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <string_view>
#include <vector>

#include "backend.hpp"
#include "search.hpp"
#include "task.hpp"
#include "trajectory.hpp"
#include "verdict.hpp"
#include "workspace.hpp"

namespace devjudge {

struct EvidenceItem {
  EvidenceSource source = EvidenceSource::LocatedFile;
  std::string path_or_ref;
  std::string payload;  // never empty
};

class Evidence {
 public:
  void add(EvidenceItem item);
  [[nodiscard]] const std::vector<EvidenceItem>& items() const noexcept { return items_; }
  [[nodiscard]] std::size_t total_chars() const noexcept { return total_chars_; }
  [[nodiscard]] bool empty() const noexcept { return items_.empty(); }
  [[nodiscard]] std::vector<EvidenceRef> refs() const;

  /// Text handed to the ask prompt: items grouped by source in the fixed
  /// order located files, file contents, search hits, trajectory, memory.
  [[nodiscard]] std::string render() const;

 private:
  std::vector<EvidenceItem> items_;
  std::size_t total_chars_ = 0;
};

/// Paths mentioned in free text: quoted names with an extension and any
/// slash-separated token. URLs are ignored.
std::vector<std::string> extract_path_mentions(std::string_view text);

/// Maps a path as written by a model (possibly absolute, with an invented
/// project prefix) onto a path present in the graph.
std::optional<std::string> normalize_workspace_path(std::string_view raw, const WorkspaceGraph& graph);

inline constexpr std::size_t kMaxLocatedPaths = 5;

/// Every $...$ delimited span, in order.
std::vector<std::string> parse_dollar_paths(std::string_view reply);

struct LocateResult {
  std::vector<std::string> paths;
  UsageLedger usage;
};

LocateResult locate(std::string_view criteria, const WorkspaceGraph& graph, JudgmentBackend& backend);

/// Applies the post-processing half of locate to a raw reply.
std::vector<std::string> select_located_paths(std::string_view reply, const WorkspaceGraph& graph);

using FileReader = std::function<std::string(const std::filesystem::path& file, const Node& node)>;

struct ReadOptions {
  std::size_t max_bytes = 64 * 1024;
  // Extension (lowercase, with dot) -> reader, consulted before the builtin
  // text/binary handling. Image, audio and video readers plug in here.
  std::map<std::string, FileReader> readers;
};

EvidenceItem read(std::string_view path, const WorkspaceGraph& graph, const ReadOptions& options = {});

/// Keeps the first and last max_bytes/2 bytes of text around an elision line.
std::string middle_truncate(std::string_view text, std::size_t max_bytes);

struct RetrieveResult {
  EvidenceItem item;
  UsageLedger usage;
  std::string prompt;  // the user prompt as sent, for audit
};

RetrieveResult retrieve(std::string_view criteria, const Trajectory* trajectory,
                        const TruncationStrategy& strategy, JudgmentBackend& backend);

/// Text following the <RELEVANT STEPS> marker, or the whole reply when absent.
std::string extract_relevant_steps(std::string_view reply);

std::vector<SearchHit> search_evidence(std::string_view criteria, const SearchIndex& index, std::size_t k,
                                       Evidence& into);

class JudgmentMemory {
 public:
  void record(const Verdict& verdict);
  [[nodiscard]] std::vector<EvidenceItem> recall(const Requirement& requirement) const;
  [[nodiscard]] std::size_t size() const noexcept { return verdicts_.size(); }

 private:
  std::map<int, Verdict> verdicts_;
};

enum class Module { Graph, Locate, Read, Search, Retrieve, Planning, Memory, Ask };

std::string_view to_string(Module module) noexcept;
std::optional<Module> parse_module(std::string_view name);

/// Execution order used when planning is off.
const std::vector<Module>& default_module_order();

struct PlanResult {
  std::vector<Module> order;
  bool fell_back = false;
  UsageLedger usage;
};

PlanResult plan_next(std::string_view criteria, const std::set<Module>& available, JudgmentBackend& backend);

/// Parses a planning reply; std::nullopt when no module name is recognised.
std::optional<std::vector<Module>> parse_plan(std::string_view reply, const std::set<Module>& available);

}  // namespace devjudge
