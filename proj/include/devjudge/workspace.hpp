#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

#include "json.hpp"

namespace devjudge {

using Json = nlohmann::ordered_json;

struct NodeId {
  std::uint32_t value = 0;
  friend bool operator==(NodeId, NodeId) = default;
  friend auto operator<=>(NodeId, NodeId) = default;
};

enum class NodeKind { Directory, File, Snippet };
enum class FileKind { Code, Text, Data, Binary, Other };

std::string_view to_string(NodeKind kind) noexcept;
std::string_view to_string(FileKind kind) noexcept;

struct Node {
  NodeId id;
  NodeKind kind = NodeKind::File;
  std::string path;  // "/"-separated, relative to the workspace root; root is "."
  FileKind file_kind = FileKind::Other;
  std::size_t line_count = 0;
  std::uintmax_t byte_size = 0;
  // Snippet nodes only: 1-based inclusive line range and the verbatim text.
  std::size_t start_line = 0;
  std::size_t end_line = 0;
  std::string text;
  std::optional<NodeId> parent;
};

enum class EdgeKind { Contains, Imports };

struct Edge {
  NodeId from;
  NodeId to;
  EdgeKind kind = EdgeKind::Contains;
  friend bool operator==(const Edge&, const Edge&) = default;
};

struct GraphOptions {
  std::vector<std::string> ignore_patterns{".git", "__pycache__"};  // fnmatch on entry names
  bool ignore_hidden = true;
  bool chunk_code_files = true;
  std::size_t chunk_max_lines = 80;
};

/// Classification by extension and content sniffing; exposed for tests.
FileKind classify_file(std::string_view filename, std::string_view content_prefix);

class WorkspaceGraph {
 public:
  [[nodiscard]] const std::filesystem::path& root_dir() const noexcept { return root_dir_; }
  [[nodiscard]] NodeId root() const noexcept { return NodeId{0}; }
  [[nodiscard]] const std::vector<Node>& nodes() const noexcept { return nodes_; }
  [[nodiscard]] const std::vector<Edge>& edges() const noexcept { return edges_; }
  [[nodiscard]] const Node& node(NodeId id) const { return nodes_.at(id.value); }

  /// Directory or file node for a workspace-relative path.
  [[nodiscard]] std::optional<NodeId> find(std::string_view path) const;
  [[nodiscard]] std::vector<NodeId> children(NodeId id) const;
  [[nodiscard]] std::vector<NodeId> snippets_of(NodeId file) const;
  [[nodiscard]] std::vector<NodeId> files() const;

  /// Indented tree listing of directories and files.
  [[nodiscard]] std::string render_tree(std::string_view root_label) const;
  [[nodiscard]] Json dump() const;

 private:
  friend WorkspaceGraph build_graph(const std::filesystem::path&, const GraphOptions&);
  NodeId add_node(Node node);
  void add_edge(NodeId from, NodeId to, EdgeKind kind);

  std::filesystem::path root_dir_;
  std::vector<Node> nodes_;
  std::vector<Edge> edges_;
  std::unordered_map<std::string, NodeId> by_path_;
};

WorkspaceGraph build_graph(const std::filesystem::path& root_path, const GraphOptions& options = {});

struct LineRange {
  std::size_t first = 0;  // 0-based, inclusive
  std::size_t last = 0;   // 0-based, exclusive
  friend bool operator==(const LineRange&, const LineRange&) = default;
};

/// Partitions `lines` into consecutive chunks of at most max_lines lines,
/// preferring to end a chunk right after a blank line found within the last
/// five lines of the window.
std::vector<LineRange> plan_chunks(const std::vector<std::string>& lines, std::size_t max_lines);

/// Splits content into lines, each keeping its terminator.
std::vector<std::string> split_keep_newlines(std::string_view content);

/// Snippet nodes (not yet attached to any graph) for one code file.
std::vector<Node> chunk_code(const WorkspaceGraph& graph, NodeId file, std::size_t max_lines = 80);

struct WorkspaceStats {
  std::size_t saved_code_files = 0;
  std::size_t saved_code_lines = 0;
  std::size_t saved_files = 0;
  friend bool operator==(const WorkspaceStats&, const WorkspaceStats&) = default;
};

WorkspaceStats workspace_stats(const WorkspaceGraph& graph);

std::size_t count_lines(std::string_view content) noexcept;

}  // namespace devjudge
