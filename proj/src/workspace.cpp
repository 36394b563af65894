#include "devjudge/workspace.hpp"

#include <fnmatch.h>

#include <algorithm>
#include <array>
#include <fstream>
#include <functional>
#include <regex>
#include <set>
#include <sstream>
#include <system_error>

#include "devjudge/error.hpp"
#include "devjudge/text.hpp"

namespace fs = std::filesystem;

namespace devjudge {

namespace {

constexpr std::array<std::string_view, 28> kCodeExtensions{
    ".py", ".rs",  ".js",  ".ts",   ".jsx", ".tsx", ".mjs", ".java", ".cpp", ".cc",
    ".cxx", ".c",  ".h",   ".hpp",  ".hh",  ".go",  ".sh",  ".bash", ".rb",  ".kt",
    ".scala", ".cs", ".swift", ".r", ".jl", ".lua", ".php", ".pl"};

constexpr std::array<std::string_view, 9> kDataExtensions{".csv", ".tsv",  ".json", ".jsonl", ".yaml",
                                                          ".yml", ".xml", ".toml", ".ipynb"};

constexpr std::size_t kSniffBytes = 8192;

template <std::size_t N>
bool has_extension(const std::array<std::string_view, N>& list, std::string_view ext) {
  return std::find(list.begin(), list.end(), ext) != list.end();
}

std::string extension_of(std::string_view filename) {
  const auto dot = filename.rfind('.');
  if (dot == std::string_view::npos || dot == 0) return {};
  return text::to_lower(filename.substr(dot));
}

std::string read_all(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  if (!in) throw Error(ErrorKind::PermissionDenied, "cannot read " + p.string());
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

std::string parent_of(std::string_view rel) {
  const auto slash = rel.rfind('/');
  return slash == std::string_view::npos ? std::string() : std::string(rel.substr(0, slash));
}

// Lexically joins and normalises; std::nullopt when the result escapes the root.
std::optional<std::string> join_rel(std::string_view dir, std::string_view spec) {
  fs::path p = dir.empty() ? fs::path(spec) : fs::path(dir) / fs::path(spec);
  auto norm = p.lexically_normal().generic_string();
  while (!norm.empty() && norm.back() == '/') norm.pop_back();
  if (norm.empty() || norm == "." || norm.starts_with("..") || norm.starts_with("/")) return std::nullopt;
  return norm;
}

std::vector<std::string> ancestors_of(std::string_view dir) {
  std::vector<std::string> out{std::string(dir)};
  std::string cur(dir);
  while (!cur.empty()) {
    cur = parent_of(cur);
    out.push_back(cur);
  }
  return out;
}

std::string replace_dots(std::string_view module) {
  std::string out(module);
  std::replace(out.begin(), out.end(), '.', '/');
  return out;
}

struct ImportContext {
  std::string file;  // importing file, workspace-relative
  std::string dir;
  std::function<bool(const std::string&)> exists;
  std::function<std::optional<std::string>(const std::string&)> by_suffix;
};

void resolve_first(const ImportContext& ctx, const std::vector<std::optional<std::string>>& candidates,
                   std::set<std::string>& out) {
  for (const auto& c : candidates) {
    if (c && *c != ctx.file && ctx.exists(*c)) {
      out.insert(*c);
      return;
    }
  }
}

void python_imports(const ImportContext& ctx, const std::vector<std::string>& lines, std::set<std::string>& out) {
  static const std::regex import_re(R"(^\s*import\s+(.+))");
  static const std::regex from_re(R"(^\s*from\s+(\.*)([\w.]*)\s+import\s+(.+))");
  auto module_candidates = [&](const std::string& base, const std::string& module) {
    const auto rel = replace_dots(module);
    return std::vector<std::optional<std::string>>{join_rel(base, rel + ".py"), join_rel(base, rel + "/__init__.py")};
  };
  auto split_names = [](std::string list) {
    std::vector<std::string> names;
    list.erase(std::remove_if(list.begin(), list.end(), [](char c) { return c == '(' || c == ')'; }), list.end());
    std::stringstream ss(list);
    std::string item;
    while (std::getline(ss, item, ',')) {
      auto t = std::string(text::trim(item));
      if (auto sp = t.find(' '); sp != std::string::npos) t = t.substr(0, sp);
      if (auto hash = t.find('#'); hash != std::string::npos) t = t.substr(0, hash);
      if (!t.empty() && t != "*") names.push_back(t);
    }
    return names;
  };

  for (const auto& line : lines) {
    std::smatch m;
    if (std::regex_match(line, m, from_re)) {
      const auto level = m[1].length();
      const std::string module = m[2];
      if (level > 0) {
        std::string base = ctx.dir;
        for (std::ptrdiff_t i = 1; i < level; ++i) base = parent_of(base);
        if (!module.empty()) resolve_first(ctx, module_candidates(base, module), out);
        std::string sub_base = base;
        if (!module.empty()) {
          if (auto joined = join_rel(base, replace_dots(module))) sub_base = *joined;
        }
        for (const auto& name : split_names(m[3])) resolve_first(ctx, module_candidates(sub_base, name), out);
      } else if (!module.empty()) {
        // "from pkg import mod" may name a submodule rather than an attribute.
        for (const auto& base : ancestors_of(ctx.dir)) {
          const auto before = out.size();
          resolve_first(ctx, module_candidates(base, module), out);
          if (auto pkg = join_rel(base, replace_dots(module))) {
            for (const auto& name : split_names(m[3])) resolve_first(ctx, module_candidates(*pkg, name), out);
          }
          if (out.size() != before) break;
        }
      }
    } else if (std::regex_match(line, m, import_re)) {
      for (const auto& module : split_names(m[1])) {
        for (const auto& base : ancestors_of(ctx.dir)) {
          const auto before = out.size();
          resolve_first(ctx, module_candidates(base, module), out);
          if (out.size() != before) break;
        }
      }
    }
  }
}

void script_imports(const ImportContext& ctx, const std::vector<std::string>& lines, std::set<std::string>& out) {
  static const std::regex from_re(R"((?:import|export)\s[^'"]*?from\s*['"]([^'"]+)['"])");
  static const std::regex bare_re(R"(^\s*import\s*['"]([^'"]+)['"])");
  static const std::regex require_re(R"(require\(\s*['"]([^'"]+)['"]\s*\))");
  for (const auto& line : lines) {
    for (const auto* re : {&from_re, &bare_re, &require_re}) {
      for (std::sregex_iterator it(line.begin(), line.end(), *re), end; it != end; ++it) {
        const std::string spec = (*it)[1];
        if (!spec.starts_with(".")) continue;
        std::vector<std::optional<std::string>> candidates;
        for (std::string_view suffix : {"", ".js", ".ts", ".jsx", ".tsx", ".mjs", "/index.js", "/index.ts"}) {
          candidates.push_back(join_rel(ctx.dir, spec + std::string(suffix)));
        }
        resolve_first(ctx, candidates, out);
      }
    }
  }
}

void c_imports(const ImportContext& ctx, const std::vector<std::string>& lines, std::set<std::string>& out) {
  static const std::regex include_re(R"(^\s*#\s*include\s*\"([^\"]+)\")");
  for (const auto& line : lines) {
    std::smatch m;
    if (!std::regex_search(line, m, include_re)) continue;
    std::vector<std::optional<std::string>> candidates;
    for (const auto& base : ancestors_of(ctx.dir)) candidates.push_back(join_rel(base, m[1].str()));
    resolve_first(ctx, candidates, out);
  }
}

void rust_imports(const ImportContext& ctx, const std::vector<std::string>& lines, std::set<std::string>& out) {
  static const std::regex mod_re(R"(^\s*(?:pub(?:\([^)]*\))?\s+)?mod\s+(\w+)\s*;)");
  for (const auto& line : lines) {
    std::smatch m;
    if (!std::regex_search(line, m, mod_re)) continue;
    resolve_first(ctx, {join_rel(ctx.dir, m[1].str() + ".rs"), join_rel(ctx.dir, m[1].str() + "/mod.rs")}, out);
  }
}

void java_imports(const ImportContext& ctx, const std::vector<std::string>& lines, std::set<std::string>& out) {
  static const std::regex import_re(R"(^\s*import\s+(?:static\s+)?([\w.]+)\s*;)");
  for (const auto& line : lines) {
    std::smatch m;
    if (!std::regex_search(line, m, import_re)) continue;
    if (auto hit = ctx.by_suffix(replace_dots(m[1].str()) + ".java"); hit && *hit != ctx.file) out.insert(*hit);
  }
}

void shell_imports(const ImportContext& ctx, const std::vector<std::string>& lines, std::set<std::string>& out) {
  static const std::regex source_re(R"(^\s*(?:source|\.)\s+([^\s;]+))");
  for (const auto& line : lines) {
    std::smatch m;
    if (!std::regex_search(line, m, source_re)) continue;
    resolve_first(ctx, {join_rel(ctx.dir, m[1].str())}, out);
  }
}

std::set<std::string> extract_imports(const ImportContext& ctx, std::string_view content) {
  const auto ext = extension_of(ctx.file);
  const auto lines = text::split_lines(content);
  std::set<std::string> out;
  if (ext == ".py") {
    python_imports(ctx, lines, out);
  } else if (ext == ".js" || ext == ".ts" || ext == ".jsx" || ext == ".tsx" || ext == ".mjs") {
    script_imports(ctx, lines, out);
  } else if (ext == ".c" || ext == ".cc" || ext == ".cpp" || ext == ".cxx" || ext == ".h" || ext == ".hpp" ||
             ext == ".hh") {
    c_imports(ctx, lines, out);
  } else if (ext == ".rs") {
    rust_imports(ctx, lines, out);
  } else if (ext == ".java") {
    java_imports(ctx, lines, out);
  } else if (ext == ".sh" || ext == ".bash") {
    shell_imports(ctx, lines, out);
  }
  return out;
}

bool is_ignored(const std::string& name, const GraphOptions& options) {
  if (options.ignore_hidden && name.starts_with(".")) return true;
  for (const auto& pattern : options.ignore_patterns) {
    if (::fnmatch(pattern.c_str(), name.c_str(), 0) == 0) return true;
  }
  return false;
}

}  // namespace

std::string_view to_string(NodeKind kind) noexcept {
  switch (kind) {
    case NodeKind::Directory: return "directory";
    case NodeKind::File: return "file";
    case NodeKind::Snippet: return "snippet";
  }
  return "file";
}

std::string_view to_string(FileKind kind) noexcept {
  switch (kind) {
    case FileKind::Code: return "code";
    case FileKind::Text: return "text";
    case FileKind::Data: return "data";
    case FileKind::Binary: return "binary";
    case FileKind::Other: return "other";
  }
  return "other";
}

FileKind classify_file(std::string_view filename, std::string_view content_prefix) {
  const auto prefix = content_prefix.substr(0, kSniffBytes);
  if (prefix.find('\0') != std::string_view::npos || !text::is_valid_utf8(prefix, true)) return FileKind::Binary;
  const auto ext = extension_of(filename);
  if (has_extension(kCodeExtensions, ext)) return FileKind::Code;
  if (has_extension(kDataExtensions, ext)) return FileKind::Data;
  return FileKind::Text;
}

std::size_t count_lines(std::string_view content) noexcept {
  if (content.empty()) return 0;
  auto n = static_cast<std::size_t>(std::count(content.begin(), content.end(), '\n'));
  if (content.back() != '\n') ++n;
  return n;
}

std::vector<std::string> split_keep_newlines(std::string_view content) {
  std::vector<std::string> lines;
  std::size_t start = 0;
  while (start < content.size()) {
    const auto nl = content.find('\n', start);
    const auto end = nl == std::string_view::npos ? content.size() : nl + 1;
    lines.emplace_back(content.substr(start, end - start));
    start = end;
  }
  return lines;
}

std::vector<LineRange> plan_chunks(const std::vector<std::string>& lines, std::size_t max_lines) {
  if (max_lines == 0) throw Error(ErrorKind::InvalidConfig, "chunk max_lines must be > 0");
  constexpr std::size_t kWindow = 5;
  std::vector<LineRange> out;
  std::size_t pos = 0;
  const auto n = lines.size();
  while (pos < n) {
    std::size_t end = std::min(n, pos + max_lines);
    if (end < n) {
      const std::size_t lowest = std::max(pos + 1, end > kWindow ? end - kWindow : 0);
      for (std::size_t b = end; b >= lowest && b > pos; --b) {
        if (text::trim(lines[b - 1]).empty()) {
          end = b;
          break;
        }
      }
    }
    out.push_back({pos, end});
    pos = end;
  }
  return out;
}

NodeId WorkspaceGraph::add_node(Node node) {
  node.id = NodeId{static_cast<std::uint32_t>(nodes_.size())};
  if (node.kind != NodeKind::Snippet) by_path_.emplace(node.path, node.id);
  nodes_.push_back(std::move(node));
  return nodes_.back().id;
}

void WorkspaceGraph::add_edge(NodeId from, NodeId to, EdgeKind kind) { edges_.push_back(Edge{from, to, kind}); }

std::optional<NodeId> WorkspaceGraph::find(std::string_view path) const {
  std::string key(path);
  while (key.size() > 1 && key.back() == '/') key.pop_back();
  if (key.empty()) key = ".";
  auto it = by_path_.find(key);
  if (it == by_path_.end()) return std::nullopt;
  return it->second;
}

std::vector<NodeId> WorkspaceGraph::children(NodeId id) const {
  std::vector<NodeId> out;
  for (const auto& e : edges_) {
    if (e.kind == EdgeKind::Contains && e.from == id) out.push_back(e.to);
  }
  return out;
}

std::vector<NodeId> WorkspaceGraph::snippets_of(NodeId file) const {
  std::vector<NodeId> out;
  for (auto child : children(file)) {
    if (node(child).kind == NodeKind::Snippet) out.push_back(child);
  }
  return out;
}

std::vector<NodeId> WorkspaceGraph::files() const {
  std::vector<NodeId> out;
  for (const auto& n : nodes_) {
    if (n.kind == NodeKind::File) out.push_back(n.id);
  }
  return out;
}

std::string WorkspaceGraph::render_tree(std::string_view root_label) const {
  std::string out(root_label);
  out += '\n';
  std::function<void(NodeId, const std::string&)> walk = [&](NodeId id, const std::string& indent) {
    std::vector<NodeId> kids;
    for (auto c : children(id)) {
      if (node(c).kind != NodeKind::Snippet) kids.push_back(c);
    }
    for (std::size_t i = 0; i < kids.size(); ++i) {
      const auto& n = node(kids[i]);
      const auto slash = n.path.rfind('/');
      out += indent + "|-- " + (slash == std::string::npos ? n.path : n.path.substr(slash + 1)) + "\n";
      if (n.kind == NodeKind::Directory) walk(kids[i], indent + (i + 1 == kids.size() ? "    " : "|   "));
    }
  };
  walk(root(), "");
  return out;
}

Json WorkspaceGraph::dump() const {
  Json doc = Json::object();
  doc["root"] = root().value;
  doc["nodes"] = Json::array();
  for (const auto& n : nodes_) {
    Json j = Json::object();
    j["id"] = n.id.value;
    j["kind"] = to_string(n.kind);
    j["path"] = n.path;
    if (n.kind == NodeKind::File) j["file_kind"] = to_string(n.file_kind);
    if (n.kind != NodeKind::Directory) j["line_count"] = n.line_count;
    j["byte_size"] = n.byte_size;
    if (n.kind == NodeKind::Snippet) {
      j["start_line"] = n.start_line;
      j["end_line"] = n.end_line;
    }
    doc["nodes"].push_back(std::move(j));
  }
  doc["edges"] = Json::array();
  for (const auto& e : edges_) {
    doc["edges"].push_back(Json{{"from", e.from.value},
                                {"to", e.to.value},
                                {"kind", e.kind == EdgeKind::Contains ? "contains" : "imports"}});
  }
  return doc;
}

WorkspaceGraph build_graph(const fs::path& root_path, const GraphOptions& options) {
  std::error_code ec;
  if (!fs::is_directory(root_path, ec)) {
    throw Error(ErrorKind::RootNotFound, root_path.string() + " is not a directory");
  }
  WorkspaceGraph g;
  g.root_dir_ = fs::absolute(root_path).lexically_normal();
  Node root;
  root.kind = NodeKind::Directory;
  root.path = ".";
  g.add_node(std::move(root));

  std::vector<std::pair<NodeId, std::string>> code_contents;

  std::function<void(const fs::path&, NodeId, const std::string&)> walk =
      [&](const fs::path& dir, NodeId parent, const std::string& rel_dir) {
        std::vector<fs::directory_entry> entries;
        try {
          for (const auto& entry : fs::directory_iterator(dir)) entries.push_back(entry);
        } catch (const fs::filesystem_error& e) {
          if (e.code() == std::errc::permission_denied) {
            throw Error(ErrorKind::PermissionDenied, dir.string());
          }
          throw Error(ErrorKind::RootNotFound, e.what());
        }
        std::sort(entries.begin(), entries.end(), [](const auto& a, const auto& b) {
          return a.path().filename().string() < b.path().filename().string();
        });
        for (const auto& entry : entries) {
          const auto name = entry.path().filename().string();
          if (is_ignored(name, options)) continue;
          const auto rel = rel_dir.empty() ? name : rel_dir + "/" + name;
          Node n;
          n.path = rel;
          n.parent = parent;
          if (entry.is_symlink()) {
            n.kind = NodeKind::File;
            n.file_kind = FileKind::Other;
            const auto id = g.add_node(std::move(n));
            g.add_edge(parent, id, EdgeKind::Contains);
          } else if (entry.is_directory()) {
            n.kind = NodeKind::Directory;
            const auto id = g.add_node(std::move(n));
            g.add_edge(parent, id, EdgeKind::Contains);
            walk(entry.path(), id, rel);
          } else if (entry.is_regular_file()) {
            auto content = read_all(entry.path());
            n.kind = NodeKind::File;
            n.byte_size = content.size();
            n.file_kind = classify_file(name, content);
            if (n.file_kind != FileKind::Binary) n.line_count = count_lines(content);
            const auto id = g.add_node(std::move(n));
            g.add_edge(parent, id, EdgeKind::Contains);
            if (g.node(id).file_kind == FileKind::Code) code_contents.emplace_back(id, std::move(content));
          } else {
            n.kind = NodeKind::File;
            n.file_kind = FileKind::Other;
            const auto id = g.add_node(std::move(n));
            g.add_edge(parent, id, EdgeKind::Contains);
          }
        }
      };
  walk(g.root_dir_, g.root(), "");

  ImportContext ctx;
  ctx.exists = [&](const std::string& p) {
    auto id = g.find(p);
    return id && g.node(*id).kind == NodeKind::File;
  };
  ctx.by_suffix = [&](const std::string& suffix) -> std::optional<std::string> {
    for (const auto& n : g.nodes()) {
      if (n.kind == NodeKind::File && (n.path == suffix || n.path.ends_with("/" + suffix))) return n.path;
    }
    return std::nullopt;
  };
  for (const auto& [id, content] : code_contents) {
    ctx.file = g.node(id).path;
    ctx.dir = parent_of(ctx.file);
    for (const auto& target : extract_imports(ctx, content)) {
      g.add_edge(id, *g.find(target), EdgeKind::Imports);
    }
  }

  if (options.chunk_code_files) {
    for (const auto& [id, content] : code_contents) {
      const auto lines = split_keep_newlines(content);
      for (const auto& range : plan_chunks(lines, options.chunk_max_lines)) {
        Node s;
        s.kind = NodeKind::Snippet;
        s.path = g.node(id).path;
        s.parent = id;
        s.start_line = range.first + 1;
        s.end_line = range.last;
        s.line_count = range.last - range.first;
        for (auto i = range.first; i < range.last; ++i) s.text += lines[i];
        s.byte_size = s.text.size();
        const auto sid = g.add_node(std::move(s));
        g.add_edge(id, sid, EdgeKind::Contains);
      }
    }
  }
  return g;
}

std::vector<Node> chunk_code(const WorkspaceGraph& graph, NodeId file, std::size_t max_lines) {
  const auto& n = graph.node(file);
  if (n.kind != NodeKind::File || n.file_kind != FileKind::Code) {
    throw Error(ErrorKind::NotACodeFile, n.path);
  }
  const auto content = read_all(graph.root_dir() / n.path);
  const auto lines = split_keep_newlines(content);
  std::vector<Node> out;
  for (const auto& range : plan_chunks(lines, max_lines)) {
    Node s;
    s.kind = NodeKind::Snippet;
    s.path = n.path;
    s.parent = file;
    s.start_line = range.first + 1;
    s.end_line = range.last;
    s.line_count = range.last - range.first;
    for (auto i = range.first; i < range.last; ++i) s.text += lines[i];
    s.byte_size = s.text.size();
    out.push_back(std::move(s));
  }
  return out;
}

WorkspaceStats workspace_stats(const WorkspaceGraph& graph) {
  WorkspaceStats stats;
  for (const auto& n : graph.nodes()) {
    if (n.kind != NodeKind::File) continue;
    ++stats.saved_files;
    if (n.file_kind == FileKind::Code) {
      ++stats.saved_code_files;
      stats.saved_code_lines += n.line_count;
    }
  }
  return stats;
}

}  // namespace devjudge
