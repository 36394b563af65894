#include "devjudge/evidence.hpp"

#include <algorithm>
#include <array>
#include <fstream>
#include <regex>
#include <sstream>

#include "devjudge/error.hpp"
#include "devjudge/prompts.hpp"
#include "devjudge/text.hpp"

namespace devjudge {

std::string_view to_string(EvidenceSource source) noexcept {
  switch (source) {
    case EvidenceSource::LocatedFile: return "located_file";
    case EvidenceSource::FileContent: return "file_content";
    case EvidenceSource::SearchHit: return "search_hit";
    case EvidenceSource::TrajectorySteps: return "trajectory_steps";
    case EvidenceSource::MemoryRecall: return "memory_recall";
  }
  return "located_file";
}

void Evidence::add(EvidenceItem item) {
  if (item.payload.empty()) throw Error(ErrorKind::SchemaViolation, "evidence payload must be non-empty");
  total_chars_ += item.payload.size();
  items_.push_back(std::move(item));
}

std::vector<EvidenceRef> Evidence::refs() const {
  std::vector<EvidenceRef> out;
  out.reserve(items_.size());
  for (const auto& item : items_) out.push_back({item.source, item.path_or_ref});
  return out;
}

std::string Evidence::render() const {
  if (items_.empty()) return "(no evidence collected)";
  constexpr std::array kOrder{EvidenceSource::LocatedFile, EvidenceSource::FileContent, EvidenceSource::SearchHit,
                              EvidenceSource::TrajectorySteps, EvidenceSource::MemoryRecall};
  std::string out;
  for (auto source : kOrder) {
    bool header_done = false;
    for (const auto& item : items_) {
      if (item.source != source) continue;
      if (!out.empty()) out += "\n";
      switch (source) {
        case EvidenceSource::LocatedFile:
          if (!header_done) out += "### Located files\n";
          out += item.payload;
          break;
        case EvidenceSource::FileContent:
          out += "### File: " + item.path_or_ref + "\n" + item.payload;
          break;
        case EvidenceSource::SearchHit:
          out += "### Search hit: " + item.path_or_ref + "\n" + item.payload;
          break;
        case EvidenceSource::TrajectorySteps:
          out += "### Relevant trajectory steps\n" + item.payload;
          break;
        case EvidenceSource::MemoryRecall:
          out += "### Prior judgment: " + item.path_or_ref + "\n" + item.payload;
          break;
      }
      header_done = true;
    }
  }
  return out;
}

std::vector<std::string> extract_path_mentions(std::string_view text) {
  static const std::regex url_re(R"([A-Za-z][A-Za-z0-9+.\-]*://[^\s)\]>'"`]+)");
  static const std::regex quoted_re(R"([`'"]([^`'"\s]+)[`'"])");
  static const std::regex slash_re(R"((?:^|[\s(\[{,;:])((?:\.{0,2}/)?(?:[\w.\-]+/)+[\w.\-]*))");
  static const std::regex ext_re(R"(^[\w.\-/]*[\w\-]\.[A-Za-z0-9]{1,8}$)");

  const std::string cleaned = std::regex_replace(std::string(text), url_re, " ");
  std::vector<std::pair<std::ptrdiff_t, std::string>> found;
  auto clean = [](std::string token) {
    while (!token.empty() && std::string_view(".,;:!?)").find(token.back()) != std::string_view::npos) {
      token.pop_back();
    }
    while (token.starts_with("./")) token.erase(0, 2);
    return token;
  };
  for (std::sregex_iterator it(cleaned.begin(), cleaned.end(), quoted_re), end; it != end; ++it) {
    auto token = clean((*it)[1].str());
    if (token.find('/') != std::string::npos || std::regex_match(token, ext_re)) {
      found.emplace_back(it->position(1), token);
    }
  }
  for (std::sregex_iterator it(cleaned.begin(), cleaned.end(), slash_re), end; it != end; ++it) {
    auto token = clean((*it)[1].str());
    if (!token.empty() && token != "/") found.emplace_back(it->position(1), token);
  }
  std::stable_sort(found.begin(), found.end(), [](const auto& a, const auto& b) { return a.first < b.first; });
  std::vector<std::string> out;
  for (auto& [pos, token] : found) {
    if (std::find(out.begin(), out.end(), token) == out.end()) out.push_back(std::move(token));
  }
  return out;
}

std::optional<std::string> normalize_workspace_path(std::string_view raw, const WorkspaceGraph& graph) {
  std::string p(text::trim(raw));
  while (!p.empty() && std::string_view("`'\"").find(p.front()) != std::string_view::npos) p.erase(0, 1);
  while (!p.empty() && std::string_view("`'\"").find(p.back()) != std::string_view::npos) p.pop_back();
  std::replace(p.begin(), p.end(), '\\', '/');
  const auto root = graph.root_dir().generic_string();
  if (!root.empty() && p.starts_with(root + "/")) p = p.substr(root.size() + 1);

  std::vector<std::string> segments;
  std::stringstream ss(p);
  std::string seg;
  while (std::getline(ss, seg, '/')) {
    if (seg.empty() || seg == ".") continue;
    if (seg == "..") return std::nullopt;
    segments.push_back(seg);
  }
  if (segments.empty()) return std::nullopt;
  for (std::size_t skip = 0; skip < segments.size(); ++skip) {
    std::string candidate;
    for (std::size_t i = skip; i < segments.size(); ++i) {
      if (!candidate.empty()) candidate += '/';
      candidate += segments[i];
    }
    if (auto id = graph.find(candidate); id && graph.node(*id).kind != NodeKind::Snippet) return candidate;
  }
  return std::nullopt;
}

std::vector<std::string> parse_dollar_paths(std::string_view reply) {
  std::vector<std::string> out;
  std::size_t open = reply.find('$');
  while (open != std::string_view::npos) {
    const auto close = reply.find('$', open + 1);
    if (close == std::string_view::npos) break;
    const auto span = reply.substr(open + 1, close - open - 1);
    if (span.find('\n') != std::string_view::npos || text::trim(span).empty()) {
      open = close;
      continue;
    }
    out.emplace_back(text::trim(span));
    open = reply.find('$', close + 1);
  }
  return out;
}

std::vector<std::string> select_located_paths(std::string_view reply, const WorkspaceGraph& graph) {
  std::vector<std::string> out;
  for (const auto& raw : parse_dollar_paths(reply)) {
    auto path = normalize_workspace_path(raw, graph);
    if (!path || std::find(out.begin(), out.end(), *path) != out.end()) continue;
    out.push_back(std::move(*path));
    if (out.size() == kMaxLocatedPaths) break;
  }
  return out;
}

LocateResult locate(std::string_view criteria, const WorkspaceGraph& graph, JudgmentBackend& backend) {
  const auto label = "/" + graph.root_dir().filename().string();
  const auto prompt = prompts::locate_user(criteria, text::trim(graph.render_tree(label)));
  auto reply = backend.chat(prompts::locate_system(), prompt);
  return {select_located_paths(reply.text, graph), reply.usage};
}

std::string middle_truncate(std::string_view text, std::size_t max_bytes) {
  if (text.size() <= max_bytes) return std::string(text);
  const auto tail = max_bytes / 2;
  const auto head = max_bytes - tail;
  const auto head_end = text::utf8_floor(text, head);
  const auto tail_start = text::utf8_ceil(text, text.size() - tail);
  std::string out(text.substr(0, head_end));
  out += "\n";
  out += kElisionMarker;
  out += "\n";
  out += text.substr(tail_start);
  return out;
}

EvidenceItem read(std::string_view path, const WorkspaceGraph& graph, const ReadOptions& options) {
  auto normalized = normalize_workspace_path(path, graph);
  if (!normalized) throw Error(ErrorKind::PathNotInWorkspace, std::string(path));
  const auto& node = graph.node(*graph.find(*normalized));
  EvidenceItem item{EvidenceSource::FileContent, node.path, {}};

  if (node.kind == NodeKind::Directory) {
    std::vector<std::string> names;
    for (auto child : graph.children(node.id)) names.push_back(graph.node(child).path);
    item.payload = "directory with " + std::to_string(names.size()) + " entries";
    if (!names.empty()) item.payload += ": " + text::join(names, ", ");
    return item;
  }

  const auto file = graph.root_dir() / node.path;
  const auto dot = node.path.rfind('.');
  if (dot != std::string::npos) {
    if (auto it = options.readers.find(text::to_lower(node.path.substr(dot))); it != options.readers.end()) {
      item.payload = middle_truncate(it->second(file, node), options.max_bytes);
      if (item.payload.empty()) item.payload = "(reader produced no output)";
      return item;
    }
  }

  switch (node.file_kind) {
    case FileKind::Binary:
      item.payload = "binary file, " + std::to_string(node.byte_size) + " bytes";
      return item;
    case FileKind::Other:
      item.payload = "unreadable file (not a regular file)";
      return item;
    default:
      break;
  }

  std::ifstream in(file, std::ios::binary);
  if (!in) throw Error(ErrorKind::PermissionDenied, "cannot read " + node.path);
  std::ostringstream ss;
  ss << in.rdbuf();
  std::string content = ss.str();
  if (node.file_kind == FileKind::Code) {
    std::string numbered;
    std::size_t n = 0;
    for (const auto& line : split_keep_newlines(content)) {
      numbered += std::to_string(++n) + "| " + line;
    }
    content = std::move(numbered);
  }
  item.payload = content.empty() ? "(empty file)" : middle_truncate(content, options.max_bytes);
  return item;
}

std::string extract_relevant_steps(std::string_view reply) {
  constexpr std::string_view kMarker = "<RELEVANT STEPS>";
  const auto pos = reply.find(kMarker);
  if (pos == std::string_view::npos) return std::string(text::trim(reply));
  auto rest = reply.substr(pos + kMarker.size());
  while (true) {
    const auto before = rest.size();
    rest = text::trim(rest);
    if (rest.starts_with("**")) rest.remove_prefix(2);
    if (rest.starts_with(":")) rest.remove_prefix(1);
    if (rest.size() == before) break;
  }
  return std::string(rest);
}

RetrieveResult retrieve(std::string_view criteria, const Trajectory* trajectory, const TruncationStrategy& strategy,
                        JudgmentBackend& backend) {
  if (trajectory == nullptr || trajectory->empty()) {
    throw Error(ErrorKind::MissingTrajectory, "retrieve needs a non-empty trajectory (gray-box setting)");
  }
  const auto overhead = prompts::retrieve_overhead(criteria);
  const auto context = backend.context_budget();
  if (overhead >= context) {
    throw Error(ErrorKind::InvalidConfig, "backend context budget too small for the retrieve prompt");
  }
  TruncationStrategy fitted = strategy;
  fitted.budget = std::min(strategy.budget, context - overhead);
  const auto rendered = truncate(*trajectory, fitted);
  RetrieveResult result;
  result.prompt = prompts::retrieve_user(criteria, rendered);
  auto reply = backend.chat(prompts::retrieve_system(), result.prompt);
  result.usage = reply.usage;
  auto payload = extract_relevant_steps(reply.text);
  if (payload.empty()) payload = "(no relevant steps reported)";
  result.item = EvidenceItem{EvidenceSource::TrajectorySteps, "trajectory", std::move(payload)};
  return result;
}

std::vector<SearchHit> search_evidence(std::string_view criteria, const SearchIndex& index, std::size_t k,
                                       Evidence& into) {
  auto hits = search(criteria, index, k);
  std::vector<SearchHit> kept;
  for (const auto& hit : hits) {
    if (hit.score <= 0.0) continue;
    const auto& doc = index.documents()[hit.doc];
    const auto lines = count_lines(doc.text);
    const auto ref = doc.path + ":L" + std::to_string(doc.start_line) + "-L" +
                     std::to_string(doc.start_line + (lines ? lines - 1 : 0));
    if (!doc.text.empty()) into.add({EvidenceSource::SearchHit, ref, doc.text});
    kept.push_back(hit);
  }
  return kept;
}

void JudgmentMemory::record(const Verdict& verdict) { verdicts_[verdict.requirement_id] = verdict; }

std::vector<EvidenceItem> JudgmentMemory::recall(const Requirement& requirement) const {
  auto prereqs = requirement.prerequisites;
  std::sort(prereqs.begin(), prereqs.end());
  std::vector<EvidenceItem> out;
  for (int p : prereqs) {
    auto it = verdicts_.find(p);
    if (it == verdicts_.end()) continue;
    const auto& v = it->second;
    out.push_back({EvidenceSource::MemoryRecall, "requirement " + std::to_string(p),
                   "Requirement " + std::to_string(p) + " was judged " +
                       (v.satisfied() ? "satisfied" : "unsatisfied") + ": " + v.justification});
  }
  return out;
}

std::string_view to_string(Module module) noexcept {
  switch (module) {
    case Module::Graph: return "graph";
    case Module::Locate: return "locate";
    case Module::Read: return "read";
    case Module::Search: return "search";
    case Module::Retrieve: return "retrieve";
    case Module::Planning: return "planning";
    case Module::Memory: return "memory";
    case Module::Ask: return "ask";
  }
  return "ask";
}

std::optional<Module> parse_module(std::string_view name) {
  for (Module m : {Module::Graph, Module::Locate, Module::Read, Module::Search, Module::Retrieve, Module::Planning,
                   Module::Memory, Module::Ask}) {
    if (text::iequals(name, to_string(m))) return m;
  }
  if (text::iequals(name, "plan")) return Module::Planning;
  return std::nullopt;
}

const std::vector<Module>& default_module_order() {
  static const std::vector<Module> order{Module::Locate, Module::Read,   Module::Search,
                                         Module::Retrieve, Module::Memory, Module::Ask};
  return order;
}

std::optional<std::vector<Module>> parse_plan(std::string_view reply, const std::set<Module>& available) {
  std::vector<Module> out;
  bool recognised = false;
  std::string word;
  auto flush = [&] {
    if (word.empty()) return;
    if (auto m = parse_module(word)) {
      recognised = true;
      if (available.count(*m) && std::find(out.begin(), out.end(), *m) == out.end()) out.push_back(*m);
    }
    word.clear();
  };
  for (char c : reply) {
    if (std::isalpha(static_cast<unsigned char>(c))) {
      word += c;
    } else {
      flush();
    }
  }
  flush();
  if (!recognised || out.empty()) return std::nullopt;
  return out;
}

PlanResult plan_next(std::string_view criteria, const std::set<Module>& available, JudgmentBackend& backend) {
  if (available.empty()) throw Error(ErrorKind::InvalidConfig, "planning needs at least one available module");
  std::vector<std::string> names;
  for (Module m : default_module_order()) {
    if (available.count(m)) names.emplace_back(to_string(m));
  }
  auto reply = backend.chat(prompts::planning_system(), prompts::planning_user(criteria, text::join(names, ", ")));
  PlanResult result;
  result.usage = reply.usage;
  if (auto parsed = parse_plan(reply.text, available)) {
    result.order = std::move(*parsed);
  } else {
    result.fell_back = true;
    for (Module m : default_module_order()) {
      if (available.count(m)) result.order.push_back(m);
    }
  }
  return result;
}

}  // namespace devjudge
