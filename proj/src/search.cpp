#include "devjudge/search.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <map>

#include "devjudge/error.hpp"
#include "devjudge/text.hpp"

namespace devjudge {

namespace {
bool is_alnum(char c) noexcept { return std::isalnum(static_cast<unsigned char>(c)) != 0; }
bool is_upper(char c) noexcept { return std::isupper(static_cast<unsigned char>(c)) != 0; }
bool is_lower(char c) noexcept { return std::islower(static_cast<unsigned char>(c)) != 0; }
}  // namespace

std::vector<std::string> tokenize(std::string_view text) {
  std::vector<std::string> tokens;
  std::size_t i = 0;
  while (i < text.size()) {
    if (!is_alnum(text[i])) {
      ++i;
      continue;
    }
    std::size_t j = i;
    while (j < text.size() && is_alnum(text[j])) ++j;
    const auto word = text.substr(i, j - i);
    std::size_t start = 0;
    for (std::size_t k = 1; k < word.size(); ++k) {
      const bool lower_to_upper = is_lower(word[k - 1]) && is_upper(word[k]);
      const bool acronym_end = is_upper(word[k - 1]) && is_upper(word[k]) && k + 1 < word.size() &&
                               is_lower(word[k + 1]);
      if (lower_to_upper || acronym_end) {
        tokens.push_back(text::to_lower(word.substr(start, k - start)));
        start = k;
      }
    }
    tokens.push_back(text::to_lower(word.substr(start)));
    i = j;
  }
  return tokens;
}

SearchIndex SearchIndex::from_sources(std::vector<SourceText> sources, Bm25Params params) {
  if (!(params.k1 > 0.0) || params.b < 0.0 || params.b > 1.0) {
    throw Error(ErrorKind::InvalidConfig, "BM25 requires k1 > 0 and 0 <= b <= 1");
  }
  SearchIndex index;
  index.params_ = params;
  double total_len = 0.0;
  for (auto& src : sources) {
    IndexedDocument doc;
    doc.path = std::move(src.path);
    doc.start_line = src.start_line;
    doc.snippet = src.snippet;
    doc.text = src.text;
    std::map<std::uint32_t, std::uint32_t> counts;
    for (auto& tok : tokenize(src.text)) {
      auto [it, inserted] = index.vocab_.try_emplace(std::move(tok), static_cast<std::uint32_t>(index.vocab_.size()));
      if (inserted) index.doc_freq_.push_back(0);
      ++counts[it->second];
      ++doc.length;
    }
    for (const auto& [term, freq] : counts) {
      doc.term_freqs.emplace_back(term, freq);
      ++index.doc_freq_[term];
    }
    for (const auto& line : text::split_lines(src.text)) {
      const auto t = text::trim(line);
      if (!t.empty()) doc.windows.emplace_back(t);
    }
    total_len += doc.length;
    index.docs_.push_back(std::move(doc));
  }
  index.avg_doc_len_ = index.docs_.empty() ? 0.0 : total_len / static_cast<double>(index.docs_.size());
  return index;
}

SearchIndex SearchIndex::build(const WorkspaceGraph& graph, Bm25Params params) {
  std::vector<SourceText> sources;
  for (const auto& n : graph.nodes()) {
    if (n.kind == NodeKind::Snippet) sources.push_back({n.path, n.start_line, n.text, n.id});
  }
  return from_sources(std::move(sources), params);
}

std::optional<std::uint32_t> SearchIndex::term_id(std::string_view term) const {
  auto it = vocab_.find(std::string(term));
  if (it == vocab_.end()) return std::nullopt;
  return it->second;
}

double SearchIndex::idf(std::uint32_t term) const {
  const auto n = static_cast<double>(docs_.size());
  const auto df = static_cast<double>(doc_freq_.at(term));
  return std::log(1.0 + (n - df + 0.5) / (df + 0.5));
}

std::vector<std::uint32_t> SearchIndex::encode_query(std::string_view query) const {
  std::vector<std::uint32_t> out;
  for (const auto& tok : tokenize(query)) {
    if (auto id = term_id(tok)) out.push_back(*id);
  }
  return out;
}

std::size_t levenshtein(std::string_view a, std::string_view b) {
  if (a.size() < b.size()) std::swap(a, b);
  std::vector<std::size_t> prev(b.size() + 1), cur(b.size() + 1);
  for (std::size_t j = 0; j <= b.size(); ++j) prev[j] = j;
  for (std::size_t i = 1; i <= a.size(); ++i) {
    cur[0] = i;
    for (std::size_t j = 1; j <= b.size(); ++j) {
      const std::size_t subst = prev[j - 1] + (a[i - 1] == b[j - 1] ? 0 : 1);
      cur[j] = std::min({prev[j] + 1, cur[j - 1] + 1, subst});
    }
    std::swap(prev, cur);
  }
  return prev[b.size()];
}

double similarity(std::string_view a, std::string_view b) {
  const auto longest = std::max(a.size(), b.size());
  if (longest == 0) return 1.0;
  return 1.0 - static_cast<double>(levenshtein(a, b)) / static_cast<double>(longest);
}

namespace kernels {

std::vector<SearchHit> top_k(const SearchIndex& index, const std::vector<double>& scores, std::size_t k) {
  const auto& docs = index.documents();
  std::vector<std::size_t> order(docs.size());
  for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
  const auto n = std::min(k, order.size());
  std::partial_sort(order.begin(), order.begin() + static_cast<std::ptrdiff_t>(n), order.end(),
                    [&](std::size_t a, std::size_t b) {
                      if (scores[a] != scores[b]) return scores[a] > scores[b];
                      if (docs[a].path != docs[b].path) return docs[a].path < docs[b].path;
                      if (docs[a].start_line != docs[b].start_line) return docs[a].start_line < docs[b].start_line;
                      return a < b;
                    });
  std::vector<SearchHit> hits;
  hits.reserve(n);
  for (std::size_t i = 0; i < n; ++i) {
    const auto d = order[i];
    hits.push_back({d, docs[d].path, docs[d].start_line, scores[d]});
  }
  return hits;
}

}  // namespace kernels

std::vector<SearchHit> search(std::string_view query, const SearchIndex& index, std::size_t k) {
  if (index.empty()) throw Error(ErrorKind::EmptyIndex, "search index holds no documents");
  if (k == 0) throw Error(ErrorKind::InvalidConfig, "search k must be >= 1");
  const auto scores = kernels::bm25_scores_parallel(index, index.encode_query(query));
  return kernels::top_k(index, scores, k);
}

std::vector<SearchHit> fuzzy_search(std::string_view query, const SearchIndex& index, std::size_t k) {
  const auto q = text::trim(query);
  if (q.empty()) throw Error(ErrorKind::EmptyQuery, "fuzzy search needs a non-empty query");
  if (index.empty()) throw Error(ErrorKind::EmptyIndex, "search index holds no documents");
  if (k == 0) throw Error(ErrorKind::InvalidConfig, "search k must be >= 1");
  const auto scores = kernels::fuzzy_scores_parallel(index, q);
  return kernels::top_k(index, scores, k);
}

}  // namespace devjudge
