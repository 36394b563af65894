#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <unordered_map>
#include <utility>
#include <vector>

#include "workspace.hpp"

namespace devjudge {

/// Lowercase alphanumeric words; identifiers are split on '_' and at
/// camelCase / acronym boundaries ("parseHTTPHeader" -> parse, http, header).
std::vector<std::string> tokenize(std::string_view text);

struct Bm25Params {
  double k1 = 1.2;
  double b = 0.75;
};

struct SourceText {
  std::string path;
  std::size_t start_line = 1;
  std::string text;
  std::optional<NodeId> snippet;
};

struct IndexedDocument {
  std::string path;
  std::size_t start_line = 1;
  std::optional<NodeId> snippet;
  std::uint32_t length = 0;  // token count
  // (term id, frequency), sorted by term id.
  std::vector<std::pair<std::uint32_t, std::uint32_t>> term_freqs;
  std::string text;
  // Trimmed non-blank lines, the windows used by fuzzy search.
  std::vector<std::string> windows;
};

class SearchIndex {
 public:
  static SearchIndex build(const WorkspaceGraph& graph, Bm25Params params = {});
  static SearchIndex from_sources(std::vector<SourceText> sources, Bm25Params params = {});

  [[nodiscard]] const std::vector<IndexedDocument>& documents() const noexcept { return docs_; }
  [[nodiscard]] std::size_t size() const noexcept { return docs_.size(); }
  [[nodiscard]] bool empty() const noexcept { return docs_.empty(); }
  [[nodiscard]] Bm25Params params() const noexcept { return params_; }
  [[nodiscard]] double avg_doc_len() const noexcept { return avg_doc_len_; }
  [[nodiscard]] std::optional<std::uint32_t> term_id(std::string_view term) const;
  [[nodiscard]] std::uint32_t document_frequency(std::uint32_t term) const { return doc_freq_.at(term); }
  /// ln(1 + (N - df + 0.5) / (df + 0.5)); strictly positive.
  [[nodiscard]] double idf(std::uint32_t term) const;

  /// Term id of every in-vocabulary query token, duplicates kept.
  [[nodiscard]] std::vector<std::uint32_t> encode_query(std::string_view query) const;

 private:
  Bm25Params params_;
  std::vector<IndexedDocument> docs_;
  std::unordered_map<std::string, std::uint32_t> vocab_;
  std::vector<std::uint32_t> doc_freq_;
  double avg_doc_len_ = 0.0;
};

struct SearchHit {
  std::size_t doc = 0;  // index into SearchIndex::documents()
  std::string path;
  std::size_t start_line = 0;
  double score = 0.0;
};

/// BM25 top-k, descending score, ties by path then start line.
std::vector<SearchHit> search(std::string_view query, const SearchIndex& index, std::size_t k = 3);

/// Top-k by normalised edit-distance similarity of the query against each
/// document's best line window.
std::vector<SearchHit> fuzzy_search(std::string_view query, const SearchIndex& index, std::size_t k = 3);

std::size_t levenshtein(std::string_view a, std::string_view b);
/// 1 - levenshtein(a, b) / max(|a|, |b|); 1.0 for two empty strings.
double similarity(std::string_view a, std::string_view b);

namespace kernels {

// Serial implementations are the reference; the OpenMP variants must produce
// bit-identical scores and are what the public search entry points use.
std::vector<double> bm25_scores_serial(const SearchIndex& index, const std::vector<std::uint32_t>& query);
std::vector<double> bm25_scores_parallel(const SearchIndex& index, const std::vector<std::uint32_t>& query);

std::vector<double> fuzzy_scores_serial(const SearchIndex& index, std::string_view query);
std::vector<double> fuzzy_scores_parallel(const SearchIndex& index, std::string_view query);

/// Ranks precomputed scores; shared by both search flavours.
std::vector<SearchHit> top_k(const SearchIndex& index, const std::vector<double>& scores, std::size_t k);

}  // namespace kernels

}  // namespace devjudge
