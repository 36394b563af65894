#include <algorithm>

#include "devjudge/search.hpp"

namespace devjudge::kernels {

namespace {

// Score of one document; both kernels call this so per-document arithmetic is
// identical and results agree bit for bit.
double bm25_document(const SearchIndex& index, const IndexedDocument& doc, const std::vector<std::uint32_t>& query,
                     const std::vector<double>& idf) {
  const auto [k1, b] = index.params();
  const double avg = index.avg_doc_len();
  const double norm = avg > 0.0 ? (1.0 - b + b * static_cast<double>(doc.length) / avg) : 1.0;
  double score = 0.0;
  for (std::size_t q = 0; q < query.size(); ++q) {
    auto it = std::lower_bound(doc.term_freqs.begin(), doc.term_freqs.end(), query[q],
                               [](const auto& entry, std::uint32_t term) { return entry.first < term; });
    if (it == doc.term_freqs.end() || it->first != query[q]) continue;
    const double tf = it->second;
    score += idf[q] * (tf * (k1 + 1.0)) / (tf + k1 * norm);
  }
  return score;
}

std::vector<double> query_idf(const SearchIndex& index, const std::vector<std::uint32_t>& query) {
  std::vector<double> idf(query.size());
  for (std::size_t q = 0; q < query.size(); ++q) idf[q] = index.idf(query[q]);
  return idf;
}

}  // namespace

std::vector<double> bm25_scores_serial(const SearchIndex& index, const std::vector<std::uint32_t>& query) {
  const auto& docs = index.documents();
  const auto idf = query_idf(index, query);
  std::vector<double> scores(docs.size(), 0.0);
  for (std::size_t d = 0; d < docs.size(); ++d) scores[d] = bm25_document(index, docs[d], query, idf);
  return scores;
}

std::vector<double> bm25_scores_parallel(const SearchIndex& index, const std::vector<std::uint32_t>& query) {
  const auto& docs = index.documents();
  const auto idf = query_idf(index, query);
  std::vector<double> scores(docs.size(), 0.0);
  const auto n = static_cast<long long>(docs.size());
#pragma omp parallel for schedule(static) if (n > 256)
  for (long long d = 0; d < n; ++d) {
    scores[static_cast<std::size_t>(d)] = bm25_document(index, docs[static_cast<std::size_t>(d)], query, idf);
  }
  return scores;
}

}  // namespace devjudge::kernels
