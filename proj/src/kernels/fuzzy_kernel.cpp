#include <algorithm>

#include "devjudge/search.hpp"

namespace devjudge::kernels {

namespace {

double best_window(const IndexedDocument& doc, std::string_view query) {
  double best = 0.0;
  for (const auto& window : doc.windows) {
    best = std::max(best, similarity(query, window));
    if (best == 1.0) break;
  }
  return best;
}

}  // namespace

std::vector<double> fuzzy_scores_serial(const SearchIndex& index, std::string_view query) {
  const auto& docs = index.documents();
  std::vector<double> scores(docs.size(), 0.0);
  for (std::size_t d = 0; d < docs.size(); ++d) scores[d] = best_window(docs[d], query);
  return scores;
}

std::vector<double> fuzzy_scores_parallel(const SearchIndex& index, std::string_view query) {
  const auto& docs = index.documents();
  std::vector<double> scores(docs.size(), 0.0);
  const auto n = static_cast<long long>(docs.size());
  // Window counts vary a lot between snippets.
#pragma omp parallel for schedule(dynamic, 8) if (n > 32)
  for (long long d = 0; d < n; ++d) {
    scores[static_cast<std::size_t>(d)] = best_window(docs[static_cast<std::size_t>(d)], query);
  }
  return scores;
}

}  // namespace devjudge::kernels
