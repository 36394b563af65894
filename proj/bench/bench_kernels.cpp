// Serial reference vs OpenMP kernels for BM25 and fuzzy scoring.
// Set OMP_NUM_THREADS to compare thread counts.

#include <benchmark/benchmark.h>

#include <map>
#include <random>

#include "devjudge/search.hpp"

using namespace devjudge;

namespace {

const SearchIndex& corpus(std::size_t docs) {
  static std::map<std::size_t, SearchIndex> cache;
  auto it = cache.find(docs);
  if (it != cache.end()) return it->second;
  static const std::vector<std::string> vocab = [] {
    std::vector<std::string> v;
    for (int i = 0; i < 2000; ++i) v.push_back("tok" + std::to_string(i));
    return v;
  }();
  std::mt19937 rng(42);
  std::vector<SourceText> src;
  for (std::size_t d = 0; d < docs; ++d) {
    std::string text;
    for (int line = 0; line < 40; ++line) {
      for (int w = 0; w < 8; ++w) {
        const double r = std::uniform_real_distribution<double>(0, 1)(rng);
        text += vocab[static_cast<std::size_t>(r * r * r * static_cast<double>(vocab.size()))] + " ";
      }
      text += "\n";
    }
    src.push_back({"f" + std::to_string(d % 97) + ".py", 1 + d, std::move(text), {}});
  }
  return cache.emplace(docs, SearchIndex::from_sources(std::move(src))).first->second;
}

const std::string kQuery = "tok1 tok7 tok42 tok300 tok5";
const std::string kFuzzyQuery = "tok3 tok14 tok1 tok9";

void BM_Bm25Serial(benchmark::State& state) {
  const auto& index = corpus(static_cast<std::size_t>(state.range(0)));
  const auto q = index.encode_query(kQuery);
  for (auto _ : state) benchmark::DoNotOptimize(kernels::bm25_scores_serial(index, q));
  state.SetItemsProcessed(state.iterations() * state.range(0));
}

void BM_Bm25Parallel(benchmark::State& state) {
  const auto& index = corpus(static_cast<std::size_t>(state.range(0)));
  const auto q = index.encode_query(kQuery);
  for (auto _ : state) benchmark::DoNotOptimize(kernels::bm25_scores_parallel(index, q));
  state.SetItemsProcessed(state.iterations() * state.range(0));
}

void BM_FuzzySerial(benchmark::State& state) {
  const auto& index = corpus(static_cast<std::size_t>(state.range(0)));
  for (auto _ : state) benchmark::DoNotOptimize(kernels::fuzzy_scores_serial(index, kFuzzyQuery));
  state.SetItemsProcessed(state.iterations() * state.range(0));
}

void BM_FuzzyParallel(benchmark::State& state) {
  const auto& index = corpus(static_cast<std::size_t>(state.range(0)));
  for (auto _ : state) benchmark::DoNotOptimize(kernels::fuzzy_scores_parallel(index, kFuzzyQuery));
  state.SetItemsProcessed(state.iterations() * state.range(0));
}

}  // namespace

BENCHMARK(BM_Bm25Serial)->Arg(1000)->Arg(10000)->Arg(50000);
BENCHMARK(BM_Bm25Parallel)->Arg(1000)->Arg(10000)->Arg(50000);
BENCHMARK(BM_FuzzySerial)->Arg(200)->Arg(2000);
BENCHMARK(BM_FuzzyParallel)->Arg(200)->Arg(2000);

BENCHMARK_MAIN();
