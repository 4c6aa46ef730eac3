// Serial vs OpenMP throughput of the article-level kernels.

#include <benchmark/benchmark.h>

#include <omp.h>

#include "uidobf/corpus.hpp"
#include "uidobf/kernels.hpp"
#include "uidobf/scorer.hpp"

namespace {

std::vector<std::string> corpus_texts(std::size_t copies) {
  // Synthetic news-like text; repeated with a suffix so every item differs.
  static const char* kSentences[] = {
      "The city council approved the new budget on Monday after a lengthy debate.",
      "Residents said they were worried about rising costs and delayed projects.",
      "Officials announced that the transit plan would be reviewed again this spring.",
      "A spokesperson declined to comment on the investigation into the contract.",
  };
  std::vector<std::string> out;
  for (std::size_t i = 0; i < copies; ++i) {
    std::string text;
    for (std::size_t s = 0; s < 12; ++s) {
      text += kSentences[(i + s) % 4];
      text += " Item " + std::to_string(i * 12 + s) + ". ";
    }
    out.push_back(std::move(text));
  }
  return out;
}

const std::vector<std::string>& texts() {
  static const auto t = corpus_texts(400);
  return t;
}

const uidobf::BigramScorer& scorer() {
  static const auto s = uidobf::BigramScorer::fit(texts());
  return s;
}

void BM_UidScores(benchmark::State& state) {
  const auto exec = state.range(0) == 0 ? uidobf::kernels::Exec::serial : uidobf::kernels::Exec::parallel;
  for (auto _ : state) {
    benchmark::DoNotOptimize(uidobf::kernels::uid_scores_batch(texts(), scorer(), exec));
  }
  state.SetItemsProcessed(state.iterations() * static_cast<int64_t>(texts().size()));
  state.counters["threads"] = exec == uidobf::kernels::Exec::serial ? 1 : omp_get_max_threads();
}

void BM_Similarity(benchmark::State& state) {
  const auto exec = state.range(0) == 0 ? uidobf::kernels::Exec::serial : uidobf::kernels::Exec::parallel;
  for (auto _ : state) {
    benchmark::DoNotOptimize(uidobf::kernels::similarity_batch(texts().front(), texts(), exec));
  }
  state.SetItemsProcessed(state.iterations() * static_cast<int64_t>(texts().size()));
}

}  // namespace

BENCHMARK(BM_UidScores)->Arg(0)->Arg(1)->ArgName("parallel")->Unit(benchmark::kMillisecond);
BENCHMARK(BM_Similarity)->Arg(0)->Arg(1)->ArgName("parallel")->Unit(benchmark::kMillisecond);

BENCHMARK_MAIN();
