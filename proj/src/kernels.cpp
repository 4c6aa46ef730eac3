#include "uidobf/kernels.hpp"

#include "uidobf/similarity.hpp"

namespace uidobf::kernels {

std::vector<Outcome<UIDScores>> uid_scores_batch(std::span<const std::string> texts,
                                                 const CausalScorer& scorer, Exec exec,
                                                 int jobs) {
  if (!scorer.concurrent()) exec = Exec::serial;
  return map_indexed<UIDScores>(
      texts.size(), [&](std::size_t i) { return uid_scores(texts[i], scorer); }, exec, jobs);
}

std::vector<double> similarity_batch(std::string_view original,
                                     std::span<const std::string> variants, Exec exec,
                                     int jobs) {
  const TermVector base = vectorize(original);
  std::vector<double> out(variants.size(), 0.0);
  const auto count = static_cast<std::ptrdiff_t>(variants.size());
  if (exec == Exec::serial || jobs == 1) {
    for (std::ptrdiff_t i = 0; i < count; ++i) out[i] = cosine_similarity(base, vectorize(variants[i]));
    return out;
  }
  if (jobs > 1) {
#pragma omp parallel for schedule(static) num_threads(jobs)
    for (std::ptrdiff_t i = 0; i < count; ++i) out[i] = cosine_similarity(base, vectorize(variants[i]));
  } else {
#pragma omp parallel for schedule(static)
    for (std::ptrdiff_t i = 0; i < count; ++i) out[i] = cosine_similarity(base, vectorize(variants[i]));
  }
  return out;
}

}  // namespace uidobf::kernels
