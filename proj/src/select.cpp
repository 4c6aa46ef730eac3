#include "uidobf/select.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <vector>

#include "uidobf/error.hpp"

namespace uidobf {

SelectionResult select_candidate(const AlternateSet& set, UidMetric metric, double threshold) {
  if (!set.scored()) throw ArgumentError("select_candidate: alternate set is not scored");
  SelectionResult r;
  r.article_id = set.original.id;
  r.metric = metric;

  const double base = metric_value(set.original_uid, metric);
  std::vector<double> delta(set.k());
  for (std::size_t i = 0; i < set.k(); ++i) delta[i] = std::abs(metric_value(set.uid[i], metric) - base);

  std::vector<std::size_t> order(set.k());
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::stable_sort(order.begin(), order.end(),
                   [&](std::size_t a, std::size_t b) { return delta[a] > delta[b]; });

  for (const auto i : order) {
    if (set.similarity[i] >= threshold) {
      r.chosen_variant_index = i;
      r.chosen_similarity = set.similarity[i];
      r.chosen_uid_delta = delta[i];
      r.fallback = false;
      return r;
    }
  }
  return r;
}

std::pair<SelectionResult, SelectionResult> select_both_metrics(const AlternateSet& set,
                                                                double threshold) {
  return {select_candidate(set, UidMetric::variance, threshold),
          select_candidate(set, UidMetric::diff_squared, threshold)};
}

const std::string& selected_text(const AlternateSet& set, const SelectionResult& result) {
  if (result.chosen_variant_index) return set.variants.at(*result.chosen_variant_index).text;
  return set.original.text;
}

}  // namespace uidobf
