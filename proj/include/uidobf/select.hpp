#pragma once

#include <cstddef>
#include <optional>
#include <string>
#include <utility>

#include "uidobf/obfuscate.hpp"
#include "uidobf/uid.hpp"

namespace uidobf {

/// Similarity floors for the two alternate-generating methods.
struct Thresholds {
  double uws = 0.98;
  double up = 0.85;

  double for_method(Method m) const noexcept { return m == Method::up ? up : uws; }
};

struct SelectionResult {
  std::string article_id;
  UidMetric metric = UidMetric::variance;
  std::optional<std::size_t> chosen_variant_index;
  double chosen_similarity = 1.0;  ///< 1.0 on fallback: the original is kept
  double chosen_uid_delta = 0.0;
  bool fallback = true;

  bool operator==(const SelectionResult&) const = default;
};

/// Visits variants by |metric(variant) - metric(original)| descending, ties
/// by lower index, and takes the first whose similarity reaches threshold.
/// When none does, the original is retained and fallback is set.
SelectionResult select_candidate(const AlternateSet& set, UidMetric metric, double threshold);

/// Independent per-metric selection: {variance, diff_squared}.
std::pair<SelectionResult, SelectionResult> select_both_metrics(const AlternateSet& set,
                                                                double threshold);

/// Text of the selected variant, or the original on fallback.
const std::string& selected_text(const AlternateSet& set, const SelectionResult& result);

}  // namespace uidobf
