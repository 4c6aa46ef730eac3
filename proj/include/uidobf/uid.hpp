#pragma once

#include <cstddef>
#include <span>
#include <string_view>

#include "uidobf/scorer.hpp"

namespace uidobf {

/// The two UID scores of one text, in nats².
struct UIDScores {
  double variance = 0.0;
  double diff_squared = 0.0;
  std::size_t token_count = 0;

  bool operator==(const UIDScores&) const = default;
};

enum class UidMetric { variance, diff_squared };

std::string_view to_string(UidMetric m) noexcept;
UidMetric parse_metric(std::string_view s);

inline double metric_value(const UIDScores& s, UidMetric m) noexcept {
  return m == UidMetric::variance ? s.variance : s.diff_squared;
}

/// Population variance (divides by N). Throws ArgumentError when empty.
double uid_variance(std::span<const double> surprisals);
double uid_variance(const SurprisalSequence& s);

/// Mean of (s[t+1] - s[t])² over consecutive pairs. Needs at least 2 values.
double uid_diff_squared(std::span<const double> surprisals);
double uid_diff_squared(const SurprisalSequence& s);

/// Both scores from one surprisal pass over the text.
UIDScores uid_scores(std::string_view article_text, const CausalScorer& scorer);
UIDScores uid_scores(const SurprisalSequence& s);

}  // namespace uidobf
