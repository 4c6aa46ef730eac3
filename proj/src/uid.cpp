#include "uidobf/uid.hpp"

#include <vector>

#include "uidobf/error.hpp"

namespace uidobf {
namespace {

std::vector<double> values(const SurprisalSequence& s) {
  std::vector<double> v;
  v.reserve(s.size());
  for (const auto& t : s) v.push_back(t.surprisal);
  return v;
}

}  // namespace

std::string_view to_string(UidMetric m) noexcept {
  return m == UidMetric::variance ? "variance" : "diff_squared";
}

UidMetric parse_metric(std::string_view s) {
  if (s == "variance") return UidMetric::variance;
  if (s == "diff_squared" || s == "diff2" || s == "difference2") return UidMetric::diff_squared;
  throw ArgumentError("unknown UID metric '" + std::string(s) + "'");
}

double uid_variance(std::span<const double> s) {
  if (s.empty()) throw ArgumentError("uid_variance: empty surprisal sequence");
  double mean = 0.0;
  for (const double x : s) mean += x;
  mean /= static_cast<double>(s.size());
  double acc = 0.0;
  for (const double x : s) acc += (x - mean) * (x - mean);
  return acc / static_cast<double>(s.size());
}

double uid_variance(const SurprisalSequence& s) { return uid_variance(values(s)); }

double uid_diff_squared(std::span<const double> s) {
  if (s.size() < 2) throw ArgumentError("uid_diff_squared: needs at least 2 surprisals");
  double acc = 0.0;
  for (std::size_t t = 0; t + 1 < s.size(); ++t) {
    const double d = s[t + 1] - s[t];
    acc += d * d;
  }
  return acc / static_cast<double>(s.size() - 1);
}

double uid_diff_squared(const SurprisalSequence& s) { return uid_diff_squared(values(s)); }

UIDScores uid_scores(const SurprisalSequence& s) {
  if (s.size() < 2) {
    throw ArgumentError("uid_scores: text has " + std::to_string(s.size()) +
                        " scorer tokens, at least 2 required");
  }
  const auto v = values(s);
  return UIDScores{uid_variance(v), uid_diff_squared(v), s.size()};
}

UIDScores uid_scores(std::string_view article_text, const CausalScorer& scorer) {
  return uid_scores(causal_surprisals(article_text, scorer));
}

}  // namespace uidobf
