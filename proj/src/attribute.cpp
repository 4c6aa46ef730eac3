#include "uidobf/attribute.hpp"

#include <algorithm>
#include <cmath>
#include <thread>

#include "uidobf/error.hpp"
#include "uidobf/kernels.hpp"

namespace uidobf {

std::string_view to_string(BinaryLabel l) noexcept {
  return l == BinaryLabel::machine ? "machine" : "human";
}

std::string_view to_string(FiveWay f) noexcept {
  switch (f) {
    case FiveWay::very_unlikely: return "very_unlikely";
    case FiveWay::unlikely: return "unlikely";
    case FiveWay::unclear: return "unclear";
    case FiveWay::possibly: return "possibly";
    case FiveWay::likely: return "likely";
  }
  return "unclear";
}

std::string_view to_string(VariantKind v) noexcept {
  switch (v) {
    case VariantKind::original: return "original";
    case VariantKind::selected_variance: return "selected_variance";
    case VariantKind::selected_diff2: return "selected_diff2";
    case VariantKind::obfuscated: return "obfuscated";
  }
  return "original";
}

BinaryLabel parse_binary_label(std::string_view s) {
  if (s == "human") return BinaryLabel::human;
  if (s == "machine") return BinaryLabel::machine;
  throw ArgumentError("unknown binary label '" + std::string(s) + "'");
}

FiveWay parse_five_way(std::string_view s) {
  for (int i = 0; i < static_cast<int>(kFiveWayCount); ++i) {
    const auto f = static_cast<FiveWay>(i);
    if (to_string(f) == s) return f;
  }
  throw ArgumentError("unknown five-way label '" + std::string(s) + "'");
}

VariantKind parse_variant_kind(std::string_view s) {
  for (const auto v : {VariantKind::original, VariantKind::selected_variance,
                       VariantKind::selected_diff2, VariantKind::obfuscated}) {
    if (to_string(v) == s) return v;
  }
  throw ArgumentError("unknown variant kind '" + std::string(s) + "'");
}

FiveWay ProbabilityBands::label(double p) const noexcept {
  if (p < unlikely) return FiveWay::very_unlikely;
  if (p < unclear) return FiveWay::unlikely;
  if (p < possibly) return FiveWay::unclear;
  if (p < likely) return FiveWay::possibly;
  return FiveWay::likely;
}

BinaryLabel binary_label(double machine_probability) noexcept {
  return machine_probability >= 0.5 ? BinaryLabel::machine : BinaryLabel::human;
}

double mean_surprisal(std::string_view text, const CausalScorer& scorer) {
  const auto seq = causal_surprisals(text, scorer);
  if (seq.empty()) throw ArgumentError("mean_surprisal: text has no scorer tokens");
  double sum = 0.0;
  for (const auto& t : seq) sum += t.surprisal;
  return sum / static_cast<double>(seq.size());
}

StubDetector::StubDetector(const CausalScorer& scorer, double tau, double scale, std::string name)
    : scorer_(&scorer), tau_(tau), scale_(scale), name_(std::move(name)) {
  if (!(scale > 0.0)) throw ArgumentError("StubDetector: scale must be positive");
}

double median_mean_surprisal(std::span<const std::string> texts, const CausalScorer& scorer) {
  if (texts.empty()) throw ArgumentError("median_mean_surprisal: no texts");
  std::vector<double> means;
  means.reserve(texts.size());
  for (const auto& t : texts) means.push_back(mean_surprisal(t, scorer));
  std::sort(means.begin(), means.end());
  const std::size_t mid = means.size() / 2;
  return means.size() % 2 == 1 ? means[mid] : 0.5 * (means[mid - 1] + means[mid]);
}

Verdict StubDetector::detect(std::string_view text) const {
  const double m = mean_surprisal(text, *scorer_);
  return Verdict{1.0 / (1.0 + std::exp((m - tau_) / scale_))};
}

AttributionResult classify(std::string_view text, const DetectorClient& detector,
                           std::string article_id, VariantKind variant, const RetryPolicy& retry,
                           const ProbabilityBands& bands) {
  const int attempts = retry.attempts < 1 ? 1 : retry.attempts;
  auto delay = retry.base_delay;
  for (int attempt = 1;; ++attempt) {
    try {
      const Verdict v = detector.detect(text);
      if (!(v.machine_probability >= 0.0 && v.machine_probability <= 1.0)) {
        throw DetectorError(ScorerError::Kind::protocol,
                            "detector '" + detector.name() + "' returned probability outside [0,1]");
      }
      AttributionResult r;
      r.article_id = std::move(article_id);
      r.variant = variant;
      r.detector = detector.name();
      r.machine_probability = v.machine_probability;
      r.binary_label = binary_label(v.machine_probability);
      if (detector.reports_five_way()) r.five_way = bands.label(v.machine_probability);
      return r;
    } catch (const ScorerError& e) {
      if (!e.is_transport() || attempt >= attempts) {
        throw DetectorError(e.kind(), "detector '" + detector.name() + "': " + e.what());
      }
    }
    std::this_thread::sleep_for(delay);
    delay *= 2;
  }
}

BatchAttribution classify_batch(const std::vector<ClassifyItem>& items,
                                const DetectorClient& detector, const RetryPolicy& retry,
                                const ProbabilityBands& bands, int jobs) {
  const auto exec = detector.concurrent() ? kernels::Exec::parallel : kernels::Exec::serial;
  auto outcomes = kernels::map_indexed<AttributionResult>(
      items.size(),
      [&](std::size_t i) {
        return classify(items[i].text, detector, items[i].article_id, items[i].variant, retry, bands);
      },
      exec, jobs);
  BatchAttribution out;
  for (std::size_t i = 0; i < outcomes.size(); ++i) {
    if (auto* r = std::get_if<AttributionResult>(&outcomes[i])) {
      out.results.push_back(std::move(*r));
    } else {
      const auto& f = std::get<kernels::Failure>(outcomes[i]);
      out.failures.push_back({items[i].article_id, items[i].variant, detector.name(), f.message});
    }
  }
  return out;
}

}  // namespace uidobf
