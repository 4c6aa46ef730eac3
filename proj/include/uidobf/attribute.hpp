#pragma once

#include <chrono>
#include <cstddef>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "uidobf/scorer.hpp"

namespace uidobf {

enum class BinaryLabel { human, machine };
enum class FiveWay { very_unlikely, unlikely, unclear, possibly, likely };

/// Which text of an article was classified. `obfuscated` is the single
/// Synonym Swap output, which has no selection stage.
enum class VariantKind { original, selected_variance, selected_diff2, obfuscated };

std::string_view to_string(BinaryLabel l) noexcept;
std::string_view to_string(FiveWay f) noexcept;
std::string_view to_string(VariantKind v) noexcept;
BinaryLabel parse_binary_label(std::string_view s);
FiveWay parse_five_way(std::string_view s);
VariantKind parse_variant_kind(std::string_view s);

inline constexpr std::size_t kFiveWayCount = 5;

/// Half-open probability bands [0,.10) [.10,.35) [.35,.65) [.65,.90) [.90,1].
struct ProbabilityBands {
  double unlikely = 0.10;
  double unclear = 0.35;
  double possibly = 0.65;
  double likely = 0.90;

  FiveWay label(double p) const noexcept;
};

BinaryLabel binary_label(double machine_probability) noexcept;

/// Raw detector output before labeling.
struct Verdict {
  double machine_probability = 0.0;
};

class DetectorClient {
 public:
  virtual ~DetectorClient() = default;
  virtual const std::string& name() const noexcept = 0;
  virtual Verdict detect(std::string_view text) const = 0;
  virtual bool concurrent() const noexcept = 0;
  /// Whether results carry a five-way label derived from the bands.
  virtual bool reports_five_way() const noexcept { return true; }
};

/// Mean reference-scorer surprisal m mapped through a logistic:
/// P(machine) = 1 / (1 + exp((m - tau) / scale)). Low surprisal reads as machine.
class StubDetector final : public DetectorClient {
 public:
  StubDetector(const CausalScorer& scorer, double tau, double scale = 1.0,
               std::string name = "stub");

  const std::string& name() const noexcept override { return name_; }
  Verdict detect(std::string_view text) const override;
  bool concurrent() const noexcept override { return scorer_->concurrent(); }

  double tau() const noexcept { return tau_; }

 private:
  const CausalScorer* scorer_;
  double tau_;
  double scale_;
  std::string name_;
};

double mean_surprisal(std::string_view text, const CausalScorer& scorer);

/// Label-free stub midpoint: the median of mean_surprisal over texts.
double median_mean_surprisal(std::span<const std::string> texts, const CausalScorer& scorer);

struct AttributionResult {
  std::string article_id;
  VariantKind variant = VariantKind::original;
  std::string detector;
  double machine_probability = 0.0;
  BinaryLabel binary_label = BinaryLabel::human;
  std::optional<FiveWay> five_way;

  bool operator==(const AttributionResult&) const = default;
};

struct RetryPolicy {
  int attempts = 3;
  std::chrono::milliseconds base_delay{200};  ///< doubled after each failure
};

/// Classifies one text. Transport failures are retried per policy; the last
/// failure (or any protocol failure) propagates as DetectorError.
AttributionResult classify(std::string_view text, const DetectorClient& detector,
                           std::string article_id = {}, VariantKind variant = VariantKind::original,
                           const RetryPolicy& retry = {}, const ProbabilityBands& bands = {});

struct ClassifyItem {
  std::string article_id;
  VariantKind variant = VariantKind::original;
  std::string text;
};

struct ClassifyFailure {
  std::string article_id;
  VariantKind variant = VariantKind::original;
  std::string detector;
  std::string error;
};

struct BatchAttribution {
  std::vector<AttributionResult> results;  ///< input order, failures omitted
  std::vector<ClassifyFailure> failures;   ///< input order
};

/// Classifies every item; runs items concurrently (up to `jobs`) when the
/// detector allows it. Failures are recorded, never thrown.
BatchAttribution classify_batch(const std::vector<ClassifyItem>& items,
                                const DetectorClient& detector, const RetryPolicy& retry = {},
                                const ProbabilityBands& bands = {}, int jobs = 1);

}  // namespace uidobf
