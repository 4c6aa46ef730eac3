#pragma once

#include <array>
#include <cstddef>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "uidobf/attribute.hpp"
#include "uidobf/corpus.hpp"
#include "uidobf/obfuscate.hpp"
#include "uidobf/select.hpp"

namespace uidobf {

/// Positive class is machine. Rows are the actual class, columns the
/// predicted class: tp/fn for actual machine, fp/tn for actual human.
struct ConfusionMatrix {
  std::size_t tp = 0;
  std::size_t fn = 0;
  std::size_t fp = 0;
  std::size_t tn = 0;

  std::size_t total() const noexcept { return tp + fn + fp + tn; }
  bool operator==(const ConfusionMatrix&) const = default;
};

using TruthMap = std::map<std::string, AuthorLabel>;

/// Throws EvaluationError when a result's article id has no truth entry.
ConfusionMatrix confusion(std::span<const AttributionResult> results, const TruthMap& truths);

/// A metric whose denominator was zero is reported as 0 with `undefined` set.
struct Ratio {
  double value = 0.0;
  bool undefined = false;
};

struct ClassMetrics {
  Ratio precision;
  Ratio recall;
  Ratio f1;
};

struct Metrics {
  double accuracy = 0.0;
  ClassMetrics machine;
  ClassMetrics human;
  double macro_f1 = 0.0;
};

/// (tp + tn) / total. Throws EvaluationError on an empty matrix.
double accuracy(const ConfusionMatrix& m);
ClassMetrics machine_metrics(const ConfusionMatrix& m);
ClassMetrics human_metrics(const ConfusionMatrix& m);
Metrics compute_metrics(const ConfusionMatrix& m);

using FiveWayHistogram = std::array<std::size_t, kFiveWayCount>;

struct LabelShift {
  FiveWayHistogram before{};
  FiveWayHistogram after{};
};

/// Five-way label counts before and after obfuscation, keyed by truth class.
/// `before` and `after` must cover the same article ids, once each.
std::map<std::string, LabelShift> label_shift(std::span<const AttributionResult> before,
                                              std::span<const AttributionResult> after,
                                              const TruthMap& truths);

enum class PointFlag { original, selected, candidate };

std::string_view to_string(PointFlag f) noexcept;

struct ScatterPoint {
  std::optional<std::size_t> variant_index;  ///< none for the original
  double similarity = 0.0;
  double uid = 0.0;
  PointFlag flag = PointFlag::candidate;
};

/// One point per variant plus the original at similarity 1.0.
std::vector<ScatterPoint> scatter_dataset(const AlternateSet& set, UidMetric metric,
                                          const SelectionResult& selection);

}  // namespace uidobf
