#include "uidobf/evaluate.hpp"

#include <set>

#include "uidobf/error.hpp"

namespace uidobf {
namespace {

Ratio ratio(std::size_t num, std::size_t den) {
  if (den == 0) return {0.0, true};
  return {static_cast<double>(num) / static_cast<double>(den), false};
}

ClassMetrics class_metrics(std::size_t hit, std::size_t predicted, std::size_t actual) {
  ClassMetrics c;
  c.precision = ratio(hit, predicted);
  c.recall = ratio(hit, actual);
  // F1 = 2·hit / (predicted + actual); zero only when the class never occurs.
  c.f1 = ratio(2 * hit, predicted + actual);
  return c;
}

const AuthorLabel& truth_of(const TruthMap& truths, const std::string& id) {
  const auto it = truths.find(id);
  if (it == truths.end()) throw EvaluationError("no ground truth for article '" + id + "'");
  return it->second;
}

}  // namespace

ConfusionMatrix confusion(std::span<const AttributionResult> results, const TruthMap& truths) {
  ConfusionMatrix m;
  for (const auto& r : results) {
    const bool actual_machine = truth_of(truths, r.article_id).is_machine();
    const bool predicted_machine = r.binary_label == BinaryLabel::machine;
    if (actual_machine) (predicted_machine ? m.tp : m.fn)++;
    else (predicted_machine ? m.fp : m.tn)++;
  }
  return m;
}

double accuracy(const ConfusionMatrix& m) {
  if (m.total() == 0) throw EvaluationError("accuracy of an empty confusion matrix");
  return static_cast<double>(m.tp + m.tn) / static_cast<double>(m.total());
}

ClassMetrics machine_metrics(const ConfusionMatrix& m) {
  return class_metrics(m.tp, m.tp + m.fp, m.tp + m.fn);
}

ClassMetrics human_metrics(const ConfusionMatrix& m) {
  return class_metrics(m.tn, m.tn + m.fn, m.tn + m.fp);
}

Metrics compute_metrics(const ConfusionMatrix& m) {
  Metrics out;
  out.accuracy = accuracy(m);
  out.machine = machine_metrics(m);
  out.human = human_metrics(m);
  out.macro_f1 = (out.machine.f1.value + out.human.f1.value) / 2.0;
  return out;
}

std::map<std::string, LabelShift> label_shift(std::span<const AttributionResult> before,
                                              std::span<const AttributionResult> after,
                                              const TruthMap& truths) {
  auto index = [](std::span<const AttributionResult> rs, const char* side) {
    std::map<std::string, const AttributionResult*> by_id;
    for (const auto& r : rs) {
      if (!r.five_way) throw EvaluationError(std::string(side) + " result for '" + r.article_id +
                                             "' has no five-way label");
      if (!by_id.emplace(r.article_id, &r).second) {
        throw EvaluationError(std::string(side) + " results list '" + r.article_id + "' twice");
      }
    }
    return by_id;
  };
  const auto b = index(before, "before");
  const auto a = index(after, "after");
  if (b.size() != a.size()) throw EvaluationError("label_shift: before/after article sets differ");

  std::map<std::string, LabelShift> out;
  for (const auto& [id, rb] : b) {
    const auto it = a.find(id);
    if (it == a.end()) throw EvaluationError("label_shift: '" + id + "' missing after obfuscation");
    auto& shift = out[truth_of(truths, id).str()];
    ++shift.before[static_cast<std::size_t>(*rb->five_way)];
    ++shift.after[static_cast<std::size_t>(*it->second->five_way)];
  }
  return out;
}

std::string_view to_string(PointFlag f) noexcept {
  switch (f) {
    case PointFlag::original: return "original";
    case PointFlag::selected: return "selected";
    case PointFlag::candidate: return "candidate";
  }
  return "candidate";
}

std::vector<ScatterPoint> scatter_dataset(const AlternateSet& set, UidMetric metric,
                                          const SelectionResult& selection) {
  if (!set.scored()) throw ArgumentError("scatter_dataset: alternate set is not scored");
  std::vector<ScatterPoint> out;
  out.reserve(set.k() + 1);
  out.push_back({std::nullopt, 1.0, metric_value(set.original_uid, metric), PointFlag::original});
  for (std::size_t i = 0; i < set.k(); ++i) {
    const bool chosen = selection.chosen_variant_index && *selection.chosen_variant_index == i;
    out.push_back({i, set.similarity[i], metric_value(set.uid[i], metric),
                   chosen ? PointFlag::selected : PointFlag::candidate});
  }
  return out;
}

}  // namespace uidobf
