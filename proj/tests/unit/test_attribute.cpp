#include <doctest.h>

#include <atomic>
#include <cmath>

#include "uidobf/attribute.hpp"
#include "uidobf/error.hpp"
#include "unit/support.hpp"

using namespace uidobf;

namespace {

/// Fails with the given error kind for the first `failures` calls.
class FlakyDetector final : public DetectorClient {
 public:
  FlakyDetector(int failures, ScorerError::Kind kind) : failures_(failures), kind_(kind) {}
  const std::string& name() const noexcept override { return name_; }
  Verdict detect(std::string_view) const override {
    if (calls_++ < failures_) throw ScorerError(kind_, "simulated failure");
    return {0.7};
  }
  bool concurrent() const noexcept override { return false; }
  int calls() const { return calls_; }

 private:
  std::string name_ = "flaky";
  int failures_;
  ScorerError::Kind kind_;
  mutable int calls_ = 0;
};

class FixedDetector final : public DetectorClient {
 public:
  explicit FixedDetector(double p) : p_(p) {}
  const std::string& name() const noexcept override { return name_; }
  Verdict detect(std::string_view) const override { return {p_}; }
  bool concurrent() const noexcept override { return true; }

 private:
  std::string name_ = "fixed";
  double p_;
};

const RetryPolicy kFastRetry{3, std::chrono::milliseconds(1)};

}  // namespace

TEST_CASE("probability bands partition [0, 1]") {
  const ProbabilityBands bands;
  CHECK(bands.label(0.0) == FiveWay::very_unlikely);
  CHECK(bands.label(0.0999) == FiveWay::very_unlikely);
  CHECK(bands.label(0.10) == FiveWay::unlikely);
  CHECK(bands.label(0.35) == FiveWay::unclear);
  CHECK(bands.label(0.65) == FiveWay::possibly);
  CHECK(bands.label(0.90) == FiveWay::likely);
  CHECK(bands.label(1.0) == FiveWay::likely);
  // Labels are monotone in p, so each band is one contiguous interval.
  int previous = 0;
  for (int i = 0; i <= 10000; ++i) {
    const int label = static_cast<int>(bands.label(i / 10000.0));
    CHECK(label >= previous);
    CHECK(label - previous <= 1);
    previous = label;
  }
  CHECK(previous == 4);
}

TEST_CASE("binary label threshold") {
  CHECK(binary_label(0.5) == BinaryLabel::machine);
  CHECK(binary_label(0.4999) == BinaryLabel::human);
  const auto lo = classify("text", FixedDetector(0.0));
  CHECK(lo.binary_label == BinaryLabel::human);
  CHECK(lo.five_way == FiveWay::very_unlikely);
  const auto hi = classify("text", FixedDetector(1.0));
  CHECK(hi.binary_label == BinaryLabel::machine);
  CHECK(hi.five_way == FiveWay::likely);
  CHECK_THROWS_AS(classify("text", FixedDetector(1.5)), DetectorError);
}

TEST_CASE("stub detector follows mean surprisal") {
  const auto texts = testing::texts_of(testing::fixture_articles("news_20.jsonl"));
  const auto scorer = BigramScorer::fit(texts);
  for (const auto& text : texts) {
    const double m = mean_surprisal(text, scorer);
    const StubDetector below(scorer, m + 0.5);
    const StubDetector above(scorer, m - 0.5);
    CHECK(classify(text, below).binary_label == BinaryLabel::machine);
    CHECK(classify(text, above).binary_label == BinaryLabel::human);
    CHECK(below.detect(text).machine_probability == doctest::Approx(1.0 / (1.0 + std::exp(-0.5))));
  }
  CHECK_THROWS_AS(StubDetector(scorer, 1.0, 0.0), ArgumentError);
}

TEST_CASE("transport failures are retried") {
  FlakyDetector twice(2, ScorerError::Kind::transport);
  CHECK(classify("x", twice, "a", VariantKind::original, kFastRetry).machine_probability == 0.7);
  CHECK(twice.calls() == 3);

  FlakyDetector always(5, ScorerError::Kind::transport);
  CHECK_THROWS_AS(classify("x", always, "a", VariantKind::original, kFastRetry), DetectorError);
  CHECK(always.calls() == 3);

  FlakyDetector protocol(1, ScorerError::Kind::protocol);
  CHECK_THROWS_AS(classify("x", protocol, "a", VariantKind::original, kFastRetry), DetectorError);
  CHECK(protocol.calls() == 1);
}

TEST_CASE("batch classification") {
  const auto articles = testing::fixture_articles("news_20.jsonl");
  const auto scorer = BigramScorer::fit(testing::texts_of(articles));
  const StubDetector stub(scorer, 5.0);

  std::vector<ClassifyItem> items;
  for (const auto& a : articles) {
    for (const auto v : {VariantKind::original, VariantKind::selected_variance, VariantKind::selected_diff2}) {
      items.push_back({a.id, v, a.text});
    }
  }
  const auto batch = classify_batch(items, stub, kFastRetry, {}, 2);
  CHECK(batch.results.size() == 3 * articles.size());
  CHECK(batch.failures.empty());
  for (std::size_t i = 0; i < items.size(); ++i) {
    CHECK(batch.results[i].article_id == items[i].article_id);
    CHECK(batch.results[i].variant == items[i].variant);
  }
  CHECK(classify_batch(items, stub, kFastRetry, {}, 1).results == batch.results);
  CHECK(classify_batch({}, stub).results.empty());

  FlakyDetector broken(1000, ScorerError::Kind::protocol);
  const std::vector<ClassifyItem> two{{"a", VariantKind::original, "x"}, {"b", VariantKind::original, "y"}};
  const auto failed = classify_batch(two, broken, kFastRetry);
  CHECK(failed.results.empty());
  REQUIRE(failed.failures.size() == 2);
  CHECK(failed.failures[0].article_id == "a");
  CHECK(failed.failures[1].article_id == "b");
}

TEST_CASE("label names round-trip") {
  for (int i = 0; i < static_cast<int>(kFiveWayCount); ++i) {
    const auto f = static_cast<FiveWay>(i);
    CHECK(parse_five_way(to_string(f)) == f);
  }
  CHECK(parse_variant_kind("selected_diff2") == VariantKind::selected_diff2);
  CHECK(parse_binary_label("machine") == BinaryLabel::machine);
  CHECK_THROWS_AS(parse_five_way("maybe"), ArgumentError);
}

TEST_CASE("median mean surprisal") {
  const std::vector<std::string> corpus{"the cat sat", "the dog sat", "a bird flew"};
  const auto scorer = BigramScorer::fit(corpus);
  std::vector<double> means;
  for (const auto& t : corpus) means.push_back(mean_surprisal(t, scorer));
  std::sort(means.begin(), means.end());
  CHECK(median_mean_surprisal(corpus, scorer) == means[1]);
  const std::vector<std::string> two{corpus[0], corpus[2]};
  CHECK(median_mean_surprisal(two, scorer) ==
        doctest::Approx(0.5 * (mean_surprisal(two[0], scorer) + mean_surprisal(two[1], scorer))));
  CHECK_THROWS_AS(median_mean_surprisal(std::vector<std::string>{}, scorer), ArgumentError);
}
