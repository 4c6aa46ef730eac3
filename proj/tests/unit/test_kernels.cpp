#include <doctest.h>

#include "uidobf/kernels.hpp"
#include "uidobf/similarity.hpp"
#include "unit/support.hpp"

using namespace uidobf;

TEST_CASE("serial and parallel UID batches agree") {
  const auto texts = testing::texts_of(testing::fixture_articles("news_120.jsonl"));
  const auto scorer = BigramScorer::fit(texts);
  const auto serial = kernels::uid_scores_batch(texts, scorer, kernels::Exec::serial);
  const auto parallel = kernels::uid_scores_batch(texts, scorer, kernels::Exec::parallel, 4);
  REQUIRE(serial.size() == texts.size());
  for (std::size_t i = 0; i < texts.size(); ++i) {
    REQUIRE(std::holds_alternative<UIDScores>(serial[i]));
    CHECK(std::get<UIDScores>(serial[i]) == std::get<UIDScores>(parallel[i]));
    CHECK(std::get<UIDScores>(serial[i]) == uid_scores(texts[i], scorer));
  }
}

TEST_CASE("serial and parallel similarity batches agree") {
  const auto texts = testing::texts_of(testing::fixture_articles("news_120.jsonl"));
  const auto serial = kernels::similarity_batch(texts[0], texts, kernels::Exec::serial);
  const auto parallel = kernels::similarity_batch(texts[0], texts, kernels::Exec::parallel, 3);
  CHECK(serial == parallel);
  CHECK(serial[0] == 1.0);
  CHECK(serial[5] == cosine_similarity(texts[0], texts[5]));
}

TEST_CASE("failures are captured per item") {
  const std::vector<std::string> texts{"a b c", "x", "d e"};
  const std::vector<std::string> corpus{"a b c d e"};
  const auto scorer = BigramScorer::fit(corpus);
  const auto out = kernels::uid_scores_batch(texts, scorer, kernels::Exec::parallel, 2);
  CHECK(std::holds_alternative<UIDScores>(out[0]));
  REQUIRE(std::holds_alternative<kernels::Failure>(out[1]));
  CHECK(std::get<kernels::Failure>(out[1]).kind == kernels::FailureKind::argument);
  CHECK(std::holds_alternative<UIDScores>(out[2]));
}

TEST_CASE("map_indexed keeps input order") {
  const auto out = kernels::map_indexed<int>(
      100, [](std::size_t i) { return static_cast<int>(i * i); }, kernels::Exec::parallel, 4);
  for (std::size_t i = 0; i < out.size(); ++i) CHECK(std::get<int>(out[i]) == static_cast<int>(i * i));
}
