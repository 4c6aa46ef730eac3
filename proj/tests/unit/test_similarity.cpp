#include <doctest.h>

#include <cmath>
#include <random>

#include "uidobf/corpus.hpp"
#include "uidobf/text.hpp"
#include "uidobf/similarity.hpp"
#include "unit/support.hpp"

using namespace uidobf;

TEST_CASE("vectorize") {
  CHECK(vectorize("A a b.") == TermVector{{"a", 2}, {"b", 1}});
  CHECK(vectorize("").empty());
  // Hand tally.
  CHECK(vectorize("The plan, the PLAN; the plan's 3 parts.") ==
        TermVector{{"3", 1}, {"parts", 1}, {"plan", 3}, {"s", 1}, {"the", 3}});
}

TEST_CASE("cosine similarity examples") {
  CHECK(cosine_similarity("the same text", "the same text") == 1.0);
  CHECK(cosine_similarity("alpha beta", "gamma delta") == 0.0);
  CHECK(cosine_similarity("a b", "a c") == doctest::Approx(0.5).epsilon(1e-15));
  CHECK(cosine_similarity("", "") == 1.0);
  CHECK(cosine_similarity("", "x") == 0.0);
}

TEST_CASE("similarity is symmetric and bounded") {
  const auto articles = testing::fixture_articles("news_20.jsonl");
  for (std::size_t i = 0; i < articles.size(); ++i) {
    CHECK(cosine_similarity(articles[i].text, articles[i].text) == 1.0);
    for (std::size_t j = i + 1; j < articles.size(); ++j) {
      const double ab = cosine_similarity(articles[i].text, articles[j].text);
      CHECK(ab == cosine_similarity(articles[j].text, articles[i].text));
      CHECK(ab >= 0.0);
      CHECK(ab <= 1.0);
    }
  }
}

TEST_CASE("one swap per sentence keeps long articles above 0.95") {
  // Re-flow fixture prose into 30-word sentences, then swap one word in each.
  const auto articles = testing::fixture_articles("news_120.jsonl");
  for (std::size_t start = 0; start + 3 <= articles.size(); start += 3) {
    std::vector<std::string> words;
    for (std::size_t a = start; a < start + 3; ++a) {
      for (const auto& t : tokenize(articles[a].text)) {
        if (is_alphabetic(t.text)) words.push_back(t.text);
      }
    }
    std::string original;
    std::string swapped;
    for (std::size_t i = 0; i < words.size(); ++i) {
      const bool last = i + 1 == words.size() || (i + 1) % 30 == 0;
      original += words[i];
      swapped += last ? "zzfresh" : words[i];
      const char* sep = last ? ". " : " ";
      original += sep;
      swapped += sep;
    }
    CHECK(cosine_similarity(original, swapped) > 0.95);
  }
}
