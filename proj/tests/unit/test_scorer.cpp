#include <doctest.h>

#include <cmath>
#include <map>
#include <random>
#include <set>

#include "uidobf/error.hpp"
#include "uidobf/scorer.hpp"
#include "unit/support.hpp"

using namespace uidobf;

namespace {

/// Assigns probability 1 to every word.
class CertainScorer final : public CausalScorer {
 public:
  SurprisalSequence surprisals(std::string_view text) const override {
    SurprisalSequence out;
    for (const auto& t : scorer_tokens(text)) out.push_back({t, 0.0});
    return out;
  }
  double word_logprob(std::string_view, std::string_view) const override { return 0.0; }
  bool concurrent() const noexcept override { return true; }
};

class BrokenPredictor final : public MaskedPredictor {
 public:
  std::vector<FillCandidate> fills(std::span<const std::string>, std::size_t, std::size_t) const override {
    return {{"b", 1.0}, {"a", 2.0}};
  }
  bool concurrent() const noexcept override { return true; }
};

/// Add-one bigram log joint probability computed from raw counts.
double oracle_log_joint(const std::vector<std::string>& corpus_tokens_flat,
                        const std::vector<std::vector<std::string>>& docs, const std::vector<std::string>& text) {
  std::map<std::string, double> uni;
  std::map<std::string, double> hist;
  std::map<std::pair<std::string, std::string>, double> bi;
  for (const auto& t : corpus_tokens_flat) uni[t] += 1;
  for (const auto& d : docs) {
    for (std::size_t i = 1; i < d.size(); ++i) {
      hist[d[i - 1]] += 1;
      bi[{d[i - 1], d[i]}] += 1;
    }
  }
  const double v = static_cast<double>(uni.size()) + 1;
  const double n = static_cast<double>(corpus_tokens_flat.size());
  double lp = std::log((uni[text[0]] + 1) / (n + v));
  for (std::size_t i = 1; i < text.size(); ++i) {
    lp += std::log((bi[{text[i - 1], text[i]}] + 1) / (hist[text[i - 1]] + v));
  }
  return lp;
}

}  // namespace

TEST_CASE("bigram surprisals on a hand-computed corpus") {
  // Corpus "a a a": count(a)=3, N=3, V=2 (a + unknown), history(a)=2, count(a a)=2.
  const std::vector<std::string> corpus{"a a a"};
  const auto m = BigramScorer::fit(corpus);
  const auto seq = causal_surprisals("a a a", m);
  REQUIRE(seq.size() == 3);
  CHECK(seq[0].surprisal == doctest::Approx(-std::log(4.0 / 5.0)).epsilon(1e-12));
  CHECK(seq[1].surprisal == doctest::Approx(-std::log(3.0 / 4.0)).epsilon(1e-12));
  CHECK(seq[2].surprisal == doctest::Approx(-std::log(3.0 / 4.0)).epsilon(1e-12));
  CHECK(causal_surprisals("a a a", m) == seq);
}

TEST_CASE("one-token text is scored without context") {
  const std::vector<std::string> corpus{"the cat sat", "the dog sat"};
  const auto m = BigramScorer::fit(corpus);
  const auto seq = causal_surprisals("cat", m);
  REQUIRE(seq.size() == 1);
  // count(cat)=1, N=6, V=5
  CHECK(seq[0].surprisal == doctest::Approx(-std::log(2.0 / 11.0)).epsilon(1e-12));
  CHECK(causal_word_logprob("", "cat", m) == doctest::Approx(std::log(2.0 / 11.0)).epsilon(1e-12));
}

TEST_CASE("word log probabilities order candidates by bigram counts") {
  // history(the)=3, count(the cat)=2, count(the dog)=1, count(cat sat)=1, V=6
  const std::vector<std::string> corpus{"the cat sat", "the dog sat", "the cat ran"};
  const auto m = BigramScorer::fit(corpus);
  const double cat = causal_word_logprob("we saw the", "cat", m);
  const double dog = causal_word_logprob("we saw the", "dog", m);
  CHECK(cat == doctest::Approx(std::log(3.0 / 9.0)).epsilon(1e-12));
  CHECK(dog == doctest::Approx(std::log(2.0 / 9.0)).epsilon(1e-12));
  CHECK(cat > dog);
  CHECK(causal_word_logprob("the", "cat sat", m) ==
        doctest::Approx(std::log(3.0 / 9.0) + std::log(2.0 / 8.0)).epsilon(1e-12));
  CHECK(causal_word_logprob("anything", "x", CertainScorer{}) == 0.0);
  CHECK_THROWS_AS(causal_word_logprob("x", " ", m), ArgumentError);
}

TEST_CASE("surprisal additivity against a count oracle") {
  const auto articles = testing::fixture_articles("news_20.jsonl");
  const auto texts = testing::texts_of(articles);
  const auto m = BigramScorer::fit(texts);
  std::vector<std::string> flat;
  std::vector<std::vector<std::string>> docs;
  for (const auto& t : texts) {
    docs.push_back(scorer_tokens(t));
    flat.insert(flat.end(), docs.back().begin(), docs.back().end());
  }
  std::mt19937_64 rng(3);
  for (int trial = 0; trial < 20; ++trial) {
    const auto& text = texts[rng() % texts.size()];
    double sum = 0.0;
    for (const auto& ts : causal_surprisals(text, m)) {
      CHECK(ts.surprisal >= 0.0);
      sum += ts.surprisal;
    }
    CHECK(sum == doctest::Approx(-oracle_log_joint(flat, docs, scorer_tokens(text))).epsilon(1e-9));
  }
}

TEST_CASE("masked_top_k with the slot-frequency predictor") {
  const std::vector<std::string> corpus{"the cat sat. the cat sat. the dog sat. a bird flew."};
  const auto p = SlotFrequencyPredictor::fit(corpus);
  const std::vector<std::string> sentence{"the", "[MASK]", "sat", "."};

  const auto top1 = masked_top_k(sentence, 1, 1, p);
  REQUIRE(top1.size() == 1);
  CHECK(top1[0].word == "cat");
  CHECK(top1[0].score == 2.0);

  // Slot hits first (cat, dog), then unigram back-off by count, ties alphabetical.
  const auto all = masked_top_k(sentence, 1, 100, p);
  std::vector<std::string> words;
  for (const auto& f : all) words.push_back(f.word);
  CHECK(words == std::vector<std::string>{"cat", "dog", "sat", "the", "a", "bird", "flew"});
  CHECK(all.size() == p.vocabulary_size());
  for (std::size_t i = 1; i < all.size(); ++i) CHECK(all[i].score <= all[i - 1].score);

  CHECK_THROWS_AS(masked_top_k(sentence, 4, 1, p), ArgumentError);
  CHECK_THROWS_AS(masked_top_k(sentence, 0, 0, p), ArgumentError);
  CHECK_THROWS_AS(masked_top_k(sentence, 0, 2, BrokenPredictor{}), ScorerError);
}

TEST_CASE("k=10 on the fixture corpus yields exactly 10 distinct fills") {
  const auto p = SlotFrequencyPredictor::fit(testing::texts_of(testing::fixture_articles("news_20.jsonl")));
  const std::vector<std::string> sentence{"the", "new", "plan", "will", "help", "residents", "."};
  const auto fills = masked_top_k(sentence, 2, 10, p);
  CHECK(fills.size() == 10);
  std::set<std::string> distinct;
  for (const auto& f : fills) distinct.insert(f.word);
  CHECK(distinct.size() == 10);
}

TEST_CASE("stub paraphraser") {
  std::istringstream syn("announced\tdeclared,proclaimed\nplan\tscheme,proposal\nbudget\tfinances\n");
  const auto db = parse_synonyms(syn);
  const StubParaphraser stub(db);
  const std::string sentence = "The council announced the plan on Monday, and residents welcomed the budget.";

  SUBCASE("n strings, deterministic per seed") {
    const auto a = diverse_paraphrases(sentence, 10, 1.0, stub, 42);
    CHECK(a.size() == 10);
    CHECK(diverse_paraphrases(sentence, 10, 1.0, stub, 42) == a);
    CHECK(std::set<std::string>(a.begin(), a.end()).size() == 10);
  }

  SUBCASE("n=1 gives the canonical rewrite") {
    const auto one = diverse_paraphrases(sentence, 1, 1.0, stub, 0);
    REQUIRE(one.size() == 1);
    CHECK(one[0] != sentence);
    CHECK(token_overlap(one[0], sentence) > 0.9);
  }

  SUBCASE("penalty never reduces diversity") {
    for (std::uint64_t seed = 0; seed < 5; ++seed) {
      const auto flat = diverse_paraphrases(sentence, 10, 0.0, stub, seed);
      const auto diverse = diverse_paraphrases(sentence, 10, 1.0, stub, seed);
      CHECK(std::set<std::string>(diverse.begin(), diverse.end()).size() >=
            std::set<std::string>(flat.begin(), flat.end()).size());
    }
  }

  SUBCASE("golden output") {
    const auto lines = testing::read_file(testing::data_path("golden_paraphrases.txt"));
    std::string expected;
    for (const auto& p : diverse_paraphrases(sentence, 10, 1.0, stub, 42)) expected += p + "\n";
    CHECK(expected == lines);
  }

  SUBCASE("no rewrite available repeats the sentence") {
    const auto out = diverse_paraphrases("Nothing to see here.", 3, 1.0, stub, 0);
    CHECK(out == std::vector<std::string>(3, "Nothing to see here."));
  }

  CHECK_THROWS_AS(diverse_paraphrases(" ", 2, 1.0, stub), ArgumentError);
  CHECK_THROWS_AS(diverse_paraphrases(sentence, 0, 1.0, stub), ArgumentError);
  CHECK_THROWS_AS(diverse_paraphrases(sentence, 2, -1.0, stub), ArgumentError);
}

TEST_CASE("token_overlap") {
  CHECK(token_overlap("a b c", "a b c") == 1.0);
  CHECK(token_overlap("a b", "c d") == 0.0);
  CHECK(token_overlap("a b c d", "a b") == 0.5);
}
