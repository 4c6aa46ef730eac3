#include <doctest.h>

#include <algorithm>
#include <set>
#include <sstream>

#include "uidobf/corpus.hpp"
#include "uidobf/error.hpp"
#include "unit/support.hpp"

using namespace uidobf;

namespace {

Corpus parse(const std::string& text) {
  std::istringstream in(text);
  return parse_corpus(in);
}

std::vector<std::vector<std::string>> sentence_words(const SegmentedArticle& s) {
  std::vector<std::vector<std::string>> out;
  for (const auto& sent : s.sentences) {
    out.emplace_back();
    for (const auto& t : sent.tokens) out.back().push_back(t.text);
  }
  return out;
}

SegmentedArticle seg(std::string text) { return segment(Article{"x", AuthorLabel::human(), std::move(text)}); }

}  // namespace

TEST_CASE("author labels") {
  CHECK(AuthorLabel::parse("human").is_human());
  const auto m = AuthorLabel::parse("machine:gpt3");
  CHECK(m.is_machine());
  CHECK(m.generator() == "gpt3");
  CHECK(AuthorLabel::parse("gpt3") == m);
  CHECK(m.str() == "gpt3");
}

TEST_CASE("load_corpus samples per label and orders by id") {
  const SampleSpec spec{50, 7, {}};
  const auto articles = load_corpus(testing::data_path("news_120.jsonl"), spec);
  REQUIRE(articles.size() == 100);
  CHECK(std::count_if(articles.begin(), articles.end(), [](auto& a) { return a.label.is_human(); }) == 50);
  CHECK(std::is_sorted(articles.begin(), articles.end(), [](auto& a, auto& b) { return a.id < b.id; }));
  CHECK(load_corpus(testing::data_path("news_120.jsonl"), spec) == articles);

  const auto other = load_corpus(testing::data_path("news_120.jsonl"), SampleSpec{50, 8, {}});
  CHECK(other != articles);
}

TEST_CASE("load_corpus with per_label_count 0 is empty") {
  CHECK(load_corpus(testing::data_path("news_120.jsonl"), SampleSpec{0, 1, {}}).empty());
}

TEST_CASE("sampling restricted to requested labels") {
  const auto articles = load_corpus(testing::data_path("news_120.jsonl"), SampleSpec{5, 1, {"human"}});
  CHECK(articles.size() == 5);
  for (const auto& a : articles) CHECK(a.label.is_human());
}

TEST_CASE("corpus errors") {
  CHECK_THROWS_AS(parse(R"({"id":"a","label":"human"})" "\n"), CorpusError);
  CHECK_THROWS_AS(parse(R"({"label":"human","text":"x"})" "\n"), CorpusError);
  CHECK_THROWS_AS(parse(R"({"id":"a","label":"human","text":"x"})" "\n" R"({"id":"a","label":"human","text":"y"})"),
                  CorpusError);
  CHECK_THROWS_AS(parse(R"({"id":"a","label":"human","text":"   "})"), CorpusError);
  CHECK_THROWS_AS(parse("not json\n"), CorpusError);
  CHECK_THROWS_AS(parse(R"({"labels":["human"]})" "\n" R"({"id":"a","label":"gpt2","text":"x"})"), LabelError);

  const auto c = parse(R"({"id":"a","label":"human","text":"x"})" "\n");
  CHECK_THROWS_AS(sample_corpus(c, SampleSpec{2, 0, {}}), SamplingError);
  CHECK_THROWS_AS(sample_corpus(c, SampleSpec{1, 0, {"gpt2"}}), LabelError);
}

TEST_CASE("segment simple texts") {
  CHECK(sentence_words(seg("Hi. Bye.")) ==
        std::vector<std::vector<std::string>>{{"Hi", "."}, {"Bye", "."}});
  CHECK(seg("no terminal punctuation here").sentences.size() == 1);
  CHECK(seg("Mr. Smith went to Washington. He left.").sentences.size() == 2);
  CHECK(seg("J. R. Smith spoke. Then he sat.").sentences.size() == 2);
  CHECK(seg("\"Stop!\" she said. Then quiet.").sentences.size() == 3);
  CHECK(seg("line one\n\nline two").sentences.size() == 2);
  CHECK(seg("Is it 3.5 or 4? Nobody knows.").sentences.size() == 2);
}

TEST_CASE("segment the news excerpt") {
  // Hand segmentation: "... signed." / "... obama." / "1: blocked." / "an order ban travelers…"
  const auto s = seg(testing::excerpt_text());
  REQUIRE(s.sentences.size() == 4);
  CHECK(s.sentence_text(2) == "1: blocked.");
  CHECK(s.sentences[0].size() == 21);
  CHECK(s.sentences[1].size() == 28);
}

TEST_CASE("segmentation invariants on the fixture corpus") {
  for (const auto& a : testing::fixture_articles("news_120.jsonl")) {
    const auto s = segment(a);
    REQUIRE_FALSE(s.sentences.empty());
    CHECK(reconstruct(s) == a.text);
    std::size_t last_end = 0;
    for (const auto& sent : s.sentences) {
      CHECK(sent.tags.size() == sent.tokens.size());
      CHECK(sent.begin >= last_end);
      std::size_t prev = sent.begin;
      for (const auto& t : sent.tokens) {
        CHECK(t.begin >= prev);
        CHECK(t.end > t.begin);
        prev = t.end;
      }
      last_end = sent.end;
    }
  }
}

TEST_CASE("reference tagger") {
  const auto s = seg("Officials in Denver met Obama and the mayor.");
  const auto& sent = s.sentences.at(0);
  std::map<std::string, PosTag> tags;
  for (std::size_t i = 0; i < sent.size(); ++i) tags[sent.tokens[i].text] = sent.tags[i];
  CHECK(tags["Officials"] == PosTag::word);  // sentence-initial capital
  CHECK(tags["Denver"] == PosTag::proper_noun);
  CHECK(tags["Obama"] == PosTag::proper_noun);
  CHECK(tags["the"] == PosTag::function_word);
  CHECK(tags["mayor"] == PosTag::word);
  CHECK(tags["."] == PosTag::punctuation);

  const auto lower = seg("former president barack obama spoke.");
  CHECK(lower.sentences[0].tags[3] == PosTag::proper_noun);  // gazetteer hit
}
