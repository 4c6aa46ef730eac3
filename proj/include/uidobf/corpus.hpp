#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <memory>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <unordered_set>
#include <vector>

#include "uidobf/text.hpp"

namespace uidobf {

/// Ground-truth author. Any label other than "human" names a machine
/// generator; an optional "machine:" prefix is accepted and stripped.
class AuthorLabel {
 public:
  AuthorLabel() = default;
  static AuthorLabel human() { return AuthorLabel(""); }
  static AuthorLabel machine(std::string generator) { return AuthorLabel(std::move(generator)); }
  static AuthorLabel parse(std::string_view label);

  bool is_human() const noexcept { return generator_.empty(); }
  bool is_machine() const noexcept { return !generator_.empty(); }
  const std::string& generator() const noexcept { return generator_; }

  /// "human" or the generator name.
  std::string str() const { return is_human() ? "human" : generator_; }

  auto operator<=>(const AuthorLabel&) const = default;

 private:
  explicit AuthorLabel(std::string generator) : generator_(std::move(generator)) {}
  std::string generator_;
};

struct Article {
  std::string id;
  AuthorLabel label;
  std::string text;

  bool operator==(const Article&) const = default;
};

enum class PosTag { word, function_word, proper_noun, number, punctuation };

std::string_view to_string(PosTag tag) noexcept;

/// Assigns exactly one tag per token of one sentence.
class PosTagger {
 public:
  virtual ~PosTagger() = default;
  virtual std::vector<PosTag> tag(std::span<const Token> sentence) const = 0;
};

/// Lexicon tagger: gazetteer hits and capitalized words that do not open the
/// sentence are proper nouns; stop words are function words.
class ReferenceTagger final : public PosTagger {
 public:
  ReferenceTagger();
  explicit ReferenceTagger(std::unordered_set<std::string> proper_nouns);

  std::vector<PosTag> tag(std::span<const Token> sentence) const override;

 private:
  std::unordered_set<std::string> proper_nouns_;
};

struct Sentence {
  std::size_t begin = 0;  ///< byte offset into the article text
  std::size_t end = 0;
  std::vector<Token> tokens;
  std::vector<PosTag> tags;

  std::size_t size() const noexcept { return tokens.size(); }
};

struct SegmentedArticle {
  Article article;
  std::vector<Sentence> sentences;

  std::string_view sentence_text(std::size_t i) const {
    const auto& s = sentences.at(i);
    return std::string_view(article.text).substr(s.begin, s.end - s.begin);
  }
};

/// Rule-based splitter: a sentence ends at terminal punctuation (plus any
/// closing quotes or brackets) that is followed by whitespace or the end of
/// the text, unless the period closes a known abbreviation or an initial.
/// A blank line always ends a sentence.
SegmentedArticle segment(const Article& article, const PosTagger& tagger);
SegmentedArticle segment(const Article& article);

/// Re-joins sentence spans over the original inter-sentence whitespace.
std::string reconstruct(const SegmentedArticle& segmented);

struct SampleSpec {
  std::size_t per_label_count = 0;
  std::uint64_t seed = 0;
  /// Labels to draw from; empty means every label in the corpus label set.
  std::vector<std::string> labels;
};

/// Parsed corpus file before sampling.
struct Corpus {
  std::vector<std::string> label_set;  ///< sorted
  std::vector<Article> articles;       ///< file order
};

/// Reads line-delimited JSON records {"id","label","text"} with an optional
/// {"labels":[...]} header line.
Corpus read_corpus(const std::filesystem::path& path);
Corpus parse_corpus(std::istream& in);

/// Draws per_label_count articles per requested label, reproducibly from
/// seed, and returns them ordered by id.
std::vector<Article> sample_corpus(const Corpus& corpus, const SampleSpec& sample);

std::vector<Article> load_corpus(const std::filesystem::path& path, const SampleSpec& sample);

}  // namespace uidobf
