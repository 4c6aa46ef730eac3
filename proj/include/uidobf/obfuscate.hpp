#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "uidobf/corpus.hpp"
#include "uidobf/lexicon.hpp"
#include "uidobf/scorer.hpp"
#include "uidobf/uid.hpp"

namespace uidobf {

enum class Method { synonym_swap, uws, up };

std::string_view to_string(Method m) noexcept;
Method parse_method(std::string_view s);

struct TargetSelection {
  std::size_t sentence_index = 0;
  std::optional<std::size_t> token_index;
  std::optional<std::string> target_word;

  bool found() const noexcept { return token_index.has_value(); }
};

/// Scans from token floor(n/2) to the end of the sentence and returns the
/// first eligible token. Tokens left of the midpoint are never considered.
/// n counts every token, punctuation included.
TargetSelection select_target(const Sentence& sentence, std::size_t sentence_index,
                              const EligibilityCriteria& criteria, const SynonymDB& synonyms);

struct ObfuscateOptions {
  EligibilityCriteria criteria;
  /// Write multi-word synonyms with spaces instead of underscores.
  bool underscores_to_spaces = false;
};

struct Swap {
  std::size_t sentence_index = 0;
  std::size_t token_index = 0;
  std::string original;
  std::string replacement;
};

struct SwapResult {
  Article article;
  std::vector<Swap> swaps;
};

/// Replaces at most one target per sentence with the synonym the causal
/// scorer finds most probable after the sentence prefix. Ties keep the
/// synonym listed first. Sentences without a target are left untouched.
SwapResult synonym_swap(const SegmentedArticle& article, const SynonymDB& synonyms,
                        const CausalScorer& scorer, const ObfuscateOptions& options = {});

/// An original article and its k generated variants. `alternatives[j]` holds
/// the k rewrites of sentence j (empty when the sentence had no target, in
/// which case every variant keeps the original sentence). Scores are filled
/// in by score_alternates().
struct AlternateSet {
  Article original;
  std::vector<Article> variants;
  std::vector<std::vector<std::string>> alternatives;

  UIDScores original_uid;
  std::vector<double> similarity;
  std::vector<UIDScores> uid;

  std::size_t k() const noexcept { return variants.size(); }
  bool scored() const noexcept {
    return similarity.size() == variants.size() && uid.size() == variants.size();
  }
};

/// UID Word Swap: masks each sentence's target and builds variant i from the
/// predictor's i-th fill. The masked word itself is skipped among the fills;
/// if fewer than k fills remain, the missing alternatives repeat the
/// original sentence.
AlternateSet uws_alternates(const SegmentedArticle& article, const MaskedPredictor& predictor,
                            const SynonymDB& synonyms, std::size_t k = 10,
                            const ObfuscateOptions& options = {});

struct ParaphraseOptions {
  std::size_t n = 10;
  std::size_t min_chars = 8;            ///< sentences shorter than this pass through
  double diversity_penalty = 1.0;
  std::uint64_t seed = 0;
  /// Replace a paraphrase longer than ratio * original length by the
  /// original sentence. Off when unset.
  std::optional<double> max_length_ratio;
};

/// UID Paraphrase: every sentence of at least min_chars characters is
/// replaced in variant i by the i-th of n diverse paraphrases.
AlternateSet up_alternates(const SegmentedArticle& article, const Paraphraser& paraphraser,
                           const ParaphraseOptions& options = {});

/// Builds the text of a variant: sentence j becomes replacements[j] when set,
/// otherwise the original span. Inter-sentence whitespace is preserved.
std::string compose(const SegmentedArticle& article,
                    const std::vector<std::optional<std::string>>& replacements);

/// Fills similarity and UID scores of an alternate set.
void score_alternates(AlternateSet& set, const CausalScorer& scorer);

/// Number of code points in a UTF-8 string.
std::size_t char_count(std::string_view s) noexcept;

}  // namespace uidobf
