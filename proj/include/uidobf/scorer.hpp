#pragma once

#include <cstddef>
#include <cstdint>
#include <map>
#include <span>
#include <string>
#include <string_view>
#include <unordered_map>
#include <utility>
#include <vector>

#include "uidobf/lexicon.hpp"

namespace uidobf {

/// Surprisal of one scorer token in nats.
struct TokenSurprisal {
  std::string token;
  double surprisal = 0.0;

  bool operator==(const TokenSurprisal&) const = default;
};

using SurprisalSequence = std::vector<TokenSurprisal>;

struct FillCandidate {
  std::string word;
  double score = 0.0;  ///< higher is more probable

  bool operator==(const FillCandidate&) const = default;
};

/// Left-to-right language model. Surprisal of token t conditions on every
/// preceding token of the text passed in.
class CausalScorer {
 public:
  virtual ~CausalScorer() = default;
  virtual SurprisalSequence surprisals(std::string_view text) const = 0;
  /// ln P(word | prefix); multi-token words sum over their tokens.
  virtual double word_logprob(std::string_view prefix, std::string_view word) const = 0;
  /// Whether concurrent calls on one instance are allowed.
  virtual bool concurrent() const noexcept = 0;
};

class MaskedPredictor {
 public:
  virtual ~MaskedPredictor() = default;
  /// Best fills for tokens[mask_index], sorted by score descending.
  virtual std::vector<FillCandidate> fills(std::span<const std::string> tokens,
                                           std::size_t mask_index, std::size_t k) const = 0;
  virtual bool concurrent() const noexcept = 0;
};

class Paraphraser {
 public:
  virtual ~Paraphraser() = default;
  virtual std::vector<std::string> paraphrase(std::string_view sentence, std::size_t n,
                                              double diversity_penalty,
                                              std::uint64_t seed) const = 0;
  virtual bool concurrent() const noexcept = 0;
};

// Checked entry points. These validate arguments and the model's reply, so
// adapter-backed and in-process models are held to the same contract.

SurprisalSequence causal_surprisals(std::string_view text, const CausalScorer& scorer);
double causal_word_logprob(std::string_view prefix, std::string_view word,
                           const CausalScorer& scorer);
std::vector<FillCandidate> masked_top_k(std::span<const std::string> sentence_tokens,
                                        std::size_t mask_index, std::size_t k,
                                        const MaskedPredictor& predictor);
std::vector<std::string> diverse_paraphrases(std::string_view sentence, std::size_t n,
                                             double diversity_penalty,
                                             const Paraphraser& paraphraser,
                                             std::uint64_t seed = 0);

/// Lowercased word/punctuation tokens; the unit over which the reference
/// models count and UID is measured.
std::vector<std::string> scorer_tokens(std::string_view text);

/// Add-one smoothed bigram model. The first token of a text is scored by the
/// smoothed unigram distribution; later tokens by P(w | previous token).
/// Unseen words share one extra vocabulary slot.
class BigramScorer final : public CausalScorer {
 public:
  BigramScorer() = default;
  static BigramScorer fit(std::span<const std::string> texts);

  SurprisalSequence surprisals(std::string_view text) const override;
  double word_logprob(std::string_view prefix, std::string_view word) const override;
  bool concurrent() const noexcept override { return true; }

  /// Smoothed P(word); no context.
  double unigram_probability(std::string_view word) const;
  /// Smoothed P(word | prev).
  double bigram_probability(std::string_view prev, std::string_view word) const;
  /// Vocabulary size including the unknown-word slot.
  std::size_t vocabulary_size() const noexcept { return unigrams_.size() + 1; }
  std::size_t token_count() const noexcept { return total_; }

 private:
  double logprob(const std::string* prev, const std::string& word) const;

  std::unordered_map<std::string, std::size_t> unigrams_;
  std::unordered_map<std::string, std::size_t> histories_;  // bigrams starting at w
  std::map<std::pair<std::string, std::string>, std::size_t> bigrams_;
  std::size_t total_ = 0;
};

/// Counts which words fill the slot between the same left and right
/// neighbours (sentence boundaries included); backs off to unigram counts.
/// Slot hits score by count (>= 1), back-off words by relative frequency
/// (< 1), so slot hits always rank first. Ties break alphabetically.
class SlotFrequencyPredictor final : public MaskedPredictor {
 public:
  SlotFrequencyPredictor() = default;
  static SlotFrequencyPredictor fit(std::span<const std::string> texts);

  std::vector<FillCandidate> fills(std::span<const std::string> tokens, std::size_t mask_index,
                                   std::size_t k) const override;
  bool concurrent() const noexcept override { return true; }

  std::size_t vocabulary_size() const noexcept { return unigrams_.size(); }

 private:
  using Slot = std::pair<std::string, std::string>;
  std::map<Slot, std::map<std::string, std::size_t>> slots_;
  std::map<std::string, std::size_t> unigrams_;
  std::vector<FillCandidate> backoff_;  // all vocabulary words, ranked
  std::size_t total_ = 0;
};

/// Offline stand-in for a diverse-beam-search paraphraser. Builds a pool of
/// rewrites (clause rotations, synonym substitutions and their combinations),
/// scores each by token drift from the source plus a seeded jitter, then fills n groups
/// greedily: each group takes the best unpicked rewrite after subtracting
/// diversity_penalty times its token overlap with earlier picks.
class StubParaphraser final : public Paraphraser {
 public:
  explicit StubParaphraser(const SynonymDB& synonyms) : synonyms_(&synonyms) {}

  std::vector<std::string> paraphrase(std::string_view sentence, std::size_t n,
                                      double diversity_penalty,
                                      std::uint64_t seed) const override;
  bool concurrent() const noexcept override { return true; }

  /// The candidate pool in generation order; exposed for tests.
  std::vector<std::string> candidate_pool(std::string_view sentence) const;

 private:
  const SynonymDB* synonyms_;
};

/// Token-multiset overlap |a ∩ b| / max(|a|, |b|) over scorer tokens.
double token_overlap(std::string_view a, std::string_view b);

}  // namespace uidobf
