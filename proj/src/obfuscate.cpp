#include "uidobf/obfuscate.hpp"

#include <algorithm>

#include "uidobf/error.hpp"
#include "uidobf/similarity.hpp"
#include "uidobf/text.hpp"

namespace uidobf {
namespace {

std::string render_replacement(const Token& target, std::string_view word,
                               const ObfuscateOptions& options) {
  std::string out = match_case(target.text, word);
  if (options.underscores_to_spaces) std::replace(out.begin(), out.end(), '_', ' ');
  return out;
}

// Sentence j's text with token t replaced.
std::string replace_token(const SegmentedArticle& article, std::size_t j, std::size_t t,
                          std::string_view word) {
  const auto& s = article.sentences[j];
  const std::string_view text = article.article.text;
  std::string out(text.substr(s.begin, s.tokens[t].begin - s.begin));
  out += word;
  out.append(text.substr(s.tokens[t].end, s.end - s.tokens[t].end));
  return out;
}

std::uint64_t sentence_seed(std::uint64_t seed, std::string_view article_id, std::size_t j) {
  return seed ^ stable_hash(article_id) ^ (0x9E3779B97F4A7C15ull * (j + 1));
}

}  // namespace

std::string_view to_string(Method m) noexcept {
  switch (m) {
    case Method::synonym_swap: return "synonym-swap";
    case Method::uws: return "uws";
    case Method::up: return "up";
  }
  return "uws";
}

Method parse_method(std::string_view s) {
  if (s == "synonym-swap") return Method::synonym_swap;
  if (s == "uws") return Method::uws;
  if (s == "up") return Method::up;
  throw ConfigError("unknown method '" + std::string(s) + "' (expected synonym-swap, uws or up)");
}

std::size_t char_count(std::string_view s) noexcept {
  return static_cast<std::size_t>(std::count_if(s.begin(), s.end(), [](char c) {
    return (static_cast<unsigned char>(c) & 0xC0) != 0x80;
  }));
}

TargetSelection select_target(const Sentence& sentence, std::size_t sentence_index,
                              const EligibilityCriteria& criteria, const SynonymDB& synonyms) {
  TargetSelection sel;
  sel.sentence_index = sentence_index;
  const std::size_t n = sentence.tokens.size();
  if (n < criteria.min_sentence_words) return sel;
  for (std::size_t t = n / 2; t < n; ++t) {
    if (is_eligible(sentence.tokens[t], sentence.tags[t], criteria, synonyms)) {
      sel.token_index = t;
      sel.target_word = sentence.tokens[t].text;
      break;
    }
  }
  return sel;
}

std::string compose(const SegmentedArticle& article,
                    const std::vector<std::optional<std::string>>& replacements) {
  const std::string& text = article.article.text;
  std::string out;
  out.reserve(text.size());
  std::size_t pos = 0;
  for (std::size_t j = 0; j < article.sentences.size(); ++j) {
    const auto& s = article.sentences[j];
    out.append(text, pos, s.begin - pos);
    if (j < replacements.size() && replacements[j]) out += *replacements[j];
    else out.append(text, s.begin, s.end - s.begin);
    pos = s.end;
  }
  out.append(text, pos, std::string::npos);
  return out;
}

SwapResult synonym_swap(const SegmentedArticle& article, const SynonymDB& synonyms,
                        const CausalScorer& scorer, const ObfuscateOptions& options) {
  SwapResult result;
  std::vector<std::optional<std::string>> replacements(article.sentences.size());
  for (std::size_t j = 0; j < article.sentences.size(); ++j) {
    const auto sel = select_target(article.sentences[j], j, options.criteria, synonyms);
    if (!sel.found()) continue;
    const auto t = *sel.token_index;
    const auto& target = article.sentences[j].tokens[t];
    const auto prefix = std::string_view(article.article.text)
                            .substr(article.sentences[j].begin,
                                    target.begin - article.sentences[j].begin);
    std::optional<std::string> best;
    double best_lp = 0.0;
    for (const auto& syn : synonyms.lookup(target.text)) {
      auto word = render_replacement(target, syn, options);
      const double lp = causal_word_logprob(prefix, word, scorer);
      if (!best || lp > best_lp) {
        best = std::move(word);
        best_lp = lp;
      }
    }
    // Eligibility guarantees at least one synonym.
    replacements[j] = replace_token(article, j, t, *best);
    result.swaps.push_back(Swap{j, t, target.text, *best});
  }
  result.article = article.article;
  result.article.text = compose(article, replacements);
  return result;
}

AlternateSet uws_alternates(const SegmentedArticle& article, const MaskedPredictor& predictor,
                            const SynonymDB& synonyms, std::size_t k,
                            const ObfuscateOptions& options) {
  if (k == 0) throw ArgumentError("uws_alternates: k must be positive");
  AlternateSet set;
  set.original = article.article;
  set.alternatives.resize(article.sentences.size());
  for (std::size_t j = 0; j < article.sentences.size(); ++j) {
    const auto& sentence = article.sentences[j];
    const auto sel = select_target(sentence, j, options.criteria, synonyms);
    if (!sel.found()) continue;
    const auto t = *sel.token_index;
    std::vector<std::string> words;
    words.reserve(sentence.tokens.size());
    for (const auto& tok : sentence.tokens) words.push_back(tok.text);
    const auto target_lower = to_lower(sentence.tokens[t].text);

    auto& alts = set.alternatives[j];
    for (const auto& fill : masked_top_k(words, t, k + 1, predictor)) {
      if (alts.size() == k) break;
      if (to_lower(fill.word) == target_lower) continue;
      alts.push_back(replace_token(article, j, t,
                                   render_replacement(sentence.tokens[t], fill.word, options)));
    }
    const std::string original(article.sentence_text(j));
    while (alts.size() < k) alts.push_back(original);
  }
  for (std::size_t i = 0; i < k; ++i) {
    std::vector<std::optional<std::string>> replacements(article.sentences.size());
    for (std::size_t j = 0; j < article.sentences.size(); ++j) {
      if (!set.alternatives[j].empty()) replacements[j] = set.alternatives[j][i];
    }
    Article v = article.article;
    v.text = compose(article, replacements);
    set.variants.push_back(std::move(v));
  }
  return set;
}

AlternateSet up_alternates(const SegmentedArticle& article, const Paraphraser& paraphraser,
                           const ParaphraseOptions& options) {
  if (options.n == 0) throw ArgumentError("up_alternates: n must be positive");
  AlternateSet set;
  set.original = article.article;
  set.alternatives.resize(article.sentences.size());
  for (std::size_t j = 0; j < article.sentences.size(); ++j) {
    const auto text = article.sentence_text(j);
    if (char_count(text) < options.min_chars) continue;
    auto paras = diverse_paraphrases(text, options.n, options.diversity_penalty, paraphraser,
                                     sentence_seed(options.seed, article.article.id, j));
    if (options.max_length_ratio) {
      const double cap = *options.max_length_ratio * static_cast<double>(char_count(text));
      for (auto& p : paras) {
        if (static_cast<double>(char_count(p)) > cap) p = std::string(text);
      }
    }
    set.alternatives[j] = std::move(paras);
  }
  for (std::size_t i = 0; i < options.n; ++i) {
    std::vector<std::optional<std::string>> replacements(article.sentences.size());
    for (std::size_t j = 0; j < article.sentences.size(); ++j) {
      if (!set.alternatives[j].empty()) replacements[j] = set.alternatives[j][i];
    }
    Article v = article.article;
    v.text = compose(article, replacements);
    set.variants.push_back(std::move(v));
  }
  return set;
}

void score_alternates(AlternateSet& set, const CausalScorer& scorer) {
  set.original_uid = uid_scores(set.original.text, scorer);
  set.similarity.clear();
  set.uid.clear();
  for (const auto& v : set.variants) {
    set.similarity.push_back(cosine_similarity(set.original.text, v.text));
    set.uid.push_back(uid_scores(v.text, scorer));
  }
}

}  // namespace uidobf
