#include "uidobf/scorer.hpp"

#include <algorithm>
#include <cmath>
#include <set>

#include "uidobf/corpus.hpp"
#include "uidobf/error.hpp"
#include "uidobf/text.hpp"

namespace uidobf {
namespace {

const std::string kBos = "<s>";
const std::string kEos = "</s>";

std::uint64_t splitmix64(std::uint64_t x) noexcept {
  x += 0x9E3779B97F4A7C15ull;
  x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ull;
  x = (x ^ (x >> 27)) * 0x94D049BB133111EBull;
  return x ^ (x >> 31);
}

double unit_interval(std::uint64_t x) noexcept {
  return static_cast<double>(splitmix64(x) >> 11) * 0x1.0p-53;
}

}  // namespace

std::vector<std::string> scorer_tokens(std::string_view text) {
  std::vector<std::string> out;
  for (auto& t : tokenize(text)) out.push_back(to_lower(t.text));
  return out;
}

// ---------------------------------------------------------------------------
// Checked entry points

SurprisalSequence causal_surprisals(std::string_view text, const CausalScorer& scorer) {
  if (trim(text).empty()) throw ArgumentError("causal_surprisals: empty text");
  auto seq = scorer.surprisals(text);
  for (const auto& ts : seq) {
    if (!std::isfinite(ts.surprisal) || ts.surprisal < 0.0) {
      throw ScorerError(ScorerError::Kind::protocol,
                        "scorer returned invalid surprisal for token '" + ts.token + "'");
    }
  }
  return seq;
}

double causal_word_logprob(std::string_view prefix, std::string_view word,
                           const CausalScorer& scorer) {
  if (trim(word).empty()) throw ArgumentError("causal_word_logprob: empty word");
  const double lp = scorer.word_logprob(prefix, word);
  if (std::isnan(lp) || lp > 0.0) {
    throw ScorerError(ScorerError::Kind::protocol, "scorer returned invalid log probability");
  }
  return lp;
}

std::vector<FillCandidate> masked_top_k(std::span<const std::string> sentence_tokens,
                                        std::size_t mask_index, std::size_t k,
                                        const MaskedPredictor& predictor) {
  if (mask_index >= sentence_tokens.size()) {
    throw ArgumentError("masked_top_k: mask index " + std::to_string(mask_index) +
                        " out of range for " + std::to_string(sentence_tokens.size()) + " tokens");
  }
  if (k == 0) throw ArgumentError("masked_top_k: k must be positive");
  auto fills = predictor.fills(sentence_tokens, mask_index, k);
  if (fills.size() > k) {
    throw ScorerError(ScorerError::Kind::protocol, "predictor returned more than k candidates");
  }
  std::set<std::string> seen;
  for (std::size_t i = 0; i < fills.size(); ++i) {
    if (fills[i].word.empty() || !seen.insert(fills[i].word).second) {
      throw ScorerError(ScorerError::Kind::protocol, "predictor returned empty or duplicate word");
    }
    if (i > 0 && fills[i].score > fills[i - 1].score) {
      throw ScorerError(ScorerError::Kind::protocol, "predictor candidates not sorted by score");
    }
  }
  return fills;
}

std::vector<std::string> diverse_paraphrases(std::string_view sentence, std::size_t n,
                                             double diversity_penalty,
                                             const Paraphraser& paraphraser, std::uint64_t seed) {
  if (trim(sentence).empty()) throw ArgumentError("diverse_paraphrases: empty sentence");
  if (n == 0) throw ArgumentError("diverse_paraphrases: n must be positive");
  if (!(diversity_penalty >= 0.0)) throw ArgumentError("diverse_paraphrases: negative penalty");
  auto out = paraphraser.paraphrase(sentence, n, diversity_penalty, seed);
  if (out.size() != n) {
    throw ScorerError(ScorerError::Kind::protocol,
                      "paraphraser returned " + std::to_string(out.size()) + " strings, expected " +
                          std::to_string(n));
  }
  return out;
}

// ---------------------------------------------------------------------------
// BigramScorer

BigramScorer BigramScorer::fit(std::span<const std::string> texts) {
  BigramScorer m;
  for (const auto& text : texts) {
    const auto toks = scorer_tokens(text);
    for (std::size_t i = 0; i < toks.size(); ++i) {
      ++m.unigrams_[toks[i]];
      ++m.total_;
      if (i > 0) {
        ++m.histories_[toks[i - 1]];
        ++m.bigrams_[{toks[i - 1], toks[i]}];
      }
    }
  }
  return m;
}

double BigramScorer::unigram_probability(std::string_view word) const {
  const auto it = unigrams_.find(std::string(word));
  const double count = it == unigrams_.end() ? 0.0 : static_cast<double>(it->second);
  return (count + 1.0) / static_cast<double>(total_ + vocabulary_size());
}

double BigramScorer::bigram_probability(std::string_view prev, std::string_view word) const {
  const std::string p(prev);
  const std::string w(word);
  const auto h = histories_.find(p);
  const double hist = h == histories_.end() ? 0.0 : static_cast<double>(h->second);
  const auto b = bigrams_.find({p, w});
  const double count = b == bigrams_.end() ? 0.0 : static_cast<double>(b->second);
  return (count + 1.0) / (hist + static_cast<double>(vocabulary_size()));
}

double BigramScorer::logprob(const std::string* prev, const std::string& word) const {
  return std::log(prev == nullptr ? unigram_probability(word) : bigram_probability(*prev, word));
}

SurprisalSequence BigramScorer::surprisals(std::string_view text) const {
  const auto toks = scorer_tokens(text);
  SurprisalSequence out;
  out.reserve(toks.size());
  for (std::size_t i = 0; i < toks.size(); ++i) {
    const double s = -logprob(i == 0 ? nullptr : &toks[i - 1], toks[i]);
    out.push_back({toks[i], s == 0.0 ? 0.0 : s});
  }
  return out;
}

double BigramScorer::word_logprob(std::string_view prefix, std::string_view word) const {
  const auto ctx = scorer_tokens(prefix);
  const auto toks = scorer_tokens(word);
  if (toks.empty()) throw ArgumentError("word_logprob: word has no tokens");
  const std::string* prev = ctx.empty() ? nullptr : &ctx.back();
  double total = 0.0;
  for (const auto& t : toks) {
    total += logprob(prev, t);
    prev = &t;
  }
  return total;
}

// ---------------------------------------------------------------------------
// SlotFrequencyPredictor

SlotFrequencyPredictor SlotFrequencyPredictor::fit(std::span<const std::string> texts) {
  SlotFrequencyPredictor m;
  for (const auto& text : texts) {
    if (trim(text).empty()) continue;
    const auto seg = segment(Article{"", AuthorLabel::human(), text});
    for (const auto& s : seg.sentences) {
      for (std::size_t i = 0; i < s.tokens.size(); ++i) {
        const std::string w = to_lower(s.tokens[i].text);
        if (!is_alphabetic(w)) continue;
        const std::string left = i == 0 ? kBos : to_lower(s.tokens[i - 1].text);
        const std::string right = i + 1 == s.tokens.size() ? kEos : to_lower(s.tokens[i + 1].text);
        ++m.slots_[{left, right}][w];
        ++m.unigrams_[w];
        ++m.total_;
      }
    }
  }
  for (const auto& [w, c] : m.unigrams_) {
    m.backoff_.push_back({w, static_cast<double>(c) / static_cast<double>(m.total_ + 1)});
  }
  std::stable_sort(m.backoff_.begin(), m.backoff_.end(),
                   [](const FillCandidate& a, const FillCandidate& b) { return a.score > b.score; });
  return m;
}

std::vector<FillCandidate> SlotFrequencyPredictor::fills(std::span<const std::string> tokens,
                                                         std::size_t mask_index,
                                                         std::size_t k) const {
  if (mask_index >= tokens.size()) throw ArgumentError("fills: mask index out of range");
  const std::string left = mask_index == 0 ? kBos : to_lower(tokens[mask_index - 1]);
  const std::string right = mask_index + 1 == tokens.size() ? kEos : to_lower(tokens[mask_index + 1]);

  std::vector<FillCandidate> out;
  if (const auto it = slots_.find({left, right}); it != slots_.end()) {
    for (const auto& [w, c] : it->second) out.push_back({w, static_cast<double>(c)});
    // map order is alphabetical, so a stable sort keeps ties alphabetical
    std::stable_sort(out.begin(), out.end(),
                     [](const FillCandidate& a, const FillCandidate& b) { return a.score > b.score; });
  }
  if (out.size() > k) out.resize(k);
  for (const auto& cand : backoff_) {
    if (out.size() >= k) break;
    const bool dup = std::any_of(out.begin(), out.end(),
                                 [&](const FillCandidate& f) { return f.word == cand.word; });
    if (!dup) out.push_back(cand);
  }
  return out;
}

// ---------------------------------------------------------------------------
// StubParaphraser

namespace {

struct ParsedSentence {
  std::string_view text;
  std::vector<Token> tokens;
  std::vector<PosTag> tags;
  std::vector<std::pair<std::size_t, std::size_t>> clauses;  // token index ranges [b, e)
  std::size_t body_end = 0;                                   // first tail token
};

struct Rewrite {
  std::vector<std::size_t> order;                          // clause order
  std::vector<std::pair<std::size_t, std::string>> subs;  // token index -> word
};

bool is_clause_separator(std::string_view t) { return t == "," || t == ";"; }

bool is_conjunction(std::string_view t) {
  const std::string lower = to_lower(t);
  return lower == "and" || lower == "but" || lower == "or" || lower == "so" || lower == "yet";
}

bool is_tail_token(std::string_view t) {
  return t == "." || t == "!" || t == "?" || t == "..." || t == "\xE2\x80\xA6" || t == "\"" ||
         t == "'" || t == ")" || t == "\xE2\x80\x9D";
}

ParsedSentence parse_sentence(std::string_view sentence) {
  static const ReferenceTagger tagger;
  ParsedSentence p;
  p.text = sentence;
  p.tokens = tokenize(sentence);
  p.tags = tagger.tag(p.tokens);
  p.body_end = p.tokens.size();
  while (p.body_end > 0 && is_tail_token(p.tokens[p.body_end - 1].text)) --p.body_end;
  std::size_t start = 0;
  for (std::size_t i = 0; i <= p.body_end; ++i) {
    if (i == p.body_end || is_clause_separator(p.tokens[i].text)) {
      p.clauses.emplace_back(start, i);
      start = i + 1;
    }
  }
  return p;
}

bool rotatable(const ParsedSentence& p) {
  if (p.clauses.size() < 2) return false;
  return std::all_of(p.clauses.begin(), p.clauses.end(), [](const auto& c) { return c.first < c.second; });
}

std::string render(const ParsedSentence& p, const Rewrite& r) {
  std::string out;
  auto sub_at = [&](std::size_t idx) -> const std::string* {
    for (const auto& [i, w] : r.subs) {
      if (i == idx) return &w;
    }
    return nullptr;
  };
  const bool rotated = !r.order.empty() && r.order.front() != 0;
  // A rotated sentence drops clause-initial conjunctions and puts the first
  // one it saw in front of the last clause.
  std::string conjunction;
  for (std::size_t ci = 0; ci < r.order.size(); ++ci) {
    auto [b, e] = p.clauses[r.order[ci]];
    if (rotated && e > b + 1 && is_conjunction(p.tokens[b].text)) {
      if (conjunction.empty()) conjunction = to_lower(p.tokens[b].text);
      ++b;
    }
    if (ci > 0) out += ", ";
    if (rotated && ci + 1 == r.order.size() && !conjunction.empty()) out += conjunction + " ";
    std::size_t pos = p.tokens[b].begin;
    std::string clause;
    for (std::size_t t = b; t < e; ++t) {
      clause.append(p.text.substr(pos, p.tokens[t].begin - pos));
      std::string word = p.tokens[t].text;
      if (const auto* s = sub_at(t)) word = match_case(p.tokens[t].text, *s);
      if (rotated && t == 0 && p.tags[t] != PosTag::proper_noun && word.size() > 1 &&
          word[0] >= 'A' && word[0] <= 'Z' && !(word[1] >= 'A' && word[1] <= 'Z')) {
        word[0] = static_cast<char>(word[0] - 'A' + 'a');
      }
      clause += word;
      pos = p.tokens[t].end;
    }
    if (rotated && ci == 0 && !p.tokens.empty()) {
      const char first = p.tokens[0].text[0];
      if (first >= 'A' && first <= 'Z' && clause[0] >= 'a' && clause[0] <= 'z') {
        clause[0] = static_cast<char>(clause[0] - 'a' + 'A');
      }
    }
    out += clause;
  }
  if (p.body_end < p.tokens.size()) {
    const std::size_t body_stop = p.body_end > 0 ? p.tokens[p.body_end - 1].end : 0;
    out.append(p.text.substr(body_stop));
  }
  return out;
}

}  // namespace

std::vector<std::string> StubParaphraser::candidate_pool(std::string_view sentence) const {
  const auto p = parse_sentence(sentence);
  if (p.body_end == 0) return {};

  std::vector<std::size_t> identity(p.clauses.size());
  for (std::size_t i = 0; i < identity.size(); ++i) identity[i] = i;
  // Without a usable clause split the whole body is one clause.
  if (!rotatable(p)) identity = {0};

  std::vector<std::size_t> eligible;
  for (std::size_t i = 0; i < p.body_end && eligible.size() < 4; ++i) {
    const auto& t = p.tokens[i];
    if (p.tags[i] == PosTag::word && is_alphabetic(t.text) && t.text.size() >= 3 &&
        synonyms_->has_synonyms(t.text)) {
      eligible.push_back(i);
    }
  }

  ParsedSentence flat = p;
  if (!rotatable(p)) flat.clauses = {{0, p.body_end}};
  const ParsedSentence& base = rotatable(p) ? p : flat;

  std::vector<Rewrite> rewrites;
  for (const auto pos : eligible) {
    const auto syns = synonyms_->lookup(p.tokens[pos].text);
    for (std::size_t s = 0; s < syns.size() && s < 3; ++s) {
      rewrites.push_back({identity, {{pos, syns[s]}}});
    }
  }
  std::vector<std::vector<std::size_t>> rotations;
  if (rotatable(p)) {
    for (std::size_t r = 1; r < p.clauses.size(); ++r) {
      auto order = identity;
      std::rotate(order.begin(), order.begin() + static_cast<std::ptrdiff_t>(r), order.end());
      rotations.push_back(order);
      rewrites.push_back({order, {}});
    }
  }
  for (std::size_t a = 0; a < eligible.size() && a < 3; ++a) {
    for (std::size_t b = a + 1; b < eligible.size() && b < 3; ++b) {
      rewrites.push_back({identity,
                          {{eligible[a], synonyms_->lookup(p.tokens[eligible[a]].text)[0]},
                           {eligible[b], synonyms_->lookup(p.tokens[eligible[b]].text)[0]}}});
    }
  }
  if (!rotations.empty()) {
    for (const auto pos : eligible) {
      rewrites.push_back({rotations.front(), {{pos, synonyms_->lookup(p.tokens[pos].text)[0]}}});
    }
  }

  std::vector<std::string> pool;
  std::set<std::string> seen{std::string(sentence)};
  for (const auto& r : rewrites) {
    auto s = render(base, r);
    if (seen.insert(s).second) pool.push_back(std::move(s));
    if (pool.size() >= 64) break;
  }
  return pool;
}

std::vector<std::string> StubParaphraser::paraphrase(std::string_view sentence, std::size_t n,
                                                     double diversity_penalty,
                                                     std::uint64_t seed) const {
  const auto pool = candidate_pool(sentence);
  if (pool.empty()) return std::vector<std::string>(n, std::string(sentence));

  // Fewer changed tokens = more probable; the jitter orders near-ties by seed.
  std::vector<double> base(pool.size());
  for (std::size_t i = 0; i < pool.size(); ++i) {
    const double drift = 1.0 - token_overlap(sentence, pool[i]);
    base[i] = -drift - 1e-3 * unit_interval(seed ^ stable_hash(pool[i]));
  }

  std::vector<std::size_t> picked;
  std::vector<bool> used(pool.size(), false);
  std::vector<std::string> out;
  out.reserve(n);
  for (std::size_t g = 0; g < n; ++g) {
    if (picked.size() == pool.size()) {
      out.push_back(pool[picked[g % picked.size()]]);
      continue;
    }
    std::size_t best = pool.size();
    double best_score = 0.0;
    for (std::size_t i = 0; i < pool.size(); ++i) {
      if (used[i]) continue;
      double score = base[i];
      for (const auto h : picked) score -= diversity_penalty * token_overlap(pool[i], pool[h]);
      if (best == pool.size() || score > best_score) {
        best = i;
        best_score = score;
      }
    }
    used[best] = true;
    picked.push_back(best);
    out.push_back(pool[best]);
  }
  return out;
}

double token_overlap(std::string_view a, std::string_view b) {
  auto ta = scorer_tokens(a);
  auto tb = scorer_tokens(b);
  if (ta.empty() && tb.empty()) return 1.0;
  std::sort(ta.begin(), ta.end());
  std::sort(tb.begin(), tb.end());
  std::vector<std::string> common;
  std::set_intersection(ta.begin(), ta.end(), tb.begin(), tb.end(), std::back_inserter(common));
  return static_cast<double>(common.size()) / static_cast<double>(std::max(ta.size(), tb.size()));
}

}  // namespace uidobf
