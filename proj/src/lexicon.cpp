#include "uidobf/lexicon.hpp"

#include <algorithm>
#include <array>
#include <fstream>
#include <istream>

#include "uidobf/error.hpp"
#include "uidobf/text.hpp"

namespace uidobf {
namespace {

// NLTK English stop-word list (179 entries), sorted.
constexpr std::array<std::string_view, 179> kStopWords = {
    "a", "about", "above", "after", "again", "against", "ain", "all", "am", "an",
    "and", "any", "are", "aren", "aren't", "as", "at", "be", "because", "been",
    "before", "being", "below", "between", "both", "but", "by", "can", "couldn", "couldn't",
    "d", "did", "didn", "didn't", "do", "does", "doesn", "doesn't", "doing", "don",
    "don't", "down", "during", "each", "few", "for", "from", "further", "had", "hadn",
    "hadn't", "has", "hasn", "hasn't", "have", "haven", "haven't", "having", "he", "her",
    "here", "hers", "herself", "him", "himself", "his", "how", "i", "if", "in",
    "into", "is", "isn", "isn't", "it", "it's", "its", "itself", "just", "ll",
    "m", "ma", "me", "mightn", "mightn't", "more", "most", "mustn", "mustn't", "my",
    "myself", "needn", "needn't", "no", "nor", "not", "now", "o", "of", "off",
    "on", "once", "only", "or", "other", "our", "ours", "ourselves", "out", "over",
    "own", "re", "s", "same", "shan", "shan't", "she", "she's", "should", "should've",
    "shouldn", "shouldn't", "so", "some", "such", "t", "than", "that", "that'll", "the",
    "their", "theirs", "them", "themselves", "then", "there", "these", "they", "this", "those",
    "through", "to", "too", "under", "until", "up", "ve", "very", "was", "wasn",
    "wasn't", "we", "were", "weren", "weren't", "what", "when", "where", "which", "while",
    "who", "whom", "why", "will", "with", "won", "won't", "wouldn", "wouldn't", "y",
    "you", "you'd", "you'll", "you're", "you've", "your", "yours", "yourself", "yourselves",
};

}  // namespace

std::span<const std::string_view> stop_words() noexcept { return kStopWords; }

bool is_stop_word(std::string_view word) {
  const std::string lower = to_lower(word);
  return std::binary_search(kStopWords.begin(), kStopWords.end(), std::string_view(lower));
}

void SynonymDB::add(std::string_view lemma, std::span<const std::string> synonyms) {
  const std::string key = to_lower(lemma);
  std::vector<std::string> kept;
  for (const auto& s : synonyms) {
    if (to_lower(s) != key) kept.push_back(s);
  }
  if (kept.empty()) return;
  auto& list = entries_[key];
  list.insert(list.end(), kept.begin(), kept.end());
}

std::span<const std::string> SynonymDB::lookup(std::string_view word) const {
  const auto it = entries_.find(to_lower(word));
  if (it == entries_.end()) return {};
  return it->second;
}

SynonymDB parse_synonyms(std::istream& in) {
  SynonymDB db;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (trim(line).empty() || line.front() == '#') continue;
    const auto tab = line.find('\t');
    if (tab == std::string::npos) throw LoadError("synonym line has no tab separator", line_no);
    const std::string_view lemma = trim(std::string_view(line).substr(0, tab));
    if (lemma.empty()) throw LoadError("empty lemma", line_no);
    std::vector<std::string> syns;
    for (const auto& field : split(std::string_view(line).substr(tab + 1), ',')) {
      const auto s = trim(field);
      if (s.empty()) throw LoadError("empty synonym for lemma '" + std::string(lemma) + "'", line_no);
      syns.emplace_back(s);
    }
    db.add(lemma, syns);
  }
  return db;
}

SynonymDB load_synonyms(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw LoadError("cannot open synonym database " + path.string(), 0);
  return parse_synonyms(in);
}

bool is_proper_noun(PosTag tag) noexcept { return tag == PosTag::proper_noun; }

bool is_eligible(const Token& token, PosTag tag, const EligibilityCriteria& criteria,
                 const SynonymDB& db) {
  if (tag == PosTag::punctuation || is_proper_noun(tag)) return false;
  if (!is_alphabetic(token.text)) return false;
  if (token.text.size() < criteria.min_chars) return false;
  if (is_stop_word(token.text)) return false;
  if (criteria.require_synonym && !db.has_synonyms(token.text)) return false;
  return true;
}

}  // namespace uidobf
