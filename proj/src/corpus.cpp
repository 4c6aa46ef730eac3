#include "uidobf/corpus.hpp"

#include <algorithm>
#include <iterator>
#include <limits>
#include <fstream>
#include <map>
#include <random>
#include <set>

#include <json.hpp>

#include "uidobf/error.hpp"
#include "uidobf/lexicon.hpp"

namespace uidobf {
namespace {

constexpr std::string_view kAbbreviations[] = {
    "a.m", "apr", "aug", "capt", "co", "col", "corp", "dec", "dr", "e.g", "etc",
    "feb", "gen", "gov", "i.e", "inc", "jan", "jr", "jul", "jun", "lt", "ltd",
    "mar", "mr", "mrs", "ms", "mt", "no", "nov", "oct", "p.m", "prof", "rep", "rev",
    "sen", "sep", "sept", "sgt", "sr", "st", "u.k", "u.s", "vs", "ft",
};

constexpr std::string_view kProperNouns[] = {
    "africa", "america", "amsterdam", "australia", "barack", "beijing", "berlin",
    "biden", "boston", "brazil", "britain", "california", "canada", "chicago", "china",
    "clinton", "congress", "donald", "egypt", "england", "europe", "facebook", "florida",
    "france", "george", "germany", "google", "hillary", "india", "iran", "iraq",
    "ireland", "israel", "italy", "japan", "jerusalem", "joe", "john", "kenya",
    "korea", "london", "macron", "mexico", "michelle", "moscow", "netflix", "nigeria",
    "obama", "ohio", "pakistan", "paris", "pelosi", "putin", "russia", "sanders",
    "scotland", "senate", "spain", "sweden", "syria", "texas", "tokyo", "toronto",
    "trump", "turkey", "twitter", "ukraine", "vatican", "virginia", "wales",
    "washington", "york",
};

bool is_terminal(std::string_view tok) {
  if (tok == "\xE2\x80\xA6") return true;
  return !tok.empty() &&
         std::all_of(tok.begin(), tok.end(), [](char c) { return c == '.' || c == '!' || c == '?'; });
}

bool is_closer(std::string_view tok) {
  return tok == "\"" || tok == "'" || tok == ")" || tok == "]" || tok == "\xE2\x80\x9D" ||
         tok == "\xE2\x80\x99";
}

bool is_abbreviation(std::string_view word) {
  if (word.size() == 1 && word[0] >= 'A' && word[0] <= 'Z') return true;  // initials
  const std::string lower = to_lower(word);
  return std::find(std::begin(kAbbreviations), std::end(kAbbreviations), lower) != std::end(kAbbreviations);
}

bool has_blank_line(std::string_view gap) {
  int newlines = 0;
  for (const char c : gap) {
    if (c == '\n') {
      if (++newlines == 2) return true;
    }
  }
  return false;
}

std::string get_string_field(const nlohmann::json& rec, const char* field, std::size_t line_no) {
  const auto it = rec.find(field);
  if (it == rec.end() || !it->is_string()) {
    throw CorpusError("line " + std::to_string(line_no) + ": missing or non-string field '" + field +
                      "'");
  }
  return it->get<std::string>();
}

// Uniform integer in [0, bound) from raw engine output; the standard
// distributions are implementation-defined, the engine sequence is not.
std::uint64_t uniform_below(std::mt19937_64& rng, std::uint64_t bound) {
  const std::uint64_t limit = std::numeric_limits<std::uint64_t>::max() -
                              std::numeric_limits<std::uint64_t>::max() % bound;
  std::uint64_t x = 0;
  do {
    x = rng();
  } while (x >= limit);
  return x % bound;
}

}  // namespace

AuthorLabel AuthorLabel::parse(std::string_view label) {
  const std::string_view trimmed = trim(label);
  if (trimmed.empty()) throw LabelError("empty author label");
  if (trimmed == "human") return human();
  constexpr std::string_view prefix = "machine:";
  if (trimmed.starts_with(prefix)) {
    const auto gen = trimmed.substr(prefix.size());
    if (gen.empty()) throw LabelError("machine label without generator name");
    return machine(std::string(gen));
  }
  return machine(std::string(trimmed));
}

std::string_view to_string(PosTag tag) noexcept {
  switch (tag) {
    case PosTag::word: return "WORD";
    case PosTag::function_word: return "FUNC";
    case PosTag::proper_noun: return "NNP";
    case PosTag::number: return "NUM";
    case PosTag::punctuation: return "PUNCT";
  }
  return "WORD";
}

ReferenceTagger::ReferenceTagger() {
  for (const auto w : kProperNouns) proper_nouns_.emplace(w);
}

ReferenceTagger::ReferenceTagger(std::unordered_set<std::string> proper_nouns)
    : proper_nouns_(std::move(proper_nouns)) {}

std::vector<PosTag> ReferenceTagger::tag(std::span<const Token> sentence) const {
  std::vector<PosTag> tags;
  tags.reserve(sentence.size());
  bool seen_word = false;
  for (const auto& tok : sentence) {
    if (is_punctuation(tok.text)) {
      tags.push_back(PosTag::punctuation);
      continue;
    }
    const bool initial = !seen_word;
    seen_word = true;
    if (is_numeric(tok.text)) {
      tags.push_back(PosTag::number);
    } else if (is_stop_word(tok.text)) {
      tags.push_back(PosTag::function_word);
    } else if (proper_nouns_.contains(to_lower(tok.text))) {
      tags.push_back(PosTag::proper_noun);
    } else if (!initial && tok.text.front() >= 'A' && tok.text.front() <= 'Z') {
      tags.push_back(PosTag::proper_noun);
    } else {
      tags.push_back(PosTag::word);
    }
  }
  return tags;
}

SegmentedArticle segment(const Article& article, const PosTagger& tagger) {
  SegmentedArticle out{article, {}};
  const std::string_view text = article.text;
  const auto tokens = tokenize(text);

  std::vector<Token> current;
  auto flush = [&] {
    if (current.empty()) return;
    Sentence s;
    s.begin = current.front().begin;
    s.end = current.back().end;
    s.tokens = std::move(current);
    s.tags = tagger.tag(s.tokens);
    out.sentences.push_back(std::move(s));
    current.clear();
  };

  for (std::size_t i = 0; i < tokens.size(); ++i) {
    current.push_back(tokens[i]);
    const bool last = i + 1 == tokens.size();
    if (last) break;
    const auto& next = tokens[i + 1];
    if (has_blank_line(text.substr(tokens[i].end, next.begin - tokens[i].end))) {
      flush();
      continue;
    }
    if (!is_terminal(tokens[i].text)) continue;
    // Pull adjacent closing quotes/brackets into this sentence.
    std::size_t j = i;
    while (j + 1 < tokens.size() && tokens[j + 1].begin == tokens[j].end &&
           is_closer(tokens[j + 1].text)) {
      ++j;
    }
    if (j + 1 < tokens.size() && tokens[j + 1].begin == tokens[j].end) continue;
    if (tokens[i].text == "." && current.size() >= 2) {
      const auto& prev = current[current.size() - 2];
      if (prev.end == tokens[i].begin && is_abbreviation(prev.text)) continue;
    }
    for (std::size_t k = i + 1; k <= j; ++k) current.push_back(tokens[k]);
    i = j;
    flush();
  }
  flush();
  return out;
}

SegmentedArticle segment(const Article& article) {
  static const ReferenceTagger tagger;
  return segment(article, tagger);
}

std::string reconstruct(const SegmentedArticle& segmented) {
  const std::string& text = segmented.article.text;
  std::string out;
  std::size_t pos = 0;
  for (const auto& s : segmented.sentences) {
    out.append(text, pos, s.begin - pos);  // inter-sentence whitespace
    out.append(text, s.begin, s.end - s.begin);
    pos = s.end;
  }
  out.append(text, pos, std::string::npos);
  return out;
}

Corpus parse_corpus(std::istream& in) {
  Corpus corpus;
  std::optional<std::set<std::string>> declared;
  std::set<std::string> observed;
  std::set<std::string> ids;
  std::string line;
  std::size_t line_no = 0;
  bool first_record = true;
  while (std::getline(in, line)) {
    ++line_no;
    if (trim(line).empty()) continue;
    nlohmann::json rec;
    try {
      rec = nlohmann::json::parse(line);
    } catch (const nlohmann::json::parse_error& e) {
      throw CorpusError("line " + std::to_string(line_no) + ": invalid JSON: " + e.what());
    }
    if (!rec.is_object()) throw CorpusError("line " + std::to_string(line_no) + ": record is not an object");
    if (first_record && rec.contains("labels") && !rec.contains("id")) {
      first_record = false;
      if (!rec["labels"].is_array()) throw CorpusError("header 'labels' must be an array");
      declared.emplace();
      for (const auto& l : rec["labels"]) {
        if (!l.is_string()) throw CorpusError("header labels must be strings");
        declared->insert(AuthorLabel::parse(l.get<std::string>()).str());
      }
      continue;
    }
    first_record = false;
    Article a;
    a.id = get_string_field(rec, "id", line_no);
    if (trim(a.id).empty()) throw CorpusError("line " + std::to_string(line_no) + ": empty id");
    if (!ids.insert(a.id).second) {
      throw CorpusError("line " + std::to_string(line_no) + ": duplicate id '" + a.id + "'");
    }
    a.label = AuthorLabel::parse(get_string_field(rec, "label", line_no));
    if (declared && !declared->contains(a.label.str())) {
      throw LabelError("line " + std::to_string(line_no) + ": label '" + a.label.str() +
                       "' not declared in corpus header");
    }
    a.text = get_string_field(rec, "text", line_no);
    if (trim(a.text).empty()) {
      throw CorpusError("line " + std::to_string(line_no) + ": empty text for id '" + a.id + "'");
    }
    observed.insert(a.label.str());
    corpus.articles.push_back(std::move(a));
  }
  const auto& labels = declared ? *declared : observed;
  corpus.label_set.assign(labels.begin(), labels.end());
  return corpus;
}

Corpus read_corpus(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw CorpusError("cannot open corpus file " + path.string());
  return parse_corpus(in);
}

std::vector<Article> sample_corpus(const Corpus& corpus, const SampleSpec& sample) {
  std::set<std::string> requested;
  if (sample.labels.empty()) {
    requested.insert(corpus.label_set.begin(), corpus.label_set.end());
  } else {
    for (const auto& l : sample.labels) {
      const std::string norm = AuthorLabel::parse(l).str();
      if (!std::binary_search(corpus.label_set.begin(), corpus.label_set.end(), norm)) {
        throw LabelError("requested label '" + norm + "' not in corpus label set");
      }
      requested.insert(norm);
    }
  }

  std::vector<Article> out;
  if (sample.per_label_count == 0) return out;
  for (const auto& label : requested) {
    std::vector<const Article*> pool;
    for (const auto& a : corpus.articles) {
      if (a.label.str() == label) pool.push_back(&a);
    }
    if (pool.size() < sample.per_label_count) {
      throw SamplingError("label '" + label + "' has " + std::to_string(pool.size()) +
                          " articles, " + std::to_string(sample.per_label_count) + " requested");
    }
    // Sort first so the draw does not depend on record order in the file.
    std::sort(pool.begin(), pool.end(), [](const Article* a, const Article* b) { return a->id < b->id; });
    std::mt19937_64 rng(sample.seed ^ stable_hash(label));
    for (std::size_t i = 0; i < sample.per_label_count; ++i) {
      const auto j = i + uniform_below(rng, pool.size() - i);
      std::swap(pool[i], pool[j]);
      out.push_back(*pool[i]);
    }
  }
  std::sort(out.begin(), out.end(), [](const Article& a, const Article& b) { return a.id < b.id; });
  return out;
}

std::vector<Article> load_corpus(const std::filesystem::path& path, const SampleSpec& sample) {
  return sample_corpus(read_corpus(path), sample);
}

}  // namespace uidobf
