#pragma once

#include <cstddef>
#include <filesystem>
#include <iosfwd>
#include <map>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "uidobf/corpus.hpp"

namespace uidobf {

/// Bumped whenever the embedded stop-word list changes.
inline constexpr std::string_view kStopWordListVersion = "en-stop-179/1";

std::span<const std::string_view> stop_words() noexcept;

/// Case-insensitive membership in the embedded stop-word list.
bool is_stop_word(std::string_view word);

/// Lemma -> ordered synonym list. Lookups are case-insensitive on the lemma;
/// synonyms keep their spelling (multi-word entries keep underscores).
class SynonymDB {
 public:
  /// Appends to any existing list for the lemma. Synonyms equal to the lemma
  /// are dropped; a lemma left with no synonyms is not stored.
  void add(std::string_view lemma, std::span<const std::string> synonyms);

  /// Empty span when the lemma is absent.
  std::span<const std::string> lookup(std::string_view word) const;
  bool has_synonyms(std::string_view word) const { return !lookup(word).empty(); }

  std::size_t size() const noexcept { return entries_.size(); }
  const std::map<std::string, std::vector<std::string>>& entries() const noexcept { return entries_; }

 private:
  std::map<std::string, std::vector<std::string>> entries_;
};

/// Parses "lemma<TAB>syn1,syn2,..." lines. Blank lines and lines starting
/// with '#' are skipped; anything else malformed throws LoadError.
SynonymDB parse_synonyms(std::istream& in);
SynonymDB load_synonyms(const std::filesystem::path& path);

struct EligibilityCriteria {
  std::size_t min_chars = 3;            ///< "more than 2 characters"
  bool require_synonym = true;
  std::size_t min_sentence_words = 3;
};

bool is_proper_noun(PosTag tag) noexcept;

/// Target-word test shared by Synonym Swap and UID Word Swap: alphabetic, at
/// least min_chars long, not a stop word, not punctuation, not a proper noun,
/// and (when required) at least one synonym in db.
bool is_eligible(const Token& token, PosTag tag, const EligibilityCriteria& criteria,
                 const SynonymDB& db);

}  // namespace uidobf
