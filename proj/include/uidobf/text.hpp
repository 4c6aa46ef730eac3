#pragma once

#include <cstddef>
#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

namespace uidobf {

/// A token and its byte span [begin, end) in the source text.
struct Token {
  std::string text;
  std::size_t begin = 0;
  std::size_t end = 0;

  bool operator==(const Token&) const = default;
};

/// Splits text into word and punctuation tokens.
///
/// Words are runs of ASCII alphanumerics, '_' and non-ASCII letters; a single
/// '\'', '-', '.' or U+2019 between two word characters stays inside the word
/// ("trump's", "fast-forwards", "u.s"). Punctuation runs of one repeated
/// character ("--", "...") form one token; other punctuation is one token per
/// character. Whitespace is never part of a token.
std::vector<Token> tokenize(std::string_view text);

std::string to_lower(std::string_view s);
bool is_alphabetic(std::string_view word);
bool is_numeric(std::string_view word);
bool is_punctuation(std::string_view token);
bool is_space(char c) noexcept;
std::string_view trim(std::string_view s) noexcept;

/// Applies the capitalization pattern of `model` to `word`: "Title" case
/// capitalizes the first letter, ALL CAPS (two or more letters) uppercases
/// everything; otherwise `word` is returned unchanged.
std::string match_case(std::string_view model, std::string_view word);

/// Splits on a single delimiter, keeping empty fields.
std::vector<std::string> split(std::string_view s, char delim);

/// FNV-1a; stable across platforms, unlike std::hash.
std::uint64_t stable_hash(std::string_view s) noexcept;

/// Formats a double with enough digits to round-trip.
std::string format_double(double v);

}  // namespace uidobf
