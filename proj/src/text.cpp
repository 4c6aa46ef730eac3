#include "uidobf/text.hpp"

#include <array>
#include <charconv>
#include <cmath>

namespace uidobf {
namespace {

bool is_ascii_alnum(unsigned char c) noexcept {
  return (c >= '0' && c <= '9') || (c >= 'a' && c <= 'z') || (c >= 'A' && c <= 'Z');
}

// Length of a recognized UTF-8 punctuation sequence at `pos`, 0 otherwise.
// Covers the dashes, curly quotes and ellipsis that show up in news text.
std::size_t utf8_punct_len(std::string_view s, std::size_t pos) noexcept {
  if (pos + 2 < s.size() && static_cast<unsigned char>(s[pos]) == 0xE2 &&
      static_cast<unsigned char>(s[pos + 1]) == 0x80) {
    switch (static_cast<unsigned char>(s[pos + 2])) {
      case 0x93: case 0x94:              // en/em dash
      case 0x98: case 0x99:              // single quotes
      case 0x9C: case 0x9D:              // double quotes
      case 0xA6:                         // ellipsis
        return 3;
      default:
        break;
    }
  }
  return 0;
}

bool is_right_single_quote(std::string_view s, std::size_t pos) noexcept {
  return pos + 2 < s.size() && static_cast<unsigned char>(s[pos]) == 0xE2 &&
         static_cast<unsigned char>(s[pos + 1]) == 0x80 &&
         static_cast<unsigned char>(s[pos + 2]) == 0x99;
}

bool is_word_byte(std::string_view s, std::size_t pos) noexcept {
  const auto c = static_cast<unsigned char>(s[pos]);
  if (is_ascii_alnum(c) || c == '_') return true;
  return c >= 0x80 && utf8_punct_len(s, pos) == 0;
}

// Byte length of the code point (or punctuation sequence) starting at pos.
std::size_t char_len(std::string_view s, std::size_t pos) noexcept {
  const auto c = static_cast<unsigned char>(s[pos]);
  std::size_t n = 1;
  if (c >= 0xF0) n = 4;
  else if (c >= 0xE0) n = 3;
  else if (c >= 0xC0) n = 2;
  return pos + n <= s.size() ? n : s.size() - pos;
}

}  // namespace

bool is_space(char c) noexcept {
  return c == ' ' || c == '\t' || c == '\n' || c == '\r' || c == '\f' || c == '\v';
}

std::vector<Token> tokenize(std::string_view text) {
  std::vector<Token> out;
  std::size_t i = 0;
  const std::size_t n = text.size();
  while (i < n) {
    if (is_space(text[i])) {
      ++i;
      continue;
    }
    const std::size_t start = i;
    if (is_word_byte(text, i)) {
      while (i < n) {
        if (is_word_byte(text, i)) {
          i += char_len(text, i);
          continue;
        }
        // Joiner between two word characters.
        std::size_t joiner = 0;
        const char c = text[i];
        if (c == '\'' || c == '-' || c == '.') joiner = 1;
        else if (is_right_single_quote(text, i)) joiner = 3;
        if (joiner != 0 && i + joiner < n && is_word_byte(text, i + joiner)) {
          i += joiner;
          continue;
        }
        break;
      }
    } else if (const std::size_t len = utf8_punct_len(text, i); len != 0) {
      i += len;
    } else {
      const char c = text[i];
      i += char_len(text, i);
      if (static_cast<unsigned char>(c) < 0x80) {
        while (i < n && text[i] == c) ++i;
      }
    }
    out.push_back(Token{std::string(text.substr(start, i - start)), start, i});
  }
  return out;
}

std::string to_lower(std::string_view s) {
  std::string out(s);
  for (auto& c : out) {
    if (c >= 'A' && c <= 'Z') c = static_cast<char>(c - 'A' + 'a');
  }
  return out;
}

bool is_alphabetic(std::string_view word) {
  if (word.empty()) return false;
  for (const char c : word) {
    const bool lower = c >= 'a' && c <= 'z';
    const bool upper = c >= 'A' && c <= 'Z';
    if (!lower && !upper) return false;
  }
  return true;
}

bool is_numeric(std::string_view word) {
  bool digit = false;
  for (const char c : word) {
    if (c >= '0' && c <= '9') digit = true;
    else if (c != '.' && c != ',' && c != '-') return false;
  }
  return digit;
}

bool is_punctuation(std::string_view token) {
  if (token.empty()) return false;
  for (std::size_t i = 0; i < token.size();) {
    if (is_word_byte(token, i) || is_space(token[i])) return false;
    i += char_len(token, i);
  }
  return true;
}

std::string_view trim(std::string_view s) noexcept {
  std::size_t b = 0;
  std::size_t e = s.size();
  while (b < e && is_space(s[b])) ++b;
  while (e > b && is_space(s[e - 1])) --e;
  return s.substr(b, e - b);
}

std::string match_case(std::string_view model, std::string_view word) {
  std::size_t letters = 0;
  std::size_t upper = 0;
  for (const char c : model) {
    if ((c >= 'a' && c <= 'z') || (c >= 'A' && c <= 'Z')) {
      ++letters;
      if (c >= 'A' && c <= 'Z') ++upper;
    }
  }
  std::string out(word);
  if (letters >= 2 && upper == letters) {
    for (auto& c : out) {
      if (c >= 'a' && c <= 'z') c = static_cast<char>(c - 'a' + 'A');
    }
  } else if (!model.empty() && model.front() >= 'A' && model.front() <= 'Z' && !out.empty() &&
             out.front() >= 'a' && out.front() <= 'z') {
    out.front() = static_cast<char>(out.front() - 'a' + 'A');
  }
  return out;
}

std::vector<std::string> split(std::string_view s, char delim) {
  std::vector<std::string> out;
  std::size_t start = 0;
  while (true) {
    const auto pos = s.find(delim, start);
    if (pos == std::string_view::npos) {
      out.emplace_back(s.substr(start));
      break;
    }
    out.emplace_back(s.substr(start, pos - start));
    start = pos + 1;
  }
  return out;
}

std::uint64_t stable_hash(std::string_view s) noexcept {
  std::uint64_t h = 14695981039346656037ull;
  for (const char c : s) {
    h ^= static_cast<unsigned char>(c);
    h *= 1099511628211ull;
  }
  return h;
}

std::string format_double(double v) {
  std::array<char, 64> buf{};
  const auto res = std::to_chars(buf.data(), buf.data() + buf.size(), v);
  return std::string(buf.data(), res.ptr);
}

}  // namespace uidobf
