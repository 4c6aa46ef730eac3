#include "uidobf/similarity.hpp"

#include <algorithm>
#include <cmath>

namespace uidobf {

TermVector vectorize(std::string_view text) {
  TermVector v;
  std::string term;
  auto flush = [&] {
    if (!term.empty()) ++v[term];
    term.clear();
  };
  for (const char ch : text) {
    const auto c = static_cast<unsigned char>(ch);
    if (c >= 'A' && c <= 'Z') term += static_cast<char>(c - 'A' + 'a');
    else if ((c >= 'a' && c <= 'z') || (c >= '0' && c <= '9') || c >= 0x80) term += ch;
    else flush();
  }
  flush();
  return v;
}

double cosine_similarity(const TermVector& a, const TermVector& b) {
  if (a.empty() && b.empty()) return 1.0;
  if (a.empty() || b.empty()) return 0.0;
  // Integer accumulation: identical vectors give dot == |a|² exactly and
  // sqrt(|a|²·|a|²) is exact, so self-similarity is exactly 1.0.
  std::int64_t dot = 0;
  std::int64_t na = 0;
  std::int64_t nb = 0;
  for (const auto& [t, c] : a) {
    na += c * c;
    if (const auto it = b.find(t); it != b.end()) dot += c * it->second;
  }
  for (const auto& [t, c] : b) nb += c * c;
  const double denom = std::sqrt(static_cast<double>(na) * static_cast<double>(nb));
  return std::clamp(static_cast<double>(dot) / denom, 0.0, 1.0);
}

double cosine_similarity(std::string_view a, std::string_view b) {
  return cosine_similarity(vectorize(a), vectorize(b));
}

}  // namespace uidobf
