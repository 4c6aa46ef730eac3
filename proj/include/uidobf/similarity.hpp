#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <string_view>

namespace uidobf {

/// Bag of lowercased alphanumeric terms. std::map keeps iteration order, and
/// therefore every sum over it, deterministic.
using TermVector = std::map<std::string, std::int64_t>;

/// Splits on anything that is not an ASCII letter or digit (non-ASCII bytes
/// count as letters) and lowercases.
TermVector vectorize(std::string_view text);

/// Cosine of the angle between two term vectors, in [0, 1]. Two empty
/// vectors are identical (1.0); exactly one empty vector gives 0.0.
double cosine_similarity(const TermVector& a, const TermVector& b);

/// Whole-document similarity between an original and a variant.
double cosine_similarity(std::string_view a, std::string_view b);

}  // namespace uidobf
