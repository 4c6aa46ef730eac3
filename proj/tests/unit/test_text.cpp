#include <doctest.h>

#include "uidobf/text.hpp"

using namespace uidobf;

namespace {

std::vector<std::string> words(std::string_view text) {
  std::vector<std::string> out;
  for (const auto& t : tokenize(text)) out.push_back(t.text);
  return out;
}

}  // namespace

TEST_CASE("tokenize splits words and punctuation") {
  CHECK(words("Hi. Bye.") == std::vector<std::string>{"Hi", ".", "Bye", "."});
  CHECK(words("donald trump's early activity") ==
        std::vector<std::string>{"donald", "trump's", "early", "activity"});
  CHECK(words("president: -- 24:") == std::vector<std::string>{"president", ":", "--", "24", ":"});
  CHECK(words("u.s. officials") == std::vector<std::string>{"u.s", ".", "officials"});
  CHECK(words("well-known") == std::vector<std::string>{"well-known"});
  CHECK(words("wait...") == std::vector<std::string>{"wait", "..."});
  CHECK(words("stop_dead now") == std::vector<std::string>{"stop_dead", "now"});
  CHECK(words("   ").empty());
}

TEST_CASE("token offsets index the source text") {
  const std::string text = "Hello,  \"world\" — café…";
  for (const auto& t : tokenize(text)) {
    CHECK(text.substr(t.begin, t.end - t.begin) == t.text);
  }
  CHECK(words(text) == std::vector<std::string>{"Hello", ",", "\"", "world", "\"", "—", "café", "…"});
}

TEST_CASE("character class helpers") {
  CHECK(is_alphabetic("freeze"));
  CHECK_FALSE(is_alphabetic("trump's"));
  CHECK_FALSE(is_alphabetic("24"));
  CHECK_FALSE(is_alphabetic(""));
  CHECK(is_numeric("24"));
  CHECK(is_numeric("3.5"));
  CHECK_FALSE(is_numeric("a1"));
  CHECK(is_punctuation("--"));
  CHECK(is_punctuation("…"));
  CHECK_FALSE(is_punctuation("a"));
  CHECK(trim("  x y \n") == "x y");
}

TEST_CASE("match_case copies the capitalization pattern") {
  CHECK(match_case("Freeze", "halt") == "Halt");
  CHECK(match_case("NASA", "agency") == "AGENCY");
  CHECK(match_case("president", "President_of_the_United_States") == "President_of_the_United_States");
  CHECK(match_case("freeze", "stop_dead") == "stop_dead");
  CHECK(match_case("A", "word") == "Word");
}

TEST_CASE("split keeps empty fields") {
  CHECK(split("a,,b", ',') == std::vector<std::string>{"a", "", "b"});
  CHECK(split("", ',') == std::vector<std::string>{""});
}

TEST_CASE("stable_hash is FNV-1a") {
  CHECK(stable_hash("") == 0xcbf29ce484222325ULL);
  CHECK(stable_hash("a") == 0xaf63dc4c8601ec8cULL);
}

TEST_CASE("format_double round-trips") {
  for (const double v : {0.0, 1.0, 0.1, 1.0 / 3.0, 12345.678, 1e-300}) {
    CHECK(std::stod(format_double(v)) == v);
  }
}
