#include <catch2/catch_amalgamated.hpp>

#include "schreier/word.hpp"

using namespace schreier;

TEST_CASE("free reduction") {
  const Word w({{1, +1}, {1, -1}, {2, +1}});
  CHECK(w.reduce().length() == 1);
  CHECK(w.reduce().letters()[0].index == 2);

  const Word nested({{1, +1}, {2, +1}, {2, -1}, {1, -1}});
  CHECK(nested.reduce().empty());
}

TEST_CASE("inverse and concatenation") {
  const Word w = parse_word("a1 a2^-1");
  const Word ww = w * w.inverse();
  CHECK(ww.reduce().empty());
  CHECK(format_word(w.inverse()) == "a2 a1^-1");
}

TEST_CASE("parse and format round trips") {
  for (const std::string s : {"a1", "a1 a2^-1 a1", "a3^2 a1^-3", "e"}) {
    const Word w = parse_word(s);
    CHECK(format_word(w) == (s == "e" ? "e" : s));
    CHECK(parse_word(format_word(w)) == w);
  }
  CHECK(parse_word("a1^4").length() == 4);
  CHECK_THROWS_AS(parse_word("b2"), std::invalid_argument);
  CHECK_THROWS_AS(parse_word("a0"), std::invalid_argument);
  CHECK_THROWS_AS(parse_word("axy"), std::invalid_argument);
}

TEST_CASE("power helper") {
  CHECK(Word::power(1, 4).length() == 4);
  CHECK(Word::power(2, -3).letters()[0].sign == -1);
  CHECK(Word::power(1, 0).empty());
}
