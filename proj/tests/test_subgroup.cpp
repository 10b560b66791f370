#include <catch2/catch_amalgamated.hpp>

#include "schreier/canonical.hpp"
#include "schreier/subgroup.hpp"
#include "support/oracles.hpp"

using namespace schreier;

TEST_CASE("from_subgroup: <a1^4> gives C_4 labeled by a_1") {
  const auto sg = from_subgroup({Word::power(1, 4)}, 1, 0);
  CHECK_FALSE(sg.truncated());
  CHECK(sg.base().num_vertices() == 4);
  CHECK(validate(sg).valid);
  // Membership oracle: a_1^k accepted iff 4 | k.
  for (int k = -9; k <= 9; ++k) {
    CHECK(contains(sg, Word::power(1, k)) ==
          ((k % 4 + 4) % 4 == 0 ? Membership::yes : Membership::no));
  }
  CHECK(canonical_key(whole_neighborhood(sg)) ==
        canonical_key(whole_neighborhood(oracle::cycle_schreier(4))));
}

TEST_CASE("from_subgroup: {a1, a2} gives the bouquet") {
  const auto sg = from_subgroup({parse_word("a1"), parse_word("a2")}, 2, 0);
  CHECK_FALSE(sg.truncated());
  CHECK(sg.base().num_vertices() == 1);
  CHECK(sg.base().num_edges() == 2);
  CHECK(validate(sg).valid);
  CHECK(canonical_key(whole_neighborhood(sg)) ==
        canonical_key(whole_neighborhood(oracle::bouquet(2))));
}

TEST_CASE("from_subgroup: empty generators give the truncated 2n-regular tree") {
  const auto sg = from_subgroup({}, 2, 3);
  CHECK(sg.truncated());
  // The 4-regular tree ball of radius 3: 1 + 4 (3^3 - 1)/2 = 53 vertices.
  CHECK(sg.base().num_vertices() == 53);
  // All interior vertices complete; membership decidable to depth 3.
  CHECK(sg.safe_depth() == 3);
  CHECK(contains(sg, parse_word("a1 a2 a1^-1")) == Membership::no);
  CHECK(contains(sg, parse_word("a1 a1^-1 a2")) == Membership::no);
  CHECK(contains(sg, Word{}) == Membership::yes);
  CHECK(contains(sg, Word::power(1, 4)) == Membership::unknown);

  const auto degenerate = from_subgroup({}, 2, 0);
  CHECK(degenerate.truncated());
  CHECK(degenerate.base().num_vertices() == 1);
  CHECK(degenerate.safe_depth() == 0);
}

TEST_CASE("folding handles unreduced and redundant generators") {
  // a1 a1^-1 folds away; the subgroup is trivial.
  const auto sg = from_subgroup({parse_word("a1 a1^-1")}, 1, 2);
  CHECK(sg.truncated());
  CHECK(contains(sg, Word::power(1, 1)) == Membership::no);

  // Redundant generator sets fold to the same graph.
  const auto a = from_subgroup({Word::power(1, 2)}, 1, 0);
  const auto b = from_subgroup({Word::power(1, 2), Word::power(1, 4)}, 1, 0);
  CHECK(canonical_key(whole_neighborhood(a)) == canonical_key(whole_neighborhood(b)));
}

TEST_CASE("finite-index round trip: generators of the graph generate the subgroup") {
  // Index-6 subgroup of F_2 via E6; rebuild from its Nielsen-Schreier
  // generators and compare canonical keys, plus mutual membership.
  const auto e6 = oracle::example_e6();
  const auto gens = schreier_generators(e6);
  const auto rebuilt = from_subgroup(gens, 2, 0);
  CHECK_FALSE(rebuilt.truncated());
  CHECK(canonical_key(whole_neighborhood(rebuilt)) == canonical_key(whole_neighborhood(e6)));
  for (const auto& h : schreier_generators(rebuilt)) {
    CHECK(contains(e6, h) == Membership::yes);
  }
  for (const auto& h : gens) {
    CHECK(contains(rebuilt, h) == Membership::yes);
  }
}

TEST_CASE("truncated membership is never silently wrong") {
  // H = <a1 a2> in F_2 has infinite index; at depth 4 short words are decided
  // and long ones are unknown, never a wrong yes/no.
  const auto sg = from_subgroup({parse_word("a1 a2")}, 2, 4);
  CHECK(sg.truncated());
  CHECK(contains(sg, parse_word("a1 a2")) == Membership::yes);
  CHECK(contains(sg, parse_word("a2 a1")) == Membership::no);  // not in H
  CHECK(contains(sg, parse_word("a1")) == Membership::no);
  const auto long_word = Word::power(1, 9);
  CHECK(contains(sg, long_word) == Membership::unknown);
}

TEST_CASE("rank validation") {
  CHECK_THROWS_AS(from_subgroup({parse_word("a3")}, 2, 1), std::invalid_argument);
  CHECK_THROWS_AS(from_subgroup({}, 0, 1), std::invalid_argument);
}
