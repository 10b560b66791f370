#include <catch2/catch_amalgamated.hpp>

#include "schreier/canonical.hpp"
#include "schreier/lazy.hpp"
#include "schreier/schreier_graph.hpp"
#include "support/oracles.hpp"

using namespace schreier;

TEST_CASE("validate: bouquet, oriented cycle, broken orientation") {
  CHECK(validate(oracle::bouquet(3)).valid);
  CHECK(validate(oracle::cycle_schreier(4)).valid);

  // Flip one edge of the a_1-labeled C_4: exactly two (vertex,label) slots break.
  auto c4 = oracle::cycle_schreier(4);
  Labeling lab = c4.labeling();
  lab.arcs[1].from_first = false;
  const auto report = validate(SchreierGraph(c4.base(), lab));
  CHECK_FALSE(report.valid);
  CHECK(report.violations.size() == 2);
}

TEST_CASE("validate holds iff each label's out-map is a bijection") {
  // Direct bijection check against validate on random labelings.
  Rng rng(3);
  for (int t = 0; t < 50; ++t) {
    const int n = 4 + static_cast<int>(rng.below(4));
    std::vector<EdgePair> edges;
    Labeling lab{2, {}};
    for (int k = 1; k <= 2; ++k) {
      for (int v = 0; v < n; ++v) {
        edges.push_back({v, static_cast<int>(rng.below(n))});  // arbitrary, often invalid
        lab.arcs.push_back({k, true});
      }
    }
    if (!edges_connected(n, edges)) continue;
    SchreierGraph sg(RootedMultigraph(n, edges, 0, 4 * n), lab);
    bool bijective = true;
    for (int k = 1; k <= 2; ++k) {
      std::vector<int> hits(n, 0), outs(n, 0);
      for (int e = 0; e < sg.base().num_edges(); ++e) {
        if (sg.labeling().arcs[e].gen == k) {
          hits[sg.arc_to(e)] += 1;
          outs[sg.arc_from(e)] += 1;
        }
      }
      for (int v = 0; v < n; ++v) {
        if (hits[v] != 1 || outs[v] != 1) bijective = false;
      }
    }
    CHECK(validate(sg).valid == bijective);
  }
}

TEST_CASE("read_word on C_4 and the bouquet") {
  const auto c4 = oracle::cycle_schreier(4);
  CHECK(read_word(c4, 0, Word::power(1, 4)) == 0);
  CHECK(read_word(c4, 0, parse_word("a1 a1^-1")) == 0);
  CHECK(read_word(c4, 0, Word::power(1, 1)) == 1);
  CHECK(read_word(c4, 0, Word::power(1, -1)) == 3);

  const auto b2 = oracle::bouquet(2);
  CHECK(read_word(b2, 0, parse_word("a1 a2^-1 a1^3 a2")) == 0);
}

TEST_CASE("read_word action property and reduction invariance") {
  Rng rng(11);
  const auto sg = oracle::random_schreier_graph(12, 2, 5);
  for (int t = 0; t < 40; ++t) {
    std::vector<Generator> u_letters, v_letters;
    for (int i = 0; i < 4; ++i) {
      u_letters.push_back({1 + static_cast<int>(rng.below(2)), rng.coin(0.5) ? 1 : -1});
      v_letters.push_back({1 + static_cast<int>(rng.below(2)), rng.coin(0.5) ? 1 : -1});
    }
    const Word u(u_letters), v(v_letters);
    const int direct = *read_word(sg, sg.root(), u * v);
    const int stepped = *read_word(sg, *read_word(sg, sg.root(), u), v);
    CHECK(direct == stepped);
    CHECK(*read_word(sg, sg.root(), u) == *read_word(sg, sg.root(), u.reduce()));
  }
}

TEST_CASE("shift_root: identity, orbits, inverse") {
  const auto c4 = oracle::cycle_schreier(4);
  CHECK(shift_root(c4, Word{}).root() == 0);
  const auto shifted = shift_root(shift_root(c4, Word::power(1, 2)), Word::power(1, 2));
  CHECK(shifted.root() == 0);
  const auto g = parse_word("a1^3");
  const auto there_and_back = shift_root(shift_root(c4, g), g.inverse());
  CHECK(canonical_key(whole_neighborhood(there_and_back)) ==
        canonical_key(whole_neighborhood(c4)));
}

TEST_CASE("shift by a subgroup element preserves the canonical key") {
  const auto e6 = oracle::example_e6();
  const auto gens = schreier_generators(e6);
  for (const auto& h : gens) {
    CHECK(contains(e6, h) == Membership::yes);
    CHECK(canonical_key(whole_neighborhood(shift_root(e6, h))) ==
          canonical_key(whole_neighborhood(e6)));
  }
}

TEST_CASE("contains: C_4 powers, bouquet, lazy line") {
  const auto c4 = oracle::cycle_schreier(4);
  CHECK(contains(c4, Word::power(1, 4)) == Membership::yes);
  CHECK(contains(c4, Word::power(1, 2)) == Membership::no);
  CHECK(contains(c4, Word::power(1, -8)) == Membership::yes);

  const auto b2 = oracle::bouquet(2);
  Rng rng(2);
  for (int t = 0; t < 20; ++t) {
    std::vector<Generator> ls;
    for (int i = 0; i < 5; ++i) ls.push_back({1 + static_cast<int>(rng.below(2)), rng.coin(0.5) ? 1 : -1});
    CHECK(contains(b2, Word(ls)) == Membership::yes);
  }

  LineGraph line;
  for (int k = -3; k <= 3; ++k) {
    CHECK(contains(line, Word::power(1, k)) == (k == 0));
  }
}

TEST_CASE("contains defines a subgroup (closure under product and inverse)") {
  const auto sg = oracle::random_schreier_graph(10, 2, 77);
  const auto gens = schreier_generators(sg);
  REQUIRE(gens.size() >= 2);
  Rng rng(8);
  for (int t = 0; t < 30; ++t) {
    const auto& a = gens[rng.below(gens.size())];
    const auto& b = gens[rng.below(gens.size())];
    CHECK(contains(sg, a * b) == Membership::yes);
    CHECK(contains(sg, a.inverse()) == Membership::yes);
    CHECK(contains(sg, (a * b.inverse()).reduce()) == Membership::yes);
  }
}

TEST_CASE("schreier_generators: C_k, bouquet, E6") {
  for (int k : {3, 4, 7}) {
    const auto ck = oracle::cycle_schreier(k);
    const auto gens = schreier_generators(ck);
    REQUIRE(gens.size() == 1);  // |E| - |V| + 1
    CHECK(contains(ck, gens[0]) == Membership::yes);
    CHECK(gens[0].reduce().length() == k);  // freely equal to a_1^{+-k}
  }

  const auto b2gens = schreier_generators(oracle::bouquet(2));
  REQUIRE(b2gens.size() == 2);
  CHECK(format_word(b2gens[0]) == "a1");
  CHECK(format_word(b2gens[1]) == "a2");

  const auto e6gens = schreier_generators(oracle::example_e6());
  CHECK(e6gens.size() == 7);  // 12 - 6 + 1
  for (const auto& h : e6gens) CHECK(contains(oracle::example_e6(), h) == Membership::yes);
}

TEST_CASE("rank formula |E|-|V|+1 on random Schreier graphs") {
  for (std::uint64_t seed = 0; seed < 10; ++seed) {
    const auto sg = oracle::random_schreier_graph(6 + static_cast<int>(seed), 2, seed);
    CHECK(static_cast<int>(schreier_generators(sg).size()) ==
          sg.base().num_edges() - sg.base().num_vertices() + 1);
  }
}

TEST_CASE("a_cycles: C_4, bouquet, E6") {
  const auto c4 = oracle::cycle_schreier(4);
  CHECK(a_cycles(c4, 1).cycles.size() == 1);
  CHECK(a_cycles(c4, 1).cycles[0].size() == 4);

  const auto b2 = oracle::bouquet(2);
  CHECK(a_cycles(b2, 2).cycles.size() == 1);
  CHECK(a_cycles(b2, 2).cycles[0].size() == 1);

  const auto e6 = oracle::example_e6();
  const auto part1 = a_cycles(e6, 1);
  REQUIRE(part1.cycles.size() == 2);
  CHECK(part1.cycles[0].size() == 3);
  CHECK(part1.cycles[1].size() == 3);
  CHECK(a_cycles(e6, 2).cycles.size() == 1);  // the 6-cycle (0 3 1 4 2 5)
}

TEST_CASE("a_cycles partition the vertex set and follow out-edges") {
  const auto sg = oracle::random_schreier_graph(14, 3, 5);
  for (int gen = 1; gen <= 3; ++gen) {
    const auto part = a_cycles(sg, gen);
    std::vector<int> seen(14, 0);
    for (const auto& cycle : part.cycles) {
      for (std::size_t i = 0; i < cycle.size(); ++i) {
        seen[cycle[i]] += 1;
        CHECK(*sg.step(cycle[i], {gen, +1}) == cycle[(i + 1) % cycle.size()]);
      }
    }
    for (int v = 0; v < 14; ++v) CHECK(seen[v] == 1);
  }
}

TEST_CASE("reverse_cycle: loop reversal invisible, involution, validity") {
  const auto b1 = oracle::bouquet(1);
  const auto part = a_cycles(b1, 1);
  const auto rev = reverse_cycle(b1, 1, part.cycles[0]);
  CHECK(canonical_key(whole_neighborhood(rev)) == canonical_key(whole_neighborhood(b1)));

  const auto e6 = oracle::example_e6();
  const auto cycles = a_cycles(e6, 1);
  const auto once = reverse_cycle(e6, 1, cycles.cycles[0]);
  CHECK(validate(once).valid);
  CHECK(canonical_key(whole_neighborhood(once)) != canonical_key(whole_neighborhood(e6)));
  const auto twice = reverse_cycle(once, 1, cycles.cycles[0]);
  REQUIRE(twice.labeling().arcs.size() == e6.labeling().arcs.size());
  for (int e = 0; e < e6.base().num_edges(); ++e) {
    CHECK(twice.labeling().arcs[e] == e6.labeling().arcs[e]);
  }
}

TEST_CASE("reverse_cycle keeps validity on random graphs, all cycles") {
  for (std::uint64_t seed = 0; seed < 100; ++seed) {
    const auto sg = oracle::random_schreier_graph(4 + static_cast<int>(seed % 9), 2, seed);
    for (int gen = 1; gen <= 2; ++gen) {
      for (const auto& cycle : a_cycles(sg, gen).cycles) {
        CHECK(validate(reverse_cycle(sg, gen, cycle)).valid);
      }
    }
  }
}

TEST_CASE("forget: drops labels, keeps counts, idempotent through relabel") {
  const auto c4 = oracle::cycle_schreier(4);
  const auto g = forget(c4);
  CHECK(g.num_vertices() == 4);
  CHECK(g.num_edges() == 4);

  const auto b2 = forget(oracle::bouquet(2));
  CHECK(b2.num_vertices() == 1);
  CHECK(b2.num_edges() == 2);
  CHECK(b2.degree(0) == 4);

  for (std::uint64_t seed = 0; seed < 100; ++seed) {
    const auto sg = oracle::random_schreier_graph(4 + static_cast<int>(seed % 7), 2, seed);
    const auto base = forget(sg);
    CHECK(base.num_vertices() == sg.base().num_vertices());
    CHECK(base.num_edges() == sg.base().num_edges());
    const auto relabeled = apply_labeling(base, sg.labeling());
    CHECK(forget(relabeled).same_edge_multiset(base));
  }
}

TEST_CASE("ball of a Schreier graph keeps labels and validates") {
  const auto e6 = oracle::example_e6();
  const auto nb = ball(e6, 0, 1);
  CHECK(nb.labeled());
  CHECK(validate_ball(nb));
}
