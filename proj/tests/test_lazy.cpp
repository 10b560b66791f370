#include <catch2/catch_amalgamated.hpp>

#include <cmath>

#include "schreier/canonical.hpp"
#include "schreier/isomorphism.hpp"
#include "schreier/lazy.hpp"
#include "support/oracles.hpp"

using namespace schreier;

namespace {

// View of a lazy graph rooted at a different address.
class Rerooted final : public LazyGraph {
 public:
  Rerooted(std::shared_ptr<const LazyGraph> base, std::string root)
      : base_(std::move(base)), root_(std::move(root)) {}
  std::string root_address() const override { return root_; }
  int degree() const override { return base_->degree(); }
  int rank() const override { return base_->rank(); }
  std::vector<Arc> arcs(const std::string& v) const override { return base_->arcs(v); }

 private:
  std::shared_ptr<const LazyGraph> base_;
  std::string root_;
};

}  // namespace

TEST_CASE("line: degree, cycle structure, ball shape") {
  LineGraph line;
  CHECK(line.degree() == 2);
  CHECK(line.rank() == 1);
  const auto b = ball(line, 3);
  CHECK(b.graph.num_vertices() == 7);
  CHECK(b.graph.num_edges() == 6);
  CHECK(b.truncated);
  CHECK(b.labels.has_value());
  CHECK(line.cycle_id("5", 1) == line.cycle_id("-3", 1));
}

TEST_CASE("z2: degree 4 everywhere, deterministic balls") {
  Z2Graph z2;
  const auto b = ball(z2, 2);
  for (int v = 0; v < b.graph.num_vertices(); ++v) {
    CHECK(b.graph.degree(v) + b.deficit[v] == 4);
  }
  CHECK(b.graph.num_vertices() == 13);
  CHECK(canonical_key(ball(z2, 2)) == canonical_key(b));
}

TEST_CASE("z2diag: 6-regular, diagonals as a_3-cycles, a_3 = a_1 a_2") {
  Z2DiagGraph g;
  CHECK(g.degree() == 6);
  CHECK(g.rank() == 3);
  CHECK(g.cycle_id("0,0", 3) == g.cycle_id("2,2", 3));
  CHECK(g.cycle_id("0,0", 3) != g.cycle_id("1,0", 3));
  CHECK(contains(g, parse_word("a3 a2^-1 a1^-1")));
  CHECK(contains(g, parse_word("a1 a2 a1^-1 a2^-1")));
  CHECK_FALSE(contains(g, parse_word("a1")));
  CHECK(read_word(g, "4,-7", parse_word("a3 a2^-1 a1^-1")) == "4,-7");
}

TEST_CASE("tree(d): ball sizes follow the branching formula") {
  TreeGraph t4(4);
  for (int r = 1; r <= 3; ++r) {
    const auto b = ball(t4, r);
    const long long expect = 1 + 4 * (static_cast<long long>(std::pow(3, r)) - 1) / 2;
    CHECK(b.graph.num_vertices() == expect);
    for (int v = 0; v < b.graph.num_vertices(); ++v) {
      CHECK(b.graph.degree(v) + b.deficit[v] == 4);
    }
  }
}

TEST_CASE("grandfather: degree d^2-d+2, local structure, slot partition") {
  GrandfatherGraph g(3);
  CHECK(g.degree() == 8);
  const auto b1 = ball(g, 1);
  CHECK(b1.graph.num_vertices() == 9);
  CHECK(b1.graph.degree(0) == 8);
  CHECK(g.arcs("0:").size() == 8);  // 1 father + 1 grandfather + 2 children + 4 grandchildren

  const auto b2 = ball(g, 2);
  for (int v = 0; v < b2.graph.num_vertices(); ++v) {
    CHECK(b2.graph.degree(v) + b2.deficit[v] == 8);
  }
}

TEST_CASE("grandfather: vertex-transitivity probe at radius 1..2") {
  auto g = std::make_shared<GrandfatherGraph>(3);
  const auto key1 = canonical_key(ball(*g, 1));
  const auto key2 = canonical_key(ball(*g, 2));
  for (const std::string other : {"1:", "0:1", "-2:", "2:11"}) {
    Rerooted view(g, other);
    CHECK(canonical_key(ball(view, 1)) == key1);
    CHECK(canonical_key(ball(view, 2)) == key2);
  }
}

TEST_CASE("grandfather 1-ball automorphism order by brute force") {
  GrandfatherGraph g(3);
  const auto auts = automorphisms_fixing_root(ball(g, 1));
  CHECK(auts.size() == 8);  // child subtrees swap, grandchild pairs swap
}

TEST_CASE("reversed-cycles view flips exactly the selected diagonal") {
  auto base = std::make_shared<Z2DiagGraph>();
  ReversedCyclesView rev(base, 3, [](const std::string& cid) { return cid == "d0"; });
  bool saw_flipped = false;
  for (const auto& arc : rev.arcs("0,0")) {
    if (arc.gen == 3 && arc.to == "1,1") {
      CHECK(arc.dir == -1);
      saw_flipped = true;
    }
  }
  CHECK(saw_flipped);
  for (const auto& arc : rev.arcs("1,0")) {
    if (arc.gen == 3 && arc.to == "2,1") CHECK(arc.dir == +1);
  }
  // Figure-1 mechanism: the witness word ends at (-2,-2) on the reversed graph.
  CHECK(read_word(rev, "0,0", parse_word("a3 a2^-1 a1^-1")) == "-2,-2");
  CHECK_FALSE(contains(rev, parse_word("a3 a2^-1 a1^-1")));
}

TEST_CASE("forget view strips labels") {
  auto base = std::make_shared<Z2Graph>();
  ForgetView fv(base);
  CHECK(fv.rank() == 0);
  const auto b = ball(fv, 1);
  CHECK_FALSE(b.labels.has_value());
  CHECK(b.graph.num_vertices() == 5);
}

TEST_CASE("lazy selectors") {
  CHECK(make_lazy("line")->degree() == 2);
  CHECK(make_lazy("z2diag")->rank() == 3);
  CHECK(make_lazy("grandfather:3")->degree() == 8);
  CHECK(make_lazy("tree:4")->degree() == 4);
  CHECK_THROWS_AS(make_lazy("petersen"), std::invalid_argument);
  CHECK_THROWS_AS(make_lazy("tree"), std::invalid_argument);
}
