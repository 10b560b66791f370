#include <catch2/catch_amalgamated.hpp>

#include <sstream>

#include "schreier/io.hpp"
#include "schreier/multigraph.hpp"
#include "schreier/neighborhood.hpp"

using namespace schreier;

namespace {

RootedMultigraph cycle(int k, int root = 0) {
  std::vector<EdgePair> edges;
  for (int i = 0; i < k; ++i) edges.push_back({i, (i + 1) % k});
  return RootedMultigraph(k, edges, root);
}

RootedMultigraph path3_center() {
  return RootedMultigraph(3, {{0, 1}, {1, 2}}, 1);
}

}  // namespace

TEST_CASE("loops count twice toward degree") {
  RootedMultigraph g(1, {{0, 0}, {0, 0}}, 0);
  CHECK(g.degree(0) == 4);
  CHECK(g.regular(4));
  CHECK(g.num_edges() == 2);
}

TEST_CASE("construction rejects bad input") {
  CHECK_THROWS_AS(RootedMultigraph(2, {{0, 1}}, 5), std::invalid_argument);   // bad root
  CHECK_THROWS_AS(RootedMultigraph(2, {{0, 3}}, 0), std::invalid_argument);   // bad endpoint
  CHECK_THROWS_AS(RootedMultigraph(3, {{0, 1}}, 0), std::invalid_argument);   // disconnected
  CHECK_THROWS_AS(RootedMultigraph(2, {{0, 1}, {0, 1}, {0, 1}}, 0, 2), std::invalid_argument);
}

TEST_CASE("distances and eccentricity") {
  auto g = cycle(6);
  const auto dist = g.distances_from(0);
  CHECK(dist[3] == 3);
  CHECK(g.eccentricity(0) == 3);
}

TEST_CASE("ball extraction: radius 0 and full coverage") {
  auto c4 = cycle(4);
  const auto b0 = ball(c4, 0, 0);
  CHECK(b0.graph.num_vertices() == 1);
  CHECK(b0.graph.num_edges() == 0);
  CHECK(b0.deficit[0] == 2);

  const auto b2 = ball(c4, 0, 2);
  CHECK(b2.graph.num_vertices() == 4);
  CHECK(b2.graph.num_edges() == 4);
  CHECK_FALSE(b2.truncated);
}

TEST_CASE("ball contains exactly the vertices within distance r") {
  auto g = cycle(10);
  const auto b = ball(g, 0, 3);
  CHECK(b.graph.num_vertices() == 7);
  for (int v = 0; v < b.graph.num_vertices(); ++v) CHECK(b.dist[v] <= 3);
  CHECK(b.graph.num_edges() == 6);  // the induced path
  CHECK(b.truncated);
}

TEST_CASE("edge neighborhood of P_3 at radius 1 is all of P_3") {
  const auto whole = whole_neighborhood(path3_center());
  const auto b2 = ball(path3_center(), 1, 2);
  int endpoint = -1;
  for (const auto& inc : b2.graph.incident(b2.graph.root())) endpoint = inc.to;
  const auto u = edge_neighborhood(b2, endpoint, 1);
  CHECK(u.graph.num_vertices() == 3);
  CHECK(u.second_root >= 0);
  CHECK(u.graph.num_edges() == 2);
}

TEST_CASE("ball center must exist") {
  auto g = cycle(4);
  CHECK_THROWS_AS(ball(g, 17, 1), std::invalid_argument);
}

TEST_CASE("edge list round trip is byte identical") {
  auto g = RootedMultigraph(4, {{0, 1}, {1, 2}, {2, 3}, {3, 0}, {1, 1}}, 2);
  std::ostringstream first;
  write_edge_list(first, g);
  std::istringstream back(first.str());
  const auto g2 = read_edge_list(back);
  std::ostringstream second;
  write_edge_list(second, g2);
  CHECK(first.str() == second.str());
  CHECK(g2.root() == 2);
  CHECK(g2.same_edge_multiset(g));
}

TEST_CASE("edge list parser reports line numbers") {
  {
    std::istringstream in("graph 3\nedge 0 1\nedge 1 5\nroot 0\n");
    CHECK_THROWS_WITH(read_edge_list(in), Catch::Matchers::ContainsSubstring("line 3"));
  }
  {
    std::istringstream in("graph 2\ndegree-bound 2\nedge 0 1\nedge 0 1\nedge 0 1\nroot 0\n");
    CHECK_THROWS_WITH(read_edge_list(in), Catch::Matchers::ContainsSubstring("line 5"));
  }
  {
    std::istringstream in("graph 2\nedge 0 1\n");
    CHECK_THROWS_WITH(read_edge_list(in), Catch::Matchers::ContainsSubstring("root"));
  }
}
