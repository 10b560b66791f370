#pragma once

#include <algorithm>
#include <functional>
#include <numeric>
#include <queue>
#include <stdexcept>
#include <vector>

#include "schreier/neighborhood.hpp"
#include "schreier/rng.hpp"
#include "schreier/schreier_graph.hpp"

namespace schreier {

// One step of an Euler tour: edge id plus traversal direction (forward means
// from edge(e).u to edge(e).v; loops are always recorded forward).
struct TourStep {
  int edge;
  bool forward;
};

// Hierholzer's algorithm. Requires all degrees even (connectivity comes with
// the graph type). The rng permutes the per-vertex edge scan order so that
// different seeds give different tours.
inline std::vector<TourStep> euler_tour(const RootedMultigraph& g, Rng& rng) {
  for (int v = 0; v < g.num_vertices(); ++v) {
    if (g.degree(v) % 2 != 0) {
      throw std::invalid_argument("euler_tour: odd degree at vertex " + std::to_string(v));
    }
  }
  // Per-vertex incidence in seeded order.
  std::vector<std::vector<RootedMultigraph::Incidence>> inc(g.num_vertices());
  for (int v = 0; v < g.num_vertices(); ++v) {
    inc[v] = g.incident(v);
    rng.shuffle(inc[v]);
  }
  std::vector<std::size_t> cursor(g.num_vertices(), 0);
  std::vector<char> used(g.num_edges(), 0);

  struct Frame {
    int vertex;
    int via_edge;  // edge taken to reach vertex; -1 at the start
  };
  std::vector<Frame> stack{{g.root(), -1}};
  std::vector<TourStep> tour_rev;
  while (!stack.empty()) {
    const int v = stack.back().vertex;
    auto& cur = cursor[v];
    while (cur < inc[v].size() && used[inc[v][cur].edge]) ++cur;
    if (cur == inc[v].size()) {
      const int e = stack.back().via_edge;
      if (e >= 0) {
        const bool forward = g.is_loop(e) || g.edge(e).v == v;
        tour_rev.push_back({e, forward});
      }
      stack.pop_back();
      continue;
    }
    const auto& step = inc[v][cur];
    used[step.edge] = 1;
    stack.push_back({step.to, step.edge});
  }
  std::reverse(tour_rev.begin(), tour_rev.end());
  if (static_cast<int>(tour_rev.size()) != g.num_edges()) {
    throw std::logic_error("euler_tour: tour did not visit every edge");
  }
  return tour_rev;
}

inline std::vector<TourStep> euler_tour(const RootedMultigraph& g, std::uint64_t seed = 0) {
  Rng rng(seed);
  return euler_tour(g, rng);
}

// Orient every edge along the tour. On a graph with all degrees even, a
// closed tour gives in-degree = out-degree = deg/2 at every vertex (a loop
// contributes one of each).
inline std::vector<bool> orient_by_tour(const RootedMultigraph& g, const std::vector<TourStep>& tour) {
  std::vector<bool> from_first(g.num_edges(), true);
  std::vector<int> out_count(g.num_vertices(), 0), in_count(g.num_vertices(), 0);
  for (const auto& step : tour) {
    from_first[step.edge] = step.forward;
    const auto& [u, v] = g.edge(step.edge);
    const int from = step.forward ? u : v;
    const int to = step.forward ? v : u;
    out_count[from] += 1;
    in_count[to] += 1;
  }
  for (int v = 0; v < g.num_vertices(); ++v) {
    if (out_count[v] != g.degree(v) / 2 || in_count[v] != g.degree(v) / 2) {
      throw std::logic_error("orient_by_tour: orientation is not balanced at vertex " +
                             std::to_string(v));
    }
  }
  return from_first;
}

namespace detail {

// Bipartite multigraph on left/right copies of the vertex set; one edge per
// oriented original edge. adj[u] lists (right vertex, original edge id).
struct BipartiteDouble {
  int n = 0;
  std::vector<std::vector<std::pair<int, int>>> adj;
};

inline BipartiteDouble bipartite_double(const RootedMultigraph& g,
                                        const std::vector<bool>& from_first) {
  BipartiteDouble bip;
  bip.n = g.num_vertices();
  bip.adj.assign(bip.n, {});
  for (int e = 0; e < g.num_edges(); ++e) {
    const auto& [u, v] = g.edge(e);
    const int from = from_first[e] ? u : v;
    const int to = from_first[e] ? v : u;
    bip.adj[from].emplace_back(to, e);
  }
  return bip;
}

// Hopcroft–Karp maximum matching restricted to alive edges. Returns, per left
// vertex, the matched original edge id (-1 if unmatched).
inline std::vector<int> hopcroft_karp(const BipartiteDouble& bip, const std::vector<char>& alive) {
  const int n = bip.n;
  const int INF = 1 << 30;
  std::vector<int> match_l(n, -1), match_r(n, -1);  // matched partner vertex
  std::vector<int> match_edge(n, -1);               // per left vertex, edge id
  std::vector<int> dist(n, 0);

  auto bfs = [&]() {
    std::queue<int> q;
    for (int u = 0; u < n; ++u) {
      if (match_l[u] < 0) {
        dist[u] = 0;
        q.push(u);
      } else {
        dist[u] = INF;
      }
    }
    bool found = false;
    while (!q.empty()) {
      const int u = q.front();
      q.pop();
      for (const auto& [v, e] : bip.adj[u]) {
        if (!alive[e]) continue;
        const int w = match_r[v];
        if (w < 0) {
          found = true;
        } else if (dist[w] == INF) {
          dist[w] = dist[u] + 1;
          q.push(w);
        }
      }
    }
    return found;
  };

  std::function<bool(int)> dfs = [&](int u) -> bool {
    for (const auto& [v, e] : bip.adj[u]) {
      if (!alive[e]) continue;
      const int w = match_r[v];
      if (w < 0 || (dist[w] == dist[u] + 1 && dfs(w))) {
        match_l[u] = v;
        match_r[v] = u;
        match_edge[u] = e;
        return true;
      }
    }
    dist[u] = INF;
    return false;
  };

  while (bfs()) {
    for (int u = 0; u < n; ++u) {
      if (match_l[u] < 0) dfs(u);
    }
  }
  return match_edge;
}

}  // namespace detail

// n pairwise-disjoint perfect matchings of an n-regular bipartite double,
// peeled one maximum matching at a time (König guarantees each round stays
// perfect). Returns per original edge the 1-based matching index.
inline std::vector<int> peel_matchings(const RootedMultigraph& g, const std::vector<bool>& from_first,
                                       int n_factors, Rng& rng) {
  auto bip = detail::bipartite_double(g, from_first);
  for (auto& lst : bip.adj) rng.shuffle(lst);
  std::vector<char> alive(g.num_edges(), 1);
  std::vector<int> factor(g.num_edges(), 0);
  for (int round = 1; round <= n_factors; ++round) {
    const auto match_edge = detail::hopcroft_karp(bip, alive);
    for (int u = 0; u < bip.n; ++u) {
      if (match_edge[u] < 0) {
        throw std::logic_error("matching round " + std::to_string(round) +
                               " is not perfect; input was not regular bipartite");
      }
      alive[match_edge[u]] = 0;
      factor[match_edge[u]] = round;
    }
  }
  return factor;
}

struct TwoFactorization {
  int n_factors = 0;
  std::vector<int> factor_of_edge;  // 1..n_factors
  std::vector<bool> from_first;     // balanced orientation used
};

// Petersen 2-factorization of a finite connected 2n-regular multigraph:
// Euler tour -> balanced orientation -> bipartite double -> peel n perfect
// matchings; matching k becomes factor k. Each factor is a spanning
// 2-regular subgraph (verified).
inline TwoFactorization two_factorize(const RootedMultigraph& g, std::uint64_t seed = 0) {
  const int d = g.regular_degree();
  if (d <= 0 || d % 2 != 0) {
    throw std::invalid_argument("two_factorize: graph must be 2n-regular (got degree " +
                                std::to_string(d) + ")");
  }
  const int n = d / 2;
  Rng rng(seed);
  const auto tour = euler_tour(g, rng);
  const auto from_first = orient_by_tour(g, tour);
  TwoFactorization f{n, peel_matchings(g, from_first, n, rng), from_first};
  // Every factor must be spanning 2-regular (a loop counts 2).
  std::vector<std::vector<int>> deg(n + 1, std::vector<int>(g.num_vertices(), 0));
  for (int e = 0; e < g.num_edges(); ++e) {
    const auto& [u, v] = g.edge(e);
    deg[f.factor_of_edge[e]][u] += 1;
    deg[f.factor_of_edge[e]][v] += 1;
  }
  for (int k = 1; k <= n; ++k) {
    for (int v = 0; v < g.num_vertices(); ++v) {
      if (deg[k][v] != 2) throw std::logic_error("two_factorize: factor is not 2-regular");
    }
  }
  return f;
}

// A Schreier structure on a finite rooted 2n-regular multigraph: factor k's
// edges become a_k-edges with the balanced orientation. The seed permutes the
// Euler tour and the factor order, diversifying outputs.
inline SchreierGraph schreier_structure(const RootedMultigraph& g, std::uint64_t seed = 0) {
  const auto f = two_factorize(g, seed);
  std::vector<int> gen_of_factor(f.n_factors + 1);
  std::iota(gen_of_factor.begin(), gen_of_factor.end(), 0);
  {
    Rng rng(hash_combine(seed, 0x5eed));
    std::vector<int> perm(gen_of_factor.begin() + 1, gen_of_factor.end());
    rng.shuffle(perm);
    std::copy(perm.begin(), perm.end(), gen_of_factor.begin() + 1);
  }
  Labeling lab{f.n_factors, {}};
  lab.arcs.reserve(g.num_edges());
  for (int e = 0; e < g.num_edges(); ++e) {
    lab.arcs.push_back({gen_of_factor[f.factor_of_edge[e]], f.from_first[e]});
  }
  SchreierGraph sg(g, std::move(lab));
  const auto report = validate(sg);
  if (!report.valid) throw std::logic_error("schreier_structure produced an invalid labeling");
  return sg;
}

// Close up a ball of a 2n-regular graph: pair the boundary deficit slots
// (deterministically given the seed) and join each pair by a new edge. The
// slot count is even by the degree-sum identity; an odd count means the
// source was not regular.
inline RootedMultigraph close_up(const Neighborhood& u_ball, std::uint64_t pairing_seed = 0) {
  const auto& g = u_ball.graph;
  int declared = -1;
  for (int v = 0; v < g.num_vertices(); ++v) {
    const int d = g.degree(v) + u_ball.deficit[v];
    if (declared < 0) declared = d;
    if (d != declared) {
      throw std::invalid_argument("close_up: ball does not come from a regular graph");
    }
  }
  std::vector<int> slots;
  for (int v = 0; v < g.num_vertices(); ++v) {
    for (int k = 0; k < u_ball.deficit[v]; ++k) slots.push_back(v);
  }
  if (slots.size() % 2 != 0) {
    throw std::invalid_argument("close_up: odd cut set; source graph is not regular");
  }
  Rng rng(pairing_seed);
  rng.shuffle(slots);
  auto edges = g.edges();
  for (std::size_t i = 0; i + 1 < slots.size(); i += 2) {
    edges.push_back({slots[i], slots[i + 1]});
  }
  RootedMultigraph closed(g.num_vertices(), edges, g.root(), declared);
  if (!closed.regular(declared)) throw std::logic_error("close_up: result is not regular");
  return closed;
}

}  // namespace schreier
