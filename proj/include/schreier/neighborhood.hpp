#pragma once

#include <optional>
#include <queue>
#include <stdexcept>
#include <string>
#include <vector>

#include "schreier/multigraph.hpp"

namespace schreier {

// Orientation and generator label of one edge. The edge stored as (u, v) is
// oriented u -> v when from_first is set, v -> u otherwise; the label is the
// 1-based generator index.
struct ArcLabel {
  int gen = 1;
  bool from_first = true;
};

inline bool operator==(const ArcLabel& a, const ArcLabel& b) {
  return a.gen == b.gen && a.from_first == b.from_first;
}

struct Labeling {
  int rank = 0;
  std::vector<ArcLabel> arcs;  // indexed by edge id
};

// An r-ball (or r-neighborhood of an edge, when second_root is set) cut out
// of some graph. Vertices carry distances from the principal root; boundary
// vertices of balls of larger graphs carry degree deficits (declared source
// degree minus in-ball degree). Labels are present for Schreier sources.
struct Neighborhood {
  RootedMultigraph graph;
  int radius = 0;
  std::vector<int> dist;  // from graph.root()
  int second_root = -1;
  std::vector<int> deficit;
  bool truncated = false;
  std::optional<Labeling> labels;
  std::vector<std::string> source_names;  // originating vertex names, for reports

  bool labeled() const { return labels.has_value(); }
  int rank() const { return labels ? labels->rank : 0; }
};

inline Neighborhood with_second_root(Neighborhood nb, int y) {
  if (y < 0 || y >= nb.graph.num_vertices()) throw std::invalid_argument("second root out of range");
  nb.second_root = y;
  return nb;
}

namespace detail {

// Shared ball extractor. source_degree(v) gives the degree of v in the
// originating graph (for deficit bookkeeping); name(v) its display name.
template <class DegreeFn, class NameFn>
Neighborhood make_ball(const RootedMultigraph& g, int center, int r,
                       const std::optional<Labeling>& labels, DegreeFn source_degree, NameFn name) {
  if (center < 0 || center >= g.num_vertices()) {
    throw std::invalid_argument("ball center out of range");
  }
  std::vector<int> dist_all = g.distances_from(center);
  std::vector<int> local_of(g.num_vertices(), -1);
  std::vector<int> verts;
  // BFS discovery order keeps extraction deterministic.
  {
    std::queue<int> q;
    q.push(center);
    local_of[center] = 0;
    verts.push_back(center);
    while (!q.empty()) {
      const int v = q.front();
      q.pop();
      if (dist_all[v] == r) continue;
      for (const auto& inc : g.incident(v)) {
        if (local_of[inc.to] < 0 && dist_all[inc.to] <= r) {
          local_of[inc.to] = static_cast<int>(verts.size());
          verts.push_back(inc.to);
          q.push(inc.to);
        }
      }
    }
  }
  std::vector<EdgePair> edges;
  std::vector<ArcLabel> arcs;
  for (int e = 0; e < g.num_edges(); ++e) {
    const auto& [u, v] = g.edge(e);
    if (local_of[u] >= 0 && local_of[v] >= 0) {
      edges.push_back({local_of[u], local_of[v]});
      if (labels) arcs.push_back(labels->arcs[e]);
    }
  }
  Neighborhood nb{RootedMultigraph(static_cast<int>(verts.size()), edges, 0, g.degree_bound()),
                  r,
                  {},
                  -1,
                  {},
                  false,
                  std::nullopt,
                  {}};
  nb.dist.resize(verts.size());
  nb.deficit.resize(verts.size());
  nb.source_names.resize(verts.size());
  for (std::size_t i = 0; i < verts.size(); ++i) {
    nb.dist[i] = dist_all[verts[i]];
    nb.deficit[i] = source_degree(verts[i]) - nb.graph.degree(static_cast<int>(i));
    nb.source_names[i] = name(verts[i]);
    if (nb.deficit[i] > 0) nb.truncated = true;
  }
  if (labels) nb.labels = Labeling{labels->rank, std::move(arcs)};
  return nb;
}

}  // namespace detail

inline Neighborhood ball(const RootedMultigraph& g, int center, int r) {
  return detail::make_ball(
      g, center, r, std::nullopt, [&](int v) { return g.degree(v); },
      [](int v) { return std::to_string(v); });
}

// The whole graph viewed as a neighborhood (radius = eccentricity of root).
inline Neighborhood whole_neighborhood(const RootedMultigraph& g) {
  return ball(g, g.root(), g.eccentricity(g.root()));
}

// r-neighborhood of the edge (root, y) of the underlying graph, derived from
// a ball of radius >= r+1: all vertices within distance r of either root,
// doubly rooted. y must be adjacent to the root.
inline Neighborhood edge_neighborhood(const Neighborhood& v_ball, int y, int r) {
  const auto& g = v_ball.graph;
  if (v_ball.radius < r + 1) {
    throw std::invalid_argument("edge_neighborhood needs a ball of radius >= r+1");
  }
  bool adjacent = false;
  for (const auto& inc : g.incident(g.root())) {
    if (inc.to == y && y != g.root()) adjacent = true;
  }
  if (!adjacent) throw std::invalid_argument("second root must be adjacent to the root");
  const std::vector<int> dist_y = g.distances_from(y);
  std::vector<int> local_of(g.num_vertices(), -1);
  std::vector<int> verts;
  for (int v = 0; v < g.num_vertices(); ++v) {
    if (v_ball.dist[v] <= r || dist_y[v] <= r) {
      local_of[v] = static_cast<int>(verts.size());
      verts.push_back(v);
    }
  }
  std::vector<EdgePair> edges;
  std::vector<ArcLabel> arcs;
  for (int e = 0; e < g.num_edges(); ++e) {
    const auto& [a, b] = g.edge(e);
    if (local_of[a] >= 0 && local_of[b] >= 0) {
      edges.push_back({local_of[a], local_of[b]});
      if (v_ball.labels) arcs.push_back(v_ball.labels->arcs[e]);
    }
  }
  Neighborhood nb{RootedMultigraph(static_cast<int>(verts.size()), edges, local_of[g.root()],
                                   g.degree_bound()),
                  r,
                  {},
                  local_of[y],
                  {},
                  v_ball.truncated,
                  std::nullopt,
                  {}};
  nb.dist = nb.graph.distances_from(nb.graph.root());
  nb.deficit.resize(verts.size());
  nb.source_names.resize(verts.size());
  for (std::size_t i = 0; i < verts.size(); ++i) {
    const int orig = verts[i];
    const int source_deg = g.degree(orig) + v_ball.deficit[orig];
    nb.deficit[i] = source_deg - nb.graph.degree(static_cast<int>(i));
    nb.source_names[i] =
        v_ball.source_names.empty() ? std::to_string(orig) : v_ball.source_names[orig];
    if (nb.deficit[i] > 0) nb.truncated = true;
  }
  if (v_ball.labels) nb.labels = Labeling{v_ball.labels->rank, std::move(arcs)};
  return nb;
}

// Swap principal and secondary roots of a doubly-rooted neighborhood.
inline Neighborhood swap_roots(const Neighborhood& nb) {
  if (nb.second_root < 0) throw std::invalid_argument("swap_roots needs a doubly-rooted neighborhood");
  Neighborhood out{nb.graph.with_root(nb.second_root),
                   nb.radius,
                   {},
                   nb.graph.root(),
                   nb.deficit,
                   nb.truncated,
                   nb.labels,
                   nb.source_names};
  out.dist = out.graph.distances_from(out.graph.root());
  return out;
}

// Restriction of a ball to a smaller radius around the same root.
inline Neighborhood restrict_ball(const Neighborhood& nb, int r) {
  if (r > nb.radius) throw std::invalid_argument("cannot restrict to a larger radius");
  auto source_degree = [&](int v) { return nb.graph.degree(v) + nb.deficit[v]; };
  auto name = [&](int v) {
    return nb.source_names.empty() ? std::to_string(v) : nb.source_names[v];
  };
  return detail::make_ball(nb.graph, nb.graph.root(), r, nb.labels, source_degree, name);
}

}  // namespace schreier
