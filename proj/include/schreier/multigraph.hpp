#pragma once

#include <algorithm>
#include <queue>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace schreier {

// One undirected edge. Endpoints are stored in the order they were given;
// loops have u == v. Edge identity is the index into the edge vector, which
// is stable: parallel edges are distinct objects.
struct EdgePair {
  int u = 0;
  int v = 0;
};

inline bool operator==(const EdgePair& a, const EdgePair& b) { return a.u == b.u && a.v == b.v; }

// Finite connected rooted multigraph with dense vertex ids. A loop
// contributes 2 to the degree of its vertex. Immutable after construction.
class RootedMultigraph {
 public:
  // degree_bound == 0 derives the bound from the maximum degree.
  // Throws std::invalid_argument on invalid ids, degree-bound violations,
  // or a disconnected graph.
  RootedMultigraph(int num_vertices, std::vector<EdgePair> edges, int root, int degree_bound = 0)
      : n_(num_vertices), edges_(std::move(edges)), root_(root), bound_(degree_bound) {
    if (n_ <= 0) throw std::invalid_argument("graph needs at least one vertex");
    if (root_ < 0 || root_ >= n_) throw std::invalid_argument("root id out of range");
    deg_.assign(n_, 0);
    inc_.assign(n_, {});
    for (int e = 0; e < static_cast<int>(edges_.size()); ++e) {
      const auto& [u, v] = edges_[e];
      if (u < 0 || u >= n_ || v < 0 || v >= n_) {
        throw std::invalid_argument("edge endpoint out of range: edge " + std::to_string(e));
      }
      inc_[u].push_back({e, v});
      inc_[v].push_back({e, u});  // a loop is listed twice at its vertex
      deg_[u] += 1;
      deg_[v] += 1;
    }
    if (bound_ == 0) {
      for (int v = 0; v < n_; ++v) bound_ = std::max(bound_, deg_[v]);
      if (bound_ == 0) bound_ = 1;
    } else {
      for (int v = 0; v < n_; ++v) {
        if (deg_[v] > bound_) {
          throw std::invalid_argument("degree bound violated at vertex " + std::to_string(v));
        }
      }
    }
    if (!connected()) throw std::invalid_argument("graph is not connected");
  }

  struct Incidence {
    int edge;
    int to;
  };

  int num_vertices() const { return n_; }
  int num_edges() const { return static_cast<int>(edges_.size()); }
  const std::vector<EdgePair>& edges() const { return edges_; }
  const EdgePair& edge(int e) const { return edges_[e]; }
  bool is_loop(int e) const { return edges_[e].u == edges_[e].v; }
  int root() const { return root_; }
  int degree_bound() const { return bound_; }
  int degree(int v) const { return deg_[v]; }
  const std::vector<Incidence>& incident(int v) const { return inc_[v]; }

  // -1 if degrees are not all equal.
  int regular_degree() const {
    for (int v = 1; v < n_; ++v) {
      if (deg_[v] != deg_[0]) return -1;
    }
    return deg_[0];
  }
  bool regular(int d) const { return regular_degree() == d; }

  std::vector<int> distances_from(int start) const {
    std::vector<int> dist(n_, -1);
    std::queue<int> q;
    dist[start] = 0;
    q.push(start);
    while (!q.empty()) {
      const int v = q.front();
      q.pop();
      for (const auto& inc : inc_[v]) {
        if (dist[inc.to] < 0) {
          dist[inc.to] = dist[v] + 1;
          q.push(inc.to);
        }
      }
    }
    return dist;
  }

  int eccentricity(int v) const {
    const auto dist = distances_from(v);
    int m = 0;
    for (int d : dist) m = std::max(m, d);
    return m;
  }

  RootedMultigraph with_root(int new_root) const {
    return RootedMultigraph(n_, edges_, new_root, bound_);
  }

  // Multiset equality of edges (unordered endpoint pairs), used by the
  // forget-roundtrip checks.
  bool same_edge_multiset(const RootedMultigraph& other) const {
    if (n_ != other.n_ || edges_.size() != other.edges_.size()) return false;
    auto norm = [](const std::vector<EdgePair>& es) {
      std::vector<std::pair<int, int>> out;
      out.reserve(es.size());
      for (const auto& e : es) out.emplace_back(std::min(e.u, e.v), std::max(e.u, e.v));
      std::sort(out.begin(), out.end());
      return out;
    };
    return norm(edges_) == norm(other.edges_);
  }

 private:
  bool connected() const {
    const auto dist = distances_from(root_);
    return std::find(dist.begin(), dist.end(), -1) == dist.end();
  }

  int n_;
  std::vector<EdgePair> edges_;
  int root_;
  int bound_;
  std::vector<int> deg_;
  std::vector<std::vector<Incidence>> inc_;
};

// Connectivity probe for edge sets that have not been made into a graph yet
// (the constructor throws on disconnected input, so enumerators check first).
inline bool edges_connected(int num_vertices, const std::vector<EdgePair>& edges) {
  if (num_vertices <= 0) return false;
  std::vector<std::vector<int>> adj(num_vertices);
  for (const auto& [u, v] : edges) {
    if (u < 0 || u >= num_vertices || v < 0 || v >= num_vertices) return false;
    adj[u].push_back(v);
    adj[v].push_back(u);
  }
  std::vector<char> seen(num_vertices, 0);
  std::queue<int> q;
  q.push(0);
  seen[0] = 1;
  int reached = 1;
  while (!q.empty()) {
    const int v = q.front();
    q.pop();
    for (int u : adj[v]) {
      if (!seen[u]) {
        seen[u] = 1;
        ++reached;
        q.push(u);
      }
    }
  }
  return reached == num_vertices;
}

}  // namespace schreier
