#pragma once

#include <algorithm>
#include <map>
#include <numeric>
#include <stdexcept>
#include <vector>

#include "schreier/neighborhood.hpp"

namespace schreier {

struct SearchBudgetExceeded : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct SizeGuardExceeded : std::runtime_error {
  using std::runtime_error::runtime_error;
};

namespace iso {

// Adjacency condensed to "bundles": the multiset of parallel edges between an
// ordered vertex pair, encoded as a sorted int vector as seen from the first
// vertex. Unlabeled bundles are {multiplicity}; labeled bundles list
// 2*gen + (0 if the arc leaves the vertex, 1 if it enters). Loop bundles list
// the loop count (unlabeled) or the sorted loop generators (labeled).
using Bundle = std::vector<int>;

struct ColoredView {
  int n = 0;
  int root = -1;    // -1: unrooted view (automorphisms need not fix any vertex)
  int second = -1;  // secondary root for doubly-rooted comparisons
  std::vector<std::vector<std::pair<int, Bundle>>> adj;  // per vertex, sorted by neighbor
  std::vector<Bundle> loops;
  std::vector<std::vector<int>> seed;  // per-vertex invariant tuple
};

inline ColoredView make_view(const Neighborhood& nb, bool rooted = true) {
  const auto& g = nb.graph;
  ColoredView view;
  view.n = g.num_vertices();
  view.root = rooted ? g.root() : -1;
  view.second = rooted ? nb.second_root : -1;
  view.adj.assign(view.n, {});
  view.loops.assign(view.n, {});
  std::map<std::pair<int, int>, Bundle> bundles;
  for (int e = 0; e < g.num_edges(); ++e) {
    const auto& [u, v] = g.edge(e);
    if (u == v) {
      if (nb.labels) {
        view.loops[u].push_back(nb.labels->arcs[e].gen);
      } else {
        if (view.loops[u].empty()) view.loops[u].push_back(0);
        view.loops[u][0] += 1;
      }
      continue;
    }
    if (nb.labels) {
      const auto& arc = nb.labels->arcs[e];
      const int from = arc.from_first ? u : v;
      bundles[{u, v}].push_back(2 * arc.gen + (from == u ? 0 : 1));
      bundles[{v, u}].push_back(2 * arc.gen + (from == v ? 0 : 1));
    } else {
      auto& b1 = bundles[{u, v}];
      auto& b2 = bundles[{v, u}];
      if (b1.empty()) b1.push_back(0);
      if (b2.empty()) b2.push_back(0);
      b1[0] += 1;
      b2[0] += 1;
    }
  }
  for (auto& [key, bundle] : bundles) {
    std::sort(bundle.begin(), bundle.end());
    view.adj[key.first].emplace_back(key.second, bundle);
  }
  for (auto& lst : view.adj) {
    std::sort(lst.begin(), lst.end());
  }
  for (auto& l : view.loops) std::sort(l.begin(), l.end());

  std::vector<int> dist;
  if (rooted) dist = g.distances_from(g.root());
  view.seed.resize(view.n);
  for (int v = 0; v < view.n; ++v) {
    auto& s = view.seed[v];
    if (rooted) {
      s.push_back(v == view.root ? 0 : (v == view.second ? 1 : 2));
      s.push_back(dist[v]);
    }
    s.push_back(g.degree(v));
    s.push_back(static_cast<int>(view.loops[v].size()));
    s.insert(s.end(), view.loops[v].begin(), view.loops[v].end());
  }
  return view;
}

inline const Bundle* bundle_between(const ColoredView& view, int u, int v) {
  const auto& lst = view.adj[u];
  auto it = std::lower_bound(lst.begin(), lst.end(), v,
                             [](const auto& entry, int key) { return entry.first < key; });
  if (it != lst.end() && it->first == v) return &it->second;
  return nullptr;
}

// Ordered partition as an explicit cell list. Refinement splits cells by the
// multiset of (neighbor color, bundle) pairs until equitable; cell order (and
// hence the induced coloring) is canonical because subcells are ordered by
// signature value.
struct Partition {
  std::vector<std::vector<int>> cells;
  std::vector<int> color_of;

  void rebuild_colors(int n) {
    color_of.assign(n, -1);
    for (int c = 0; c < static_cast<int>(cells.size()); ++c) {
      for (int v : cells[c]) color_of[v] = c;
    }
  }
  bool discrete() const {
    for (const auto& cell : cells) {
      if (cell.size() != 1) return false;
    }
    return true;
  }
};

inline Partition initial_partition(const ColoredView& view) {
  std::vector<int> order(view.n);
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(),
                   [&](int a, int b) { return view.seed[a] < view.seed[b]; });
  Partition p;
  for (int i = 0; i < view.n;) {
    int j = i;
    std::vector<int> cell;
    while (j < view.n && view.seed[order[j]] == view.seed[order[i]]) cell.push_back(order[j++]);
    std::sort(cell.begin(), cell.end());
    p.cells.push_back(std::move(cell));
    i = j;
  }
  p.rebuild_colors(view.n);
  return p;
}

// Equitable refinement. `changed` seeds the worklist: only cells holding a
// vertex adjacent to a changed vertex can split in a round, so re-refining
// after an individualization touches only the affected region. The resulting
// partition and its cell order are identical to a full recomputation
// (signature grouping and ordering are invariant under the monotone cell
// reindexing that splits elsewhere cause).
inline void refine(const ColoredView& view, Partition& p, const std::vector<int>& changed_seed) {
  const int n = view.n;
  p.rebuild_colors(n);
  std::vector<char> changed(n, 0);
  for (int v : changed_seed) changed[v] = 1;
  std::vector<int> sig_buffer;
  auto signature = [&](int v) {
    std::vector<std::pair<int, const Bundle*>> entries;
    entries.reserve(view.adj[v].size());
    for (const auto& [u, bundle] : view.adj[v]) entries.emplace_back(p.color_of[u], &bundle);
    std::sort(entries.begin(), entries.end(), [](const auto& a, const auto& b) {
      if (a.first != b.first) return a.first < b.first;
      return *a.second < *b.second;
    });
    std::vector<int> s;
    for (const auto& [color, bundle] : entries) {
      s.push_back(color);
      s.push_back(static_cast<int>(bundle->size()));
      s.insert(s.end(), bundle->begin(), bundle->end());
    }
    return s;
  };
  for (;;) {
    std::vector<char> affected(p.cells.size(), 0);
    bool any = false;
    for (int v = 0; v < n; ++v) {
      if (!changed[v]) continue;
      for (const auto& [u, bundle] : view.adj[v]) {
        const int c = p.color_of[u];
        if (!affected[c] && p.cells[c].size() > 1) {
          affected[c] = 1;
          any = true;
        }
      }
    }
    if (!any) return;
    std::fill(changed.begin(), changed.end(), 0);
    bool split = false;
    std::vector<std::vector<int>> next;
    next.reserve(p.cells.size());
    for (int c = 0; c < static_cast<int>(p.cells.size()); ++c) {
      auto& cell = p.cells[c];
      if (!affected[c]) {
        next.push_back(std::move(cell));
        continue;
      }
      std::map<std::vector<int>, std::vector<int>> groups;
      for (int v : cell) groups[signature(v)].push_back(v);
      if (groups.size() == 1) {
        next.push_back(std::move(cell));
        continue;
      }
      split = true;
      for (auto& [key, members] : groups) {
        std::sort(members.begin(), members.end());
        for (int v : members) changed[v] = 1;
        next.push_back(std::move(members));
      }
    }
    p.cells = std::move(next);
    p.rebuild_colors(n);
    if (!split) return;
  }
}

inline void refine(const ColoredView& view, Partition& p) {
  std::vector<int> all(view.n);
  std::iota(all.begin(), all.end(), 0);
  refine(view, p, all);
}

inline std::vector<int> color_histogram(const Partition& p) {
  std::vector<int> h;
  h.reserve(p.cells.size());
  for (const auto& cell : p.cells) h.push_back(static_cast<int>(cell.size()));
  return h;
}

// Backtracking mapping search between two views, exhausting candidate images
// vertex by vertex (the brute-force bijection search the neighborhood-level
// oracles are specified against). emit is called with each complete mapping;
// returning false stops the search.
template <class Emit>
bool map_search(const ColoredView& a, const ColoredView& b, long long node_budget, Emit emit) {
  if (a.n != b.n) return true;
  {
    auto sa = a.seed;
    auto sb = b.seed;
    std::sort(sa.begin(), sa.end());
    std::sort(sb.begin(), sb.end());
    if (sa != sb) return true;
  }
  Partition pa = initial_partition(a);
  Partition pb = initial_partition(b);
  refine(a, pa);
  refine(b, pb);
  if (color_histogram(pa) != color_histogram(pb)) return true;

  const int n = a.n;
  // Order the source vertices: roots first, then by cell size (most
  // constrained first), then connectivity via already-placed neighbors.
  std::vector<int> order;
  std::vector<char> placed(n, 0);
  {
    std::vector<int> cell_size(n);
    for (int v = 0; v < n; ++v) cell_size[v] = static_cast<int>(pa.cells[pa.color_of[v]].size());
    std::vector<char> chosen(n, 0);
    auto pick = [&](int v) {
      order.push_back(v);
      chosen[v] = 1;
    };
    if (a.root >= 0) pick(a.root);
    if (a.second >= 0 && !chosen[a.second]) pick(a.second);
    while (static_cast<int>(order.size()) < n) {
      int best = -1;
      bool best_touch = false;
      for (int v = 0; v < n; ++v) {
        if (chosen[v]) continue;
        bool touch = false;
        for (const auto& [u, bundle] : a.adj[v]) {
          if (chosen[u]) {
            touch = true;
            break;
          }
        }
        if (best < 0 || (touch && !best_touch) ||
            (touch == best_touch && cell_size[v] < cell_size[best])) {
          best = v;
          best_touch = touch;
        }
      }
      pick(best);
    }
  }

  std::vector<int> image(n, -1), preimage(n, -1);
  long long nodes = 0;

  auto consistent = [&](int v, int u) -> bool {
    if (pa.color_of[v] != pb.color_of[u]) return false;
    if (a.loops[v] != b.loops[u]) return false;
    for (const auto& [w, bundle] : a.adj[v]) {
      if (image[w] >= 0) {
        const Bundle* other = bundle_between(b, u, image[w]);
        if (other == nullptr || *other != bundle) return false;
      }
    }
    for (const auto& [x, bundle] : b.adj[u]) {
      if (preimage[x] >= 0) {
        const Bundle* mine = bundle_between(a, v, preimage[x]);
        if (mine == nullptr || *mine != bundle) return false;
      }
    }
    return true;
  };

  // Iterative DFS over the candidate lists.
  std::vector<std::vector<int>> cand_stack(n);
  std::vector<std::size_t> cursor(n, 0);
  int depth = 0;
  auto candidates_for = [&](int v) {
    std::vector<int> cands;
    for (int u : pb.cells[pa.color_of[v]]) {
      if (preimage[u] < 0) cands.push_back(u);
    }
    return cands;
  };
  cand_stack[0] = candidates_for(order[0]);
  cursor[0] = 0;
  while (depth >= 0) {
    if (++nodes > node_budget) throw SearchBudgetExceeded("isomorphism search budget exceeded");
    const int v = order[depth];
    bool advanced = false;
    while (cursor[depth] < cand_stack[depth].size()) {
      const int u = cand_stack[depth][cursor[depth]++];
      if (!consistent(v, u)) continue;
      image[v] = u;
      preimage[u] = v;
      if (depth + 1 == n) {
        if (!emit(image)) return false;
        image[v] = -1;
        preimage[u] = -1;
        continue;
      }
      ++depth;
      cand_stack[depth] = candidates_for(order[depth]);
      cursor[depth] = 0;
      advanced = true;
      break;
    }
    if (!advanced) {
      --depth;
      if (depth >= 0) {
        const int w = order[depth];
        preimage[image[w]] = -1;
        image[w] = -1;
      }
    }
  }
  return true;
}

}  // namespace iso

// True iff a root-, second-root-, and label-preserving isomorphism exists.
// Implemented as a direct backtracking search, independent of canonical keys.
inline bool isomorphic(const Neighborhood& a, const Neighborhood& b,
                       long long node_budget = 50'000'000) {
  if (a.graph.num_vertices() != b.graph.num_vertices()) return false;
  if (a.graph.num_edges() != b.graph.num_edges()) return false;
  if ((a.second_root >= 0) != (b.second_root >= 0)) return false;
  if (a.labeled() != b.labeled()) return false;
  if (a.labeled() && a.rank() != b.rank()) return false;
  const auto va = iso::make_view(a);
  const auto vb = iso::make_view(b);
  bool found = false;
  iso::map_search(va, vb, node_budget, [&](const std::vector<int>&) {
    found = true;
    return false;
  });
  return found;
}

// All automorphisms fixing the root (and second root / labels when present),
// as explicit vertex permutations. The identity is always included.
inline std::vector<std::vector<int>> automorphisms_fixing_root(const Neighborhood& nb,
                                                               int vertex_cap = 10'000,
                                                               long long node_budget = 50'000'000) {
  if (nb.graph.num_vertices() > vertex_cap) {
    throw SizeGuardExceeded("automorphism enumeration refused: " +
                            std::to_string(nb.graph.num_vertices()) + " vertices > cap " +
                            std::to_string(vertex_cap));
  }
  const auto view = iso::make_view(nb);
  std::vector<std::vector<int>> result;
  iso::map_search(view, view, node_budget, [&](const std::vector<int>& perm) {
    result.push_back(perm);
    return true;
  });
  std::sort(result.begin(), result.end());
  return result;
}

// Automorphism group of the underlying unrooted (but label-aware, if labeled)
// graph. Used by the rigidity oracle.
inline std::vector<std::vector<int>> automorphism_group_unrooted(const Neighborhood& nb,
                                                                 int vertex_cap = 2'000,
                                                                 long long node_budget = 50'000'000) {
  if (nb.graph.num_vertices() > vertex_cap) {
    throw SizeGuardExceeded("automorphism enumeration refused: too many vertices");
  }
  const auto view = iso::make_view(nb, /*rooted=*/false);
  std::vector<std::vector<int>> result;
  iso::map_search(view, view, node_budget, [&](const std::vector<int>& perm) {
    result.push_back(perm);
    return true;
  });
  std::sort(result.begin(), result.end());
  return result;
}

inline bool is_rigid_unrooted(const Neighborhood& nb, int vertex_cap = 2'000) {
  const auto view = iso::make_view(nb, /*rooted=*/false);
  int found = 0;
  iso::map_search(view, view, 50'000'000, [&](const std::vector<int>&) {
    ++found;
    return found < 2;
  });
  return found <= 1;
}

// |orbit of y under Aut_root(nb)|, computed by doubly-rooted isomorphism
// queries against every candidate vertex in y's refinement class. This stays
// feasible on neighborhoods whose full automorphism group is too large to
// enumerate.
inline int orbit_weight(const Neighborhood& nb, int y, long long node_budget = 50'000'000) {
  if (y < 0 || y >= nb.graph.num_vertices()) throw std::invalid_argument("orbit_weight: bad vertex");
  Neighborhood base = nb;
  base.second_root = -1;
  const auto view = iso::make_view(base);
  auto part = iso::initial_partition(view);
  iso::refine(view, part);
  const auto target = with_second_root(base, y);
  int count = 0;
  for (int cand : part.cells[part.color_of[y]]) {
    if (cand == y) {
      ++count;
      continue;
    }
    if (isomorphic(target, with_second_root(base, cand), node_budget)) ++count;
  }
  return count;
}

}  // namespace schreier
