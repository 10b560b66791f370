#pragma once

#include <algorithm>
#include <array>
#include <climits>
#include <map>
#include <queue>
#include <set>
#include <stdexcept>
#include <vector>

#include "schreier/schreier_graph.hpp"
#include "schreier/word.hpp"

namespace schreier {

namespace detail {

// Directed labeled arc u -(a_gen)-> v during folding.
struct FoldArc {
  int u, gen, v;
};

struct FoldState {
  std::vector<int> parent;  // union-find

  int find(int x) {
    while (parent[x] != x) x = parent[x] = parent[parent[x]];
    return x;
  }
  void unite(int a, int b) {
    a = find(a);
    b = find(b);
    if (a != b) parent[std::max(a, b)] = std::min(a, b);
  }
};

}  // namespace detail

// Stallings folding of the wedge of generator cycles, completed to depth
// layers of hanging (2n-1)-branching labeled tree. For a finite-index
// subgroup the folded graph is already 2n-regular and is returned complete;
// otherwise the result is truncated, with membership decidable out to the
// distance of the nearest deficient vertex.
inline SchreierGraph from_subgroup(const std::vector<Word>& gens, int rank, int depth) {
  if (rank < 1) throw std::invalid_argument("rank must be >= 1");
  for (const auto& w : gens) {
    if (w.max_index() > rank) throw std::invalid_argument("generator word exceeds rank");
  }

  // Wedge of cycles, one per generator word.
  std::vector<detail::FoldArc> arcs;
  int next_vertex = 1;  // 0 is the wedge point
  for (const auto& w : gens) {
    int cur = 0;
    const auto& letters = w.letters();
    for (std::size_t i = 0; i < letters.size(); ++i) {
      const int nxt = (i + 1 == letters.size()) ? 0 : next_vertex++;
      if (letters[i].sign > 0) {
        arcs.push_back({cur, letters[i].index, nxt});
      } else {
        arcs.push_back({nxt, letters[i].index, cur});
      }
      cur = nxt;
    }
  }

  // Fold: identify targets of equal-labeled arcs leaving (or entering) one
  // vertex until no conflicts remain.
  detail::FoldState uf;
  uf.parent.resize(next_vertex);
  for (int i = 0; i < next_vertex; ++i) uf.parent[i] = i;
  bool changed = true;
  while (changed) {
    changed = false;
    std::map<std::pair<int, int>, int> out, in;
    for (const auto& arc : arcs) {
      const int u = uf.find(arc.u);
      const int v = uf.find(arc.v);
      auto [it_out, new_out] = out.try_emplace({u, arc.gen}, v);
      if (!new_out && uf.find(it_out->second) != v) {
        uf.unite(it_out->second, v);
        changed = true;
        break;
      }
      auto [it_in, new_in] = in.try_emplace({v, arc.gen}, u);
      if (!new_in && uf.find(it_in->second) != u) {
        uf.unite(it_in->second, u);
        changed = true;
        break;
      }
    }
  }

  // Quotient to the folded core.
  std::map<int, int> id_of;
  auto id = [&](int raw) {
    const int r = uf.find(raw);
    auto [it, fresh] = id_of.try_emplace(r, static_cast<int>(id_of.size()));
    return it->second;
  };
  const int root = id(0);
  std::set<std::array<int, 3>> dedup;
  std::vector<detail::FoldArc> core;
  for (const auto& arc : arcs) {
    const std::array<int, 3> key{id(arc.u), arc.gen, id(arc.v)};
    if (dedup.insert(key).second) core.push_back({key[0], key[1], key[2]});
  }
  int n = static_cast<int>(id_of.size());

  auto build_slots = [&](int count) {
    std::vector<std::vector<int>> out_slot(count, std::vector<int>(rank, -1));
    std::vector<std::vector<int>> in_slot(count, std::vector<int>(rank, -1));
    for (const auto& arc : core) {
      out_slot[arc.u][arc.gen - 1] = arc.v;
      in_slot[arc.v][arc.gen - 1] = arc.u;
    }
    return std::pair(out_slot, in_slot);
  };

  // Complete deficient vertices with hanging labeled trees, layer by layer.
  auto [out_slot, in_slot] = build_slots(n);
  std::vector<int> branch_depth(n, 0);
  std::queue<int> frontier;
  for (int v = 0; v < n; ++v) frontier.push(v);
  while (!frontier.empty()) {
    const int v = frontier.front();
    frontier.pop();
    if (branch_depth[v] >= depth) continue;
    for (int k = 1; k <= rank; ++k) {
      if (out_slot[v][k - 1] < 0) {
        const int w = n++;
        out_slot.emplace_back(rank, -1);
        in_slot.emplace_back(rank, -1);
        branch_depth.push_back(branch_depth[v] + 1);
        core.push_back({v, k, w});
        out_slot[v][k - 1] = w;
        in_slot[w][k - 1] = v;
        frontier.push(w);
      }
      if (in_slot[v][k - 1] < 0) {
        const int w = n++;
        out_slot.emplace_back(rank, -1);
        in_slot.emplace_back(rank, -1);
        branch_depth.push_back(branch_depth[v] + 1);
        core.push_back({w, k, v});
        out_slot[w][k - 1] = v;
        in_slot[v][k - 1] = w;
        frontier.push(w);
      }
    }
  }

  std::vector<EdgePair> edges;
  Labeling lab{rank, {}};
  for (const auto& arc : core) {
    edges.push_back({arc.u, arc.v});
    lab.arcs.push_back({arc.gen, true});
  }
  RootedMultigraph base(n, edges, root, 2 * rank);

  // Deficient vertices bound the decidable word length.
  int safe = INT_MAX;
  bool truncated = false;
  const auto dist = base.distances_from(root);
  for (int v = 0; v < n; ++v) {
    bool complete = true;
    for (int k = 0; k < rank; ++k) {
      if (out_slot[v][k] < 0 || in_slot[v][k] < 0) complete = false;
    }
    if (!complete) {
      truncated = true;
      safe = std::min(safe, dist[v]);
    }
  }
  if (!truncated) safe = INT_MAX;
  return SchreierGraph(std::move(base), std::move(lab), truncated, safe);
}

}  // namespace schreier
