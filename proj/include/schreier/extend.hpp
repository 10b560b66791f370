#pragma once

#include <algorithm>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "schreier/canonical.hpp"
#include "schreier/factorize.hpp"
#include "schreier/lazy.hpp"
#include "schreier/rng.hpp"
#include "schreier/schreier_graph.hpp"

namespace schreier {

struct ExtendResult {
  bool success = false;
  int deepest = 0;     // deepest radius whose edges were all labeled at some point
  long long nodes = 0;
  bool memo_retry = false;  // first pass (with dead-key memoization) exhausted; reran without
  std::optional<Neighborhood> labeled_ball;  // radius-R ball with the structure, on success
  std::vector<std::string> layer_keys;       // canonical key of the radius-r restriction, r=1..R
};

namespace detail {

// Depth-first search for a Schreier structure on a ball of a 2n-regular
// graph, staged by radius: the edges of U_r are labeled before any edge of
// U_{r+1} \ U_r, so every completed stage is a structure on U_r that extends
// the previous one (the chain of the infinity-lemma argument). Slot
// injectivity per (vertex, generator, direction) is the whole constraint:
// a vertex with all 2n edges inside the ball then gets each slot exactly
// once. Dead stage restrictions are memoized by canonical key; because two
// key-equal restrictions can in principle differ in how they sit inside the
// larger ball, an exhausted first pass is retried without the memo before
// reporting failure.
class ExtendSearch {
 public:
  ExtendSearch(const Neighborhood& ball, int rank, std::uint64_t seed, long long budget)
      : ball_(ball), rank_(rank), seed_(seed), budget_(budget) {
    const auto& g = ball_.graph;
    stage_of_.resize(g.num_edges());
    for (int e = 0; e < g.num_edges(); ++e) {
      const auto& [u, v] = g.edge(e);
      stage_of_[e] = std::max({1, ball_.dist[u], ball_.dist[v]});
    }
    gen_of_.assign(g.num_edges(), 0);
    from_first_.assign(g.num_edges(), true);
    out_used_.assign(g.num_vertices(), std::vector<char>(rank_, 0));
    in_used_.assign(g.num_vertices(), std::vector<char>(rank_, 0));
    dead_.assign(ball_.radius + 1, {});
  }

  ExtendResult run() {
    ExtendResult res;
    try {
      memo_enabled_ = true;
      bool ok = solve_stage(1);
      if (!ok) {
        // The memo prune is a heuristic; re-run exhaustively before giving up.
        res.memo_retry = true;
        memo_enabled_ = false;
        for (auto& d : dead_) d.clear();
        ok = solve_stage(1);
      }
      res.success = ok;
    } catch (const SearchBudgetExceeded&) {
      res.success = false;
    }
    res.deepest = deepest_;
    res.nodes = nodes_;
    if (res.success) {
      Neighborhood out = ball_;
      Labeling lab{rank_, {}};
      for (int e = 0; e < ball_.graph.num_edges(); ++e) {
        lab.arcs.push_back({gen_of_[e], from_first_[e]});
      }
      out.labels = std::move(lab);
      res.labeled_ball = out;
      res.layer_keys = layer_keys_;
    }
    return res;
  }

 private:
  bool solve_stage(int r) {
    if (r > ball_.radius) return true;
    if (!assign_edges(r)) return false;
    deepest_ = std::max(deepest_, r);
    const std::string key = stage_key(r);
    if (memo_enabled_ && dead_[r].count(key)) return false;
    if (solve_stage(r + 1)) {
      if (static_cast<int>(layer_keys_.size()) < r) layer_keys_.resize(r);
      layer_keys_[r - 1] = key;
      return true;
    }
    if (memo_enabled_) dead_[r].insert(key);
    return false;
  }

  // Assign every unlabeled edge of stage r, most-constrained first.
  bool assign_edges(int r) {
    const int e = pick_edge(r);
    if (e < 0) return true;
    auto options = options_for(e);
    // Seeded option order diversifies the structures found at each radius.
    Rng rng(hash_combine(seed_, static_cast<std::uint64_t>(e) * 2654435761u + r));
    rng.shuffle(options);
    for (const auto& [gen, ff] : options) {
      if (++nodes_ > budget_) throw SearchBudgetExceeded("extend_structure budget exceeded");
      apply(e, gen, ff);
      if (assign_edges(r)) return true;
      undo(e, gen, ff);
    }
    return false;
  }

  int pick_edge(int r) {
    int best = -1;
    std::size_t best_options = 0;
    for (int e = 0; e < ball_.graph.num_edges(); ++e) {
      if (stage_of_[e] != r || gen_of_[e] != 0) continue;
      const auto opts = options_for(e).size();
      if (best < 0 || opts < best_options) {
        best = e;
        best_options = opts;
        if (opts <= 1) break;
      }
    }
    return best;
  }

  std::vector<std::pair<int, bool>> options_for(int e) const {
    const auto& [u, v] = ball_.graph.edge(e);
    std::vector<std::pair<int, bool>> opts;
    for (int g = 1; g <= rank_; ++g) {
      if (u == v) {
        if (!out_used_[u][g - 1] && !in_used_[u][g - 1]) opts.emplace_back(g, true);
        continue;
      }
      if (!out_used_[u][g - 1] && !in_used_[v][g - 1]) opts.emplace_back(g, true);
      if (!out_used_[v][g - 1] && !in_used_[u][g - 1]) opts.emplace_back(g, false);
    }
    return opts;
  }

  void apply(int e, int gen, bool ff) {
    const auto& [u, v] = ball_.graph.edge(e);
    const int from = ff ? u : v;
    const int to = ff ? v : u;
    gen_of_[e] = gen;
    from_first_[e] = ff;
    out_used_[from][gen - 1] = 1;
    in_used_[to][gen - 1] = 1;
  }

  void undo(int e, int gen, bool ff) {
    const auto& [u, v] = ball_.graph.edge(e);
    const int from = ff ? u : v;
    const int to = ff ? v : u;
    gen_of_[e] = 0;
    out_used_[from][gen - 1] = 0;
    in_used_[to][gen - 1] = 0;
  }

  // Canonical key of the labeled radius-r restriction.
  std::string stage_key(int r) {
    const auto& g = ball_.graph;
    std::vector<int> local(g.num_vertices(), -1);
    std::vector<int> verts;
    for (int v = 0; v < g.num_vertices(); ++v) {
      if (ball_.dist[v] <= r) {
        local[v] = static_cast<int>(verts.size());
        verts.push_back(v);
      }
    }
    std::vector<EdgePair> edges;
    Labeling lab{rank_, {}};
    for (int e = 0; e < g.num_edges(); ++e) {
      if (stage_of_[e] > r) continue;
      edges.push_back({local[g.edge(e).u], local[g.edge(e).v]});
      lab.arcs.push_back({gen_of_[e], from_first_[e]});
    }
    Neighborhood nb{RootedMultigraph(static_cast<int>(verts.size()), edges, 0, g.degree_bound()),
                    r,
                    {},
                    -1,
                    {},
                    true,
                    std::move(lab),
                    {}};
    nb.dist = nb.graph.distances_from(0);
    nb.deficit.assign(verts.size(), 0);
    return canonical_key(nb);
  }

  const Neighborhood& ball_;
  int rank_;
  std::uint64_t seed_;
  long long budget_;
  long long nodes_ = 0;
  int deepest_ = 0;
  bool memo_enabled_ = true;
  std::vector<int> stage_of_;
  std::vector<int> gen_of_;  // 0 = unassigned
  std::vector<bool> from_first_;
  std::vector<std::vector<char>> out_used_, in_used_;
  std::vector<std::set<std::string>> dead_;
  std::vector<std::string> layer_keys_;
};

}  // namespace detail

// Schreier structure on the radius-R ball of a 2n-regular graph, with the
// consistency certificate of the infinity-lemma argument: the canonical key
// of the structure restricted to each radius r <= R. Existence is guaranteed
// for 2n-regular sources; the bounded search can still time out, in which
// case the deepest consistently labeled radius is reported.
inline ExtendResult extend_structure_ball(const Neighborhood& unlabeled_ball, std::uint64_t seed,
                                          long long budget = 1'000'000) {
  int declared = -1;
  for (int v = 0; v < unlabeled_ball.graph.num_vertices(); ++v) {
    const int d = unlabeled_ball.graph.degree(v) + unlabeled_ball.deficit[v];
    if (declared < 0) declared = d;
    if (d != declared) throw std::invalid_argument("extend_structure: source is not regular");
  }
  if (declared % 2 != 0) throw std::invalid_argument("extend_structure: source degree is odd");
  detail::ExtendSearch search(unlabeled_ball, declared / 2, seed, budget);
  return search.run();
}

inline ExtendResult extend_structure(const LazyGraph& g, int radius, std::uint64_t seed,
                                     long long budget = 1'000'000) {
  if (g.rank() != 0) throw std::invalid_argument("extend_structure takes an unlabeled lazy graph");
  return extend_structure_ball(ball(g, radius), seed, budget);
}

}  // namespace schreier
