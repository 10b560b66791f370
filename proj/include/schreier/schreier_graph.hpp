#pragma once

#include <climits>
#include <optional>
#include <queue>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include "schreier/neighborhood.hpp"
#include "schreier/word.hpp"

namespace schreier {

// Membership answers on truncated graphs are tri-state: the truncation
// boundary makes long words undecidable.
enum class Membership { yes, no, unknown };

inline std::string to_string(Membership m) {
  switch (m) {
    case Membership::yes: return "yes";
    case Membership::no: return "no";
    default: return "unknown";
  }
}

// A rooted multigraph together with a Schreier structure: every edge carries
// an orientation and a generator label. Complete graphs satisfy the
// one-in/one-out condition per generator at every vertex (checked by
// validate); truncated graphs (balls, subgroup-graph truncations) may have
// missing slots and carry a safe word length for membership queries.
class SchreierGraph {
 public:
  SchreierGraph(RootedMultigraph base, Labeling labeling, bool truncated = false,
                int safe_depth = INT_MAX)
      : base_(std::move(base)),
        labeling_(std::move(labeling)),
        truncated_(truncated),
        safe_depth_(safe_depth) {
    if (static_cast<int>(labeling_.arcs.size()) != base_.num_edges()) {
      throw std::invalid_argument("labeling size does not match edge count");
    }
    const int n = base_.num_vertices();
    out_edge_.assign(n, std::vector<int>(labeling_.rank, -1));
    in_edge_.assign(n, std::vector<int>(labeling_.rank, -1));
    slots_unique_ = true;
    for (int e = 0; e < base_.num_edges(); ++e) {
      const auto& arc = labeling_.arcs[e];
      if (arc.gen < 1 || arc.gen > labeling_.rank) {
        throw std::invalid_argument("label index out of range on edge " + std::to_string(e));
      }
      const int from = arc.from_first ? base_.edge(e).u : base_.edge(e).v;
      const int to = arc.from_first ? base_.edge(e).v : base_.edge(e).u;
      auto& out = out_edge_[from][arc.gen - 1];
      auto& in = in_edge_[to][arc.gen - 1];
      if (out != -1 || in != -1) slots_unique_ = false;
      out = e;
      in = e;
    }
  }

  const RootedMultigraph& base() const { return base_; }
  const Labeling& labeling() const { return labeling_; }
  int rank() const { return labeling_.rank; }
  int root() const { return base_.root(); }
  bool truncated() const { return truncated_; }
  int safe_depth() const { return safe_depth_; }
  bool slots_unique() const { return slots_unique_; }

  int out_edge(int v, int gen) const { return out_edge_[v][gen - 1]; }
  int in_edge(int v, int gen) const { return in_edge_[v][gen - 1]; }

  int arc_from(int e) const { return labeling_.arcs[e].from_first ? base_.edge(e).u : base_.edge(e).v; }
  int arc_to(int e) const { return labeling_.arcs[e].from_first ? base_.edge(e).v : base_.edge(e).u; }

  // One step along a generator; nullopt when the slot is missing (possible
  // only on truncated graphs).
  std::optional<int> step(int v, const Generator& g) const {
    if (g.index < 1 || g.index > rank()) throw std::invalid_argument("generator index out of range");
    const int e = g.sign > 0 ? out_edge_[v][g.index - 1] : in_edge_[v][g.index - 1];
    if (e < 0) return std::nullopt;
    return g.sign > 0 ? arc_to(e) : arc_from(e);
  }

  SchreierGraph with_root(int new_root) const {
    return SchreierGraph(base_.with_root(new_root), labeling_, truncated_, safe_depth_);
  }

 private:
  RootedMultigraph base_;
  Labeling labeling_;
  bool truncated_;
  int safe_depth_;
  bool slots_unique_;
  std::vector<std::vector<int>> out_edge_, in_edge_;
};

struct ValidationReport {
  struct Violation {
    int vertex;
    int gen;
    int in_count;
    int out_count;
  };
  bool valid = true;
  std::vector<Violation> violations;
};

// Checks the Schreier condition: at every vertex, exactly one incoming and
// one outgoing edge per generator (a loop counts as both). Never throws.
inline ValidationReport validate(const SchreierGraph& sg) {
  const auto& g = sg.base();
  const int n = g.num_vertices();
  const int rank = sg.rank();
  std::vector<std::vector<int>> in_count(n, std::vector<int>(rank, 0));
  std::vector<std::vector<int>> out_count(n, std::vector<int>(rank, 0));
  for (int e = 0; e < g.num_edges(); ++e) {
    const auto& arc = sg.labeling().arcs[e];
    const int from = arc.from_first ? g.edge(e).u : g.edge(e).v;
    const int to = arc.from_first ? g.edge(e).v : g.edge(e).u;
    out_count[from][arc.gen - 1] += 1;
    in_count[to][arc.gen - 1] += 1;
  }
  ValidationReport report;
  for (int v = 0; v < n; ++v) {
    for (int k = 0; k < rank; ++k) {
      if (in_count[v][k] != 1 || out_count[v][k] != 1) {
        report.valid = false;
        report.violations.push_back({v, k + 1, in_count[v][k], out_count[v][k]});
      }
    }
  }
  return report;
}

// Ball validity: at most one arc per slot everywhere, exactly one at
// deficit-free vertices. This is the Schreier condition restricted to a ball.
inline bool validate_ball(const Neighborhood& nb) {
  if (!nb.labels) return false;
  const auto& g = nb.graph;
  const int rank = nb.labels->rank;
  std::vector<std::vector<int>> in_count(g.num_vertices(), std::vector<int>(rank, 0));
  std::vector<std::vector<int>> out_count(g.num_vertices(), std::vector<int>(rank, 0));
  for (int e = 0; e < g.num_edges(); ++e) {
    const auto& arc = nb.labels->arcs[e];
    if (arc.gen < 1 || arc.gen > rank) return false;
    const int from = arc.from_first ? g.edge(e).u : g.edge(e).v;
    const int to = arc.from_first ? g.edge(e).v : g.edge(e).u;
    out_count[from][arc.gen - 1] += 1;
    in_count[to][arc.gen - 1] += 1;
  }
  for (int v = 0; v < g.num_vertices(); ++v) {
    for (int k = 0; k < rank; ++k) {
      if (in_count[v][k] > 1 || out_count[v][k] > 1) return false;
      if (nb.deficit[v] == 0 && (in_count[v][k] != 1 || out_count[v][k] != 1)) return false;
    }
  }
  return true;
}

inline std::optional<int> read_word(const SchreierGraph& sg, int start, const Word& w) {
  int v = start;
  for (const auto& g : w.letters()) {
    const auto next = sg.step(v, g);
    if (!next) return std::nullopt;
    v = *next;
  }
  return v;
}

// Conjugation action (g, H) -> gHg^-1 realized as root shifting.
inline SchreierGraph shift_root(const SchreierGraph& sg, const Word& g) {
  const auto dest = read_word(sg, sg.root(), g);
  if (!dest) throw std::invalid_argument("shift_root: word leaves the truncated graph");
  return sg.with_root(*dest);
}

// Subgroup membership: h is in the subgroup iff reading h from the root
// returns to the root. On truncated graphs only words within the safe depth
// are decidable.
inline Membership contains(const SchreierGraph& sg, const Word& h) {
  const Word r = h.reduce();
  if (sg.truncated() && r.length() > sg.safe_depth()) return Membership::unknown;
  const auto dest = read_word(sg, sg.root(), r);
  if (!dest) return Membership::unknown;
  return *dest == sg.root() ? Membership::yes : Membership::no;
}

inline RootedMultigraph forget(const SchreierGraph& sg) { return sg.base(); }

inline SchreierGraph apply_labeling(const RootedMultigraph& g, Labeling lab, bool truncated = false,
                                    int safe_depth = INT_MAX) {
  return SchreierGraph(g, std::move(lab), truncated, safe_depth);
}

// Nielsen–Schreier generators from a breadth-first spanning tree: for each
// non-tree edge u->v labeled a_i, emit w(u) a_i w(v)^-1 where w(x) is the
// tree-path word from the root. |E| - |V| + 1 generators on a connected graph.
inline std::vector<Word> schreier_generators(const SchreierGraph& sg) {
  if (sg.truncated()) throw std::invalid_argument("schreier_generators needs a complete graph");
  const auto& g = sg.base();
  const int n = g.num_vertices();
  std::vector<Word> path(n);
  std::vector<char> visited(n, 0);
  std::vector<char> tree_edge(g.num_edges(), 0);
  std::queue<int> q;
  visited[sg.root()] = 1;
  q.push(sg.root());
  while (!q.empty()) {
    const int u = q.front();
    q.pop();
    for (int k = 1; k <= sg.rank(); ++k) {
      for (int sign : {+1, -1}) {
        const int e = sign > 0 ? sg.out_edge(u, k) : sg.in_edge(u, k);
        if (e < 0) continue;
        const int w = sign > 0 ? sg.arc_to(e) : sg.arc_from(e);
        if (!visited[w]) {
          visited[w] = 1;
          tree_edge[e] = 1;
          path[w] = path[u] * Generator{k, sign};
          q.push(w);
        }
      }
    }
  }
  std::vector<Word> gens;
  for (int e = 0; e < g.num_edges(); ++e) {
    if (tree_edge[e]) continue;
    const int u = sg.arc_from(e);
    const int v = sg.arc_to(e);
    const int k = sg.labeling().arcs[e].gen;
    gens.push_back((path[u] * Generator{k, +1} * path[v].inverse()).reduce());
  }
  return gens;
}

// Cycle decomposition of the label-i out-edge permutation.
struct ACyclePartition {
  int gen = 1;
  std::vector<std::vector<int>> cycles;  // each cycle in out-edge order
};

inline ACyclePartition a_cycles(const SchreierGraph& sg, int gen) {
  if (gen < 1 || gen > sg.rank()) throw std::invalid_argument("generator index out of range");
  const int n = sg.base().num_vertices();
  ACyclePartition part{gen, {}};
  std::vector<char> seen(n, 0);
  for (int v = 0; v < n; ++v) {
    if (seen[v]) continue;
    std::vector<int> cycle;
    int cur = v;
    while (!seen[cur]) {
      seen[cur] = 1;
      cycle.push_back(cur);
      const auto next = sg.step(cur, {gen, +1});
      if (!next) throw std::invalid_argument("a_cycles needs a complete structure");
      cur = *next;
    }
    part.cycles.push_back(std::move(cycle));
  }
  return part;
}

// Reverse one a_i-cycle: flip the orientation of exactly that cycle's edges.
// The Schreier condition is preserved (the cycle stays a cycle, read the
// other way around).
inline SchreierGraph reverse_cycle(const SchreierGraph& sg, int gen, const std::vector<int>& cycle) {
  Labeling lab = sg.labeling();
  for (int v : cycle) {
    const int e = sg.out_edge(v, gen);
    if (e < 0) throw std::invalid_argument("reverse_cycle: missing out edge");
    lab.arcs[e].from_first = !lab.arcs[e].from_first;
  }
  return SchreierGraph(sg.base(), std::move(lab), sg.truncated(), sg.safe_depth());
}

// Apply a reversal pattern: bit j of mask reverses cycle j of the partition.
inline SchreierGraph apply_reversals(const SchreierGraph& sg, const ACyclePartition& part,
                                     unsigned long mask) {
  SchreierGraph out = sg;
  for (std::size_t j = 0; j < part.cycles.size(); ++j) {
    if (mask & (1ul << j)) out = reverse_cycle(out, part.gen, part.cycles[j]);
  }
  return out;
}

inline Neighborhood ball(const SchreierGraph& sg, int center, int r) {
  const auto& g = sg.base();
  std::optional<Labeling> lab = sg.labeling();
  return detail::make_ball(
      g, center, r, lab, [&](int v) { return g.degree(v); },
      [](int v) { return std::to_string(v); });
}

inline Neighborhood whole_neighborhood(const SchreierGraph& sg) {
  return ball(sg, sg.root(), sg.base().eccentricity(sg.root()));
}

}  // namespace schreier
