#pragma once

#include <array>
#include <map>
#include <optional>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include "schreier/isomorphism.hpp"
#include "schreier/neighborhood.hpp"

namespace schreier {

namespace canon {

// Flattened integer encoding of a numbered graph; lexicographic comparison.
inline std::vector<int> encode(const iso::ColoredView& view, const std::vector<int>& pos_of) {
  const int n = view.n;
  std::vector<int> inv(n);
  for (int v = 0; v < n; ++v) inv[pos_of[v]] = v;
  std::vector<int> data;
  data.push_back(n);
  data.push_back(view.second >= 0 ? pos_of[view.second] : -1);
  for (int p = 0; p < n; ++p) {
    const auto& loops = view.loops[inv[p]];
    data.push_back(static_cast<int>(loops.size()));
    data.insert(data.end(), loops.begin(), loops.end());
  }
  std::vector<std::vector<int>> rows;
  for (int p = 0; p < n; ++p) {
    const int v = inv[p];
    for (const auto& [u, bundle] : view.adj[v]) {
      if (pos_of[u] < p) continue;  // emit each pair once, from the smaller position
      std::vector<int> row{p, pos_of[u]};
      row.push_back(static_cast<int>(bundle.size()));
      row.insert(row.end(), bundle.begin(), bundle.end());
      rows.push_back(std::move(row));
    }
  }
  std::sort(rows.begin(), rows.end());
  for (const auto& row : rows) data.insert(data.end(), row.begin(), row.end());
  return data;
}

struct CanonResult {
  std::vector<int> pos_of;    // vertex -> canonical position
  std::vector<int> encoding;  // encoding under pos_of
};

// Refinement + individualization search for the lexicographically minimal
// encoding. Automorphisms discovered at equal-encoding leaves prune sibling
// branches whose targets lie in one orbit of the subgroup fixing the current
// individualization prefix; that keeps the leaf count manageable on balls
// with large boundary symmetry groups.
class CanonSearch {
 public:
  CanonSearch(const iso::ColoredView& view, long long budget) : view_(view), budget_(budget) {}

  CanonResult run() {
    iso::Partition p = iso::initial_partition(view_);
    std::vector<int> prefix;
    std::vector<int> all(view_.n);
    std::iota(all.begin(), all.end(), 0);
    descend(p, prefix, all);
    return {best_num_, best_enc_};
  }

 private:
  static constexpr int kNoJump = 1 << 30;

  // Returns a backjump level: unwind without trying further candidates while
  // the current depth exceeds it. When a leaf reproduces the first leaf's
  // encoding, everything between here and the deepest common ancestor with
  // the first path is an automorphic image of already-explored branches.
  int descend(iso::Partition p, std::vector<int>& prefix, const std::vector<int>& changed_seed) {
    if (++nodes_ > budget_) throw SearchBudgetExceeded("canonical form search budget exceeded");
    iso::refine(view_, p, changed_seed);
    if (p.discrete()) {
      return leaf(p, prefix);
    }
    int target = -1;
    for (int c = 0; c < static_cast<int>(p.cells.size()); ++c) {
      if (p.cells[c].size() > 1 &&
          (target < 0 || p.cells[c].size() < p.cells[target].size())) {
        target = c;
      }
    }
    const std::vector<int> cell = p.cells[target];
    const int depth = static_cast<int>(prefix.size());
    std::vector<int> tried;
    std::vector<int> uf;
    std::size_t uf_gen_count = static_cast<std::size_t>(-1);
    for (int v : cell) {
      if (uf_gen_count != gens_.size()) {
        uf = cell_orbits(prefix, cell);
        uf_gen_count = gens_.size();
      }
      bool skip = false;
      for (int t : tried) {
        if (find(uf, t) == find(uf, v)) {
          skip = true;
          break;
        }
      }
      if (skip) continue;
      tried.push_back(v);
      iso::Partition p2 = p;
      std::vector<int> rest;
      for (int w : cell) {
        if (w != v) rest.push_back(w);
      }
      p2.cells[target] = {v};
      p2.cells.insert(p2.cells.begin() + target + 1, rest);
      prefix.push_back(v);
      const int jump = descend(std::move(p2), prefix, cell);
      prefix.pop_back();
      if (jump < depth) return jump;
    }
    return kNoJump;
  }

  int leaf(const iso::Partition& p, const std::vector<int>& prefix) {
    std::vector<int> pos_of(view_.n);
    for (int c = 0; c < static_cast<int>(p.cells.size()); ++c) pos_of[p.cells[c][0]] = c;
    std::vector<int> enc = encode(view_, pos_of);
    if (!has_first_) {
      first_num_ = pos_of;
      first_enc_ = enc;
      first_prefix_ = prefix;
      best_num_ = pos_of;
      best_enc_ = std::move(enc);
      has_first_ = true;
      return kNoJump;
    }
    if (enc < best_enc_) {
      best_enc_ = enc;
      best_num_ = pos_of;
    }
    if (enc == first_enc_) {
      // An automorphism: send the vertex at position k of the first leaf to
      // the vertex at position k of this leaf.
      std::vector<int> inv(view_.n), phi(view_.n);
      for (int v = 0; v < view_.n; ++v) inv[pos_of[v]] = v;
      bool identity = true;
      for (int v = 0; v < view_.n; ++v) {
        phi[v] = inv[first_num_[v]];
        if (phi[v] != v) identity = false;
      }
      if (!identity) {
        gens_.push_back(std::move(phi));
        std::size_t common = 0;
        while (common < prefix.size() && common < first_prefix_.size() &&
               prefix[common] == first_prefix_[common]) {
          ++common;
        }
        return static_cast<int>(common);
      }
    }
    return kNoJump;
  }

  // Orbit fusion restricted to the target cell, under the generators fixing
  // the individualized prefix pointwise. Coarser than the true orbits (paths
  // through vertices outside the cell are not followed), so skipping
  // cell-mates it merges is sound.
  std::vector<int> cell_orbits(const std::vector<int>& prefix, const std::vector<int>& cell) const {
    std::vector<int> uf(view_.n);
    for (int v = 0; v < view_.n; ++v) uf[v] = v;
    for (const auto& g : gens_) {
      bool fixes = true;
      for (int v : prefix) {
        if (g[v] != v) {
          fixes = false;
          break;
        }
      }
      if (!fixes) continue;
      for (int v : cell) unite(uf, v, g[v]);
    }
    return uf;
  }

  static int find(std::vector<int>& uf, int x) {
    while (uf[x] != x) x = uf[x] = uf[uf[x]];
    return x;
  }
  static int find(const std::vector<int>& uf_const, int x) {
    while (uf_const[x] != x) x = uf_const[x];
    return x;
  }
  static void unite(std::vector<int>& uf, int a, int b) {
    a = find(uf, a);
    b = find(uf, b);
    if (a != b) uf[std::max(a, b)] = std::min(a, b);
  }

  const iso::ColoredView& view_;
  long long budget_;
  long long nodes_ = 0;
  bool has_first_ = false;
  std::vector<int> first_num_, first_enc_, first_prefix_;
  std::vector<int> best_num_, best_enc_;
  std::vector<std::vector<int>> gens_;
};

// Deterministic BFS numbering of a labeled neighborhood, following generator
// slots in fixed order (out a_1, in a_1, out a_2, ...). Valid whenever each
// (vertex, generator, direction) slot holds at most one arc, which makes
// out-neighbors label-determined; returns nullopt otherwise.
inline std::optional<std::vector<int>> bfs_label_numbering(const Neighborhood& nb) {
  const auto& g = nb.graph;
  const auto& lab = *nb.labels;
  const int n = g.num_vertices();
  const int rank = lab.rank;
  std::vector<std::vector<int>> out(n, std::vector<int>(rank, -1)), in(n, std::vector<int>(rank, -1));
  for (int e = 0; e < g.num_edges(); ++e) {
    const auto& [u, v] = g.edge(e);
    const auto& arc = lab.arcs[e];
    const int from = arc.from_first ? u : v;
    const int to = arc.from_first ? v : u;
    const int k = arc.gen - 1;
    if (k < 0 || k >= rank) return std::nullopt;
    if (out[from][k] != -1 || in[to][k] != -1) return std::nullopt;
    out[from][k] = to;
    in[to][k] = from;
  }
  std::vector<int> pos_of(n, -1);
  std::vector<int> queue;
  auto visit = [&](int v) {
    if (v >= 0 && pos_of[v] < 0) {
      pos_of[v] = static_cast<int>(queue.size());
      queue.push_back(v);
    }
  };
  visit(g.root());
  for (std::size_t head = 0; head < queue.size(); ++head) {
    const int u = queue[head];
    for (int k = 0; k < rank; ++k) {
      visit(out[u][k]);
      visit(in[u][k]);
    }
  }
  if (static_cast<int>(queue.size()) != n) return std::nullopt;  // cannot happen: balls are connected
  return pos_of;
}

}  // namespace canon

// Canonical key: a printable byte string that identifies the rooted (or
// doubly-rooted, label-preserving) isomorphism class, and from which the
// class representative can be decoded. Labeled neighborhoods use the
// label-driven BFS numbering; unlabeled ones use the refinement/backtracking
// canonical form.
inline std::string canonical_key(const Neighborhood& nb, long long budget = 20'000'000) {
  std::vector<int> pos_of;
  if (nb.labeled()) {
    auto bfs = canon::bfs_label_numbering(nb);
    if (bfs) {
      pos_of = *bfs;
    } else {
      const auto view = iso::make_view(nb);
      pos_of = canon::CanonSearch(view, budget).run().pos_of;
    }
  } else {
    const auto view = iso::make_view(nb);
    pos_of = canon::CanonSearch(view, budget).run().pos_of;
  }
  const auto& g = nb.graph;
  std::ostringstream os;
  if (nb.labeled()) {
    std::vector<std::array<int, 3>> arcs;
    for (int e = 0; e < g.num_edges(); ++e) {
      const auto& [u, v] = g.edge(e);
      const auto& arc = nb.labels->arcs[e];
      const int from = arc.from_first ? u : v;
      const int to = arc.from_first ? v : u;
      arcs.push_back({pos_of[from], pos_of[to], arc.gen});
    }
    std::sort(arcs.begin(), arcs.end());
    os << "S|" << nb.rank() << '|' << g.num_vertices() << '|'
       << (nb.second_root >= 0 ? pos_of[nb.second_root] : -1) << '|';
    for (std::size_t i = 0; i < arcs.size(); ++i) {
      if (i) os << ',';
      os << arcs[i][0] << '>' << arcs[i][1] << ':' << arcs[i][2];
    }
  } else {
    std::map<std::pair<int, int>, int> mult;
    for (int e = 0; e < g.num_edges(); ++e) {
      const auto& [u, v] = g.edge(e);
      const int a = std::min(pos_of[u], pos_of[v]);
      const int b = std::max(pos_of[u], pos_of[v]);
      mult[{a, b}] += 1;
    }
    os << "U|" << g.num_vertices() << '|'
       << (nb.second_root >= 0 ? pos_of[nb.second_root] : -1) << '|';
    bool first = true;
    for (const auto& [pair, m] : mult) {
      if (!first) os << ',';
      first = false;
      os << pair.first << '-' << pair.second << '*' << m;
    }
  }
  return os.str();
}

// Rebuild the canonical representative of a key. Distances are recomputed;
// deficits are zero (a key identifies a cylinder, not a particular source).
inline Neighborhood decode_key(const std::string& key, int radius) {
  auto fail = [&]() { throw std::invalid_argument("malformed canonical key: " + key); };
  std::vector<std::string> parts;
  {
    std::string cur;
    for (char c : key) {
      if (c == '|') {
        parts.push_back(cur);
        cur.clear();
      } else {
        cur.push_back(c);
      }
    }
    parts.push_back(cur);
  }
  if (parts.empty()) fail();
  std::vector<EdgePair> edges;
  std::optional<Labeling> labels;
  int nv = 0, second = -1;
  if (parts[0] == "S") {
    if (parts.size() != 5) fail();
    const int rank = std::stoi(parts[1]);
    nv = std::stoi(parts[2]);
    second = std::stoi(parts[3]);
    Labeling lab{rank, {}};
    std::istringstream is(parts[4]);
    std::string tok;
    while (std::getline(is, tok, ',')) {
      const auto gt = tok.find('>');
      const auto col = tok.find(':');
      if (gt == std::string::npos || col == std::string::npos) fail();
      const int u = std::stoi(tok.substr(0, gt));
      const int v = std::stoi(tok.substr(gt + 1, col - gt - 1));
      const int gen = std::stoi(tok.substr(col + 1));
      edges.push_back({u, v});
      lab.arcs.push_back({gen, true});
    }
    labels = std::move(lab);
  } else if (parts[0] == "U") {
    if (parts.size() != 4) fail();
    nv = std::stoi(parts[1]);
    second = std::stoi(parts[2]);
    if (!parts[3].empty()) {
      std::istringstream is(parts[3]);
      std::string tok;
      while (std::getline(is, tok, ',')) {
        const auto dash = tok.find('-');
        const auto star = tok.find('*');
        if (dash == std::string::npos || star == std::string::npos) fail();
        const int u = std::stoi(tok.substr(0, dash));
        const int v = std::stoi(tok.substr(dash + 1, star - dash - 1));
        const int m = std::stoi(tok.substr(star + 1));
        for (int k = 0; k < m; ++k) edges.push_back({u, v});
      }
    }
  } else {
    fail();
  }
  Neighborhood nb{RootedMultigraph(nv, edges, 0), radius, {}, second, {}, false, std::move(labels), {}};
  nb.dist = nb.graph.distances_from(0);
  nb.deficit.assign(nv, 0);
  return nb;
}

}  // namespace schreier
