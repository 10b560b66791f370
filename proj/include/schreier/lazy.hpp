#pragma once

#include <functional>
#include <map>
#include <memory>
#include <optional>
#include <set>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include "schreier/neighborhood.hpp"
#include "schreier/word.hpp"

namespace schreier {

// On-demand infinite bounded-degree graph. Vertices are addressed by strings;
// queries are pure address arithmetic, so instances are stateless and safe to
// share. Labeled graphs (Cayley graphs) report generator labels and
// orientations on their arcs and can name the a_i-cycle through a vertex.
class LazyGraph {
 public:
  struct Arc {
    std::string to;
    int gen = 0;  // 0 on unlabeled graphs
    int dir = 0;  // +1 arc leaves the queried vertex, -1 it enters, 0 undirected
  };

  virtual ~LazyGraph() = default;
  virtual std::string root_address() const = 0;
  virtual int degree() const = 0;
  virtual int rank() const { return 0; }  // 0: unlabeled
  virtual std::vector<Arc> arcs(const std::string& v) const = 0;
  virtual std::string cycle_id(const std::string& /*v*/, int /*gen*/) const {
    throw std::logic_error("cycle_id is only defined for labeled lazy graphs");
  }
};

namespace lazyimpl {

inline std::string int_str(long long x) { return std::to_string(x); }

inline long long parse_int(const std::string& s) { return std::stoll(s); }

inline std::pair<long long, long long> parse_xy(const std::string& s) {
  const auto comma = s.find(',');
  if (comma == std::string::npos) throw std::invalid_argument("bad z2 address: " + s);
  return {std::stoll(s.substr(0, comma)), std::stoll(s.substr(comma + 1))};
}

inline std::string xy(long long x, long long y) {
  return std::to_string(x) + "," + std::to_string(y);
}

}  // namespace lazyimpl

// The Cayley graph of Z with generator a_1.
class LineGraph final : public LazyGraph {
 public:
  std::string root_address() const override { return "0"; }
  int degree() const override { return 2; }
  int rank() const override { return 1; }
  std::vector<Arc> arcs(const std::string& v) const override {
    const long long k = lazyimpl::parse_int(v);
    return {{lazyimpl::int_str(k + 1), 1, +1}, {lazyimpl::int_str(k - 1), 1, -1}};
  }
  std::string cycle_id(const std::string&, int gen) const override {
    if (gen != 1) throw std::invalid_argument("line has a single generator");
    return "l";
  }
};

// The Cayley graph of Z^2 with a_1 = (1,0) (east) and a_2 = (0,1) (north).
class Z2Graph : public LazyGraph {
 public:
  std::string root_address() const override { return "0,0"; }
  int degree() const override { return 4; }
  int rank() const override { return 2; }
  std::vector<Arc> arcs(const std::string& v) const override {
    const auto [x, y] = lazyimpl::parse_xy(v);
    return {{lazyimpl::xy(x + 1, y), 1, +1},
            {lazyimpl::xy(x - 1, y), 1, -1},
            {lazyimpl::xy(x, y + 1), 2, +1},
            {lazyimpl::xy(x, y - 1), 2, -1}};
  }
  std::string cycle_id(const std::string& v, int gen) const override {
    const auto [x, y] = lazyimpl::parse_xy(v);
    if (gen == 1) return "r" + std::to_string(y);  // horizontal lines
    if (gen == 2) return "c" + std::to_string(x);  // vertical lines
    throw std::invalid_argument("z2 has two generators");
  }
};

// Z^2 with the extra diagonal generator a_3 = a_1 a_2 = (1,1); 6-regular.
// a_3-cycles are the diagonals {y - x = const}.
class Z2DiagGraph final : public Z2Graph {
 public:
  int degree() const override { return 6; }
  int rank() const override { return 3; }
  std::vector<Arc> arcs(const std::string& v) const override {
    const auto [x, y] = lazyimpl::parse_xy(v);
    auto out = Z2Graph::arcs(v);
    out.push_back({lazyimpl::xy(x + 1, y + 1), 3, +1});
    out.push_back({lazyimpl::xy(x - 1, y - 1), 3, -1});
    return out;
  }
  std::string cycle_id(const std::string& v, int gen) const override {
    if (gen == 3) {
      const auto [x, y] = lazyimpl::parse_xy(v);
      return "d" + std::to_string(y - x);
    }
    return Z2Graph::cycle_id(v, gen);
  }
};

// The d-regular tree, unlabeled. Addresses are root paths: the root is "";
// its children are "0".."d-1"; deeper vertices append a digit in 0..d-2.
class TreeGraph final : public LazyGraph {
 public:
  explicit TreeGraph(int d) : d_(d) {
    if (d < 3 || d > 9) throw std::invalid_argument("tree degree must be in 3..9");
  }
  std::string root_address() const override { return ""; }
  int degree() const override { return d_; }
  std::vector<Arc> arcs(const std::string& v) const override {
    std::vector<Arc> out;
    if (!v.empty()) out.push_back({v.substr(0, v.size() - 1), 0, 0});  // parent
    const int children = v.empty() ? d_ : d_ - 1;
    for (int c = 0; c < children; ++c) out.push_back({v + static_cast<char>('0' + c), 0, 0});
    return out;
  }

 private:
  int d_;
};

// Trofimov's grandfather graph over the d-regular tree with a fixed end:
// every vertex is joined to its father, its children, its grandfather, and
// its grandchildren; (d^2-d+2)-regular, vertex-transitive, nonunimodular.
// Addresses are horospherical: "level:word" with word over 0..d-2, leading
// zeros stripped (the all-zero spine heads to the fixed end).
class GrandfatherGraph final : public LazyGraph {
 public:
  explicit GrandfatherGraph(int d) : d_(d) {
    if (d < 3 || d > 9) throw std::invalid_argument("grandfather degree must be in 3..9");
  }
  std::string root_address() const override { return "0:"; }
  int degree() const override { return d_ * d_ - d_ + 2; }
  std::vector<Arc> arcs(const std::string& v) const override {
    const auto [lvl, w] = parse(v);
    std::vector<Arc> out;
    out.push_back({addr(lvl - 1, father_word(w)), 0, 0});
    out.push_back({addr(lvl - 2, father_word(father_word(w))), 0, 0});
    for (int c = 0; c < d_ - 1; ++c) out.push_back({addr(lvl + 1, child_word(w, c)), 0, 0});
    for (int c1 = 0; c1 < d_ - 1; ++c1) {
      for (int c2 = 0; c2 < d_ - 1; ++c2) {
        out.push_back({addr(lvl + 2, child_word(child_word(w, c1), c2)), 0, 0});
      }
    }
    return out;
  }

 private:
  static std::string strip(std::string w) {
    std::size_t i = 0;
    while (i < w.size() && w[i] == '0') ++i;
    return w.substr(i);
  }
  static std::string father_word(const std::string& w) {
    if (w.empty()) return w;
    return strip(w.substr(0, w.size() - 1));
  }
  std::string child_word(const std::string& w, int c) const {
    return strip(w + static_cast<char>('0' + c));
  }
  static std::pair<long long, std::string> parse(const std::string& v) {
    const auto colon = v.find(':');
    if (colon == std::string::npos) throw std::invalid_argument("bad grandfather address: " + v);
    return {std::stoll(v.substr(0, colon)), v.substr(colon + 1)};
  }
  static std::string addr(long long lvl, const std::string& w) {
    return std::to_string(lvl) + ":" + w;
  }

  int d_;
};

// View of a labeled lazy graph with the orientation of selected a_i-cycles
// reversed. The predicate decides per cycle id; composing two views toggles.
class ReversedCyclesView final : public LazyGraph {
 public:
  ReversedCyclesView(std::shared_ptr<const LazyGraph> base, int gen,
                     std::function<bool(const std::string&)> reversed)
      : base_(std::move(base)), gen_(gen), reversed_(std::move(reversed)) {
    if (gen_ < 1 || gen_ > base_->rank()) throw std::invalid_argument("bad generator for reversal");
  }
  std::string root_address() const override { return base_->root_address(); }
  int degree() const override { return base_->degree(); }
  int rank() const override { return base_->rank(); }
  std::vector<Arc> arcs(const std::string& v) const override {
    auto out = base_->arcs(v);
    for (auto& arc : out) {
      if (arc.gen == gen_ && reversed_(base_->cycle_id(v, gen_))) arc.dir = -arc.dir;
    }
    return out;
  }
  std::string cycle_id(const std::string& v, int gen) const override {
    return base_->cycle_id(v, gen);
  }

 private:
  std::shared_ptr<const LazyGraph> base_;
  int gen_;
  std::function<bool(const std::string&)> reversed_;
};

// Unlabeled view of a labeled lazy graph (the forgetful map on generators).
class ForgetView final : public LazyGraph {
 public:
  explicit ForgetView(std::shared_ptr<const LazyGraph> base) : base_(std::move(base)) {}
  std::string root_address() const override { return base_->root_address(); }
  int degree() const override { return base_->degree(); }
  std::vector<Arc> arcs(const std::string& v) const override {
    auto out = base_->arcs(v);
    for (auto& arc : out) {
      arc.gen = 0;
      arc.dir = 0;
    }
    return out;
  }

 private:
  std::shared_ptr<const LazyGraph> base_;
};

// Extract the r-ball at the root of a lazy graph. Vertices are interned in
// BFS discovery order (deterministic, since arcs() order is fixed), boundary
// deficits are recorded, and labels are kept for labeled graphs.
inline Neighborhood ball(const LazyGraph& g, int r) {
  std::map<std::string, int> id_of;
  std::vector<std::string> addr;
  std::vector<int> dist;
  auto intern = [&](const std::string& a, int d) {
    auto [it, fresh] = id_of.try_emplace(a, static_cast<int>(addr.size()));
    if (fresh) {
      addr.push_back(a);
      dist.push_back(d);
    }
    return it->second;
  };
  intern(g.root_address(), 0);
  std::vector<EdgePair> edges;
  std::vector<ArcLabel> arcs;
  std::set<std::tuple<std::string, std::string, int, std::string>> seen;
  for (std::size_t head = 0; head < addr.size(); ++head) {
    const std::string from = addr[head];  // copy: addr may reallocate below
    const int d = dist[head];
    if (d == r) continue;  // boundary: do not expand further
    for (const auto& arc : g.arcs(from)) {
      const int to_id = intern(arc.to, d + 1);
      const int from_id = id_of[from];
      // Each undirected edge is reported from both endpoints; dedupe on the
      // (sorted endpoints, label, tail) identity.
      const std::string& lo = std::min(from, arc.to);
      const std::string& hi = std::max(from, arc.to);
      const std::string tail = arc.dir == 0 ? "" : (arc.dir > 0 ? from : arc.to);
      if (!seen.insert({lo, hi, arc.gen, tail}).second) continue;
      edges.push_back({from_id, to_id});
      if (g.rank() > 0) arcs.push_back({arc.gen, arc.dir >= 0});
    }
  }
  // Edges between two boundary vertices are part of the ball as well.
  for (std::size_t head = 0; head < addr.size(); ++head) {
    if (dist[head] != r) continue;
    const std::string from = addr[head];
    for (const auto& arc : g.arcs(from)) {
      auto it = id_of.find(arc.to);
      if (it == id_of.end()) continue;
      const std::string& lo = std::min(from, arc.to);
      const std::string& hi = std::max(from, arc.to);
      const std::string tail = arc.dir == 0 ? "" : (arc.dir > 0 ? from : arc.to);
      if (!seen.insert({lo, hi, arc.gen, tail}).second) continue;
      edges.push_back({static_cast<int>(head), it->second});
      if (g.rank() > 0) arcs.push_back({arc.gen, arc.dir >= 0});
    }
  }
  Neighborhood nb{RootedMultigraph(static_cast<int>(addr.size()), edges, 0, g.degree()),
                  r,
                  std::move(dist),
                  -1,
                  {},
                  false,
                  std::nullopt,
                  std::move(addr)};
  nb.deficit.resize(nb.graph.num_vertices());
  for (int v = 0; v < nb.graph.num_vertices(); ++v) {
    nb.deficit[v] = g.degree() - nb.graph.degree(v);
    if (nb.deficit[v] > 0) nb.truncated = true;
    if (nb.deficit[v] < 0) throw std::logic_error("lazy graph exceeded its declared degree");
  }
  if (g.rank() > 0) nb.labels = Labeling{g.rank(), std::move(arcs)};
  return nb;
}

// Read a word on a labeled lazy graph by address arithmetic.
inline std::string read_word(const LazyGraph& g, const std::string& start, const Word& w) {
  if (g.rank() == 0) throw std::invalid_argument("read_word needs a labeled lazy graph");
  std::string cur = start;
  for (const auto& letter : w.letters()) {
    if (letter.index < 1 || letter.index > g.rank()) {
      throw std::invalid_argument("generator index out of range for this graph");
    }
    bool stepped = false;
    for (const auto& arc : g.arcs(cur)) {
      if (arc.gen == letter.index && arc.dir == letter.sign) {
        cur = arc.to;
        stepped = true;
        break;
      }
    }
    if (!stepped) throw std::logic_error("lazy Schreier graph is missing a slot");
  }
  return cur;
}

inline bool contains(const LazyGraph& g, const Word& h) {
  return read_word(g, g.root_address(), h) == g.root_address();
}

// CLI-facing selectors: grandfather:<d>, tree:<d>, z2, z2diag, line.
inline std::shared_ptr<LazyGraph> make_lazy(const std::string& selector) {
  const auto colon = selector.find(':');
  const std::string name = selector.substr(0, colon);
  if (name == "line") return std::make_shared<LineGraph>();
  if (name == "z2") return std::make_shared<Z2Graph>();
  if (name == "z2diag") return std::make_shared<Z2DiagGraph>();
  if (name == "tree" || name == "grandfather") {
    if (colon == std::string::npos) {
      throw std::invalid_argument("selector '" + name + "' needs a degree, e.g. " + name + ":3");
    }
    const int d = std::stoi(selector.substr(colon + 1));
    if (name == "tree") return std::make_shared<TreeGraph>(d);
    return std::make_shared<GrandfatherGraph>(d);
  }
  throw std::invalid_argument("unknown lazy graph selector: " + selector);
}

}  // namespace schreier
