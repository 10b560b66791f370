#pragma once

#include <boost/rational.hpp>
#include <cmath>
#include <functional>
#include <map>
#include <memory>
#include <optional>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "schreier/canonical.hpp"
#include "schreier/factorize.hpp"
#include "schreier/isomorphism.hpp"
#include "schreier/lazy.hpp"
#include "schreier/rng.hpp"
#include "schreier/schreier_graph.hpp"

namespace schreier {

using Rational = boost::rational<long long>;

inline std::string to_string(const Rational& q) {
  return std::to_string(q.numerator()) + "/" + std::to_string(q.denominator());
}

// Mass assignment to canonical keys at one radius: exact rationals, or sample
// counts with the sample size. The space tag separates labeled (Lambda) from
// unlabeled (Omega) cylinders.
struct CylinderMeasure {
  enum class Space { lambda, omega };
  Space space = Space::omega;
  int radius = 0;
  bool truncated = false;  // masses live on balls of a truncated source
  bool empirical = false;
  std::map<std::string, Rational> exact;
  std::map<std::string, long long> counts;
  long long n_samples = 0;

  Rational mass(const std::string& key) const {
    if (empirical) {
      auto it = counts.find(key);
      return it == counts.end() ? Rational(0) : Rational(it->second, n_samples);
    }
    auto it = exact.find(key);
    return it == exact.end() ? Rational(0) : it->second;
  }

  Rational total_mass() const {
    Rational t(0);
    if (empirical) {
      for (const auto& [k, c] : counts) t += Rational(c, n_samples);
    } else {
      for (const auto& [k, m] : exact) t += m;
    }
    return t;
  }

  std::vector<std::string> keys() const {
    std::vector<std::string> out;
    if (empirical) {
      for (const auto& [k, c] : counts) out.push_back(k);
    } else {
      for (const auto& [k, m] : exact) out.push_back(k);
    }
    return out;
  }

  // Standard error of an empirical key frequency.
  double standard_error(const std::string& key) const {
    const double p = boost::rational_cast<double>(mass(key));
    return std::sqrt(p * (1.0 - p) / static_cast<double>(n_samples));
  }
};

// Uniform-root measure of a finite graph: the mass of a key is the fraction
// of vertices whose r-ball realizes it.
inline CylinderMeasure uniform_root_measure(const RootedMultigraph& g, int r) {
  CylinderMeasure m{CylinderMeasure::Space::omega, r};
  for (int v = 0; v < g.num_vertices(); ++v) {
    m.exact[canonical_key(ball(g, v, r))] += Rational(1, g.num_vertices());
  }
  return m;
}

inline CylinderMeasure uniform_root_measure(const SchreierGraph& sg, int r) {
  CylinderMeasure m{CylinderMeasure::Space::lambda, r};
  const int n = sg.base().num_vertices();
  for (int v = 0; v < n; ++v) {
    m.exact[canonical_key(ball(sg, v, r))] += Rational(1, n);
  }
  return m;
}

inline CylinderMeasure dirac_measure(const Neighborhood& nb) {
  CylinderMeasure m{nb.labeled() ? CylinderMeasure::Space::lambda : CylinderMeasure::Space::omega,
                    nb.radius};
  m.truncated = nb.truncated;
  m.exact[canonical_key(nb)] = Rational(1);
  return m;
}

// Push a radius-r measure down to radius r' < r through the restriction map.
inline CylinderMeasure restrict_measure(const CylinderMeasure& m, int r) {
  if (r > m.radius) throw std::invalid_argument("restrict_measure: target radius too large");
  CylinderMeasure out{m.space, r, m.truncated, m.empirical};
  out.n_samples = m.n_samples;
  auto restrict_key = [&](const std::string& key) {
    return canonical_key(restrict_ball(decode_key(key, m.radius), r));
  };
  if (m.empirical) {
    for (const auto& [key, c] : m.counts) out.counts[restrict_key(key)] += c;
  } else {
    for (const auto& [key, mass] : m.exact) out.exact[restrict_key(key)] += mass;
  }
  return out;
}

// mu_{r-1}(U) = sum over V restricting to U of mu_r(V), exactly.
inline bool check_consistency(const CylinderMeasure& fine, const CylinderMeasure& coarse) {
  if (coarse.radius > fine.radius || fine.space != coarse.space) return false;
  const auto restricted = restrict_measure(fine, coarse.radius);
  if (fine.empirical != coarse.empirical) return false;
  if (fine.empirical) return restricted.counts == coarse.counts;
  return restricted.exact == coarse.exact;
}

inline Rational tv_distance(const CylinderMeasure& a, const CylinderMeasure& b) {
  std::set<std::string> keys;
  for (const auto& k : a.keys()) keys.insert(k);
  for (const auto& k : b.keys()) keys.insert(k);
  Rational sum(0);
  for (const auto& k : keys) {
    const Rational d = a.mass(k) - b.mass(k);
    sum += d < Rational(0) ? -d : d;
  }
  return sum / 2;
}

// Forgetful pushforward Lambda_r -> Omega_r: drop labels, re-canonicalize,
// sum masses over fibers.
inline CylinderMeasure pushforward_forget(const CylinderMeasure& m) {
  if (m.space != CylinderMeasure::Space::lambda) {
    throw std::invalid_argument("pushforward_forget expects a labeled measure");
  }
  CylinderMeasure out{CylinderMeasure::Space::omega, m.radius, m.truncated, m.empirical};
  out.n_samples = m.n_samples;
  auto forget_key = [&](const std::string& key) {
    Neighborhood nb = decode_key(key, m.radius);
    nb.labels.reset();
    return canonical_key(nb);
  };
  if (m.empirical) {
    for (const auto& [key, c] : m.counts) out.counts[forget_key(key)] += c;
  } else {
    for (const auto& [key, mass] : m.exact) out.exact[forget_key(key)] += mass;
  }
  return out;
}

// ---------------------------------------------------------------------------
// Unimodularity

// Two-sided 3-sigma significance with a Bonferroni correction across the
// compared classes: the per-class threshold z* solves
// erfc(z*/sqrt 2) = erfc(3/sqrt 2)/k.
inline double bonferroni_z_threshold(int k) {
  if (k <= 1) return 3.0;
  const double alpha = std::erfc(3.0 / std::sqrt(2.0)) / k;
  double lo = 3.0, hi = 10.0;
  for (int it = 0; it < 200; ++it) {
    const double mid = (lo + hi) / 2;
    if (std::erfc(mid / std::sqrt(2.0)) > alpha) {
      lo = mid;
    } else {
      hi = mid;
    }
  }
  return (lo + hi) / 2;
}

struct UnimodularityReport {
  struct ClassLine {
    std::string description;
    Rational lhs{0}, rhs{0};  // doubly-rooted masses of the class and its swap
    int w_y = 0, w_x = 0;     // orbit weights at the two roots of the class graph
    double z = 0.0;           // empirical comparisons only
    bool violated = false;
  };
  bool pass = true;
  bool exact = true;
  int radius = 0;
  bool truncated = false;  // witness at this radius on a truncated source
  std::vector<ClassLine> classes;
  std::string worst;
  Rational worst_gap{0};
  double worst_z = 0.0;

  std::string summary() const {
    std::ostringstream os;
    os << (pass ? "PASS" : "FAIL") << " unimodularity at radius " << radius << " ("
       << classes.size() << " doubly-rooted classes";
    if (truncated) os << "; witness on a truncated source";
    os << ")";
    if (!pass) os << "; worst: " << worst;
    return os.str();
  }
};

// Exact (or 3-sigma, for empirical measures) check of the cylinder-level
// unimodularity condition at doubly-rooted radius r. The doubly-rooted lift
// is derived from the radius r+1 entries of the measure: each ball
// contributes, per root-adjacent vertex y, the r-neighborhood of the edge
// (root, y); the condition compares every class with its root swap.
inline UnimodularityReport check_unimodular(const CylinderMeasure& m, int r) {
  if (m.radius < r + 1) {
    throw std::invalid_argument("check_unimodular at radius r needs measure data at radius >= r+1");
  }
  const CylinderMeasure work = m.radius == r + 1 ? m : restrict_measure(m, r + 1);
  {
    const Rational total = work.total_mass();
    if (!work.empirical && total != Rational(1)) {
      throw std::invalid_argument("check_unimodular: measure mass is " + to_string(total) +
                                  ", not 1 (inconsistent family)");
    }
  }

  struct Bucket {
    Neighborhood rep;
    Rational mass{0};
    long long count = 0;
  };
  std::vector<Bucket> buckets;
  auto bucket_of = [&](const Neighborhood& u) -> int {
    for (std::size_t i = 0; i < buckets.size(); ++i) {
      if (isomorphic(buckets[i].rep, u)) return static_cast<int>(i);
    }
    buckets.push_back({u, Rational(0), 0});
    return static_cast<int>(buckets.size()) - 1;
  };

  for (const auto& key : work.keys()) {
    const Neighborhood v_ball = decode_key(key, r + 1);
    std::set<int> neighbors;
    for (const auto& inc : v_ball.graph.incident(v_ball.graph.root())) {
      if (inc.to != v_ball.graph.root()) neighbors.insert(inc.to);
    }
    for (int y : neighbors) {
      const int b = bucket_of(edge_neighborhood(v_ball, y, r));
      if (work.empirical) {
        buckets[b].count += work.counts.at(key);
      } else {
        buckets[b].mass += work.exact.at(key);
      }
    }
  }

  UnimodularityReport report;
  report.exact = !work.empirical;
  report.radius = r;
  report.truncated = work.truncated;
  std::vector<int> swap_of(buckets.size(), -1);
  for (std::size_t i = 0; i < buckets.size(); ++i) {
    const Neighborhood swapped = swap_roots(buckets[i].rep);
    for (std::size_t j = 0; j < buckets.size(); ++j) {
      if (isomorphic(swapped, buckets[j].rep)) {
        swap_of[i] = static_cast<int>(j);
        break;
      }
    }
  }
  const double z_threshold = bonferroni_z_threshold(static_cast<int>(buckets.size()));
  for (std::size_t i = 0; i < buckets.size(); ++i) {
    const int j = swap_of[i];
    if (j >= 0 && j < static_cast<int>(i)) continue;  // pair already reported
    UnimodularityReport::ClassLine line;
    const auto& rep = buckets[i].rep;
    line.w_y = orbit_weight(rep, rep.second_root);
    {
      const Neighborhood swapped = swap_roots(rep);
      line.w_x = orbit_weight(swapped, swapped.second_root);
    }
    if (work.empirical) {
      const double n = static_cast<double>(work.n_samples);
      const double ci = static_cast<double>(buckets[i].count);
      const double cj = j >= 0 ? static_cast<double>(buckets[j].count) : 0.0;
      line.lhs = Rational(buckets[i].count, work.n_samples);
      line.rhs = j >= 0 ? Rational(buckets[j].count, work.n_samples) : Rational(0);
      const double pi = ci / n, pj = cj / n;
      const double se = std::sqrt(pi * (1 - pi) / n + pj * (1 - pj) / n);
      line.z = se > 0 ? std::abs(pi - pj) / se : (ci == cj ? 0.0 : 1e9);
      line.violated = line.z > z_threshold;
    } else {
      line.lhs = buckets[i].mass;
      line.rhs = j >= 0 ? buckets[j].mass : Rational(0);
      line.violated = line.lhs != line.rhs;
    }
    {
      std::ostringstream os;
      os << "class |V(U)|=" << rep.graph.num_vertices() << " w_U(y)=" << line.w_y
         << " w_U(x)=" << line.w_x << ": mu~(U,x,y)=" << to_string(line.lhs)
         << " vs mu~(U,y,x)=" << to_string(line.rhs) << " (paper form: " << line.w_y << "*"
         << to_string(line.lhs / Rational(line.w_y)) << " vs " << line.w_x << "*"
         << to_string(line.rhs / Rational(line.w_x)) << ")";
      line.description = os.str();
    }
    if (line.violated) {
      report.pass = false;
      const Rational gap =
          line.lhs > line.rhs ? line.lhs - line.rhs : line.rhs - line.lhs;
      if (report.worst.empty() || gap > report.worst_gap || line.z > report.worst_z) {
        report.worst = line.description;
        report.worst_gap = gap;
        report.worst_z = line.z;
      }
    }
    report.classes.push_back(std::move(line));
  }
  return report;
}

// ---------------------------------------------------------------------------
// Reversal samplers

// Bernoulli cycle-reversal model nu_p over a labeled source: every a_i-cycle
// is independently reversed with probability p. Samples are reproducible:
// coins are keyed by (seed, sample index, cycle id).
struct ReversalModel {
  std::shared_ptr<const LazyGraph> lazy;     // labeled lazy source, or
  std::optional<SchreierGraph> finite;       // finite Schreier source
  int gen = 1;
  double p = 0.5;
  std::uint64_t seed = 0;
};

inline Neighborhood sample_reversal(const ReversalModel& model, int r, std::uint64_t sample_index) {
  if (model.lazy) {
    ReversedCyclesView view(model.lazy, model.gen, [&](const std::string& cid) {
      return keyed_coin(model.seed, sample_index, cid, model.p);
    });
    return ball(view, r);
  }
  if (!model.finite) throw std::invalid_argument("reversal model has no source");
  const auto& sg = *model.finite;
  const auto part = a_cycles(sg, model.gen);
  SchreierGraph cur = sg;
  for (std::size_t j = 0; j < part.cycles.size(); ++j) {
    if (keyed_coin(model.seed, sample_index, "cycle" + std::to_string(j), model.p)) {
      cur = reverse_cycle(cur, model.gen, part.cycles[j]);
    }
  }
  return ball(cur, cur.root(), r);
}

using BallSampler = std::function<Neighborhood(int r, std::uint64_t sample_index)>;

inline BallSampler make_sampler(const ReversalModel& model) {
  return [model](int r, std::uint64_t k) { return sample_reversal(model, r, k); };
}

// Empirical cylinder measure from N samples; per-key standard error is
// sqrt(p(1-p)/N).
inline CylinderMeasure estimate_cylinder(const BallSampler& sampler, int r, long long n_samples) {
  if (n_samples < 1) throw std::invalid_argument("estimate_cylinder: need at least one sample");
  CylinderMeasure m{CylinderMeasure::Space::lambda, r, false, true};
  m.n_samples = n_samples;
  for (long long k = 0; k < n_samples; ++k) {
    const Neighborhood nb = sampler(r, static_cast<std::uint64_t>(k));
    if (nb.truncated) m.truncated = true;
    m.counts[canonical_key(nb)] += 1;
  }
  return m;
}

// ---------------------------------------------------------------------------
// Conjugation invariance of samplers

struct ShiftInvarianceReport {
  struct KeyLine {
    std::string key;
    long long count_root = 0, count_shifted = 0;
    double z = 0.0;
    bool violated = false;
  };
  bool pass = true;
  int radius = 0;
  long long n_samples = 0;
  Word shift;
  std::vector<KeyLine> lines;
  double worst_z = 0.0;

  std::string summary() const {
    std::ostringstream os;
    os << (pass ? "PASS" : "FAIL") << " shift invariance under " << format_word(shift) << " at radius "
       << radius << " (N=" << n_samples << ", worst z=" << worst_z << ")";
    return os.str();
  }
};

namespace detail {

inline int ball_step(const Neighborhood& nb, int v, const Generator& g) {
  const auto& graph = nb.graph;
  for (const auto& inc : graph.incident(v)) {
    const auto& arc = nb.labels->arcs[inc.edge];
    if (arc.gen != g.index) continue;
    const int from = arc.from_first ? graph.edge(inc.edge).u : graph.edge(inc.edge).v;
    const int to = arc.from_first ? graph.edge(inc.edge).v : graph.edge(inc.edge).u;
    if (g.sign > 0 && from == v) return to;
    if (g.sign < 0 && to == v) return from;
  }
  return -1;
}

inline int ball_read_word(const Neighborhood& nb, int start, const Word& w) {
  int v = start;
  for (const auto& g : w.letters()) {
    v = ball_step(nb, v, g);
    if (v < 0) return -1;
  }
  return v;
}

inline Neighborhood ball_around(const Neighborhood& nb, int center, int r) {
  auto source_degree = [&](int v) { return nb.graph.degree(v) + nb.deficit[v]; };
  auto name = [&](int v) { return nb.source_names.empty() ? std::to_string(v) : nb.source_names[v]; };
  return make_ball(nb.graph, center, r, nb.labels, source_degree, name);
}

}  // namespace detail

// Compare the r-ball key distribution at the root against the one at
// read_word(root, g), across N samples of a labeled sampler. Conjugation
// invariance predicts agreement; per-key 3-sigma with Bonferroni correction.
inline ShiftInvarianceReport check_shift_invariance(const BallSampler& sampler, int r, const Word& g,
                                                    long long n_samples) {
  const Word shift = g.reduce();
  ShiftInvarianceReport report;
  report.radius = r;
  report.n_samples = n_samples;
  report.shift = shift;
  std::map<std::string, std::pair<long long, long long>> counts;
  for (long long k = 0; k < n_samples; ++k) {
    const Neighborhood big = sampler(r + shift.length(), static_cast<std::uint64_t>(k));
    const int shifted = detail::ball_read_word(big, big.graph.root(), shift);
    if (shifted < 0) throw std::invalid_argument("check_shift_invariance: radius too small for |g|");
    counts[canonical_key(detail::ball_around(big, big.graph.root(), r))].first += 1;
    counts[canonical_key(detail::ball_around(big, shifted, r))].second += 1;
  }
  const double z_threshold = bonferroni_z_threshold(static_cast<int>(counts.size()));
  const double n = static_cast<double>(n_samples);
  for (const auto& [key, pair] : counts) {
    ShiftInvarianceReport::KeyLine line;
    line.key = key;
    line.count_root = pair.first;
    line.count_shifted = pair.second;
    const double p1 = pair.first / n, p2 = pair.second / n;
    const double se = std::sqrt(p1 * (1 - p1) / n + p2 * (1 - p2) / n);
    line.z = se > 0 ? std::abs(p1 - p2) / se : (pair.first == pair.second ? 0.0 : 1e9);
    line.violated = line.z > z_threshold;
    if (line.violated) report.pass = false;
    report.worst_z = std::max(report.worst_z, line.z);
    report.lines.push_back(std::move(line));
  }
  return report;
}

// ---------------------------------------------------------------------------
// Reversal families (Lemma-size instances)

struct ReversalFamilyReport {
  int j_cycles = 0;
  long long patterns = 0;
  int distinct_keys = 0;
  bool base_rigid = false;
  long long base_aut_order = 0;
  std::optional<std::pair<unsigned long, unsigned long>> collision;  // two masks, equal keys

  std::string summary() const {
    std::ostringstream os;
    os << "J=" << j_cycles << " patterns=" << patterns << " distinct=" << distinct_keys
       << " base " << (base_rigid ? "rigid" : ("non-rigid (|Aut|=" + std::to_string(base_aut_order) + ")"));
    if (collision) os << " collision: masks " << collision->first << " and " << collision->second;
    return os.str();
  }
};

// Number of distinct Schreier structures among all 2^J orientation patterns
// of the a_i-cycles, with the rigidity of the underlying unlabeled graph
// reported alongside (rigid bases give exactly 2^J).
inline ReversalFamilyReport reversal_family_count(const SchreierGraph& sg, int gen,
                                                  int max_cycles = 20) {
  const auto part = a_cycles(sg, gen);
  const int j = static_cast<int>(part.cycles.size());
  if (j > max_cycles) {
    throw SearchBudgetExceeded("reversal_family_count: " + std::to_string(j) + " cycles > budget " +
                               std::to_string(max_cycles));
  }
  ReversalFamilyReport report;
  report.j_cycles = j;
  report.patterns = 1ll << j;
  std::map<std::string, unsigned long> first_mask;
  for (unsigned long mask = 0; mask < (1ul << j); ++mask) {
    const auto key = canonical_key(whole_neighborhood(apply_reversals(sg, part, mask)));
    auto [it, fresh] = first_mask.try_emplace(key, mask);
    if (!fresh && !report.collision) report.collision = {it->second, mask};
  }
  report.distinct_keys = static_cast<int>(first_mask.size());
  Neighborhood base = whole_neighborhood(sg);
  base.labels.reset();
  const auto aut = automorphism_group_unrooted(base);
  report.base_aut_order = static_cast<long long>(aut.size());
  report.base_rigid = aut.size() == 1;
  return report;
}

// ---------------------------------------------------------------------------
// Sofic lifting

struct SoficLiftReport {
  int radius = 0;
  std::vector<CylinderMeasure> labeled;    // uniform-root measures of the labeled graphs
  std::vector<CylinderMeasure> unlabeled;  // their forgetful pushforwards
  std::vector<Rational> tv_labeled;        // consecutive total-variation distances
  std::vector<Rational> tv_unlabeled;

  std::string summary() const {
    std::ostringstream os;
    os << "sofic lift at radius " << radius << ": TV(labeled) =";
    for (const auto& d : tv_labeled) os << ' ' << to_string(d);
    return os.str();
  }
};

// Endow each finite 2n-regular graph of the sequence with a Schreier
// structure (fixed seed policy) and report how the labeled uniform-root
// measures stabilize. Subsequence selection is left to the reader of the
// report.
inline SoficLiftReport sofic_lift(const std::vector<RootedMultigraph>& sequence, int r,
                                  std::uint64_t seed = 0) {
  SoficLiftReport report;
  report.radius = r;
  for (const auto& g : sequence) {
    const auto sg = schreier_structure(g, seed);
    report.labeled.push_back(uniform_root_measure(sg, r));
    report.unlabeled.push_back(pushforward_forget(report.labeled.back()));
  }
  for (std::size_t i = 0; i + 1 < report.labeled.size(); ++i) {
    report.tv_labeled.push_back(tv_distance(report.labeled[i], report.labeled[i + 1]));
    report.tv_unlabeled.push_back(tv_distance(report.unlabeled[i], report.unlabeled[i + 1]));
  }
  return report;
}

// ---------------------------------------------------------------------------
// Subgroup distinctness witnesses

namespace detail {

// Geodesic words from the root to every vertex of a complete finite Schreier
// graph (BFS over generator steps in fixed order).
inline std::vector<Word> geodesic_words(const SchreierGraph& sg) {
  std::vector<Word> word(sg.base().num_vertices());
  std::vector<char> seen(sg.base().num_vertices(), 0);
  std::vector<int> queue{sg.root()};
  seen[sg.root()] = 1;
  for (std::size_t head = 0; head < queue.size(); ++head) {
    const int u = queue[head];
    for (int k = 1; k <= sg.rank(); ++k) {
      for (int sign : {+1, -1}) {
        const auto v = sg.step(u, {k, sign});
        if (v && !seen[*v]) {
          seen[*v] = 1;
          word[*v] = word[u] * Generator{k, sign};
          queue.push_back(*v);
        }
      }
    }
  }
  return word;
}

template <class Member>
std::optional<Word> witness_over_words(int rank, int max_len, Member member,
                                       const std::vector<Word>& templates) {
  for (const auto& h : templates) {
    const Word red = h.reduce();
    if (red.empty() || red.length() > max_len) continue;
    const auto ma = member(red, true);
    const auto mb = member(red, false);
    if (ma != Membership::unknown && mb != Membership::unknown && ma != mb) return red;
  }
  // Breadth-first over reduced words of length 1..max_len.
  std::vector<Word> frontier{Word{}};
  for (int len = 1; len <= max_len; ++len) {
    std::vector<Word> next;
    for (const auto& w : frontier) {
      for (int k = 1; k <= rank; ++k) {
        for (int sign : {+1, -1}) {
          const Generator g{k, sign};
          if (!w.empty()) {
            const auto& last = w.letters().back();
            if (last.index == k && last.sign == -sign) continue;  // stay reduced
          }
          const Word h = w * g;
          const auto ma = member(h, true);
          const auto mb = member(h, false);
          if (ma != Membership::unknown && mb != Membership::unknown && ma != mb) return h;
          next.push_back(h);
        }
      }
    }
    frontier = std::move(next);
  }
  return std::nullopt;
}

}  // namespace detail

// A word h with contains(A,h) != contains(B,h), for two Schreier structures
// on the same underlying graph. Prefers the geodesic-a_i-geodesic-back
// template through an edge where the two structures disagree, then falls
// back to breadth-first search over words of length <= max_len.
inline std::optional<Word> distinctness_witness(const SchreierGraph& a, const SchreierGraph& b,
                                                int max_len) {
  if (!a.base().same_edge_multiset(b.base()) || a.root() != b.root() || a.rank() != b.rank()) {
    throw std::invalid_argument("distinctness_witness: graphs must share their underlying base");
  }
  std::vector<Word> templates;
  if (!a.truncated() && !b.truncated()) {
    const auto words = detail::geodesic_words(a);
    for (int e = 0; e < a.base().num_edges(); ++e) {
      if (a.labeling().arcs[e] == b.labeling().arcs[e]) continue;
      const int x = a.arc_from(e);
      const int y = a.arc_to(e);
      const int g = a.labeling().arcs[e].gen;
      templates.push_back(words[x] * Generator{g, +1} * words[y].inverse());
    }
  }
  auto member = [&](const Word& h, bool first) {
    return contains(first ? a : b, h);
  };
  return detail::witness_over_words(a.rank(), max_len, member, templates);
}

inline std::optional<Word> distinctness_witness(const LazyGraph& a, const LazyGraph& b, int max_len) {
  if (a.rank() != b.rank() || a.rank() == 0) {
    throw std::invalid_argument("distinctness_witness: labeled lazy graphs of equal rank required");
  }
  // Figure-1 template: find a disagreeing arc within reach and go
  // geodesic / one labeled step / inverse geodesic.
  std::vector<Word> templates;
  {
    const Neighborhood nb = ball(a, max_len);
    std::map<std::string, Word> word_to;
    word_to[a.root_address()] = Word{};
    std::vector<std::string> queue{a.root_address()};
    for (std::size_t head = 0; head < queue.size(); ++head) {
      const std::string cur = queue[head];
      if (word_to[cur].length() >= max_len) continue;
      for (const auto& arc : a.arcs(cur)) {
        if (!word_to.count(arc.to)) {
          word_to[arc.to] = word_to[cur] * Generator{arc.gen, arc.dir};
          queue.push_back(arc.to);
        }
      }
    }
    for (const auto& addr : queue) {
      const auto arcs_a = a.arcs(addr);
      const auto arcs_b = b.arcs(addr);
      for (std::size_t i = 0; i < arcs_a.size(); ++i) {
        if (arcs_a[i].dir == +1 && arcs_b[i].dir != +1 && word_to.count(arcs_a[i].to)) {
          templates.push_back(word_to[addr] * Generator{arcs_a[i].gen, +1} *
                              word_to[arcs_a[i].to].inverse());
        }
      }
    }
  }
  auto member = [&](const Word& h, bool first) {
    return contains(first ? a : b, h) ? Membership::yes : Membership::no;
  };
  return detail::witness_over_words(a.rank(), max_len, member, templates);
}

}  // namespace schreier
