#pragma once

#include <fstream>
#include <optional>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include "schreier/measure.hpp"
#include "schreier/multigraph.hpp"
#include "schreier/neighborhood.hpp"
#include "schreier/schreier_graph.hpp"

#include "json.hpp"

namespace schreier {

struct ParseError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

namespace ioimpl {

inline std::vector<std::string> tokens(const std::string& line) {
  std::vector<std::string> out;
  std::istringstream is(line);
  std::string tok;
  while (is >> tok) {
    if (tok[0] == '#') break;  // comment to end of line
    out.push_back(tok);
  }
  return out;
}

inline int parse_int(const std::string& tok, int line_no, const std::string& what) {
  try {
    std::size_t pos = 0;
    const int v = std::stoi(tok, &pos);
    if (pos != tok.size()) throw std::invalid_argument("trailing");
    return v;
  } catch (const std::exception&) {
    throw ParseError("line " + std::to_string(line_no) + ": bad " + what + " '" + tok + "'");
  }
}

}  // namespace ioimpl

// Edge-list format (UTF-8, '#' comments):
//   graph <n_vertices>
//   degree-bound <d>        (optional; violations are rejected with line numbers)
//   edge <u> <v>            (loops: u == v)
//   root <u>
inline RootedMultigraph read_edge_list(std::istream& in) {
  int n = -1, root = -1, bound = 0;
  std::vector<EdgePair> edges;
  std::vector<int> degree;
  std::string line;
  int line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    const auto toks = ioimpl::tokens(line);
    if (toks.empty()) continue;
    if (toks[0] == "graph") {
      if (toks.size() != 2) throw ParseError("line " + std::to_string(line_no) + ": graph <n>");
      n = ioimpl::parse_int(toks[1], line_no, "vertex count");
      if (n <= 0) throw ParseError("line " + std::to_string(line_no) + ": vertex count must be positive");
      degree.assign(n, 0);
    } else if (toks[0] == "degree-bound") {
      if (toks.size() != 2) throw ParseError("line " + std::to_string(line_no) + ": degree-bound <d>");
      bound = ioimpl::parse_int(toks[1], line_no, "degree bound");
    } else if (toks[0] == "edge") {
      if (n < 0) throw ParseError("line " + std::to_string(line_no) + ": edge before graph header");
      if (toks.size() != 3) throw ParseError("line " + std::to_string(line_no) + ": edge <u> <v>");
      const int u = ioimpl::parse_int(toks[1], line_no, "vertex id");
      const int v = ioimpl::parse_int(toks[2], line_no, "vertex id");
      if (u < 0 || u >= n || v < 0 || v >= n) {
        throw ParseError("line " + std::to_string(line_no) + ": vertex id out of range");
      }
      degree[u] += 1;
      degree[v] += 1;
      if (bound > 0 && (degree[u] > bound || degree[v] > bound)) {
        throw ParseError("line " + std::to_string(line_no) + ": degree bound " +
                         std::to_string(bound) + " violated at vertex " +
                         std::to_string(degree[u] > bound ? u : v));
      }
      edges.push_back({u, v});
    } else if (toks[0] == "root") {
      if (toks.size() != 2) throw ParseError("line " + std::to_string(line_no) + ": root <u>");
      root = ioimpl::parse_int(toks[1], line_no, "root id");
    } else {
      throw ParseError("line " + std::to_string(line_no) + ": unknown directive '" + toks[0] + "'");
    }
  }
  if (n < 0) throw ParseError("missing 'graph <n>' header");
  if (root < 0) throw ParseError("missing 'root <u>' line");
  try {
    return RootedMultigraph(n, edges, root, bound);
  } catch (const std::invalid_argument& e) {
    throw ParseError(e.what());
  }
}

inline void write_edge_list(std::ostream& out, const RootedMultigraph& g) {
  out << "graph " << g.num_vertices() << "\n";
  out << "degree-bound " << g.degree_bound() << "\n";
  for (const auto& [u, v] : g.edges()) out << "edge " << u << " " << v << "\n";
  out << "root " << g.root() << "\n";
}

// Labeled format:
//   schreier <n_vertices> <rank>
//   edge <u> <v> <i>        (oriented u -> v, labeled a_i)
//   root <u>
//   truncated               (optional: boundary slots may be missing)
inline SchreierGraph read_schreier(std::istream& in) {
  int n = -1, root = -1, rank = -1;
  bool truncated = false;
  std::vector<EdgePair> edges;
  Labeling lab;
  std::string line;
  int line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    const auto toks = ioimpl::tokens(line);
    if (toks.empty()) continue;
    if (toks[0] == "schreier") {
      if (toks.size() != 3) {
        throw ParseError("line " + std::to_string(line_no) + ": schreier <n> <rank>");
      }
      n = ioimpl::parse_int(toks[1], line_no, "vertex count");
      rank = ioimpl::parse_int(toks[2], line_no, "rank");
      if (n <= 0 || rank <= 0) throw ParseError("line " + std::to_string(line_no) + ": bad header");
      lab.rank = rank;
    } else if (toks[0] == "edge") {
      if (n < 0) throw ParseError("line " + std::to_string(line_no) + ": edge before header");
      if (toks.size() != 4) throw ParseError("line " + std::to_string(line_no) + ": edge <u> <v> <i>");
      const int u = ioimpl::parse_int(toks[1], line_no, "vertex id");
      const int v = ioimpl::parse_int(toks[2], line_no, "vertex id");
      const int g = ioimpl::parse_int(toks[3], line_no, "label");
      if (u < 0 || u >= n || v < 0 || v >= n) {
        throw ParseError("line " + std::to_string(line_no) + ": vertex id out of range");
      }
      if (g < 1 || g > rank) {
        throw ParseError("line " + std::to_string(line_no) + ": label out of range");
      }
      edges.push_back({u, v});
      lab.arcs.push_back({g, true});
    } else if (toks[0] == "root") {
      root = ioimpl::parse_int(toks[1], line_no, "root id");
    } else if (toks[0] == "truncated") {
      truncated = true;
    } else {
      throw ParseError("line " + std::to_string(line_no) + ": unknown directive '" + toks[0] + "'");
    }
  }
  if (n < 0) throw ParseError("missing 'schreier <n> <rank>' header");
  if (root < 0) throw ParseError("missing 'root <u>' line");
  RootedMultigraph base = [&] {
    try {
      return RootedMultigraph(n, edges, root, 2 * rank);
    } catch (const std::invalid_argument& e) {
      throw ParseError(e.what());
    }
  }();
  int safe = INT_MAX;
  if (truncated) {
    // Words are decidable while the walk stays on slot-complete vertices.
    const auto dist = base.distances_from(root);
    std::vector<std::vector<int>> out_cnt(n, std::vector<int>(rank, 0)), in_cnt(n, std::vector<int>(rank, 0));
    for (std::size_t e = 0; e < edges.size(); ++e) {
      out_cnt[edges[e].u][lab.arcs[e].gen - 1] += 1;
      in_cnt[edges[e].v][lab.arcs[e].gen - 1] += 1;
    }
    for (int v = 0; v < n; ++v) {
      for (int k = 0; k < rank; ++k) {
        if (out_cnt[v][k] < 1 || in_cnt[v][k] < 1) safe = std::min(safe, dist[v]);
      }
    }
  }
  return SchreierGraph(std::move(base), std::move(lab), truncated, safe);
}

inline void write_schreier(std::ostream& out, const SchreierGraph& sg) {
  out << "schreier " << sg.base().num_vertices() << " " << sg.rank() << "\n";
  for (int e = 0; e < sg.base().num_edges(); ++e) {
    out << "edge " << sg.arc_from(e) << " " << sg.arc_to(e) << " " << sg.labeling().arcs[e].gen
        << "\n";
  }
  out << "root " << sg.root() << "\n";
  if (sg.truncated()) out << "truncated\n";
}

// A labeled ball written as a truncated Schreier graph.
inline void write_schreier_ball(std::ostream& out, const Neighborhood& nb) {
  if (!nb.labels) throw std::invalid_argument("write_schreier_ball needs a labeled neighborhood");
  out << "schreier " << nb.graph.num_vertices() << " " << nb.labels->rank << "\n";
  for (int e = 0; e < nb.graph.num_edges(); ++e) {
    const auto& arc = nb.labels->arcs[e];
    const int u = arc.from_first ? nb.graph.edge(e).u : nb.graph.edge(e).v;
    const int v = arc.from_first ? nb.graph.edge(e).v : nb.graph.edge(e).u;
    out << "edge " << u << " " << v << " " << arc.gen << "\n";
  }
  out << "root " << nb.graph.root() << "\n";
  if (nb.truncated) out << "truncated\n";
}

// ---------------------------------------------------------------------------
// Measure JSON ({"v":1, ...}; keys are base64 of the canonical byte string)

inline std::string base64_encode(const std::string& in) {
  static const char* alphabet = "ABCDEFGHIJKLMNOPQRSTUVWXYZabcdefghijklmnopqrstuvwxyz0123456789+/";
  std::string out;
  int val = 0, bits = -6;
  for (unsigned char c : in) {
    val = (val << 8) + c;
    bits += 8;
    while (bits >= 0) {
      out.push_back(alphabet[(val >> bits) & 0x3f]);
      bits -= 6;
    }
  }
  if (bits > -6) out.push_back(alphabet[((val << 8) >> (bits + 8)) & 0x3f]);
  while (out.size() % 4) out.push_back('=');
  return out;
}

inline std::string base64_decode(const std::string& in) {
  std::vector<int> table(256, -1);
  static const char* alphabet = "ABCDEFGHIJKLMNOPQRSTUVWXYZabcdefghijklmnopqrstuvwxyz0123456789+/";
  for (int i = 0; i < 64; ++i) table[static_cast<unsigned char>(alphabet[i])] = i;
  std::string out;
  int val = 0, bits = -8;
  for (unsigned char c : in) {
    if (c == '=') break;
    if (table[c] < 0) throw ParseError("bad base64 in measure key");
    val = (val << 6) + table[c];
    bits += 6;
    if (bits >= 0) {
      out.push_back(static_cast<char>((val >> bits) & 0xff));
      bits -= 8;
    }
  }
  return out;
}

inline Rational parse_rational(const std::string& s) {
  const auto slash = s.find('/');
  try {
    if (slash == std::string::npos) return Rational(std::stoll(s));
    return Rational(std::stoll(s.substr(0, slash)), std::stoll(s.substr(slash + 1)));
  } catch (const std::exception&) {
    throw ParseError("bad rational '" + s + "'");
  }
}

inline nlohmann::json measure_to_json(const CylinderMeasure& m) {
  nlohmann::json j;
  j["v"] = 1;
  j["space"] = m.space == CylinderMeasure::Space::lambda ? "lambda" : "omega";
  j["radius"] = m.radius;
  j["truncated"] = m.truncated;
  j["kind"] = m.empirical ? "empirical" : "exact";
  nlohmann::json entries = nlohmann::json::array();
  if (m.empirical) {
    j["n"] = m.n_samples;
    for (const auto& [key, count] : m.counts) {
      entries.push_back({{"key", base64_encode(key)}, {"mass", {{"count", count}, {"n", m.n_samples}}}});
    }
  } else {
    for (const auto& [key, mass] : m.exact) {
      entries.push_back({{"key", base64_encode(key)}, {"mass", to_string(mass)}});
    }
  }
  j["entries"] = std::move(entries);
  return j;
}

inline CylinderMeasure measure_from_json(const nlohmann::json& j) {
  if (!j.contains("v") || j["v"].get<int>() != 1) throw ParseError("unsupported measure version");
  CylinderMeasure m;
  m.space = j.at("space").get<std::string>() == "lambda" ? CylinderMeasure::Space::lambda
                                                         : CylinderMeasure::Space::omega;
  m.radius = j.at("radius").get<int>();
  m.truncated = j.value("truncated", false);
  m.empirical = j.at("kind").get<std::string>() == "empirical";
  if (m.empirical) m.n_samples = j.at("n").get<long long>();
  for (const auto& entry : j.at("entries")) {
    const std::string key = base64_decode(entry.at("key").get<std::string>());
    if (m.empirical) {
      m.counts[key] = entry.at("mass").at("count").get<long long>();
    } else {
      m.exact[key] = parse_rational(entry.at("mass").get<std::string>());
    }
  }
  return m;
}

// ---------------------------------------------------------------------------
// DOT export: edges colored by label, arrowheads show the orientation.

inline const char* label_color(int gen) {
  static const char* palette[] = {"black", "red",    "blue",   "forestgreen",
                                  "orange", "purple", "brown", "cadetblue"};
  return palette[gen % 8];
}

inline void write_dot(std::ostream& out, const SchreierGraph& sg) {
  out << "digraph schreier {\n  node [shape=circle];\n";
  out << "  " << sg.root() << " [shape=doublecircle];\n";
  for (int e = 0; e < sg.base().num_edges(); ++e) {
    const int gen = sg.labeling().arcs[e].gen;
    out << "  " << sg.arc_from(e) << " -> " << sg.arc_to(e) << " [label=\"a" << gen
        << "\", color=" << label_color(gen) << "];\n";
  }
  out << "}\n";
}

inline void write_dot(std::ostream& out, const RootedMultigraph& g) {
  out << "graph g {\n  node [shape=circle];\n";
  out << "  " << g.root() << " [shape=doublecircle];\n";
  for (const auto& [u, v] : g.edges()) out << "  " << u << " -- " << v << ";\n";
  out << "}\n";
}

// File helpers.
template <class T, class Reader>
T read_file(const std::string& path, Reader reader) {
  std::ifstream in(path);
  if (!in) throw ParseError("cannot open " + path);
  return reader(in);
}

inline RootedMultigraph load_edge_list(const std::string& path) {
  return read_file<RootedMultigraph>(path, [](std::istream& in) { return read_edge_list(in); });
}

inline SchreierGraph load_schreier(const std::string& path) {
  return read_file<SchreierGraph>(path, [](std::istream& in) { return read_schreier(in); });
}

template <class Writer>
void write_file(const std::string& path, Writer writer) {
  std::ofstream out(path);
  if (!out) throw ParseError("cannot open " + path + " for writing");
  writer(out);
}

}  // namespace schreier
