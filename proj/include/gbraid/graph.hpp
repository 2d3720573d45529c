#pragma once

// Finite simplicial graphs, degree profiles, and the subdivision needed
// before the discretized configuration space models the topological one.

#include <algorithm>
#include <cstdint>
#include <deque>
#include <istream>
#include <limits>
#include <map>
#include <optional>
#include <ostream>
#include <set>
#include <span>
#include <sstream>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "gbraid/error.hpp"

namespace gbraid {

using VertexId = std::uint32_t;
using EdgeId = std::uint32_t;

inline constexpr std::size_t kUnreachable = std::numeric_limits<std::size_t>::max();

struct Edge {
  VertexId tail;
  VertexId head;

  VertexId lo() const noexcept { return std::min(tail, head); }
  VertexId hi() const noexcept { return std::max(tail, head); }
  bool touches(VertexId v) const noexcept { return tail == v || head == v; }
  bool meets(Edge const& o) const noexcept { return touches(o.tail) || touches(o.head); }

  friend bool operator==(Edge const&, Edge const&) = default;
};

class Graph {
 public:
  Graph() = default;
  explicit Graph(std::size_t vertex_count)
      : incident_(vertex_count), vertex_labels_(vertex_count) {}

  std::size_t vertex_count() const noexcept { return incident_.size(); }
  std::size_t edge_count() const noexcept { return edges_.size(); }

  // Orientation defaults to smaller index -> larger index.
  EdgeId add_edge(VertexId u, VertexId v, std::string label = {}) {
    if (u >= vertex_count() || v >= vertex_count())
      throw DomainError("edge endpoint out of range");
    if (u == v) throw DomainError("self-loop at vertex " + std::to_string(u));
    if (edge_between(u, v))
      throw DomainError("duplicate edge " + std::to_string(u) + " " + std::to_string(v));
    auto const id = static_cast<EdgeId>(edges_.size());
    edges_.push_back({std::min(u, v), std::max(u, v)});
    edge_labels_.emplace_back();
    incident_[u].push_back(id);
    incident_[v].push_back(id);
    if (!label.empty()) set_edge_label(id, std::move(label));
    return id;
  }

  Edge const& edge(EdgeId e) const { return edges_.at(e); }
  std::span<Edge const> edges() const noexcept { return edges_; }
  std::span<EdgeId const> incident(VertexId v) const { return incident_.at(v); }
  std::size_t degree(VertexId v) const { return incident_.at(v).size(); }

  VertexId other_end(EdgeId e, VertexId v) const {
    auto const& ed = edge(e);
    return ed.tail == v ? ed.head : ed.tail;
  }

  std::optional<EdgeId> edge_between(VertexId u, VertexId v) const {
    if (u >= vertex_count()) return std::nullopt;
    for (auto e : incident_[u])
      if (other_end(e, u) == v) return e;
    return std::nullopt;
  }

  void set_orientation(EdgeId e, VertexId tail) {
    auto& ed = edges_.at(e);
    if (!ed.touches(tail)) throw DomainError("orientation tail is not an endpoint");
    ed = {tail, ed.tail == tail ? ed.head : ed.tail};
  }

  // Labels are the generator names of the commutation graph, so they must
  // be unique and usable as word tokens.
  void set_edge_label(EdgeId e, std::string label) {
    check_label(label);
    for (EdgeId f = 0; f < edge_count(); ++f)
      if (f != e && edge_labels_[f] == label) throw DomainError("duplicate edge label '" + label + "'");
    edge_labels_.at(e) = std::move(label);
  }
  void set_vertex_label(VertexId v, std::string label) {
    check_label(label);
    vertex_labels_.at(v) = std::move(label);
  }

  bool has_edge_label(EdgeId e) const { return !edge_labels_.at(e).empty(); }
  bool has_vertex_label(VertexId v) const { return !vertex_labels_.at(v).empty(); }

  std::string edge_label(EdgeId e) const {
    auto const& l = edge_labels_.at(e);
    return l.empty() ? "e" + std::to_string(e) : l;
  }
  std::string vertex_label(VertexId v) const {
    auto const& l = vertex_labels_.at(v);
    return l.empty() ? std::to_string(v) : l;
  }

  // Explicit labels win over the default "e<idx>" names.
  std::optional<EdgeId> find_edge(std::string_view label) const {
    for (EdgeId e = 0; e < edge_count(); ++e)
      if (edge_labels_[e] == label) return e;
    for (EdgeId e = 0; e < edge_count(); ++e)
      if (edge_labels_[e].empty() && edge_label(e) == label) return e;
    return std::nullopt;
  }

  friend bool operator==(Graph const& a, Graph const& b) {
    return a.edges_ == b.edges_ && a.incident_.size() == b.incident_.size();
  }

 private:
  static void check_label(std::string const& label) {
    if (label.empty()) throw DomainError("empty label");
    for (char c : label)
      if (c == '^' || c == ',' || c == '[' || c == ']' || c == '=' ||
          static_cast<unsigned char>(c) <= ' ')
        throw DomainError("label '" + label + "' contains a reserved character");
  }

  std::vector<Edge> edges_;
  std::vector<std::vector<EdgeId>> incident_;
  std::vector<std::string> edge_labels_;
  std::vector<std::string> vertex_labels_;
};

// ---------------------------------------------------------------------------
// Text format

namespace detail {

inline std::vector<std::string> split_ws(std::string_view s) {
  std::vector<std::string> out;
  std::istringstream in{std::string(s)};
  for (std::string tok; in >> tok;) out.push_back(tok);
  return out;
}

inline std::optional<long long> to_int(std::string const& s) {
  if (s.empty()) return std::nullopt;
  std::size_t pos = 0;
  try {
    long long v = std::stoll(s, &pos);
    if (pos != s.size()) return std::nullopt;
    return v;
  } catch (...) {
    return std::nullopt;
  }
}

}  // namespace detail

inline Graph parse_graph(std::istream& in) {
  std::optional<Graph> g;
  std::string raw;
  std::size_t lineno = 0;
  while (std::getline(in, raw)) {
    ++lineno;
    if (auto hash = raw.find('#'); hash != std::string::npos) raw.resize(hash);
    auto tok = detail::split_ws(raw);
    if (tok.empty()) continue;
    auto index = [&](std::string const& s, std::size_t bound, char const* what) {
      auto v = detail::to_int(s);
      if (!v) throw ParseError(lineno, std::string("expected integer ") + what + ", got '" + s + "'");
      if (*v < 0 || static_cast<std::size_t>(*v) >= bound)
        throw ParseError(lineno, std::string(what) + " " + s + " out of range");
      return static_cast<std::uint32_t>(*v);
    };
    if (!g) {
      if (tok[0] != "n_vertices" || tok.size() != 2)
        throw ParseError(lineno, "first significant line must be 'n_vertices <int>'");
      auto nv = detail::to_int(tok[1]);
      if (!nv || *nv < 0) throw ParseError(lineno, "bad vertex count '" + tok[1] + "'");
      g.emplace(static_cast<std::size_t>(*nv));
      continue;
    }
    try {
      if (tok[0] == "edge") {
        if (tok.size() != 3) throw ParseError(lineno, "expected 'edge <u> <v>'");
        auto u = index(tok[1], g->vertex_count(), "vertex");
        auto v = index(tok[2], g->vertex_count(), "vertex");
        if (u == v) throw ParseError(lineno, "self-loop at vertex " + tok[1]);
        if (u > v) throw ParseError(lineno, "edge endpoints must satisfy u < v");
        if (g->edge_between(u, v)) throw ParseError(lineno, "duplicate edge " + tok[1] + " " + tok[2]);
        g->add_edge(u, v);
      } else if (tok[0] == "vlabel") {
        if (tok.size() != 3) throw ParseError(lineno, "expected 'vlabel <v> <name>'");
        g->set_vertex_label(index(tok[1], g->vertex_count(), "vertex"), tok[2]);
      } else if (tok[0] == "elabel") {
        if (tok.size() != 3) throw ParseError(lineno, "expected 'elabel <idx> <name>'");
        g->set_edge_label(index(tok[1], g->edge_count(), "edge index"), tok[2]);
      } else {
        throw ParseError(lineno, "unknown directive '" + tok[0] + "'");
      }
    } catch (ParseError const&) {
      throw;
    } catch (DomainError const& e) {
      throw ParseError(lineno, e.what());
    }
  }
  if (!g) throw ParseError(lineno, "missing 'n_vertices' line");
  return *std::move(g);
}

inline Graph parse_graph(std::string_view text) {
  std::istringstream in{std::string(text)};
  return parse_graph(in);
}

// Inverse of parse_graph for graphs with default orientation.
inline void write_graph(std::ostream& out, Graph const& g) {
  out << "n_vertices " << g.vertex_count() << '\n';
  for (auto const& e : g.edges()) out << "edge " << e.lo() << ' ' << e.hi() << '\n';
  for (VertexId v = 0; v < g.vertex_count(); ++v)
    if (g.has_vertex_label(v)) out << "vlabel " << v << ' ' << g.vertex_label(v) << '\n';
  for (EdgeId e = 0; e < g.edge_count(); ++e)
    if (g.has_edge_label(e)) out << "elabel " << e << ' ' << g.edge_label(e) << '\n';
}

inline std::string format_graph(Graph const& g) {
  std::ostringstream out;
  write_graph(out, g);
  return out.str();
}

// ---------------------------------------------------------------------------
// Standard graphs

// Cone on k points: center 0, leaves 1..k, edges a1..ak.
inline Graph star_graph(int k) {
  if (k < 3) throw DomainError("star_graph needs k >= 3");
  Graph g(static_cast<std::size_t>(k) + 1);
  for (int i = 1; i <= k; ++i) g.add_edge(0, static_cast<VertexId>(i), "a" + std::to_string(i));
  return g;
}

// Once-subdivided tripod: center 0, midpoints 1..3, leaves 4..6. Outer edges
// a,b,c come first, inner edges d,e,f second; arm i carries (outer, inner) =
// (a,d), (b,e), (c,f). Every edge points away from the center.
inline Graph tripod_subdivided() {
  Graph g(7);
  g.add_edge(1, 4, "a");
  g.add_edge(2, 5, "b");
  g.add_edge(3, 6, "c");
  g.add_edge(0, 1, "d");
  g.add_edge(0, 2, "e");
  g.add_edge(0, 3, "f");
  g.set_vertex_label(0, "o");
  for (VertexId i = 0; i < 3; ++i) {
    g.set_vertex_label(1 + i, std::string("m") + static_cast<char>('a' + i));
    g.set_vertex_label(4 + i, std::string("l") + static_cast<char>('a' + i));
  }
  return g;
}

// A chain of `count` tripods: centers c_i with two private leaves each,
// consecutive centers joined through a path between one leaf of each.
inline Graph tripod_chain(int count) {
  if (count < 1) throw DomainError("tripod_chain needs at least one tripod");
  Graph g(static_cast<std::size_t>(4 * count));
  for (int t = 0; t < count; ++t) {
    auto c = static_cast<VertexId>(4 * t);
    for (VertexId l = 1; l <= 3; ++l) g.add_edge(c, c + l);
  }
  for (int t = 0; t + 1 < count; ++t)
    g.add_edge(static_cast<VertexId>(4 * t + 3), static_cast<VertexId>(4 * (t + 1) + 1));
  return g;
}

// Two tripods joined by an edge between a leaf of each.
inline Graph two_tripods() { return tripod_chain(2); }

// ---------------------------------------------------------------------------
// Degree profile

struct DegreeProfile {
  std::vector<std::size_t> degree_map;
  std::vector<VertexId> essential_vertices;
  std::size_t m = 0;
  std::size_t m3 = 0;

  std::size_t threshold() const noexcept { return 2 * m + m3; }
};

inline DegreeProfile degree_profile(Graph const& g) {
  DegreeProfile p;
  p.degree_map.resize(g.vertex_count());
  for (VertexId v = 0; v < g.vertex_count(); ++v) {
    auto d = g.degree(v);
    p.degree_map[v] = d;
    if (d >= 3) {
      p.essential_vertices.push_back(v);
      ++p.m;
      if (d == 3) ++p.m3;
    }
  }
  return p;
}

// ---------------------------------------------------------------------------
// Distances and cycles

// BFS distances from `source`, optionally ignoring one edge.
inline std::vector<std::size_t> bfs_distances(Graph const& g, VertexId source,
                                              std::optional<EdgeId> skip = std::nullopt,
                                              std::vector<EdgeId>* parent_edge = nullptr) {
  std::vector<std::size_t> dist(g.vertex_count(), kUnreachable);
  if (parent_edge) parent_edge->assign(g.vertex_count(), std::numeric_limits<EdgeId>::max());
  std::deque<VertexId> queue{source};
  dist.at(source) = 0;
  while (!queue.empty()) {
    auto v = queue.front();
    queue.pop_front();
    for (auto e : g.incident(v)) {
      if (skip && e == *skip) continue;
      auto w = g.other_end(e, v);
      if (dist[w] != kUnreachable) continue;
      dist[w] = dist[v] + 1;
      if (parent_edge) (*parent_edge)[w] = e;
      queue.push_back(w);
    }
  }
  return dist;
}

inline std::size_t edge_distance(Graph const& g, VertexId u, VertexId v) {
  if (u >= g.vertex_count() || v >= g.vertex_count()) throw DomainError("vertex out of range");
  auto d = bfs_distances(g, u)[v];
  if (d == kUnreachable)
    throw DomainError("vertices " + std::to_string(u) + " and " + std::to_string(v) + " are disconnected");
  return d;
}

inline std::size_t component_count(Graph const& g) {
  std::vector<char> seen(g.vertex_count(), 0);
  std::size_t count = 0;
  for (VertexId s = 0; s < g.vertex_count(); ++s) {
    if (seen[s]) continue;
    ++count;
    auto dist = bfs_distances(g, s);
    for (VertexId v = 0; v < g.vertex_count(); ++v)
      if (dist[v] != kUnreachable) seen[v] = 1;
  }
  return count;
}

// Edges of one shortest path from u to v (empty if u == v or unreachable).
inline std::vector<EdgeId> shortest_path_edges(Graph const& g, VertexId u, VertexId v,
                                               std::optional<EdgeId> skip = std::nullopt) {
  std::vector<EdgeId> parent;
  auto dist = bfs_distances(g, u, skip, &parent);
  std::vector<EdgeId> path;
  if (dist[v] == kUnreachable) return path;
  for (auto x = v; x != u;) {
    path.push_back(parent[x]);
    x = g.other_end(parent[x], x);
  }
  std::reverse(path.begin(), path.end());
  return path;
}

// Edges of a shortest cycle through v, or empty when v lies on no cycle.
inline std::vector<EdgeId> shortest_cycle_through(Graph const& g, VertexId v) {
  std::vector<EdgeId> best;
  for (auto e : g.incident(v)) {
    auto w = g.other_end(e, v);
    auto path = shortest_path_edges(g, w, v, e);
    if (path.empty()) continue;
    path.push_back(e);
    if (best.empty() || path.size() < best.size()) best = std::move(path);
  }
  return best;
}

// ---------------------------------------------------------------------------
// Subdivision

enum class ViolationKind { too_few_vertices, close_pair, short_cycle };

inline char const* to_string(ViolationKind k) {
  switch (k) {
    case ViolationKind::too_few_vertices: return "too_few_vertices";
    case ViolationKind::close_pair: return "close_pair";
    case ViolationKind::short_cycle: return "short_cycle";
  }
  return "?";
}

struct Violation {
  ViolationKind kind;
  std::vector<VertexId> vertices;  // the pair, or the essential vertex
  std::vector<EdgeId> witness;     // offending shortest path / cycle
  std::size_t measured = 0;
  std::size_t required = 0;
};

struct SubdivisionCheck {
  bool ok = true;
  std::vector<Violation> violations;
  explicit operator bool() const noexcept { return ok; }
};

// The Prue-Scrimshaw criterion: at least n vertices, vertices of valency
// other than 2 pairwise at distance >= n-1, and every cycle through an
// essential vertex of length >= n+1.
inline SubdivisionCheck is_sufficiently_subdivided(Graph const& g, std::size_t n) {
  if (n < 1) throw DomainError("token count must be at least 1");
  SubdivisionCheck r;
  if (g.vertex_count() < n)
    r.violations.push_back({ViolationKind::too_few_vertices, {}, {}, g.vertex_count(), n});

  std::vector<VertexId> special;
  for (VertexId v = 0; v < g.vertex_count(); ++v)
    if (g.degree(v) != 2) special.push_back(v);
  for (std::size_t i = 0; i < special.size(); ++i) {
    auto dist = bfs_distances(g, special[i]);
    for (std::size_t j = i + 1; j < special.size(); ++j) {
      auto d = dist[special[j]];
      if (d != kUnreachable && d + 1 < n)
        r.violations.push_back({ViolationKind::close_pair,
                                {special[i], special[j]},
                                shortest_path_edges(g, special[i], special[j]),
                                d,
                                n - 1});
    }
  }
  for (VertexId v = 0; v < g.vertex_count(); ++v) {
    if (g.degree(v) < 3) continue;
    auto cycle = shortest_cycle_through(g, v);
    if (!cycle.empty() && cycle.size() < n + 1)
      r.violations.push_back({ViolationKind::short_cycle, {v}, cycle, cycle.size(), n + 1});
  }
  r.ok = r.violations.empty();
  return r;
}

struct SubdivisionPlan {
  std::vector<std::size_t> per_edge_pieces;
  std::size_t target_n = 0;
};

struct Subdivision {
  Graph graph;
  SubdivisionPlan plan;
  std::vector<EdgeId> origin;  // subdivided edge -> original edge
};

// Original vertices keep their indices; interior points of edge e are
// appended in edge order. Pieces of a labelled edge `x` are `x_1..x_p`.
inline Subdivision apply_subdivision(Graph const& g, SubdivisionPlan plan) {
  if (plan.per_edge_pieces.size() != g.edge_count()) throw DomainError("plan does not match graph");
  std::size_t extra = 0;
  for (auto p : plan.per_edge_pieces) {
    if (p == 0) throw DomainError("subdivision factor must be positive");
    extra += p - 1;
  }
  Subdivision s{Graph(g.vertex_count() + extra), std::move(plan), {}};
  for (VertexId v = 0; v < g.vertex_count(); ++v)
    if (g.has_vertex_label(v)) s.graph.set_vertex_label(v, g.vertex_label(v));
  auto next = static_cast<VertexId>(g.vertex_count());
  for (EdgeId e = 0; e < g.edge_count(); ++e) {
    auto const& ed = g.edge(e);
    auto pieces = s.plan.per_edge_pieces[e];
    auto label = [&](std::size_t i) {
      if (!g.has_edge_label(e)) return std::string{};
      return pieces == 1 ? g.edge_label(e) : g.edge_label(e) + "_" + std::to_string(i + 1);
    };
    VertexId prev = ed.lo();
    for (std::size_t i = 0; i + 1 < pieces; ++i, ++next) {
      s.graph.add_edge(prev, next, label(i));
      s.origin.push_back(e);
      prev = next;
    }
    s.graph.add_edge(prev, ed.hi(), label(pieces - 1));
    s.origin.push_back(e);
  }
  return s;
}

// Iterative repair: start from factor 1 everywhere and bump the factor of
// every original edge on a violating path or cycle, never past n (uniform
// factor n always satisfies the criterion when an edge exists).
inline Subdivision subdivide_for(Graph const& g, std::size_t n) {
  if (n < 1) throw DomainError("token count must be at least 1");
  SubdivisionPlan plan{std::vector<std::size_t>(g.edge_count(), 1), n};
  for (;;) {
    auto s = apply_subdivision(g, plan);
    auto check = is_sufficiently_subdivided(s.graph, n);
    if (check.ok) return s;
    std::set<EdgeId> bump;
    for (auto const& v : check.violations) {
      if (v.kind == ViolationKind::too_few_vertices) {
        for (EdgeId e = 0; e < g.edge_count(); ++e) bump.insert(e);
      } else {
        for (auto e : v.witness) bump.insert(s.origin[e]);
      }
    }
    bool progressed = false;
    for (auto e : bump) {
      if (plan.per_edge_pieces[e] < n) {
        ++plan.per_edge_pieces[e];
        progressed = true;
      }
    }
    if (!progressed)
      throw DomainError("no subdivision fits " + std::to_string(n) + " tokens: graph has " +
                        std::to_string(g.vertex_count()) + " vertices and no edges");
  }
}

}  // namespace gbraid
