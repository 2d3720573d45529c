#pragma once

// The Crisp-Wiest map from C_n(G) to the Salvetti complex of A_Delta.
//
// All 0-cells go to the single vertex; a 1-cell moving a token along edge
// e, traversed tail -> head, goes to the loop of generator e. The Salvetti
// complex is never built: the local isometry conditions are checked at
// each 0-cell against the commutation graph directly.

#include <algorithm>
#include <deque>
#include <limits>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "gbraid/cube_complex.hpp"
#include "gbraid/error.hpp"
#include "gbraid/graph.hpp"
#include "gbraid/raag.hpp"

namespace gbraid {

// Non-owning: the complex and the commutation graph must outlive the map.
class CubicalMap {
 public:
  CubicalMap(CubeComplex const& c, CommutationGraph const& d, std::vector<Letter> assignment)
      : complex_(&c), target_(&d), assignment_(std::move(assignment)) {}

  CubeComplex const& complex() const noexcept { return *complex_; }
  CommutationGraph const& target() const noexcept { return *target_; }

  // Label of 1-cell i traversed in its own direction (tail-facet to head-facet).
  Letter label(std::size_t one_cell) const { return assignment_.at(one_cell); }
  std::size_t size() const noexcept { return assignment_.size(); }

 private:
  CubeComplex const* complex_;
  CommutationGraph const* target_;
  std::vector<Letter> assignment_;
};

inline CubicalMap build_cw_map(CubeComplex const& c, CommutationGraph const& d) {
  if (!(c.source() == d.origin())) throw DomainError("complex and commutation graph come from different graphs");
  std::vector<Letter> assignment;
  assignment.reserve(c.count(1));
  auto const ew = c.edge_words();
  auto moving = [&](std::uint64_t const* row) {
    std::vector<Gen> edges;
    for (std::size_t w = 0; w < ew; ++w)
      for (auto bits = row[w]; bits; bits &= bits - 1) edges.push_back(static_cast<Gen>(w * 64 + std::countr_zero(bits)));
    return edges;
  };
  for (std::size_t i = 0; i < c.count(1); ++i) assignment.push_back({moving(c.packed(1, i))[0], false});
  // Every cube must land on a torus of the Salvetti complex.
  for (std::size_t k = 2; k < c.grades(); ++k)
    for (std::size_t i = 0; i < c.count(k); ++i) {
      auto gens = moving(c.packed(k, i));
      for (std::size_t a = 0; a < gens.size(); ++a)
        for (std::size_t b = a + 1; b < gens.size(); ++b)
          if (!d.adjacent(gens[a], gens[b]))
            throw DomainError("cube " + format_cell(c.cell(k, i)) + " maps to non-commuting generators");
    }
  return CubicalMap(c, d, std::move(assignment));
}

// ---------------------------------------------------------------------------
// Local isometry

enum class IsometryFailure { duplicate_label, missing_corner };

struct IsometryViolation {
  IsometryFailure kind;
  std::size_t zero_cell;
  std::vector<Letter> labels;  // germ labels involved
};

struct LocalIsometryResult {
  bool ok = true;
  std::optional<IsometryViolation> violation;
  explicit operator bool() const noexcept { return ok; }
};

// At every 0-cell: the outgoing germs carry distinct signed generators
// (injectivity on links), and every set of germs whose generators pairwise
// commute spans a cube of the complex (the link image is full). The first
// violation in 0-cell order is reported.
inline LocalIsometryResult check_local_isometry(CubicalMap const& m) {
  auto const& c = m.complex();
  auto const& d = m.target();
  auto const& g = c.source();
  LocalIsometryResult r;
  for (std::size_t v = 0; v < c.count(0); ++v) {
    Corner corner(c, v);
    auto const& germs = corner.germs();
    std::vector<Letter> labels;
    for (std::size_t i = 0; i < germs.size(); ++i) {
      auto base = m.label(corner.germ_cells()[i]);
      // Leaving v along the 1-cell backwards when the token sits at the head.
      labels.push_back(germs[i].from == g.edge(germs[i].edge).tail ? base : base.inverse());
    }
    for (std::size_t i = 0; i < labels.size(); ++i)
      for (std::size_t j = i + 1; j < labels.size(); ++j)
        if (labels[i] == labels[j]) {
          r.ok = false;
          r.violation = IsometryViolation{IsometryFailure::duplicate_label, v, {labels[i], labels[j]}};
          return r;
        }
    detail::for_each_clique(
        labels.size(),
        [&](std::size_t a, std::size_t b) {
          return labels[a].gen != labels[b].gen && d.adjacent(labels[a].gen, labels[b].gen);
        },
        [&](std::vector<std::size_t> const& s) {
          if (corner.find_cube(s)) return true;
          std::vector<Letter> involved;
          for (auto i : s) involved.push_back(labels[i]);
          r.ok = false;
          r.violation = IsometryViolation{IsometryFailure::missing_corner, v, std::move(involved)};
          return false;
        });
    if (!r.ok) return r;
  }
  return r;
}

// ---------------------------------------------------------------------------
// Path lifting

struct LiftResult {
  bool ok = true;
  std::size_t failed_at = 0;                   // letter index when !ok
  std::vector<VertexId> end;                   // sorted token positions
  std::vector<Cell> path;                      // 1-cells traversed
  bool closed = false;                         // ok and back at the start
};

// Lifts a word to an edge path of C_n(G) starting at a configuration: each
// letter x^(+1) slides the token on tail(x) to head(x), x^-1 the reverse.
// The lift exists iff every move finds its token and an empty target.
inline LiftResult lift_word(Graph const& g, std::vector<VertexId> start, Word const& w) {
  std::sort(start.begin(), start.end());
  std::vector<char> occ(g.vertex_count(), 0);
  for (auto v : start) {
    if (v >= g.vertex_count() || occ[v]) throw DomainError("basepoint is not a configuration");
    occ[v] = 1;
  }
  LiftResult r;
  for (std::size_t i = 0; i < w.size(); ++i) {
    if (w[i].gen >= g.edge_count()) throw DomainError("letter is not an edge of the graph");
    auto const& ed = g.edge(w[i].gen);
    auto from = w[i].inv ? ed.head : ed.tail;
    auto to = w[i].inv ? ed.tail : ed.head;
    if (!occ[from] || occ[to]) {
      r.ok = false;
      r.failed_at = i;
      break;
    }
    occ[from] = 0;
    Cell one{{w[i].gen}, {}};
    for (VertexId v = 0; v < g.vertex_count(); ++v)
      if (occ[v]) one.parked_vertices.push_back(v);
    r.path.push_back(std::move(one));
    occ[to] = 1;
  }
  for (VertexId v = 0; v < g.vertex_count(); ++v)
    if (occ[v]) r.end.push_back(v);
  r.closed = r.ok && r.end == start;
  return r;
}

inline bool is_loop_word(Graph const& g, std::vector<VertexId> const& basepoint, Word const& w) {
  return lift_word(g, basepoint, w).closed;
}

// ---------------------------------------------------------------------------
// Fundamental group generators

struct LoopWord {
  std::size_t basepoint;                  // 0-cell index
  Word word;                              // unreduced edge-path word
  std::vector<std::size_t> witness_path;  // 1-cell indices in order
};

// One loop per non-tree 1-cell of a breadth-first spanning tree rooted at
// the basepoint; neighbours are visited in 1-cell index order.
inline std::vector<LoopWord> pi1_generators(CubicalMap const& m, std::size_t basepoint) {
  auto const& c = m.complex();
  if (basepoint >= c.count(0)) throw DomainError("basepoint is not a 0-cell");
  auto const nv = c.count(0), ne = c.count(1);
  std::vector<std::pair<std::size_t, std::size_t>> ends(ne);
  std::vector<std::vector<std::size_t>> incident(nv);
  for (std::size_t i = 0; i < ne; ++i) {
    ends[i] = edge_endpoints(c, i);
    incident[ends[i].first].push_back(i);
    incident[ends[i].second].push_back(i);
  }
  constexpr auto none = std::numeric_limits<std::size_t>::max();
  std::vector<std::size_t> parent(nv, none);
  std::vector<char> seen(nv, 0), tree(ne, 0);
  std::deque<std::size_t> queue{basepoint};
  seen[basepoint] = 1;
  while (!queue.empty()) {
    auto v = queue.front();
    queue.pop_front();
    for (auto e : incident[v]) {
      auto w = ends[e].first == v ? ends[e].second : ends[e].first;
      if (seen[w]) continue;
      seen[w] = 1;
      parent[w] = e;
      tree[e] = 1;
      queue.push_back(w);
    }
  }
  if (std::find(seen.begin(), seen.end(), 0) != seen.end())
    throw DomainError("complex is disconnected; loops generate only the basepoint component");

  // Path from the basepoint to v as (1-cell, forward?) steps.
  auto path_to = [&](std::size_t v) {
    std::vector<std::pair<std::size_t, bool>> steps;
    while (v != basepoint) {
      auto e = parent[v];
      bool forward = ends[e].second == v;  // arrived at the head side
      steps.emplace_back(e, forward);
      v = forward ? ends[e].first : ends[e].second;
    }
    std::reverse(steps.begin(), steps.end());
    return steps;
  };

  std::vector<LoopWord> loops;
  for (std::size_t e = 0; e < ne; ++e) {
    if (tree[e]) continue;
    LoopWord lw{basepoint, {}, {}};
    auto push = [&](std::size_t cell, bool forward) {
      auto l = m.label(cell);
      lw.word.push_back(forward ? l : l.inverse());
      lw.witness_path.push_back(cell);
    };
    for (auto [cell, fwd] : path_to(ends[e].first)) push(cell, fwd);
    push(e, true);
    auto back = path_to(ends[e].second);
    for (auto it = back.rbegin(); it != back.rend(); ++it) push(it->first, !it->second);
    loops.push_back(std::move(lw));
  }
  return loops;
}

// The 0-cell whose parked vertices are exactly `tokens`.
inline std::size_t basepoint_for(CubeComplex const& c, std::vector<VertexId> tokens) {
  std::sort(tokens.begin(), tokens.end());
  if (std::adjacent_find(tokens.begin(), tokens.end()) != tokens.end())
    throw DomainError("placement puts two tokens on one vertex");
  if (tokens.size() != c.tokens()) throw DomainError("placement has the wrong number of tokens");
  for (auto v : tokens)
    if (v >= c.source().vertex_count()) throw DomainError("placement vertex out of range");
  auto idx = c.find(Cell{{}, tokens});
  if (!idx) throw DomainError("placement is not a 0-cell of the complex");
  return *idx;
}

}  // namespace gbraid
