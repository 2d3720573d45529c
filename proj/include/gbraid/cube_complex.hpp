#pragma once

// The unordered discretized configuration space C_n(G) as a cube complex.
//
// A k-cube is a set of k pairwise disjoint closed edges (the tokens in
// motion) together with n-k vertices that avoid those edges and each other
// (the parked tokens). Cells are stored per dimension as packed bitmasks,
// sorted in canonical order: lexicographic on (moving edges, parked
// vertices) viewed as sorted index lists.

#include <algorithm>
#include <bit>
#include <cstdint>
#include <functional>
#include <map>
#include <numeric>
#include <optional>
#include <ostream>
#include <set>
#include <span>
#include <sstream>
#include <string>
#include <vector>

#include "gbraid/error.hpp"
#include "gbraid/graph.hpp"

namespace gbraid {

struct Cell {
  std::vector<EdgeId> moving_edges;       // sorted
  std::vector<VertexId> parked_vertices;  // sorted

  std::size_t dimension() const noexcept { return moving_edges.size(); }
  std::size_t tokens() const noexcept { return moving_edges.size() + parked_vertices.size(); }

  friend auto operator<=>(Cell const&, Cell const&) = default;
  friend bool operator==(Cell const&, Cell const&) = default;
};

inline std::string format_cell(Cell const& c) {
  std::ostringstream out;
  out << "cell " << c.dimension() << " edges=";
  for (std::size_t i = 0; i < c.moving_edges.size(); ++i) out << (i ? "," : "") << c.moving_edges[i];
  out << " verts=";
  for (std::size_t i = 0; i < c.parked_vertices.size(); ++i) out << (i ? "," : "") << c.parked_vertices[i];
  return out.str();
}

// Facet of `c` obtained by replacing moving edge number `i` with its tail
// (head = false) or head (head = true).
inline Cell facet(Graph const& g, Cell const& c, std::size_t i, bool head) {
  Cell f;
  f.moving_edges = c.moving_edges;
  auto e = f.moving_edges[i];
  f.moving_edges.erase(f.moving_edges.begin() + static_cast<std::ptrdiff_t>(i));
  f.parked_vertices = c.parked_vertices;
  auto const& ed = g.edge(e);
  auto v = head ? ed.head : ed.tail;
  f.parked_vertices.insert(std::lower_bound(f.parked_vertices.begin(), f.parked_vertices.end(), v), v);
  return f;
}

// Checks the cell invariants against g and n.
inline bool is_valid_cell(Graph const& g, std::size_t n, Cell const& c) {
  if (c.tokens() != n) return false;
  if (!std::is_sorted(c.moving_edges.begin(), c.moving_edges.end()) ||
      !std::is_sorted(c.parked_vertices.begin(), c.parked_vertices.end()))
    return false;
  std::vector<char> used(g.vertex_count(), 0);
  for (auto e : c.moving_edges) {
    if (e >= g.edge_count()) return false;
    auto const& ed = g.edge(e);
    if (used[ed.tail] || used[ed.head]) return false;
    used[ed.tail] = used[ed.head] = 1;
  }
  for (auto v : c.parked_vertices) {
    if (v >= g.vertex_count() || used[v]) return false;
    used[v] = 1;
  }
  return true;
}

namespace detail {

inline std::size_t words_for(std::size_t bits) { return (bits + 63) / 64; }

// Equal-cardinality sets: A < B in sorted-list lex order iff the least
// element of the symmetric difference belongs to A.
inline int compare_masks(std::uint64_t const* a, std::uint64_t const* b, std::size_t words) {
  for (std::size_t i = 0; i < words; ++i) {
    auto x = a[i] ^ b[i];
    if (x) return (a[i] >> std::countr_zero(x)) & 1u ? -1 : 1;
  }
  return 0;
}

}  // namespace detail

// Fixed-stride table of packed cells of one dimension.
class CellTable {
 public:
  CellTable() = default;
  CellTable(std::size_t edge_words, std::size_t vertex_words)
      : edge_words_(edge_words), vertex_words_(vertex_words) {}

  std::size_t size() const noexcept { return stride() ? data_.size() / stride() : 0; }
  std::size_t stride() const noexcept { return edge_words_ + vertex_words_; }
  std::size_t edge_words() const noexcept { return edge_words_; }

  std::uint64_t const* row(std::size_t i) const { return data_.data() + i * stride(); }
  void push(std::span<std::uint64_t const> key) { data_.insert(data_.end(), key.begin(), key.end()); }

  int compare(std::uint64_t const* a, std::uint64_t const* b) const {
    if (int c = detail::compare_masks(a, b, edge_words_)) return c;
    return detail::compare_masks(a + edge_words_, b + edge_words_, vertex_words_);
  }

  void sort() {
    std::vector<std::size_t> order(size());
    std::iota(order.begin(), order.end(), std::size_t{0});
    std::sort(order.begin(), order.end(),
              [&](std::size_t x, std::size_t y) { return compare(row(x), row(y)) < 0; });
    std::vector<std::uint64_t> sorted;
    sorted.reserve(data_.size());
    for (auto i : order) sorted.insert(sorted.end(), row(i), row(i) + stride());
    data_ = std::move(sorted);
  }

  std::optional<std::size_t> find(std::uint64_t const* key) const {
    std::size_t lo = 0, hi = size();
    while (lo < hi) {
      auto mid = lo + (hi - lo) / 2;
      int c = compare(row(mid), key);
      if (c == 0) return mid;
      if (c < 0) lo = mid + 1;
      else hi = mid;
    }
    return std::nullopt;
  }

  void erase(std::size_t i) {
    auto first = data_.begin() + static_cast<std::ptrdiff_t>(i * stride());
    data_.erase(first, first + static_cast<std::ptrdiff_t>(stride()));
  }

 private:
  std::size_t edge_words_ = 0;
  std::size_t vertex_words_ = 0;
  std::vector<std::uint64_t> data_;
};

class CubeComplex {
 public:
  CubeComplex(Graph source, std::size_t n)
      : source_(std::move(source)),
        n_(n),
        edge_words_(detail::words_for(source_.edge_count())),
        vertex_words_(detail::words_for(source_.vertex_count())) {}

  Graph const& source() const noexcept { return source_; }
  std::size_t tokens() const noexcept { return n_; }

  // True when the source graph passed the subdivision criterion, i.e. the
  // complex is a deformation retract of the topological configuration space.
  bool models_configuration_space() const noexcept { return faithful_; }
  void set_models_configuration_space(bool f) noexcept { faithful_ = f; }

  std::size_t grades() const noexcept { return tables_.size(); }
  std::size_t count(std::size_t dim) const { return dim < tables_.size() ? tables_[dim].size() : 0; }
  std::size_t total_cells() const {
    std::size_t t = 0;
    for (auto const& tb : tables_) t += tb.size();
    return t;
  }

  Cell cell(std::size_t dim, std::size_t index) const { return unpack(tables_.at(dim).row(index)); }

  std::optional<std::size_t> find(Cell const& c) const {
    auto d = c.dimension();
    if (d >= tables_.size() || c.tokens() != n_) return std::nullopt;
    auto key = pack(c);
    return tables_[d].find(key.data());
  }
  std::optional<std::size_t> find_packed(std::size_t dim, std::uint64_t const* key) const {
    if (dim >= tables_.size()) return std::nullopt;
    return tables_[dim].find(key);
  }
  std::uint64_t const* packed(std::size_t dim, std::size_t index) const { return tables_.at(dim).row(index); }
  std::size_t edge_words() const noexcept { return edge_words_; }
  std::size_t vertex_words() const noexcept { return vertex_words_; }

  std::vector<std::uint64_t> pack(Cell const& c) const {
    std::vector<std::uint64_t> key(edge_words_ + vertex_words_, 0);
    for (auto e : c.moving_edges) key[e / 64] |= std::uint64_t{1} << (e % 64);
    for (auto v : c.parked_vertices) key[edge_words_ + v / 64] |= std::uint64_t{1} << (v % 64);
    return key;
  }

  Cell unpack(std::uint64_t const* key) const {
    Cell c;
    for (std::size_t w = 0; w < edge_words_; ++w)
      for (auto bits = key[w]; bits; bits &= bits - 1)
        c.moving_edges.push_back(static_cast<EdgeId>(w * 64 + std::countr_zero(bits)));
    for (std::size_t w = 0; w < vertex_words_; ++w)
      for (auto bits = key[edge_words_ + w]; bits; bits &= bits - 1)
        c.parked_vertices.push_back(static_cast<VertexId>(w * 64 + std::countr_zero(bits)));
    return c;
  }

  // Low-level construction; callers must call finalize() afterwards.
  void add_packed(std::size_t dim, std::span<std::uint64_t const> key) {
    while (tables_.size() <= dim) tables_.emplace_back(edge_words_, vertex_words_);
    tables_[dim].push(key);
  }
  void add(Cell const& c) {
    if (!is_valid_cell(source_, n_, c)) throw DomainError("invalid cell: " + format_cell(c));
    add_packed(c.dimension(), pack(c));
  }
  void finalize() {
    for (auto& t : tables_) t.sort();
    while (!tables_.empty() && tables_.back().size() == 0) tables_.pop_back();
  }

  // Drops one cell, leaving the complex possibly not closed under faces.
  // Used to construct counterexamples.
  void remove_cell(std::size_t dim, std::size_t index) {
    tables_.at(dim).erase(index);
    while (!tables_.empty() && tables_.back().size() == 0) tables_.pop_back();
  }

 private:
  Graph source_;
  std::size_t n_;
  std::size_t edge_words_;
  std::size_t vertex_words_;
  bool faithful_ = false;
  std::vector<CellTable> tables_;
};

struct BuildOptions {
  // Build even when the graph fails the subdivision criterion; the complex
  // is combinatorially well defined for any graph.
  bool allow_unsubdivided = false;
};

// Enumerates independent edge sets by backtracking over edge indices, then
// every choice of parked vertices among the untouched ones.
inline CubeComplex build_config_complex(Graph const& g, std::size_t n, BuildOptions opts = {}) {
  if (n < 1) throw DomainError("token count must be at least 1");
  CubeComplex c(g, n);
  if (n > g.vertex_count()) {
    c.finalize();
    return c;
  }
  bool faithful = is_sufficiently_subdivided(g, n).ok;
  if (!faithful && !opts.allow_unsubdivided)
    throw DomainError("graph is not sufficiently subdivided for n = " + std::to_string(n) +
                      " (subdivide first or pass the override)");
  c.set_models_configuration_space(faithful);

  auto const ew = c.edge_words();
  std::vector<std::uint64_t> key(ew + c.vertex_words(), 0);
  std::vector<char> used(g.vertex_count(), 0);
  std::vector<VertexId> free_vertices;

  auto emit_parked = [&](std::size_t k) {
    free_vertices.clear();
    for (VertexId v = 0; v < g.vertex_count(); ++v)
      if (!used[v]) free_vertices.push_back(v);
    auto need = n - k;
    if (free_vertices.size() < need) return;
    std::vector<std::size_t> pick(need);
    std::iota(pick.begin(), pick.end(), std::size_t{0});
    for (;;) {
      for (auto i : pick) key[ew + free_vertices[i] / 64] |= std::uint64_t{1} << (free_vertices[i] % 64);
      c.add_packed(k, key);
      for (auto i : pick) key[ew + free_vertices[i] / 64] &= ~(std::uint64_t{1} << (free_vertices[i] % 64));
      std::size_t j = need;
      while (j > 0 && pick[j - 1] == free_vertices.size() - need + (j - 1)) --j;
      if (j == 0) break;
      ++pick[j - 1];
      for (auto t = j; t < need; ++t) pick[t] = pick[t - 1] + 1;
    }
  };

  std::function<void(EdgeId, std::size_t)> extend = [&](EdgeId from, std::size_t k) {
    emit_parked(k);
    if (k == n) return;
    for (EdgeId e = from; e < g.edge_count(); ++e) {
      auto const& ed = g.edge(e);
      if (used[ed.tail] || used[ed.head]) continue;
      used[ed.tail] = used[ed.head] = 1;
      key[e / 64] |= std::uint64_t{1} << (e % 64);
      extend(e + 1, k + 1);
      key[e / 64] &= ~(std::uint64_t{1} << (e % 64));
      used[ed.tail] = used[ed.head] = 0;
    }
  };
  extend(0, 0);
  c.finalize();
  return c;
}

// Cell counts in dimensions 0..n; trailing zeros are kept.
inline std::vector<std::size_t> f_vector(CubeComplex const& c) {
  std::vector<std::size_t> f(std::max(c.grades(), c.tokens() + 1));
  for (std::size_t d = 0; d < f.size(); ++d) f[d] = c.count(d);
  return f;
}

inline long long euler_characteristic(CubeComplex const& c) {
  long long chi = 0;
  for (std::size_t d = 0; d < c.grades(); ++d)
    chi += (d % 2 ? -1LL : 1LL) * static_cast<long long>(c.count(d));
  return chi;
}

// Top nonempty grade; -1 for the empty complex.
inline int dimension(CubeComplex const& c) { return static_cast<int>(c.grades()) - 1; }

inline void dump_complex(std::ostream& out, CubeComplex const& c) {
  for (std::size_t d = 0; d < c.grades(); ++d)
    for (std::size_t i = 0; i < c.count(d); ++i) out << format_cell(c.cell(d, i)) << '\n';
}

// ---------------------------------------------------------------------------
// 1-skeleton

// Endpoints (tail-side, head-side) of 1-cell `index` as 0-cell indices.
// Throws if the complex is not closed under faces.
inline std::pair<std::size_t, std::size_t> edge_endpoints(CubeComplex const& c, std::size_t index) {
  auto const& g = c.source();
  auto const* row = c.packed(1, index);
  std::vector<std::uint64_t> key(row, row + c.edge_words() + c.vertex_words());
  EdgeId e = 0;
  for (std::size_t w = 0; w < c.edge_words(); ++w)
    if (key[w]) {
      e = static_cast<EdgeId>(w * 64 + std::countr_zero(key[w]));
      key[w] = 0;
      break;
    }
  auto locate = [&](VertexId v) {
    auto k = key;
    k[c.edge_words() + v / 64] |= std::uint64_t{1} << (v % 64);
    auto found = c.find_packed(0, k.data());
    if (!found) throw DomainError("complex is not closed under faces");
    return *found;
  };
  return {locate(g.edge(e).tail), locate(g.edge(e).head)};
}

class DisjointSets {
 public:
  explicit DisjointSets(std::size_t n) : parent_(n) { std::iota(parent_.begin(), parent_.end(), std::size_t{0}); }
  std::size_t find(std::size_t x) {
    while (parent_[x] != x) x = parent_[x] = parent_[parent_[x]];
    return x;
  }
  bool unite(std::size_t a, std::size_t b) {
    a = find(a);
    b = find(b);
    if (a == b) return false;
    parent_[std::max(a, b)] = std::min(a, b);
    return true;
  }

 private:
  std::vector<std::size_t> parent_;
};

inline std::size_t components(CubeComplex const& c) {
  auto v = c.count(0);
  DisjointSets ds(v);
  std::size_t comps = v;
  for (std::size_t i = 0; i < c.count(1); ++i) {
    auto [a, b] = edge_endpoints(c, i);
    if (ds.unite(a, b)) --comps;
  }
  return comps;
}

// ---------------------------------------------------------------------------
// Vertex links

namespace detail {

// Enumerates subsets of {0..count-1} that are cliques of `adjacent`, in
// lexicographic order, calling visit(subset) for each of size >= 2. Stops
// when visit returns false.
template <typename Adjacent, typename Visit>
void for_each_clique(std::size_t count, Adjacent adjacent, Visit visit) {
  std::vector<std::size_t> current;
  std::function<bool(std::size_t)> rec = [&](std::size_t from) -> bool {
    for (auto i = from; i < count; ++i) {
      bool ok = std::all_of(current.begin(), current.end(), [&](std::size_t j) { return adjacent(j, i); });
      if (!ok) continue;
      current.push_back(i);
      if (current.size() >= 2 && !visit(current)) return false;
      if (!rec(i + 1)) return false;
      current.pop_back();
    }
    return true;
  };
  rec(0);
}

}  // namespace detail

// A token sliding along a Graph edge out of a 0-cell.
struct Germ {
  EdgeId edge;
  VertexId from;
  VertexId to;
};

// The stored 1-cells at a 0-cell, with lookup of the cube a set of them
// spans. Works on packed keys.
class Corner {
 public:
  Corner(CubeComplex const& c, std::size_t zero_cell) : c_(&c) {
    if (zero_cell >= c.count(0)) throw DomainError("not a 0-cell of the complex");
    auto const* row = c.packed(0, zero_cell);
    key_.assign(row, row + c.edge_words() + c.vertex_words());
    auto const& g = c.source();
    auto occupied = [&](VertexId v) { return (key_[c.edge_words() + v / 64] >> (v % 64)) & 1u; };
    std::vector<Germ> all;
    for (std::size_t w = 0; w < c.vertex_words(); ++w)
      for (auto bits = key_[c.edge_words() + w]; bits; bits &= bits - 1) {
        auto p = static_cast<VertexId>(w * 64 + std::countr_zero(bits));
        for (auto e : g.incident(p)) {
          auto q = g.other_end(e, p);
          if (!occupied(q)) all.push_back({e, p, q});
        }
      }
    std::sort(all.begin(), all.end(), [](Germ const& a, Germ const& b) { return a.edge < b.edge; });
    for (auto const& gm : all) {
      std::size_t idx = germs_.size();
      germs_.push_back(gm);
      if (auto cell = find_cube({idx})) {
        cells_.push_back(*cell);
      } else {
        germs_.pop_back();
      }
    }
  }

  std::vector<Germ> const& germs() const noexcept { return germs_; }
  std::vector<std::size_t> const& germ_cells() const noexcept { return cells_; }

  bool disjoint(std::size_t a, std::size_t b) const {
    auto const& g = c_->source();
    return !g.edge(germs_[a].edge).meets(g.edge(germs_[b].edge));
  }

  // Index of the stored cube at this corner spanned by the given germs.
  std::optional<std::size_t> find_cube(std::vector<std::size_t> const& subset) const {
    scratch_ = key_;
    auto const ew = c_->edge_words();
    for (auto i : subset) {
      auto const& gm = germs_[i];
      scratch_[ew + gm.from / 64] &= ~(std::uint64_t{1} << (gm.from % 64));
      scratch_[gm.edge / 64] |= std::uint64_t{1} << (gm.edge % 64);
    }
    return c_->find_packed(subset.size(), scratch_.data());
  }

 private:
  CubeComplex const* c_;
  std::vector<std::uint64_t> key_;
  std::vector<Germ> germs_;
  std::vector<std::size_t> cells_;
  mutable std::vector<std::uint64_t> scratch_;
};

// Abstract simplicial complex on the 1-cells incident to a 0-cell: one
// simplex per stored cube having the 0-cell as a corner. Simplices list
// indices into `germs`.
struct SimplicialComplex {
  std::vector<std::size_t> germs;  // 1-cell indices
  std::vector<EdgeId> germ_edges;  // moving Graph edge of each germ
  std::set<std::vector<std::size_t>> simplices;

  bool has_edge(std::size_t a, std::size_t b) const {
    return simplices.count({std::min(a, b), std::max(a, b)}) > 0;
  }
};

inline SimplicialComplex vertex_link(CubeComplex const& c, std::size_t zero_cell) {
  Corner corner(c, zero_cell);
  SimplicialComplex link;
  link.germs = corner.germ_cells();
  for (auto const& gm : corner.germs()) link.germ_edges.push_back(gm.edge);
  for (std::size_t i = 0; i < link.germs.size(); ++i) link.simplices.insert({i});
  // Any cube at the corner is spanned by germs with pairwise disjoint edges.
  detail::for_each_clique(
      link.germs.size(), [&](std::size_t a, std::size_t b) { return corner.disjoint(a, b); },
      [&](std::vector<std::size_t> const& s) {
        if (corner.find_cube(s)) link.simplices.insert(s);
        return true;
      });
  return link;
}

struct NpcResult {
  bool ok = true;
  std::optional<std::size_t> failing_vertex;
  std::vector<std::size_t> missing_simplex;  // germ indices in that link
  explicit operator bool() const noexcept { return ok; }
};

// Gromov's link condition: every vertex link is flag.
inline NpcResult npc_check(CubeComplex const& c) {
  NpcResult r;
  for (std::size_t v = 0; v < c.count(0); ++v) {
    auto link = vertex_link(c, v);
    detail::for_each_clique(
        link.germs.size(), [&](std::size_t a, std::size_t b) { return link.has_edge(a, b); },
        [&](std::vector<std::size_t> const& s) {
          if (link.simplices.count(s)) return true;
          r.ok = false;
          r.failing_vertex = v;
          r.missing_simplex = s;
          return false;
        });
    if (!r.ok) return r;
  }
  return r;
}

}  // namespace gbraid
