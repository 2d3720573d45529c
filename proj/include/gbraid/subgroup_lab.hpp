#pragma once

// Executable constructions behind the product-of-free-groups and
// topological complexity results: token placement, local free factors,
// the F_2^m witness, disjoint cyclic pairs, and the certificate chain
//
//   H0, H1 < B_n(G) < A_Delta          (subgroup rule)
//   A_Delta retracts onto A_x           (retraction rule)
//   A_x = prod_v A(v)                   (product rule)
//   <C0(v)>, <C1(v)> disjoint in A(v)   (leaves, decided by roots)
//
// Leaf decision: two nontrivial cyclic subgroups <u>, <w> of a RAAG have
// disjoint conjugates iff the primitive root of u is not conjugate to the
// primitive root of w or its inverse. This rests on uniqueness of roots in
// RAAGs, an external fact.

#include <algorithm>
#include <array>
#include <deque>
#include <map>
#include <optional>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "gbraid/crisp_wiest.hpp"
#include "gbraid/error.hpp"
#include "gbraid/graph.hpp"
#include "gbraid/homology.hpp"
#include "gbraid/raag.hpp"

namespace gbraid {

// ---------------------------------------------------------------------------
// Token placement

enum class TokenRole { serving, filler };

struct ParkedToken {
  VertexId vertex;
  TokenRole role;
  std::optional<VertexId> near_vertex;  // essential vertex served
};

struct TokenPlacement {
  std::vector<ParkedToken> tokens;

  std::vector<VertexId> parked() const {
    std::vector<VertexId> v;
    for (auto const& t : tokens) v.push_back(t.vertex);
    std::sort(v.begin(), v.end());
    return v;
  }
  std::vector<VertexId> serving(VertexId essential) const {
    std::vector<VertexId> v;
    for (auto const& t : tokens)
      if (t.near_vertex == essential) v.push_back(t.vertex);
    return v;
  }
};

// Arms of a degree-3 vertex: inner edge v-mid, outer edge mid-leaf. Sorted
// by the index of the distance-2 vertex.
struct TripodArms {
  VertexId center;
  std::array<VertexId, 3> mid;
  std::array<VertexId, 3> leaf;
  std::array<EdgeId, 3> inner;
  std::array<EdgeId, 3> outer;
};

inline TripodArms tripod_arms(Graph const& g, VertexId v) {
  if (g.degree(v) != 3) throw DomainError("vertex " + std::to_string(v) + " does not have degree 3");
  struct Arm {
    VertexId mid, leaf;
    EdgeId inner, outer;
  };
  std::vector<Arm> arms;
  for (auto e : g.incident(v)) {
    auto m = g.other_end(e, v);
    if (g.degree(m) != 2)
      throw DomainError("insufficient room: neighbour " + std::to_string(m) + " of degree-3 vertex " +
                        std::to_string(v) + " does not have degree 2");
    auto inc = g.incident(m);
    auto f = inc[0] == e ? inc[1] : inc[0];
    arms.push_back({m, g.other_end(f, m), e, f});
  }
  std::sort(arms.begin(), arms.end(), [](Arm const& a, Arm const& b) { return a.leaf < b.leaf; });
  TripodArms t{v, {}, {}, {}, {}};
  for (std::size_t i = 0; i < 3; ++i) {
    t.mid[i] = arms[i].mid;
    t.leaf[i] = arms[i].leaf;
    t.inner[i] = arms[i].inner;
    t.outer[i] = arms[i].outer;
  }
  return t;
}

// Edges at a vertex of degree >= 4, ordered by neighbour index. The first
// two neighbours hold the serving tokens.
inline std::vector<EdgeId> star_arms(Graph const& g, VertexId v) {
  std::vector<EdgeId> es(g.incident(v).begin(), g.incident(v).end());
  std::sort(es.begin(), es.end(), [&](EdgeId a, EdgeId b) { return g.other_end(a, v) < g.other_end(b, v); });
  return es;
}

namespace detail {

// Vertices the local words of an essential vertex pass through.
inline std::vector<VertexId> local_zone(Graph const& g, VertexId v) {
  std::vector<VertexId> zone{v};
  if (g.degree(v) == 3) {
    auto t = tripod_arms(g, v);
    zone.insert(zone.end(), t.mid.begin(), t.mid.end());
    zone.insert(zone.end(), t.leaf.begin(), t.leaf.end());
  } else {
    for (auto e : g.incident(v)) zone.push_back(g.other_end(e, v));
  }
  return zone;
}

}  // namespace detail

// Two tokens next to each vertex of degree >= 4, three tokens two steps
// from each degree-3 vertex on distinct arms, and the remaining tokens on
// the vertices farthest from all essential vertices (ties: lower index).
inline TokenPlacement place_basepoint(Graph const& g, std::size_t n) {
  auto prof = degree_profile(g);
  if (n < prof.threshold())
    throw DomainError("n = " + std::to_string(n) + " is below 2m+m3 = " + std::to_string(prof.threshold()));
  if (!is_sufficiently_subdivided(g, n)) throw DomainError("graph is not sufficiently subdivided for n");

  TokenPlacement p;
  std::vector<int> owner(g.vertex_count(), -1);
  auto claim = [&](VertexId x, VertexId v) {
    if (owner[x] >= 0 && owner[x] != static_cast<int>(v))
      throw DomainError("insufficient room: neighbourhoods of essential vertices " + std::to_string(owner[x]) +
                        " and " + std::to_string(v) + " overlap");
    owner[x] = static_cast<int>(v);
  };
  for (auto v : prof.essential_vertices) {
    for (auto x : detail::local_zone(g, v)) claim(x, v);
    if (g.degree(v) == 3) {
      auto t = tripod_arms(g, v);
      for (auto l : t.leaf) p.tokens.push_back({l, TokenRole::serving, v});
    } else {
      auto arms = star_arms(g, v);
      for (std::size_t i = 0; i < 2; ++i) p.tokens.push_back({g.other_end(arms[i], v), TokenRole::serving, v});
    }
  }

  std::vector<std::size_t> dist(g.vertex_count(), kUnreachable);
  std::deque<VertexId> q;
  for (auto v : prof.essential_vertices) {
    dist[v] = 0;
    q.push_back(v);
  }
  while (!q.empty()) {
    auto v = q.front();
    q.pop_front();
    for (auto e : g.incident(v)) {
      auto w = g.other_end(e, v);
      if (dist[w] == kUnreachable) {
        dist[w] = dist[v] + 1;
        q.push_back(w);
      }
    }
  }
  std::vector<VertexId> free;
  for (VertexId v = 0; v < g.vertex_count(); ++v)
    if (owner[v] < 0) free.push_back(v);
  std::stable_sort(free.begin(), free.end(), [&](VertexId a, VertexId b) { return dist[a] > dist[b]; });
  auto fillers = n - prof.threshold();
  if (free.size() < fillers) throw DomainError("insufficient room for " + std::to_string(fillers) + " filler tokens");
  for (std::size_t i = 0; i < fillers; ++i) p.tokens.push_back({free[i], TokenRole::filler, std::nullopt});
  std::sort(p.tokens.begin(), p.tokens.end(), [](auto const& a, auto const& b) { return a.vertex < b.vertex; });
  return p;
}

struct PreparedGraph {
  Subdivision subdivision;
  TokenPlacement placement;
  Graph const& graph() const noexcept { return subdivision.graph; }
};

// Subdivides for n and places tokens; if the neighbourhoods do not fit,
// refines every edge once more and retries once.
inline PreparedGraph prepare_configuration(Graph const& g, std::size_t n) {
  auto sub = subdivide_for(g, n);
  try {
    auto placement = place_basepoint(sub.graph, n);
    return {std::move(sub), std::move(placement)};
  } catch (DomainError const&) {
    auto plan = sub.plan;
    for (auto& p : plan.per_edge_pieces) ++p;
    auto finer = apply_subdivision(g, plan);
    auto placement = place_basepoint(finer.graph, n);
    return {std::move(finer), std::move(placement)};
  }
}

// ---------------------------------------------------------------------------
// Local free factors

struct LocalFactor {
  VertexId vertex;
  std::size_t degree;
  std::vector<Gen> support;      // E_v
  std::vector<Word> free_words;  // generate F(v)
  std::size_t rank;
};

namespace detail {

// Letter moving a token along e away from `from`.
inline Letter outward(Graph const& g, EdgeId e, VertexId from) { return {e, g.edge(e).tail != from}; }

// The three loop words of the once-subdivided tripod over symbols
// 0..5 = a,b,c (outer) d,e,f (inner).
struct Sym {
  int symbol;
  bool inv;
};
inline std::array<std::vector<Sym>, 3> const& tripod_templates() {
  static const std::array<std::vector<Sym>, 3> t = {{
      // a^-1 d^-1 f b^-1 e^-1 d a f^-1 e b
      {{0, true}, {3, true}, {5, false}, {1, true}, {4, true}, {3, false}, {0, false}, {5, true}, {4, false}, {1, false}},
      // b^-1 e^-1 d c^-1 f^-1 e b d^-1 f c
      {{1, true}, {4, true}, {3, false}, {2, true}, {5, true}, {4, false}, {1, false}, {3, true}, {5, false}, {2, false}},
      // c^-1 f^-1 e a^-1 d^-1 f c e^-1 d a
      {{2, true}, {5, true}, {4, false}, {0, true}, {3, true}, {5, false}, {2, false}, {4, true}, {3, false}, {0, false}},
  }};
  return t;
}

}  // namespace detail

inline std::vector<LocalFactor> local_factors(Graph const& g, std::size_t n, TokenPlacement const& placement) {
  auto prof = degree_profile(g);
  auto base = placement.parked();
  if (base.size() != n) throw DomainError("placement does not have n tokens");
  std::vector<LocalFactor> out;
  for (auto v : prof.essential_vertices) {
    LocalFactor f{v, g.degree(v), {}, {}, 0};
    auto served = placement.serving(v);
    if (g.degree(v) == 3) {
      auto t = tripod_arms(g, v);
      std::vector<VertexId> want(t.leaf.begin(), t.leaf.end());
      std::sort(want.begin(), want.end());
      if (served != want) throw DomainError("placement does not serve vertex " + std::to_string(v));
      std::array<Letter, 6> sym;
      for (std::size_t i = 0; i < 3; ++i) {
        sym[i] = detail::outward(g, t.outer[i], t.mid[i]);
        sym[3 + i] = detail::outward(g, t.inner[i], v);
        f.support.push_back(t.outer[i]);
        f.support.push_back(t.inner[i]);
      }
      for (auto const& tmpl : detail::tripod_templates()) {
        Word w;
        for (auto s : tmpl) w.push_back(s.inv ? sym[static_cast<std::size_t>(s.symbol)].inverse()
                                               : sym[static_cast<std::size_t>(s.symbol)]);
        f.free_words.push_back(std::move(w));
      }
      f.rank = 3;
    } else {
      auto arms = star_arms(g, v);
      std::vector<VertexId> want{g.other_end(arms[0], v), g.other_end(arms[1], v)};
      std::sort(want.begin(), want.end());
      if (served != want) throw DomainError("placement does not serve vertex " + std::to_string(v));
      auto a1 = detail::outward(g, arms[0], v), a2 = detail::outward(g, arms[1], v);
      for (std::size_t i = 2; i < arms.size(); ++i) {
        auto ai = detail::outward(g, arms[i], v);
        // a1^-1 ai a2^-1 a1 ai^-1 a2
        f.free_words.push_back({a1.inverse(), ai, a2.inverse(), a1, ai.inverse(), a2});
      }
      f.support.assign(arms.begin(), arms.end());
      f.rank = arms.size() - 2;
    }
    std::sort(f.support.begin(), f.support.end());
    for (auto const& w : f.free_words) {
      auto lift = lift_word(g, base, w);
      if (!lift.closed)
        throw DomainError("local word at vertex " + std::to_string(v) + " does not lift to a loop at the basepoint");
    }
    out.push_back(std::move(f));
  }
  return out;
}

// ---------------------------------------------------------------------------
// Product of free groups

struct ProductWitness {
  std::vector<VertexId> vertices;
  std::vector<std::array<Word, 2>> words;  // two free generators per factor
  std::vector<std::string> transcript;
};

// Two words per factor; distinct factors have commuting supports, so the
// factors generate F_2^m inside A_x = prod A(v). Two non-commuting elements
// of a RAAG generate a free group of rank 2 (Baudisch), so a nontrivial
// commutator is the per-factor rank evidence.
inline ProductWitness product_witness(CommutationGraph const& d, std::vector<LocalFactor> const& factors) {
  if (factors.empty()) throw DomainError("product witness needs at least one factor");
  ProductWitness pw;
  for (auto const& f : factors) {
    if (f.free_words.size() < 2)
      throw DomainError("factor at vertex " + std::to_string(f.vertex) + " has fewer than two free words");
    auto const& x = f.free_words[0];
    auto const& y = f.free_words[1];
    if (is_trivial(d, x) || is_trivial(d, y) || is_trivial(d, commutator(x, y)))
      throw DomainError("factor at vertex " + std::to_string(f.vertex) + " does not yield a rank-2 free group");
    pw.vertices.push_back(f.vertex);
    pw.words.push_back({x, y});
    pw.transcript.push_back("factor v=" + std::to_string(f.vertex) + " [x,y] nontrivial: rank 2");
  }
  for (std::size_t i = 0; i < factors.size(); ++i)
    for (std::size_t j = i + 1; j < factors.size(); ++j) {
      if (!supports_commute(d, factors[i].support, factors[j].support))
        throw DomainError("supports of vertices " + std::to_string(factors[i].vertex) + " and " +
                          std::to_string(factors[j].vertex) +
                          " overlap or do not commute; subdivide the graph further");
      pw.transcript.push_back("supports v=" + std::to_string(factors[i].vertex) + " v=" +
                              std::to_string(factors[j].vertex) + " commute");
    }
  return pw;
}

// ---------------------------------------------------------------------------
// Disjoint cyclic pairs

enum class LeafVerdict { disjoint, entangled };

inline char const* to_string(LeafVerdict v) { return v == LeafVerdict::disjoint ? "disjoint" : "entangled"; }

struct LeafCheck {
  Word u;
  Word w;
  std::vector<Gen> support;  // the special subgroup A(v) the decision runs in
  Root root_u;
  Root root_w;
  bool roots_conjugate = false;
  bool roots_inverse_conjugate = false;
  LeafVerdict verdict = LeafVerdict::entangled;
};

// Decides whether <u> and <w> have disjoint conjugates in the special
// subgroup on `support`.
inline LeafCheck leaf_check(CommutationGraph const& d, Word const& u, Word const& w, std::vector<Gen> support) {
  std::sort(support.begin(), support.end());
  auto local = d.induced(support);
  auto lu = localize(u, support), lw = localize(w, support);
  if (is_trivial(local, lu) || is_trivial(local, lw)) throw DomainError("leaf subgroups must be nontrivial");
  LeafCheck lc;
  lc.u = u;
  lc.w = w;
  lc.support = support;
  auto ru = primitive_root(local, lu), rw = primitive_root(local, lw);
  lc.roots_conjugate = is_conjugate(local, ru.root, rw.root);
  lc.roots_inverse_conjugate = is_conjugate(local, ru.root, inverse(rw.root));
  lc.root_u = {globalize(ru.root, support), ru.exponent};
  lc.root_w = {globalize(rw.root, support), rw.exponent};
  lc.verdict = lc.roots_conjugate || lc.roots_inverse_conjugate ? LeafVerdict::entangled : LeafVerdict::disjoint;
  return lc;
}

struct CyclicPair {
  VertexId vertex;
  Word c0;
  Word c1;
  LeafCheck leaf;
  std::size_t candidates_tried = 0;
};

// Candidates for C1 in <x, y>: [x,y], [x,[x,y]], then freely reduced words
// in x, y of increasing length (shortlex, x < X < y < Y).
inline std::vector<Word> cyclic_candidates(Word const& x, Word const& y, std::size_t max_length) {
  std::vector<Word> out{commutator(x, y), commutator(x, commutator(x, y))};
  std::array<Word, 4> sym{x, inverse(x), y, inverse(y)};
  std::vector<std::vector<int>> layer{{}};
  for (std::size_t len = 1; len <= max_length; ++len) {
    std::vector<std::vector<int>> next;
    for (auto const& s : layer)
      for (int a = 0; a < 4; ++a) {
        if (!s.empty() && (s.back() ^ 1) == a) continue;
        auto t = s;
        t.push_back(a);
        Word w;
        for (auto i : t) w = concat(std::move(w), sym[static_cast<std::size_t>(i)]);
        out.push_back(std::move(w));
        next.push_back(std::move(t));
      }
    layer = std::move(next);
  }
  return out;
}

inline CyclicPair choose_disjoint_cyclics(CommutationGraph const& d, LocalFactor const& f,
                                          std::size_t max_length = 4) {
  if (f.free_words.size() < 2) throw DomainError("factor needs at least two free words");
  auto const& x = f.free_words[0];
  CyclicPair p{f.vertex, x, {}, {}, 0};
  for (auto const& cand : cyclic_candidates(x, f.free_words[1], max_length)) {
    ++p.candidates_tried;
    if (is_trivial(d, cand)) continue;
    auto lc = leaf_check(d, x, cand, f.support);
    if (lc.verdict == LeafVerdict::disjoint) {
      p.c1 = cand;
      p.leaf = std::move(lc);
      return p;
    }
  }
  throw DomainError("no disjoint partner for C0 at vertex " + std::to_string(f.vertex) +
                    " within word length " + std::to_string(max_length));
}

struct SubgroupPair {
  std::vector<VertexId> vertices;
  std::vector<Word> h0;
  std::vector<Word> h1;
  std::vector<std::vector<Gen>> supports;
  std::vector<LeafCheck> leaves;
};

// H_i = < C_i(v) : v essential >; free abelian of rank m because distinct
// factors commute.
inline SubgroupPair assemble_h0_h1(CommutationGraph const& d, std::vector<LocalFactor> const& factors,
                                   std::vector<CyclicPair> const& pairs) {
  if (factors.size() != pairs.size()) throw DomainError("one cyclic pair per factor expected");
  SubgroupPair sp;
  for (std::size_t i = 0; i < pairs.size(); ++i) {
    sp.vertices.push_back(pairs[i].vertex);
    sp.h0.push_back(pairs[i].c0);
    sp.h1.push_back(pairs[i].c1);
    sp.supports.push_back(factors[i].support);
    sp.leaves.push_back(pairs[i].leaf);
  }
  for (std::size_t i = 0; i < pairs.size(); ++i)
    for (std::size_t j = i + 1; j < pairs.size(); ++j) {
      if (!supports_commute(d, sp.supports[i], sp.supports[j]))
        throw DomainError("factor supports do not commute");
      if (!is_trivial(d, commutator(sp.h0[i], sp.h0[j])) || !is_trivial(d, commutator(sp.h1[i], sp.h1[j])))
        throw DomainError("H_i generators from distinct factors do not commute");
    }
  return sp;
}

// ---------------------------------------------------------------------------
// Certificates

enum class Rule { subgroup, retraction, product, homomorphism, root_conj };

inline char const* to_string(Rule r) {
  switch (r) {
    case Rule::subgroup: return "subgroup";
    case Rule::retraction: return "retraction";
    case Rule::product: return "product";
    case Rule::homomorphism: return "homomorphism";
    case Rule::root_conj: return "root_conj";
  }
  return "?";
}

struct CertificateNode {
  Rule rule;
  std::vector<std::string> side_conditions;  // names of machine-checked conditions
  std::optional<LeafCheck> leaf;
};

struct Certificate {
  Graph graph;
  std::size_t n = 0;
  std::vector<VertexId> basepoint;
  std::vector<Gen> keep;    // generators of A_x
  std::vector<CertificateNode> nodes;  // rules in order, then leaves

  std::size_t leaf_count() const {
    return static_cast<std::size_t>(std::count_if(nodes.begin(), nodes.end(), [](auto const& n) { return n.leaf.has_value(); }));
  }
  std::size_t rule_count() const { return nodes.size() - leaf_count(); }
};

class CertificateRefused : public DomainError {
 public:
  CertificateRefused(std::string node, std::string const& reason)
      : DomainError("certificate refused at " + node + ": " + reason), node_(std::move(node)) {}
  std::string const& node() const noexcept { return node_; }

 private:
  std::string node_;
};

// Builds the rule tree and checks every side condition; throws
// CertificateRefused at the first node that does not validate.
inline Certificate certify_disjoint_conjugates(Graph const& g, std::size_t n, std::vector<VertexId> basepoint,
                                               SubgroupPair const& sp) {
  auto d = build_delta(g);
  Certificate cert{g, n, std::move(basepoint), {}, {}};
  std::sort(cert.basepoint.begin(), cert.basepoint.end());
  auto const m = sp.h0.size();
  if (m == 0 || sp.h1.size() != m || sp.supports.size() != m || sp.leaves.size() != m)
    throw CertificateRefused("claim", "H0, H1, supports and leaves must have one entry per factor");

  // Subgroup rule: H0, H1 < B_n(G) < A_Delta, the second inclusion being
  // the Crisp-Wiest injection on a sufficiently subdivided graph.
  if (!is_sufficiently_subdivided(g, n)) throw CertificateRefused("rule subgroup", "graph not sufficiently subdivided");
  for (auto const* hs : {&sp.h0, &sp.h1})
    for (auto const& w : *hs)
      if (!is_loop_word(g, cert.basepoint, w))
        throw CertificateRefused("rule subgroup", "word " + format_word(d, w) + " is not a loop at the basepoint");
  cert.nodes.push_back({Rule::subgroup, {"subdivided", "loops_at_basepoint"}, std::nullopt});

  // Retraction rule: A_Delta -> A_x deleting generators outside the union
  // of supports; fixes H0 and H1.
  for (auto const& s : sp.supports) cert.keep.insert(cert.keep.end(), s.begin(), s.end());
  std::sort(cert.keep.begin(), cert.keep.end());
  cert.keep.erase(std::unique(cert.keep.begin(), cert.keep.end()), cert.keep.end());
  for (auto const* hs : {&sp.h0, &sp.h1})
    for (auto const& w : *hs)
      if (retract_to(d, w, cert.keep) != normal_form(d, w).word)
        throw CertificateRefused("rule retraction", "retraction does not fix " + format_word(d, w));
  cert.nodes.push_back({Rule::retraction, {"full_subgraph", "fixes_h0_h1"}, std::nullopt});

  // Product rule: A_x = prod A(v) and H_i = prod <C_i(v)>.
  for (std::size_t i = 0; i < m; ++i) {
    for (std::size_t j = i + 1; j < m; ++j)
      if (!supports_commute(d, sp.supports[i], sp.supports[j]))
        throw CertificateRefused("rule product", "supports " + std::to_string(i) + " and " + std::to_string(j) +
                                                     " overlap or do not commute");
    for (auto const* w : {&sp.h0[i], &sp.h1[i]}) {
      auto s = support(*w);
      if (!std::includes(sp.supports[i].begin(), sp.supports[i].end(), s.begin(), s.end()))
        throw CertificateRefused("rule product", "generator of factor " + std::to_string(i) + " leaves its support");
    }
  }
  cert.nodes.push_back({Rule::product, {"supports_commute", "factorwise_generators"}, std::nullopt});

  for (std::size_t i = 0; i < m; ++i) {
    auto name = "leaf " + std::to_string(i);
    LeafCheck lc;
    try {
      lc = leaf_check(d, sp.h0[i], sp.h1[i], sp.supports[i]);
    } catch (DomainError const& e) {
      throw CertificateRefused(name, e.what());
    }
    if (lc.verdict != LeafVerdict::disjoint)
      throw CertificateRefused(name, "primitive roots of " + format_word(d, lc.u) + " and " + format_word(d, lc.w) +
                                         " are conjugate up to inversion");
    if (sp.leaves[i].verdict != lc.verdict) throw CertificateRefused(name, "recorded verdict disagrees with recomputation");
    cert.nodes.push_back({Rule::root_conj, {"root_conjugacy"}, std::move(lc)});
  }
  return cert;
}

// Lemma-style homomorphism rule, instantiated with abelianization
// A_Delta -> Z^gens: H0 in the kernel and injective on H1 (images of the H1
// generators linearly independent). Not used by the main chain.
inline bool check_abelianization_rule(CommutationGraph const& d, std::vector<Word> const& h0,
                                      std::vector<Word> const& h1) {
  auto image = [&](Word const& w) {
    std::vector<long long> v(d.size(), 0);
    for (auto const& l : w) v[l.gen] += l.sign();
    return v;
  };
  for (auto const& w : h0) {
    auto v = image(w);
    if (std::any_of(v.begin(), v.end(), [](long long x) { return x != 0; })) return false;
  }
  DenseMatrix<long long> rows;
  for (auto const& w : h1) rows.push_back(image(w));
  return rational_rank_oracle(rows) == h1.size();
}

// ---------------------------------------------------------------------------
// Full pipeline

struct TcEvidence {
  PreparedGraph prepared;
  std::vector<LocalFactor> factors;
  ProductWitness witness;
  std::vector<CyclicPair> pairs;
  SubgroupPair subgroups;
  Certificate certificate;
};

// Subdivide, place, build factors and pairs, certify. Throws DomainError
// (or CertificateRefused) at the first step that fails.
inline TcEvidence certify_tc(Graph const& g, std::size_t n, std::size_t max_length = 4) {
  auto prepared = prepare_configuration(g, n);
  auto const& sg = prepared.graph();
  auto d = build_delta(sg);
  auto factors = local_factors(sg, n, prepared.placement);
  auto witness = product_witness(d, factors);
  std::vector<CyclicPair> pairs;
  for (auto const& f : factors) pairs.push_back(choose_disjoint_cyclics(d, f, max_length));
  auto sp = assemble_h0_h1(d, factors, pairs);
  auto cert = certify_disjoint_conjugates(sg, n, prepared.placement.parked(), sp);
  return {std::move(prepared), std::move(factors), std::move(witness), std::move(pairs), std::move(sp),
          std::move(cert)};
}

// ---------------------------------------------------------------------------
// Certificate text
//
//   gbraid-certificate 1
//   graph <graph file line>          (repeated)
//   tokens <n>
//   basepoint <v>,<v>,...
//   claim disjoint_conjugates factors=<m> ambient=braid_group
//   rule <name> side_conditions=checked names=<c>,<c>,...
//   leaf root_conj u=[<word>] w=[<word>] verdict=<disjoint|entangled> support=<label>,...
//        root_u=[<word>] exp_u=<k> root_w=[<word>] exp_w=<k>

namespace detail {

inline std::string join_labels(CommutationGraph const& d, std::vector<Gen> const& gens) {
  std::string s;
  for (std::size_t i = 0; i < gens.size(); ++i) s += (i ? "," : "") + d.label(gens[i]);
  return s;
}

inline std::vector<std::string> split_on(std::string const& s, char sep) {
  std::vector<std::string> out;
  std::string cur;
  for (char ch : s) {
    if (ch == sep) {
      out.push_back(cur);
      cur.clear();
    } else {
      cur += ch;
    }
  }
  out.push_back(cur);
  return out;
}

// key=value fields; values in brackets may contain spaces.
inline std::map<std::string, std::string> parse_fields(std::string_view rest, std::size_t line) {
  std::map<std::string, std::string> f;
  std::size_t i = 0;
  while (i < rest.size()) {
    while (i < rest.size() && rest[i] == ' ') ++i;
    if (i >= rest.size()) break;
    auto eq = rest.find('=', i);
    if (eq == std::string_view::npos) throw ParseError(line, "expected key=value");
    std::string key(rest.substr(i, eq - i));
    std::string value;
    i = eq + 1;
    if (i < rest.size() && rest[i] == '[') {
      auto close = rest.find(']', i);
      if (close == std::string_view::npos) throw ParseError(line, "unterminated '['");
      value = std::string(rest.substr(i + 1, close - i - 1));
      i = close + 1;
    } else {
      auto sp = rest.find(' ', i);
      if (sp == std::string_view::npos) sp = rest.size();
      value = std::string(rest.substr(i, sp - i));
      i = sp;
    }
    if (!f.emplace(key, value).second) throw ParseError(line, "duplicate field " + key);
  }
  return f;
}

inline std::string const& field(std::map<std::string, std::string> const& f, std::string const& key,
                                std::size_t line) {
  auto it = f.find(key);
  if (it == f.end()) throw ParseError(line, "missing field " + key);
  return it->second;
}

}  // namespace detail

inline std::string serialize_certificate(Certificate const& c) {
  auto d = build_delta(c.graph);
  std::ostringstream out;
  out << "gbraid-certificate 1\n";
  std::istringstream gl(format_graph(c.graph));
  for (std::string line; std::getline(gl, line);)
    if (!line.empty()) out << "graph " << line << '\n';
  out << "tokens " << c.n << '\n';
  out << "basepoint ";
  for (std::size_t i = 0; i < c.basepoint.size(); ++i) out << (i ? "," : "") << c.basepoint[i];
  out << '\n';
  out << "claim disjoint_conjugates factors=" << c.leaf_count() << " ambient=braid_group\n";
  for (auto const& node : c.nodes) {
    if (node.leaf) {
      auto const& l = *node.leaf;
      out << "leaf root_conj u=[" << format_word(d, l.u) << "] w=[" << format_word(d, l.w)
          << "] verdict=" << to_string(l.verdict) << " support=" << detail::join_labels(d, l.support) << " root_u=["
          << format_word(d, l.root_u.root) << "] exp_u=" << l.root_u.exponent << " root_w=["
          << format_word(d, l.root_w.root) << "] exp_w=" << l.root_w.exponent << '\n';
    } else {
      out << "rule " << to_string(node.rule) << " side_conditions=checked names=";
      for (std::size_t i = 0; i < node.side_conditions.size(); ++i) out << (i ? "," : "") << node.side_conditions[i];
      out << '\n';
    }
  }
  return out.str();
}

// What a certificate file claims, before any recomputation.
struct CertificateClaim {
  Graph graph;
  std::size_t n = 0;
  std::vector<VertexId> basepoint;
  std::size_t factors = 0;
  std::vector<std::pair<std::string, std::vector<std::string>>> rules;  // name, side conditions
  SubgroupPair subgroups;
  std::vector<std::pair<Root, Root>> roots;  // recorded root_u, root_w per leaf
};

inline CertificateClaim parse_certificate(std::istream& in) {
  CertificateClaim cl;
  std::string graph_text;
  std::vector<std::pair<std::size_t, std::string>> leaf_lines;
  bool header = false, have_n = false, have_base = false, have_claim = false;
  std::size_t lineno = 0;
  for (std::string line; std::getline(in, line);) {
    ++lineno;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty() || line[0] == '#') continue;
    auto sp = line.find(' ');
    auto head = line.substr(0, sp);
    auto rest = sp == std::string::npos ? std::string() : line.substr(sp + 1);
    if (!header) {
      if (line != "gbraid-certificate 1") throw ParseError(lineno, "expected 'gbraid-certificate 1'");
      header = true;
    } else if (head == "graph") {
      graph_text += rest + "\n";
    } else if (head == "tokens") {
      auto v = detail::to_int(rest);
      if (!v || *v < 1) throw ParseError(lineno, "bad token count");
      cl.n = static_cast<std::size_t>(*v);
      have_n = true;
    } else if (head == "basepoint") {
      for (auto const& tok : detail::split_on(rest, ',')) {
        auto v = detail::to_int(tok);
        if (!v || *v < 0) throw ParseError(lineno, "bad basepoint vertex '" + tok + "'");
        cl.basepoint.push_back(static_cast<VertexId>(*v));
      }
      have_base = true;
    } else if (head == "claim") {
      if (rest.rfind("disjoint_conjugates ", 0) != 0) throw ParseError(lineno, "unknown claim");
      auto f = detail::parse_fields(std::string_view(rest).substr(20), lineno);
      auto m = detail::to_int(detail::field(f, "factors", lineno));
      if (!m || *m < 0) throw ParseError(lineno, "bad factor count");
      cl.factors = static_cast<std::size_t>(*m);
      have_claim = true;
    } else if (head == "rule") {
      auto nsp = rest.find(' ');
      auto name = rest.substr(0, nsp);
      auto f = detail::parse_fields(nsp == std::string::npos ? std::string_view{} : std::string_view(rest).substr(nsp), lineno);
      if (detail::field(f, "side_conditions", lineno) != "checked")
        throw ParseError(lineno, "rule " + name + " has unchecked side conditions");
      auto names = f.count("names") ? detail::split_on(f.at("names"), ',') : std::vector<std::string>{};
      cl.rules.emplace_back(name, names);
    } else if (head == "leaf") {
      leaf_lines.emplace_back(lineno, rest);
    } else {
      throw ParseError(lineno, "unknown certificate line '" + head + "'");
    }
  }
  if (!header) throw ParseError(lineno, "empty certificate");
  if (!have_n || !have_base || !have_claim) throw ParseError(lineno, "certificate lacks tokens, basepoint or claim");
  cl.graph = parse_graph(std::string_view(graph_text));
  auto d = build_delta(cl.graph);
  for (auto const& [ln, rest] : leaf_lines) {
    if (rest.rfind("root_conj", 0) != 0) throw ParseError(ln, "unknown leaf kind");
    auto f = detail::parse_fields(std::string_view(rest).substr(9), ln);
    LeafCheck lc;
    try {
      lc.u = parse_word(d, detail::field(f, "u", ln));
      lc.w = parse_word(d, detail::field(f, "w", ln));
      for (auto const& lab : detail::split_on(detail::field(f, "support", ln), ',')) {
        auto gen = d.find(lab);
        if (!gen) throw ParseError(ln, "unknown support label '" + lab + "'");
        lc.support.push_back(*gen);
      }
      auto const& v = detail::field(f, "verdict", ln);
      if (v == "disjoint") lc.verdict = LeafVerdict::disjoint;
      else if (v == "entangled") lc.verdict = LeafVerdict::entangled;
      else throw ParseError(ln, "bad verdict '" + v + "'");
      auto eu = detail::to_int(detail::field(f, "exp_u", ln)), ew = detail::to_int(detail::field(f, "exp_w", ln));
      if (!eu || !ew) throw ParseError(ln, "bad root exponent");
      Root ru{parse_word(d, detail::field(f, "root_u", ln)), *eu};
      Root rw{parse_word(d, detail::field(f, "root_w", ln)), *ew};
      cl.roots.emplace_back(ru, rw);
    } catch (ParseError const&) {
      throw;
    } catch (Error const& e) {
      throw ParseError(ln, e.what());
    }
    std::sort(lc.support.begin(), lc.support.end());
    cl.subgroups.h0.push_back(lc.u);
    cl.subgroups.h1.push_back(lc.w);
    cl.subgroups.supports.push_back(lc.support);
    cl.subgroups.leaves.push_back(std::move(lc));
  }
  return cl;
}

inline CertificateClaim parse_certificate(std::string_view text) {
  std::istringstream in{std::string(text)};
  return parse_certificate(in);
}

// Recomputes the whole rule tree from the claim and compares it with what
// the file records. Throws CertificateRefused on any disagreement.
inline Certificate verify_certificate(CertificateClaim const& cl) {
  if (cl.factors != cl.subgroups.leaves.size())
    throw CertificateRefused("claim", "factor count does not match the number of leaves");
  auto cert = certify_disjoint_conjugates(cl.graph, cl.n, cl.basepoint, cl.subgroups);
  std::vector<CertificateNode const*> rules;
  for (auto const& node : cert.nodes)
    if (!node.leaf) rules.push_back(&node);
  if (rules.size() != cl.rules.size()) throw CertificateRefused("rules", "rule count differs from recomputation");
  for (std::size_t i = 0; i < rules.size(); ++i) {
    if (cl.rules[i].first != to_string(rules[i]->rule))
      throw CertificateRefused("rule " + cl.rules[i].first, "expected rule " + std::string(to_string(rules[i]->rule)));
    if (cl.rules[i].second != rules[i]->side_conditions)
      throw CertificateRefused("rule " + cl.rules[i].first, "side condition list differs from recomputation");
  }
  std::size_t li = 0;
  for (auto const& node : cert.nodes) {
    if (!node.leaf) continue;
    auto const& [ru, rw] = cl.roots[li];
    auto const& l = *node.leaf;
    if (ru.root != l.root_u.root || ru.exponent != l.root_u.exponent || rw.root != l.root_w.root ||
        rw.exponent != l.root_w.exponent)
      throw CertificateRefused("leaf " + std::to_string(li), "recorded roots differ from recomputation");
    ++li;
  }
  return cert;
}

}  // namespace gbraid
