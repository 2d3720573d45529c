#pragma once

// Right-angled Artin groups over the commutation graph of a graph G: one
// generator per edge of G, two generators commuting exactly when the edges
// are disjoint.
//
// Words are handled as traces: a reduced word is unique up to swapping
// adjacent commuting letters, and the canonical representative is the
// lexicographically least such rearrangement (generator order = edge
// index, x before x^-1).
//
// Conjugacy and root extraction rely on two standard facts about RAAGs,
// not re-proved here: cyclically reduced words are conjugate iff they are
// related by cyclic permutations and commutations, and roots are unique
// (u^p = w^q with u, w not proper powers forces u = w^(+-1)).

#include <algorithm>
#include <cstdint>
#include <deque>
#include <map>
#include <numeric>
#include <optional>
#include <set>
#include <sstream>
#include <string>
#include <string_view>
#include <unordered_set>
#include <utility>
#include <vector>

#include "gbraid/error.hpp"
#include "gbraid/graph.hpp"

namespace gbraid {

using Gen = std::uint32_t;

struct Letter {
  Gen gen;
  bool inv = false;

  Letter inverse() const noexcept { return {gen, !inv}; }
  std::uint32_t key() const noexcept { return 2 * gen + (inv ? 1u : 0u); }
  int sign() const noexcept { return inv ? -1 : 1; }

  friend bool operator==(Letter const&, Letter const&) = default;
  friend bool operator<(Letter const& a, Letter const& b) noexcept { return a.key() < b.key(); }
};

using Word = std::vector<Letter>;

class CommutationGraph {
 public:
  CommutationGraph() = default;
  CommutationGraph(std::vector<std::string> labels, std::vector<char> adjacency, Graph origin = {})
      : labels_(std::move(labels)), adj_(std::move(adjacency)), origin_(std::move(origin)) {
    if (adj_.size() != labels_.size() * labels_.size()) throw DomainError("adjacency has wrong shape");
    for (Gen x = 0; x < size(); ++x) {
      if (adjacent(x, x)) throw DomainError("commutation graph has a loop");
      for (Gen y = 0; y < size(); ++y)
        if (adjacent(x, y) != adjacent(y, x)) throw DomainError("commutation relation is not symmetric");
    }
  }

  std::size_t size() const noexcept { return labels_.size(); }
  std::string const& label(Gen x) const { return labels_.at(x); }
  bool adjacent(Gen x, Gen y) const noexcept { return adj_[x * labels_.size() + y] != 0; }
  Graph const& origin() const noexcept { return origin_; }

  std::optional<Gen> find(std::string_view label) const {
    for (Gen x = 0; x < size(); ++x)
      if (labels_[x] == label) return x;
    return std::nullopt;
  }

  std::size_t edge_count() const {
    std::size_t c = 0;
    for (Gen x = 0; x < size(); ++x)
      for (Gen y = x + 1; y < size(); ++y) c += adjacent(x, y);
    return c;
  }

  // Full subgraph on `keep` (sorted, deduplicated); generator i of the result
  // is keep[i] here.
  CommutationGraph induced(std::vector<Gen> keep) const {
    std::sort(keep.begin(), keep.end());
    keep.erase(std::unique(keep.begin(), keep.end()), keep.end());
    std::vector<std::string> labels;
    std::vector<char> adj(keep.size() * keep.size(), 0);
    for (std::size_t i = 0; i < keep.size(); ++i) {
      labels.push_back(label(keep.at(i)));
      for (std::size_t j = 0; j < keep.size(); ++j) adj[i * keep.size() + j] = adjacent(keep[i], keep[j]);
    }
    return CommutationGraph(std::move(labels), std::move(adj));
  }

 private:
  std::vector<std::string> labels_;
  std::vector<char> adj_;
  Graph origin_;
};

// One generator per edge of g; generators commute iff the edges are
// disjoint (share no endpoint).
inline CommutationGraph build_delta(Graph const& g) {
  std::vector<std::string> labels;
  auto const n = g.edge_count();
  std::vector<char> adj(n * n, 0);
  for (EdgeId e = 0; e < n; ++e) {
    labels.push_back(g.edge_label(e));
    for (EdgeId f = 0; f < n; ++f) adj[e * n + f] = e != f && !g.edge(e).meets(g.edge(f));
  }
  return CommutationGraph(std::move(labels), std::move(adj), g);
}

// Generator classes that pairwise commute across classes: A_Delta is the
// direct product of the special subgroups on these classes.
inline std::vector<std::vector<Gen>> join_components(CommutationGraph const& d) {
  std::vector<int> comp(d.size(), -1);
  std::vector<std::vector<Gen>> out;
  for (Gen s = 0; s < d.size(); ++s) {
    if (comp[s] >= 0) continue;
    out.emplace_back();
    std::deque<Gen> q{s};
    comp[s] = static_cast<int>(out.size() - 1);
    while (!q.empty()) {
      auto x = q.front();
      q.pop_front();
      out.back().push_back(x);
      for (Gen y = 0; y < d.size(); ++y)
        if (y != x && comp[y] < 0 && !d.adjacent(x, y)) {
          comp[y] = comp[s];
          q.push_back(y);
        }
    }
    std::sort(out.back().begin(), out.back().end());
  }
  return out;
}

// ---------------------------------------------------------------------------
// Word syntax: whitespace separated `<label>` or `<label>^-1`; `1` alone is
// the empty word.

inline Word parse_word(CommutationGraph const& d, std::string_view text) {
  Word w;
  auto tokens = detail::split_ws(text);
  if (tokens.size() == 1 && tokens[0] == "1" && !d.find("1")) return w;
  for (auto const& tok : tokens) {
    std::string_view name = tok;
    bool inv = false;
    if (auto caret = tok.find('^'); caret != std::string::npos) {
      if (tok.substr(caret) != "^-1") throw DomainError("bad exponent in token '" + tok + "'");
      name = std::string_view(tok).substr(0, caret);
      inv = true;
    }
    auto g = d.find(name);
    if (!g) throw DomainError("unknown generator '" + std::string(name) + "'");
    w.push_back({*g, inv});
  }
  return w;
}

inline std::string format_word(CommutationGraph const& d, Word const& w) {
  if (w.empty()) return "1";
  std::string out;
  for (std::size_t i = 0; i < w.size(); ++i) {
    if (i) out += ' ';
    out += d.label(w[i].gen);
    if (w[i].inv) out += "^-1";
  }
  return out;
}

inline void check_word(CommutationGraph const& d, Word const& w) {
  for (auto const& l : w)
    if (l.gen >= d.size()) throw DomainError("word uses a generator outside this commutation graph");
}

inline Word inverse(Word const& w) {
  Word r;
  r.reserve(w.size());
  for (auto it = w.rbegin(); it != w.rend(); ++it) r.push_back(it->inverse());
  return r;
}

inline Word concat(Word a, Word const& b) {
  a.insert(a.end(), b.begin(), b.end());
  return a;
}

inline Word power(Word const& w, long long k) {
  Word base = k < 0 ? inverse(w) : w;
  Word r;
  for (long long i = 0; i < (k < 0 ? -k : k); ++i) r.insert(r.end(), base.begin(), base.end());
  return r;
}

// [x, y] = x y x^-1 y^-1
inline Word commutator(Word const& x, Word const& y) {
  return concat(concat(concat(x, y), inverse(x)), inverse(y));
}

inline std::vector<Gen> support(Word const& w) {
  std::vector<Gen> s;
  for (auto const& l : w) s.push_back(l.gen);
  std::sort(s.begin(), s.end());
  s.erase(std::unique(s.begin(), s.end()), s.end());
  return s;
}

// ---------------------------------------------------------------------------
// Reduction and normal form

// Appends one letter to a reduced word, keeping it reduced: x cancels
// against the last x^-1 that can be shuffled to the end.
inline void append_reduced(CommutationGraph const& d, Word& w, Letter x) {
  for (auto i = w.size(); i-- > 0;) {
    if (w[i].gen == x.gen) {
      if (w[i].inv != x.inv) {
        w.erase(w.begin() + static_cast<std::ptrdiff_t>(i));
        return;
      }
      break;
    }
    if (!d.adjacent(w[i].gen, x.gen)) break;
  }
  w.push_back(x);
}

inline void prepend_reduced(CommutationGraph const& d, Word& w, Letter x) {
  for (std::size_t i = 0; i < w.size(); ++i) {
    if (w[i].gen == x.gen) {
      if (w[i].inv != x.inv) {
        w.erase(w.begin() + static_cast<std::ptrdiff_t>(i));
        return;
      }
      break;
    }
    if (!d.adjacent(w[i].gen, x.gen)) break;
  }
  w.insert(w.begin(), x);
}

inline Word reduce(CommutationGraph const& d, Word const& w) {
  Word out;
  out.reserve(w.size());
  for (auto const& x : w) append_reduced(d, out, x);
  return out;
}

// Lexicographically least rearrangement by commuting swaps. Input must be
// reduced (it is only rearranged, never shortened).
inline Word lex_normal(CommutationGraph const& d, Word w) {
  Word out;
  out.reserve(w.size());
  while (!w.empty()) {
    std::size_t best = w.size();
    for (std::size_t p = 0; p < w.size(); ++p) {
      bool free = true;
      for (std::size_t q = 0; q < p && free; ++q) free = d.adjacent(w[q].gen, w[p].gen);
      if (free && (best == w.size() || w[p] < w[best])) best = p;
    }
    out.push_back(w[best]);
    w.erase(w.begin() + static_cast<std::ptrdiff_t>(best));
  }
  return out;
}

struct NormalForm {
  Word word;
  std::size_t length() const noexcept { return word.size(); }
  std::vector<Gen> support() const { return gbraid::support(word); }
  friend bool operator==(NormalForm const&, NormalForm const&) = default;
};

inline NormalForm normal_form(CommutationGraph const& d, Word const& w) {
  check_word(d, w);
  return {lex_normal(d, reduce(d, w))};
}

inline bool is_trivial(CommutationGraph const& d, Word const& w) { return normal_form(d, w).word.empty(); }

inline bool is_equal(CommutationGraph const& d, Word const& u, Word const& w) {
  return normal_form(d, u) == normal_form(d, w);
}

// ---------------------------------------------------------------------------
// Cyclic reduction and conjugacy

// Positions of letters that can be shuffled to the front / back.
inline std::vector<std::size_t> first_positions(CommutationGraph const& d, Word const& w) {
  std::vector<std::size_t> out;
  for (std::size_t p = 0; p < w.size(); ++p) {
    bool free = true;
    for (std::size_t q = 0; q < p && free; ++q) free = d.adjacent(w[q].gen, w[p].gen);
    if (free) out.push_back(p);
  }
  return out;
}

inline std::vector<std::size_t> last_positions(CommutationGraph const& d, Word const& w) {
  std::vector<std::size_t> out;
  for (std::size_t p = 0; p < w.size(); ++p) {
    bool free = true;
    for (std::size_t q = p + 1; q < w.size() && free; ++q) free = d.adjacent(w[q].gen, w[p].gen);
    if (free) out.push_back(p);
  }
  return out;
}

struct CyclicReduction {
  Word core;        // cyclically reduced, in normal form
  Word conjugator;  // w = conjugator * core * conjugator^-1
};

inline CyclicReduction cyclically_reduce(CommutationGraph const& d, Word const& w) {
  CyclicReduction r{normal_form(d, w).word, {}};
  for (bool changed = true; changed;) {
    changed = false;
    auto lasts = last_positions(d, r.core);
    for (auto p : first_positions(d, r.core)) {
      auto x = r.core[p];
      auto q = std::find_if(lasts.begin(), lasts.end(), [&](std::size_t i) { return r.core[i] == x.inverse(); });
      if (q == lasts.end()) continue;
      auto qi = *q;
      r.core.erase(r.core.begin() + static_cast<std::ptrdiff_t>(std::max(p, qi)));
      r.core.erase(r.core.begin() + static_cast<std::ptrdiff_t>(std::min(p, qi)));
      r.conjugator.push_back(x);
      changed = true;
      break;
    }
  }
  r.core = lex_normal(d, r.core);
  r.conjugator = normal_form(d, r.conjugator).word;
  return r;
}

inline bool is_cyclically_reduced(CommutationGraph const& d, Word const& w) {
  if (reduce(d, w).size() != w.size()) return false;
  auto lasts = last_positions(d, w);
  for (auto p : first_positions(d, w))
    for (auto q : lasts)
      if (p != q && w[q] == w[p].inverse()) return false;
  return true;
}

namespace detail {

struct WordHash {
  std::size_t operator()(Word const& w) const noexcept {
    std::size_t h = 1469598103934665603ull;
    for (auto const& l : w) h = (h ^ l.key()) * 1099511628211ull;
    return h;
  }
};

struct WordEq {
  bool operator()(Word const& a, Word const& b) const noexcept { return a == b; }
};

// Traces reachable from a cyclically reduced normal form by moving a
// first letter to the end. Stops early once `target` is found.
inline std::unordered_set<Word, WordHash, WordEq> transposition_class(CommutationGraph const& d, Word const& start,
                                                                       Word const* target = nullptr) {
  std::unordered_set<Word, WordHash, WordEq> seen{start};
  std::deque<Word> queue{start};
  while (!queue.empty()) {
    auto w = std::move(queue.front());
    queue.pop_front();
    if (target && w == *target) break;
    std::set<std::uint32_t> tried;
    for (auto p : first_positions(d, w)) {
      if (!tried.insert(w[p].key()).second) continue;
      Word next = w;
      auto x = next[p];
      next.erase(next.begin() + static_cast<std::ptrdiff_t>(p));
      next.push_back(x);
      next = lex_normal(d, std::move(next));
      if (seen.insert(next).second) queue.push_back(std::move(next));
    }
  }
  return seen;
}

}  // namespace detail

// Least normal form in the conjugacy class of w; equal for conjugate words.
inline Word cyclic_normal_form(CommutationGraph const& d, Word const& w) {
  auto core = cyclically_reduce(d, w).core;
  auto cls = detail::transposition_class(d, core);
  return *std::min_element(cls.begin(), cls.end(), [](Word const& a, Word const& b) {
    return std::lexicographical_compare(a.begin(), a.end(), b.begin(), b.end());
  });
}

inline bool is_conjugate(CommutationGraph const& d, Word const& u, Word const& w) {
  auto cu = cyclically_reduce(d, u).core;
  auto cw = cyclically_reduce(d, w).core;
  if (cu.size() != cw.size()) return false;
  auto sorted = [](Word x) {
    std::sort(x.begin(), x.end());
    return x;
  };
  if (sorted(cu) != sorted(cw)) return false;
  return detail::transposition_class(d, cu, &cw).count(cw) > 0;
}

// ---------------------------------------------------------------------------
// Roots

struct Root {
  Word root;  // normal form
  long long exponent = 1;
};

// w = root^exponent with exponent maximal. Works on the cyclically reduced
// core: if core = r^k as traces, the first |r| occurrences of every
// generator form r.
inline Root primitive_root(CommutationGraph const& d, Word const& w) {
  auto cr = cyclically_reduce(d, w);
  if (cr.core.empty()) throw DomainError("trivial element has no primitive root");
  std::map<Gen, std::size_t> counts;
  for (auto const& l : cr.core) ++counts[l.gen];
  std::size_t g = 0;
  for (auto const& [x, c] : counts) g = std::gcd(g, c);
  auto wrap = [&](Word const& r) {
    return normal_form(d, concat(concat(cr.conjugator, r), inverse(cr.conjugator))).word;
  };
  for (auto k = g; k > 1; --k) {
    if (g % k) continue;
    std::map<Gen, std::size_t> taken;
    Word r;
    for (auto const& l : cr.core)
      if (taken[l.gen]++ < counts[l.gen] / k) r.push_back(l);
    if (normal_form(d, power(r, static_cast<long long>(k))).word == cr.core)
      return {wrap(r), static_cast<long long>(k)};
  }
  return {wrap(cr.core), 1};
}

// ---------------------------------------------------------------------------
// Special subgroups

// The retraction onto the special subgroup on `keep`: deletes every other
// generator. The subgraph on `keep` is automatically full.
inline Word retract_to(CommutationGraph const& d, Word const& w, std::vector<Gen> const& keep) {
  std::vector<char> in(d.size(), 0);
  for (auto x : keep) in.at(x) = 1;
  Word r;
  for (auto const& l : w)
    if (in.at(l.gen)) r.push_back(l);
  return normal_form(d, r).word;
}

// True iff s1, s2 are disjoint and every x in s1 commutes with every y in s2.
inline bool supports_commute(CommutationGraph const& d, std::vector<Gen> const& s1, std::vector<Gen> const& s2) {
  for (auto x : s1)
    for (auto y : s2)
      if (x == y || !d.adjacent(x, y)) return false;
  return true;
}

// Maps a word over generators of d into the induced graph on `keep`.
inline Word localize(Word const& w, std::vector<Gen> keep) {
  std::sort(keep.begin(), keep.end());
  Word r;
  for (auto const& l : w) {
    auto it = std::lower_bound(keep.begin(), keep.end(), l.gen);
    if (it == keep.end() || *it != l.gen) throw DomainError("word leaves the special subgroup");
    r.push_back({static_cast<Gen>(it - keep.begin()), l.inv});
  }
  return r;
}

inline Word globalize(Word const& w, std::vector<Gen> keep) {
  std::sort(keep.begin(), keep.end());
  Word r;
  for (auto const& l : w) r.push_back({keep.at(l.gen), l.inv});
  return r;
}

}  // namespace gbraid
