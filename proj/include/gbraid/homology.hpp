#pragma once

// Integral cellular homology of cube complexes.

#include <algorithm>
#include <cstdint>
#include <map>
#include <numeric>
#include <optional>
#include <stdexcept>
#include <utility>
#include <vector>

#include <boost/multiprecision/cpp_int.hpp>

#include "gbraid/cube_complex.hpp"
#include "gbraid/error.hpp"

namespace gbraid {

using BigInt = boost::multiprecision::cpp_int;

// Column-major sparse integer matrix.
struct SparseMatrix {
  std::size_t rows = 0;
  std::size_t cols = 0;
  std::vector<std::vector<std::pair<std::size_t, long long>>> columns;

  std::size_t nonzeros() const {
    std::size_t nz = 0;
    for (auto const& c : columns) nz += c.size();
    return nz;
  }
};

template <typename Int>
using DenseMatrix = std::vector<std::vector<Int>>;

template <typename Int = long long>
DenseMatrix<Int> to_dense(SparseMatrix const& m) {
  DenseMatrix<Int> d(m.rows, std::vector<Int>(m.cols, Int(0)));
  for (std::size_t j = 0; j < m.cols; ++j)
    for (auto [i, v] : m.columns[j]) d[i][j] = Int(v);
  return d;
}

// Product a*b, or nullopt on a shape mismatch.
inline std::optional<SparseMatrix> multiply(SparseMatrix const& a, SparseMatrix const& b) {
  if (a.cols != b.rows) return std::nullopt;
  SparseMatrix p{a.rows, b.cols, std::vector<std::vector<std::pair<std::size_t, long long>>>(b.cols)};
  for (std::size_t j = 0; j < b.cols; ++j) {
    std::map<std::size_t, long long> acc;
    for (auto [k, bv] : b.columns[j])
      for (auto [i, av] : a.columns[k]) acc[i] += av * bv;
    for (auto [i, v] : acc)
      if (v != 0) p.columns[j].emplace_back(i, v);
  }
  return p;
}

inline bool is_zero(SparseMatrix const& m) {
  return std::all_of(m.columns.begin(), m.columns.end(), [](auto const& c) { return c.empty(); });
}

// ---------------------------------------------------------------------------
// Cube boundaries

// Signed facets of a cube with moving edges f_1 < ... < f_k:
//   d = sum_i (-1)^i (head-facet_i - tail-facet_i),   i counted from 1.
inline std::vector<std::pair<Cell, int>> signed_facets(Graph const& g, Cell const& c) {
  std::vector<std::pair<Cell, int>> out;
  for (std::size_t i = 0; i < c.dimension(); ++i) {
    int sign = (i + 1) % 2 ? -1 : 1;
    out.emplace_back(facet(g, c, i, true), sign);
    out.emplace_back(facet(g, c, i, false), -sign);
  }
  return out;
}

struct ChainComplex {
  std::vector<std::size_t> cell_counts;        // f-vector
  std::vector<SparseMatrix> boundary_matrices;  // [k-1] holds d_k : C_k -> C_{k-1}

  SparseMatrix const* boundary(std::size_t k) const {
    return k >= 1 && k - 1 < boundary_matrices.size() ? &boundary_matrices[k - 1] : nullptr;
  }
  bool squares_to_zero() const {
    for (std::size_t k = 1; k < boundary_matrices.size(); ++k) {
      auto p = multiply(boundary_matrices[k - 1], boundary_matrices[k]);
      if (!p || !is_zero(*p)) return false;
    }
    return true;
  }
};

inline ChainComplex boundary_matrices(CubeComplex const& c) {
  ChainComplex cc;
  cc.cell_counts = f_vector(c);
  auto const& g = c.source();
  for (std::size_t k = 1; k < cc.cell_counts.size(); ++k) {
    SparseMatrix m{c.count(k - 1), c.count(k), {}};
    m.columns.resize(m.cols);
    for (std::size_t j = 0; j < m.cols; ++j) {
      for (auto const& [f, s] : signed_facets(g, c.cell(k, j))) {
        auto row = c.find(f);
        if (!row) throw DomainError("complex is not closed under faces: missing " + format_cell(f));
        m.columns[j].emplace_back(*row, s);
      }
      std::sort(m.columns[j].begin(), m.columns[j].end());
    }
    cc.boundary_matrices.push_back(std::move(m));
  }
  return cc;
}

// d(d(c)) = 0 checked cell by cell without materializing matrices; used
// on complexes too large for explicit boundary matrices.
inline std::optional<Cell> find_nonzero_double_boundary(CubeComplex const& c) {
  auto const& g = c.source();
  for (std::size_t k = 2; k < c.grades(); ++k)
    for (std::size_t j = 0; j < c.count(k); ++j) {
      auto cell = c.cell(k, j);
      std::map<Cell, long long> acc;
      for (auto const& [f, s] : signed_facets(g, cell))
        for (auto const& [ff, t] : signed_facets(g, f)) acc[ff] += s * t;
      for (auto const& [ff, v] : acc)
        if (v != 0) return cell;
    }
  return std::nullopt;
}

// ---------------------------------------------------------------------------
// Smith normal form

struct SmithResult {
  std::vector<BigInt> divisors;  // nonzero diagonal, each dividing the next
  std::size_t rank = 0;
};

namespace detail {

struct Overflow : std::exception {};

inline long long checked_sub_mul(long long a, long long q, long long b) {
  long long p, r;
  if (__builtin_mul_overflow(q, b, &p) || __builtin_sub_overflow(a, p, &r)) throw Overflow{};
  return r;
}
inline long long checked_add(long long a, long long b) {
  long long r;
  if (__builtin_add_overflow(a, b, &r)) throw Overflow{};
  return r;
}
inline BigInt checked_sub_mul(BigInt const& a, BigInt const& q, BigInt const& b) { return a - q * b; }
inline BigInt checked_add(BigInt const& a, BigInt const& b) { return a + b; }

template <typename Int>
Int abs_of(Int const& x) {
  return x < 0 ? Int(-x) : x;
}

// Pivot-minimizing elementary reduction. Works in place.
template <typename Int>
SmithResult smith_in_place(DenseMatrix<Int>& a, std::size_t rows, std::size_t cols) {
  SmithResult res;
  std::size_t t = 0;
  auto const limit = std::min(rows, cols);
  while (t < limit) {
    // Smallest nonzero entry in the trailing block.
    std::optional<std::pair<std::size_t, std::size_t>> piv;
    for (std::size_t i = t; i < rows; ++i)
      for (std::size_t j = t; j < cols; ++j)
        if (a[i][j] != 0 && (!piv || abs_of(a[i][j]) < abs_of(a[piv->first][piv->second]))) {
          piv = {i, j};
          if (abs_of(a[i][j]) == 1) goto found;
        }
  found:
    if (!piv) break;
    std::swap(a[t], a[piv->first]);
    for (std::size_t i = 0; i < rows; ++i) std::swap(a[i][t], a[i][piv->second]);

    bool again = true;
    while (again) {
      again = false;
      for (std::size_t i = t + 1; i < rows; ++i) {
        if (a[i][t] == 0) continue;
        Int q = a[i][t] / a[t][t];
        for (std::size_t j = t; j < cols; ++j)
          if (a[t][j] != 0) a[i][j] = checked_sub_mul(a[i][j], q, a[t][j]);
        if (a[i][t] != 0) {
          std::swap(a[t], a[i]);
          again = true;
        }
      }
      for (std::size_t j = t + 1; j < cols; ++j) {
        if (a[t][j] == 0) continue;
        Int q = a[t][j] / a[t][t];
        for (std::size_t i = t; i < rows; ++i)
          if (a[i][t] != 0) a[i][j] = checked_sub_mul(a[i][j], q, a[i][t]);
        if (a[t][j] != 0) {
          for (std::size_t i = 0; i < rows; ++i) std::swap(a[i][t], a[i][j]);
          again = true;
        }
      }
      if (again) continue;
      // Enforce divisibility of the trailing block by the pivot.
      for (std::size_t i = t + 1; i < rows && !again; ++i)
        for (std::size_t j = t + 1; j < cols; ++j)
          if (a[i][j] % a[t][t] != 0) {
            for (std::size_t jj = t; jj < cols; ++jj) a[t][jj] = checked_add(a[t][jj], a[i][jj]);
            again = true;
            break;
          }
    }
    res.divisors.emplace_back(BigInt(abs_of(a[t][t])));
    ++t;
  }
  res.rank = res.divisors.size();
  return res;
}

}  // namespace detail

// Elementary divisors and rank. Tries 64-bit arithmetic first and redoes
// the reduction with unbounded integers if any intermediate overflows.
inline SmithResult smith_normal_form(SparseMatrix const& m) {
  try {
    auto a = to_dense<long long>(m);
    return detail::smith_in_place(a, m.rows, m.cols);
  } catch (detail::Overflow const&) {
    auto a = to_dense<BigInt>(m);
    return detail::smith_in_place(a, m.rows, m.cols);
  }
}

template <typename Int>
SmithResult smith_normal_form(DenseMatrix<Int> m) {
  std::size_t rows = m.size(), cols = rows ? m[0].size() : 0;
  DenseMatrix<BigInt> a(rows, std::vector<BigInt>(cols));
  for (std::size_t i = 0; i < rows; ++i)
    for (std::size_t j = 0; j < cols; ++j) a[i][j] = BigInt(m[i][j]);
  return detail::smith_in_place(a, rows, cols);
}

// Rank over Q by fraction-free (Bareiss) elimination; an independent route
// to the rank reported by smith_normal_form.
template <typename Int>
std::size_t rational_rank_oracle(DenseMatrix<Int> const& m) {
  std::size_t rows = m.size(), cols = rows ? m[0].size() : 0;
  DenseMatrix<BigInt> a(rows, std::vector<BigInt>(cols));
  for (std::size_t i = 0; i < rows; ++i)
    for (std::size_t j = 0; j < cols; ++j) a[i][j] = BigInt(m[i][j]);
  BigInt prev = 1;
  std::size_t rank = 0;
  for (std::size_t col = 0; col < cols && rank < rows; ++col) {
    std::size_t p = rank;
    while (p < rows && a[p][col] == 0) ++p;
    if (p == rows) continue;
    std::swap(a[p], a[rank]);
    for (std::size_t i = rank + 1; i < rows; ++i) {
      for (std::size_t j = col + 1; j < cols; ++j)
        a[i][j] = (a[rank][col] * a[i][j] - a[i][col] * a[rank][j]) / prev;
      a[i][col] = 0;
    }
    prev = a[rank][col];
    ++rank;
  }
  return rank;
}

inline std::size_t rational_rank_oracle(SparseMatrix const& m) { return rational_rank_oracle(to_dense<long long>(m)); }

// ---------------------------------------------------------------------------
// Betti numbers

struct HomologySummary {
  std::vector<std::size_t> betti;
  std::vector<std::vector<BigInt>> torsion;  // per dimension, divisors > 1

  long long euler_characteristic() const {
    long long chi = 0;
    for (std::size_t k = 0; k < betti.size(); ++k) chi += (k % 2 ? -1LL : 1LL) * static_cast<long long>(betti[k]);
    return chi;
  }
  bool torsion_free() const {
    return std::all_of(torsion.begin(), torsion.end(), [](auto const& t) { return t.empty(); });
  }
};

inline HomologySummary betti_numbers(ChainComplex const& cc) {
  auto const top = cc.cell_counts.size();
  std::vector<SmithResult> snf(top + 1);
  for (std::size_t k = 1; k < top; ++k) snf[k] = smith_normal_form(*cc.boundary(k));
  HomologySummary h;
  h.betti.resize(top);
  h.torsion.resize(top);
  for (std::size_t k = 0; k < top; ++k) {
    std::size_t rank_in = k >= 1 ? snf[k].rank : 0;
    std::size_t rank_out = k + 1 < top ? snf[k + 1].rank : 0;
    h.betti[k] = cc.cell_counts[k] - rank_in - rank_out;
    if (k + 1 < top)
      for (auto const& d : snf[k + 1].divisors)
        if (d > 1) h.torsion[k].push_back(d);
  }
  return h;
}

inline HomologySummary homology(CubeComplex const& c) { return betti_numbers(boundary_matrices(c)); }

}  // namespace gbraid
