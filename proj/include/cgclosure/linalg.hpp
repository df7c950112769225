#pragma once

// Exact dense linear algebra over Q and Q(sqrt m), and integer lattice
// reductions (Hermite-style row echelon form, kernels, LLL).

#include <optional>
#include <vector>

#include "cgclosure/numeric.hpp"

namespace cgc {

template <class F>
using Matrix = std::vector<std::vector<F>>;

using ZMat = std::vector<ZVec>;

inline bool scalar_zero(const Rational& x) { return sgn(x) == 0; }
inline bool scalar_zero(const QuadExt& x) { return x.is_zero(); }
inline bool scalar_zero(const Integer& x) { return sgn(x) == 0; }

/// Reduced row echelon form in place, restricted to the first `ncols`
/// columns; returns the pivot columns.
template <class F>
std::vector<size_t> rref(Matrix<F>& a, size_t ncols) {
  std::vector<size_t> pivots;
  size_t row = 0;
  for (size_t col = 0; col < ncols && row < a.size(); ++col) {
    size_t p = row;
    while (p < a.size() && scalar_zero(a[p][col])) ++p;
    if (p == a.size()) continue;
    std::swap(a[row], a[p]);
    F inv = F(1) / a[row][col];
    for (auto& x : a[row]) x *= inv;
    for (size_t r = 0; r < a.size(); ++r) {
      if (r == row || scalar_zero(a[r][col])) continue;
      F f = a[r][col];
      for (size_t c = 0; c < a[r].size(); ++c)
        if (!scalar_zero(a[row][c])) a[r][c] -= f * a[row][c];
    }
    pivots.push_back(col);
    ++row;
  }
  a.resize(row);
  return pivots;
}

template <class F>
size_t rank(Matrix<F> a) {
  if (a.empty()) return 0;
  return rref(a, a[0].size()).size();
}

/// Basis of {x : a x = 0} for a matrix with `ncols` columns.
template <class F>
Matrix<F> nullspace(Matrix<F> a, size_t ncols) {
  auto pivots = rref(a, ncols);
  std::vector<bool> is_pivot(ncols, false);
  for (size_t p : pivots) is_pivot[p] = true;
  Matrix<F> basis;
  for (size_t free = 0; free < ncols; ++free) {
    if (is_pivot[free]) continue;
    std::vector<F> v(ncols, F(0));
    v[free] = F(1);
    for (size_t r = 0; r < pivots.size(); ++r) v[pivots[r]] = -a[r][free];
    basis.push_back(std::move(v));
  }
  return basis;
}

/// Some solution of a x = b, or nullopt if inconsistent.
template <class F>
std::optional<std::vector<F>> solve(const Matrix<F>& a, const std::vector<F>& b, size_t ncols) {
  Matrix<F> aug = a;
  for (size_t i = 0; i < aug.size(); ++i) aug[i].push_back(b[i]);
  auto pivots = rref(aug, ncols + 1);
  if (!pivots.empty() && pivots.back() == ncols) return std::nullopt;
  std::vector<F> x(ncols, F(0));
  for (size_t r = 0; r < pivots.size(); ++r) x[pivots[r]] = aug[r][ncols];
  return x;
}

template <class F>
std::optional<Matrix<F>> inverse(const Matrix<F>& a) {
  size_t n = a.size();
  Matrix<F> aug = a;
  for (size_t i = 0; i < n; ++i)
    for (size_t j = 0; j < n; ++j) aug[i].push_back(F(i == j ? 1 : 0));
  auto pivots = rref(aug, n);
  if (pivots.size() != n) return std::nullopt;
  Matrix<F> inv(n);
  for (size_t i = 0; i < n; ++i) inv[i].assign(aug[i].begin() + n, aug[i].end());
  return inv;
}

template <class F>
Matrix<F> transpose(const Matrix<F>& a, size_t ncols) {
  Matrix<F> t(ncols, std::vector<F>(a.size()));
  for (size_t i = 0; i < a.size(); ++i)
    for (size_t j = 0; j < ncols; ++j) t[j][i] = a[i][j];
  return t;
}

template <class F>
Matrix<F> multiply(const Matrix<F>& a, const Matrix<F>& b) {
  if (a.empty()) return {};
  size_t inner = b.size(), cols = b.empty() ? 0 : b[0].size();
  Matrix<F> c(a.size(), std::vector<F>(cols, F(0)));
  for (size_t i = 0; i < a.size(); ++i)
    for (size_t k = 0; k < inner; ++k) {
      if (scalar_zero(a[i][k])) continue;
      for (size_t j = 0; j < cols; ++j) c[i][j] += a[i][k] * b[k][j];
    }
  return c;
}

// ------------------------------------------------------------- lattices

Integer gcd_of(const ZVec& v);
/// Divides by the gcd of the entries (sign preserved); zero stays zero.
ZVec primitive(const ZVec& v);
/// Smallest positive integer L with L*v integral.
Integer common_denominator(const RVec& v);
/// Positive rational multiple of v with coprime integer entries.
ZVec scale_to_primitive(const RVec& v);

/// Unimodular row reduction: t * rows = h with h in row echelon form and
/// the first `rank` rows of h nonzero. Pivots are positive and entries above
/// a pivot are reduced modulo it.
struct RowReduction {
  ZMat h;
  ZMat t;
  size_t rank = 0;
};
RowReduction hermite_rows(const ZMat& rows, size_t ncols);

/// Lattice basis of {z in Z^n : a z = 0}.
ZMat integer_kernel(const ZMat& a, size_t n);

/// LLL-reduces the rows of `basis` (linearly independent) with delta 3/4.
/// Every row operation is mirrored on `companion`, which may be empty.
void lll_reduce(ZMat& basis, ZMat& companion);

ZVec add(const ZVec& a, const ZVec& b);
ZVec sub(const ZVec& a, const ZVec& b);
ZVec scale(const ZVec& a, const Integer& k);
RVec to_rvec(const ZVec& v);

}  // namespace cgc
