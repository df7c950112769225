#include "cgclosure/linalg.hpp"

#include <algorithm>

namespace cgc {

Integer gcd_of(const ZVec& v) {
  Integer g = 0;
  for (const auto& x : v) g = gcd(g, x);
  return g;
}

ZVec primitive(const ZVec& v) {
  Integer g = gcd_of(v);
  if (g == 0 || g == 1) return v;
  ZVec out(v.size());
  for (size_t i = 0; i < v.size(); ++i) out[i] = v[i] / g;
  return out;
}

Integer common_denominator(const RVec& v) {
  Integer l = 1;
  for (const auto& x : v) l = lcm(l, Integer(x.get_den()));
  return l;
}

ZVec scale_to_primitive(const RVec& v) {
  Integer l = common_denominator(v);
  ZVec z(v.size());
  for (size_t i = 0; i < v.size(); ++i) {
    Rational s = v[i] * l;
    z[i] = s.get_num();
  }
  return primitive(z);
}

namespace {

void row_axpy(ZVec& target, const ZVec& source, const Integer& q) {
  if (q == 0) return;
  for (size_t i = 0; i < target.size(); ++i)
    if (source[i] != 0) target[i] -= q * source[i];
}

Integer floor_div(const Integer& a, const Integer& b) {
  Integer q;
  mpz_fdiv_q(q.get_mpz_t(), a.get_mpz_t(), b.get_mpz_t());
  return q;
}

}  // namespace

RowReduction hermite_rows(const ZMat& rows, size_t ncols) {
  RowReduction out;
  out.h = rows;
  size_t m = rows.size();
  out.t.assign(m, ZVec(m, 0));
  for (size_t i = 0; i < m; ++i) out.t[i][i] = 1;
  size_t row = 0;
  for (size_t col = 0; col < ncols && row < m; ++col) {
    // Euclid on column `col` among rows row..m-1.
    while (true) {
      size_t best = m;
      for (size_t r = row; r < m; ++r) {
        if (out.h[r][col] == 0) continue;
        if (best == m || abs(out.h[r][col]) < abs(out.h[best][col])) best = r;
      }
      if (best == m) break;
      std::swap(out.h[row], out.h[best]);
      std::swap(out.t[row], out.t[best]);
      bool done = true;
      for (size_t r = row + 1; r < m; ++r) {
        if (out.h[r][col] == 0) continue;
        Integer q = floor_div(out.h[r][col], out.h[row][col]);
        row_axpy(out.h[r], out.h[row], q);
        row_axpy(out.t[r], out.t[row], q);
        if (out.h[r][col] != 0) done = false;
      }
      if (done) break;
    }
    if (out.h[row][col] == 0) continue;
    if (out.h[row][col] < 0) {
      for (auto& x : out.h[row]) x = -x;
      for (auto& x : out.t[row]) x = -x;
    }
    for (size_t r = 0; r < row; ++r) {
      Integer q = floor_div(out.h[r][col], out.h[row][col]);
      row_axpy(out.h[r], out.h[row], q);
      row_axpy(out.t[r], out.t[row], q);
    }
    ++row;
  }
  out.rank = row;
  return out;
}

ZMat integer_kernel(const ZMat& a, size_t n) {
  // Reduce the columns of a: T * a^T = H, rows of T past the rank span the kernel.
  ZMat at(n, ZVec(a.size()));
  for (size_t i = 0; i < a.size(); ++i)
    for (size_t j = 0; j < n; ++j) at[j][i] = a[i][j];
  RowReduction red = hermite_rows(at, a.size());
  ZMat kernel(red.t.begin() + static_cast<long>(red.rank), red.t.end());
  ZMat none;
  if (!kernel.empty()) lll_reduce(kernel, none);
  return kernel;
}

void lll_reduce(ZMat& b, ZMat& companion) {
  size_t k = b.size();
  if (k <= 1) return;
  const Rational delta(3, 4);
  auto swap_rows = [&](size_t i, size_t j) {
    std::swap(b[i], b[j]);
    if (!companion.empty()) std::swap(companion[i], companion[j]);
  };
  auto reduce_row = [&](size_t i, size_t j, const Integer& q) {
    row_axpy(b[i], b[j], q);
    if (!companion.empty()) row_axpy(companion[i], companion[j], q);
  };
  auto gram_schmidt = [&](std::vector<RVec>& bstar, Matrix<Rational>& mu, RVec& norms) {
    bstar.assign(k, RVec());
    mu.assign(k, RVec(k, Rational(0)));
    norms.assign(k, Rational(0));
    for (size_t i = 0; i < k; ++i) {
      bstar[i] = to_rvec(b[i]);
      for (size_t j = 0; j < i; ++j) {
        mu[i][j] = dot(to_rvec(b[i]), bstar[j]) / norms[j];
        for (size_t c = 0; c < bstar[i].size(); ++c) bstar[i][c] -= mu[i][j] * bstar[j][c];
      }
      norms[i] = dot(bstar[i], bstar[i]);
    }
  };
  std::vector<RVec> bstar;
  Matrix<Rational> mu;
  RVec norms;
  gram_schmidt(bstar, mu, norms);
  size_t i = 1;
  int guard = 0;
  while (i < k && guard++ < 100000) {
    for (size_t j = i; j-- > 0;) {
      Rational m = mu[i][j];
      Integer q = floor_rational(m + Rational(1, 2));
      if (q != 0) {
        reduce_row(i, j, q);
        gram_schmidt(bstar, mu, norms);
      }
    }
    if (norms[i] >= (delta - mu[i][i - 1] * mu[i][i - 1]) * norms[i - 1]) {
      ++i;
    } else {
      swap_rows(i, i - 1);
      gram_schmidt(bstar, mu, norms);
      i = std::max<size_t>(i - 1, 1);
    }
  }
}

ZVec add(const ZVec& a, const ZVec& b) {
  ZVec r(a.size());
  for (size_t i = 0; i < a.size(); ++i) r[i] = a[i] + b[i];
  return r;
}

ZVec sub(const ZVec& a, const ZVec& b) {
  ZVec r(a.size());
  for (size_t i = 0; i < a.size(); ++i) r[i] = a[i] - b[i];
  return r;
}

ZVec scale(const ZVec& a, const Integer& k) {
  ZVec r(a.size());
  for (size_t i = 0; i < a.size(); ++i) r[i] = a[i] * k;
  return r;
}

RVec to_rvec(const ZVec& v) { return RVec(v.begin(), v.end()); }

}  // namespace cgc
