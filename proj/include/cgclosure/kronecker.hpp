#pragma once

// Simultaneous approximation a - N*pi for pi over Q(sqrt m) via the
// continued fraction of sqrt m, and the dense subspace of Z^n + pi*Z.

#include <optional>

#include "cgclosure/linalg.hpp"

namespace cgc {

/// Successive convergents s/t of sqrt(m).
class SqrtConvergents {
 public:
  explicit SqrtConvergents(long m);
  /// Advances and returns the next convergent (s, t); the first is (floor sqrt m, 1).
  std::pair<Integer, Integer> next();

 private:
  long m_;
  Integer a0_, mk_, dk_, ak_;
  Integer p_prev_, p_, q_prev_, q_;
  bool started_ = false;
};

/// The subspace V whose dense subset Z^n + pi*Z_{>N0} contains, with the
/// integer dependency data m* pi_j = n_j + n_{j,j*} pi_{j*}.
struct KroneckerSubspace {
  int field = 0;
  /// 0 when pi is rational, otherwise 1.
  size_t rational_part_dim = 0;
  /// Index j* of the first coordinate with an irrational part.
  std::optional<size_t> pivot;
  Integer mstar = 1;
  /// n_j (zero at j*).
  ZVec offsets;
  /// n_{j,j*} (m* at j*).
  ZVec coefficients;
  /// Defining equations m* x_j - n_{j,j*} x_{j*} = 0 for j != j*.
  std::vector<ZVec> equations;
  /// Integral generator e~_{j*} of V (empty when pi is rational).
  ZVec generator;
  /// pi~ = m* pi - sum n_j e_j.
  QVec pi_tilde;

  bool contains(const QVec& x) const;
  int dim() const { return static_cast<int>(rational_part_dim); }
};

KroneckerSubspace dense_subspace(const QVec& pi);

struct Approximant {
  ZVec a;
  Integer n;
  /// a - N*pi, exactly.
  QVec residual;
  QuadExt residual_norm_sq;
};

/// First N > N0 (in convergent order) with |a - N pi| < eps, checked exactly.
/// Throws BudgetExhausted after max_steps convergents.
Approximant approximate(const QVec& pi, const Rational& eps, const Integer& n0, int max_steps = 2000);

/// Approximants whose residuals have 0 in the relative interior of their
/// convex hull: weights lambda > 0 summing to 1 with sum lambda_i r_i = 0.
struct BalancedFamily {
  std::vector<Approximant> members;
  QVec lambda;
};
BalancedFamily sign_balanced_approximants(const QVec& pi, const Rational& eps, const Integer& n0,
                                          int max_steps = 2000);

}  // namespace cgc
