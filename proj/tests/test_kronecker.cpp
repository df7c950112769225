#include <gtest/gtest.h>

#include <random>

#include "cgclosure/kronecker.hpp"
#include "oracle.hpp"

using namespace cgc;

namespace {

QuadExt r2(Rational a, Rational b) { return QuadExt(std::move(a), std::move(b), 2); }

/// |a - N pi|^2 < eps^2 recomputed from the raw coordinates with the squaring oracle.
bool residual_below(const QVec& pi, const ZVec& a, const Integer& n, const Rational& eps, long m) {
  Rational rat = 0, irr = 0;
  for (size_t j = 0; j < pi.size(); ++j) {
    Rational u = Rational(a[j]) - Rational(n) * pi[j].rat();
    Rational v = -Rational(n) * pi[j].irr();
    rat += u * u + v * v * m;
    irr += 2 * u * v;
  }
  // rat + irr sqrt(m) < eps^2 iff irr sqrt(m) < gap.
  Rational gap = eps * eps - rat;
  if (irr == 0) return gap > 0;
  return !oracle::le_root(gap, irr, m);
}

}  // namespace

TEST(SqrtConvergents, Sqrt2) {
  SqrtConvergents cf(2);
  std::vector<std::pair<Integer, Integer>> want = {{1, 1}, {3, 2}, {7, 5}, {17, 12}, {41, 29}, {99, 70}};
  for (const auto& w : want) EXPECT_EQ(cf.next(), w);
}

TEST(SqrtConvergents, PellSolutions) {
  for (long m : {3L, 5L, 7L, 13L}) {
    SqrtConvergents cf(m);
    for (int i = 0; i < 20; ++i) {
      auto [s, t] = cf.next();
      // |s^2 - m t^2| < 2 sqrt(m) + 1 for convergents; compared squared.
      Integer norm = s * s - m * t * t;
      EXPECT_LE(abs(norm) * abs(norm), 4 * m + 4 * m + 1);
      EXPECT_NE(norm, 0);
    }
  }
}

TEST(DenseSubspace, Examples) {
  KroneckerSubspace one = dense_subspace({r2(0, 1)});
  EXPECT_EQ(one.dim(), 1);
  EXPECT_TRUE(one.equations.empty());

  KroneckerSubspace two = dense_subspace({r2(0, 1), r2(1, 1)});
  EXPECT_EQ(two.dim(), 1);
  EXPECT_EQ(two.mstar, 1);
  ASSERT_EQ(two.equations.size(), 1u);
  EXPECT_EQ(two.equations[0][0], -two.equations[0][1]);
  EXPECT_EQ(two.pi_tilde, (QVec{r2(0, 1), r2(0, 1)}));
  EXPECT_TRUE(two.contains({QuadExt(3), QuadExt(3)}));
  EXPECT_FALSE(two.contains({QuadExt(3), QuadExt(2)}));

  KroneckerSubspace rat = dense_subspace({QuadExt(Rational(1, 2)), QuadExt(Rational(1, 3))});
  EXPECT_EQ(rat.dim(), 0);
}

TEST(Approximate, Sqrt2Hundredth) {
  Approximant ap = approximate({r2(0, 1)}, Rational(1, 100), 0);
  EXPECT_EQ(ap.a, (ZVec{99}));
  EXPECT_EQ(ap.n, 70);
  EXPECT_EQ(99 * 99 - 2 * 70 * 70, 1);
  EXPECT_TRUE(residual_below({r2(0, 1)}, ap.a, ap.n, Rational(1, 100), 2));
  EXPECT_EQ(ap.residual, (QVec{r2(99, -70)}));
}

TEST(Approximate, RationalTargetHitsExactly) {
  Approximant ap = approximate({QuadExt(Rational(1, 2)), QuadExt(Rational(1, 3))}, Rational(1, 1000), 5);
  EXPECT_EQ(ap.a, (ZVec{3, 2}));
  EXPECT_EQ(ap.n, 6);
  EXPECT_TRUE(is_zero(ap.residual));
}

TEST(Approximate, DependentPair) {
  QVec pi = {r2(0, 1), r2(1, 1)};
  Approximant ap = approximate(pi, Rational(1, 10), 0);
  EXPECT_GT(ap.n, 0);
  EXPECT_TRUE(residual_below(pi, ap.a, ap.n, Rational(1, 10), 2));
  // The residual lies on V: both coordinates equal.
  EXPECT_EQ(ap.residual[0], ap.residual[1]);
  // The pair (41, 70), N = 29 is admissible as well.
  EXPECT_TRUE(residual_below(pi, {41, 70}, 29, Rational(1, 10), 2));
}

TEST(Approximate, RespectsLowerBound) {
  Approximant ap = approximate({r2(0, 1)}, Rational(1, 100), 70);
  EXPECT_GT(ap.n, 70);
  EXPECT_TRUE(residual_below({r2(0, 1)}, ap.a, ap.n, Rational(1, 100), 2));
}

TEST(Approximate, Budget) {
  try {
    approximate({r2(0, 1)}, Rational(1, Integer("1000000000000000000000000000000")), 0, 5);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::BudgetExhausted);
  }
}

TEST(Balanced, OppositeSignsForSqrt2) {
  BalancedFamily fam = sign_balanced_approximants({r2(0, 1)}, Rational(1, 10), 0);
  ASSERT_EQ(fam.members.size(), 2u);
  EXPECT_NE(fam.members[0].residual[0].sign(), fam.members[1].residual[0].sign());
  QuadExt sum = 0, weights = 0;
  for (size_t i = 0; i < 2; ++i) {
    EXPECT_GT(fam.lambda[i].sign(), 0);
    sum += fam.lambda[i] * fam.members[i].residual[0];
    weights += fam.lambda[i];
  }
  EXPECT_TRUE(sum.is_zero());
  EXPECT_EQ(weights, QuadExt(1));
  // 41 - 29 sqrt2 < 0 < 99 - 70 sqrt2.
  EXPECT_LT(r2(41, -29).sign(), 0);
  EXPECT_GT(r2(99, -70).sign(), 0);
}

TEST(Balanced, RationalSingleMember) {
  BalancedFamily fam = sign_balanced_approximants({QuadExt(Rational(2, 3))}, Rational(1, 10), 0);
  ASSERT_EQ(fam.members.size(), 1u);
  EXPECT_EQ(fam.lambda, (QVec{QuadExt(1)}));
  EXPECT_TRUE(is_zero(fam.members[0].residual));
}

TEST(Balanced, DependentPair) {
  QVec pi = {r2(0, 1), r2(1, 1)};
  BalancedFamily fam = sign_balanced_approximants(pi, Rational(1, 10), 0);
  ASSERT_EQ(fam.members.size(), 2u);
  for (const auto& m : fam.members) EXPECT_EQ(m.residual[0], m.residual[1]);
  EXPECT_NE(fam.members[0].residual[0].sign(), fam.members[1].residual[0].sign());
}

TEST(KroneckerProperty, RandomTargets) {
  std::mt19937 rng(51);
  std::uniform_int_distribution<int> num(-20, 20), den(1, 7), dim(1, 3), n0(0, 50), eps_den(10, 2000);
  const long fields[] = {2, 3, 5};
  for (int i = 0; i < 100; ++i) {
    long m = fields[i % 3];
    QVec pi;
    bool irrational = false;
    for (int j = dim(rng); j > 0; --j) {
      Rational a(num(rng), den(rng)), b(num(rng), den(rng));
      a.canonicalize();
      b.canonicalize();
      irrational |= b != 0;
      pi.push_back(QuadExt(a, b, static_cast<int>(m)));
    }
    Rational eps(1, eps_den(rng));
    Integer lower = n0(rng);
    Approximant ap = approximate(pi, eps, lower);
    ASSERT_GT(ap.n, lower);
    ASSERT_TRUE(residual_below(pi, ap.a, ap.n, eps, m)) << "target " << to_string(pi);
    for (size_t j = 0; j < pi.size(); ++j) ASSERT_EQ(ap.residual[j], QuadExt(ap.a[j]) - QuadExt(ap.n) * pi[j]);

    if (!irrational) continue;
    BalancedFamily fam = sign_balanced_approximants(pi, eps, lower);
    QVec total(pi.size(), QuadExt(0));
    QuadExt weight = 0;
    for (size_t k = 0; k < fam.members.size(); ++k) {
      ASSERT_GT(fam.lambda[k].sign(), 0);
      weight += fam.lambda[k];
      for (size_t j = 0; j < pi.size(); ++j) total[j] += fam.lambda[k] * fam.members[k].residual[j];
    }
    ASSERT_EQ(weight, QuadExt(1));
    ASSERT_TRUE(is_zero(total));
  }
}

TEST(KroneckerProperty, ConvergentResidualsShrink) {
  SqrtConvergents cf(2);
  QuadExt prev;
  for (int i = 0; i < 30; ++i) {
    auto [s, t] = cf.next();
    QuadExt r = (QuadExt(s) - QuadExt(t) * r2(0, 1)).abs();
    if (i > 0) ASSERT_LT(r, prev);
    prev = r;
  }
}
