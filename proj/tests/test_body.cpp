#include <gtest/gtest.h>

#include <cmath>
#include <random>

#include "cgclosure/body.hpp"
#include "oracle.hpp"

using namespace cgc;

namespace {

QVec qv(std::initializer_list<Rational> xs) {
  QVec out;
  for (const auto& x : xs) out.emplace_back(x);
  return out;
}

QuadExt r2(Rational a, Rational b) { return QuadExt(std::move(a), std::move(b), 2); }

ConvexBody unit_square() {
  return ConvexBody(Polytope::from_vertices(2, {qv({0, 0}), qv({1, 0}), qv({0, 1}), qv({1, 1})}));
}

ConvexBody sqrt2_segment() { return ConvexBody(Polytope::from_vertices(2, {qv({0, 0}), {QuadExt(1), r2(0, 1)}})); }

ConvexBody disk() { return ConvexBody(Ball{{0, 0}, Rational(3, 2)}); }

}  // namespace

TEST(Support, UnitSquareCorner) {
  ConvexBody k = unit_square();
  SupportValue s = k.support(ZVec{1, 1});
  ASSERT_TRUE(s.is_exact());
  EXPECT_EQ(s.exact(), QuadExt(2));
  ASSERT_TRUE(s.face.has_value());
  ASSERT_EQ(s.face->vertices.size(), 1u);
  EXPECT_EQ(k.polytope().vertices()[s.face->vertices[0]], qv({1, 1}));
}

TEST(Support, DiskEnclosure) {
  SupportValue s = disk().support(ZVec{1, 1});
  CertifiedInterval iv = s.enclosure(32);
  // (3/2) sqrt 2 lies in [2.121320, 2.121321].
  EXPECT_LE(iv.lo, Rational(2121321, 1000000));
  EXPECT_GE(iv.hi, Rational(2121320, 1000000));
  EXPECT_LE(iv.lo, iv.hi);
  EXPECT_TRUE(iv.refinable);
  EXPECT_LT(iv.hi - iv.lo, Rational(1, 1000000));
  EXPECT_EQ(s.floor(), 2);
  EXPECT_NEAR(s.to_double(), 1.5 * std::sqrt(2.0), 1e-12);
}

TEST(Support, IrrationalSegment) {
  ConvexBody k = sqrt2_segment();
  SupportValue s = k.support(ZVec{0, 1});
  ASSERT_TRUE(s.is_exact());
  EXPECT_EQ(s.exact(), r2(0, 1));
  ASSERT_EQ(s.face->vertices.size(), 1u);
  EXPECT_EQ(k.polytope().vertices()[s.face->vertices[0]], (QVec{QuadExt(1), r2(0, 1)}));
  EXPECT_EQ(s.floor(), 1);
}

TEST(Support, EllipseMatchesClosedForm) {
  ConvexBody e(Ellipse2D{{Rational(1, 2), 0}, {{4, 1}, {1, 2}}});
  for (long a = -3; a <= 3; ++a)
    for (long b = -3; b <= 3; ++b) {
      if (a == 0 && b == 0) continue;
      double want = 0.5 * a + std::sqrt(4.0 * a * a + 2.0 * a * b + 2.0 * b * b);
      SupportValue s = e.support(ZVec{a, b});
      EXPECT_NEAR(s.to_double(), want, 1e-9);
      // Exact floor: the largest t with t - a/2 <= sqrt(c^T Q c).
      Rational lin(a, 2), rad(4 * a * a + 2 * a * b + 2 * b * b);
      Integer t = oracle::floor_q(lin) + oracle::floor_sqrt(rad) + 1;
      while (!(Rational(t) - lin <= 0 || (Rational(t) - lin) * (Rational(t) - lin) <= rad)) --t;
      EXPECT_EQ(s.floor(), t);
    }
}

TEST(Support, ZeroDirectionRejected) {
  try {
    unit_square().support(ZVec{0, 0});
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::InvalidInput);
  }
}

TEST(Contains, Examples) {
  EXPECT_TRUE(unit_square().contains(qv({Rational(1, 2), Rational(1, 2)})));
  EXPECT_TRUE(disk().contains(qv({1, 1})));
  EXPECT_FALSE(disk().contains(qv({Rational(3, 2), Rational(1, 10)})));
  EXPECT_TRUE(sqrt2_segment().contains({QuadExt(Rational(1, 2)), r2(0, Rational(1, 2))}));
  // Boundary point of the disk in Q(sqrt 2): (3/2)(1/sqrt2, 1/sqrt2).
  EXPECT_TRUE(disk().contains({r2(0, Rational(3, 4)), r2(0, Rational(3, 4))}));
  EXPECT_FALSE(disk().contains({r2(0, Rational(3, 4)), r2(Rational(1, 1000), Rational(3, 4))}));
}

TEST(BodyProperty, PolytopeSupportIsMaxOverVertices) {
  std::mt19937 rng(31);
  std::uniform_int_distribution<int> coef(-4, 4);
  for (int i = 0; i < 30; ++i) {
    Polytope p = i % 2 ? oracle::random_polygon(rng, 6) : oracle::random_polytope3(rng, 6);
    ConvexBody k(p);
    // The same body rebuilt from its H-representation.
    ConvexBody from_h(Polytope::from_inequalities(p.ambient_dim(), p.inequalities()));
    for (int s = 0; s < 10; ++s) {
      ZVec c;
      for (size_t j = 0; j < p.ambient_dim(); ++j) c.push_back(coef(rng));
      if (is_zero(c)) continue;
      Rational best = dot(to_qvec(c), p.vertices()[0]).as_rational();
      for (const auto& v : p.vertices()) best = std::max(best, dot(to_qvec(c), v).as_rational());
      ASSERT_EQ(k.support(c).exact(), QuadExt(best));
      ASSERT_EQ(from_h.support(c).exact(), QuadExt(best));
    }
  }
}

TEST(BodyProperty, Sublinear) {
  std::mt19937 rng(32);
  std::uniform_int_distribution<int> coef(-5, 5), scale(1, 4);
  ConvexBody e(Ellipse2D{{Rational(1, 3), Rational(-1, 2)}, {{3, 1}, {1, 2}}});
  for (int i = 0; i < 200; ++i) {
    ConvexBody k = i % 4 == 0 ? disk() : i % 4 == 1 ? e : ConvexBody(oracle::random_polygon(rng, 5));
    ZVec a = {coef(rng), coef(rng)}, b = {coef(rng), coef(rng)};
    ZVec sum = {a[0] + b[0], a[1] + b[1]};
    if (is_zero(a) || is_zero(b) || is_zero(sum)) continue;
    long t = scale(rng);
    ZVec ta = {a[0] * t, a[1] * t};
    if (k.is_polytope()) {
      ASSERT_LE(k.support(sum).exact(), k.support(a).exact() + k.support(b).exact());
      ASSERT_EQ(k.support(ta).exact(), QuadExt(t) * k.support(a).exact());
    } else {
      CertifiedInterval s = k.support(sum).enclosure(64), x = k.support(a).enclosure(64),
                        y = k.support(b).enclosure(64), st = k.support(ta).enclosure(64);
      ASSERT_LE(s.lo, x.hi + y.hi);
      ASSERT_LE(st.lo, x.hi * t);
      ASSERT_GE(st.hi, x.lo * t);
    }
  }
}

TEST(BodyProperty, VerticesInsideOutwardStepsOutside) {
  std::mt19937 rng(33);
  for (int i = 0; i < 20; ++i) {
    Polytope p = i % 2 ? oracle::random_polygon(rng, 6) : oracle::random_polytope3(rng, 6);
    ConvexBody k(p);
    for (const auto& v : p.vertices()) {
      ASSERT_TRUE(k.contains(v));
      for (const auto& f : p.facets()) {
        if (dot(f.normal, v) != f.rhs) continue;
        QVec out = v;
        for (size_t j = 0; j < out.size(); ++j) out[j] += f.normal[j] * QuadExt(Rational(1, 100));
        ASSERT_FALSE(k.contains(out));
      }
    }
  }
}
