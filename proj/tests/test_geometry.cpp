#include <gtest/gtest.h>

#include <random>
#include <set>

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

Polytope unit_square() { return Polytope::from_vertices(2, {qv({0, 0}), qv({1, 0}), qv({0, 1}), qv({1, 1})}); }

Polytope sqrt2_segment() { return Polytope::from_vertices(2, {qv({0, 0}), {QuadExt(1), r2(0, 1)}}); }

std::set<QVec> face_vertices(const Polytope& p, const Face& f) {
  std::set<QVec> out;
  for (size_t i : f.vertices) out.insert(p.vertices()[i]);
  return out;
}

/// True when v is an integer combination of the basis vectors.
bool in_integer_span(const std::vector<RVec>& basis, const RVec& v) {
  Matrix<Rational> a(v.size(), RVec(basis.size()));
  for (size_t i = 0; i < v.size(); ++i)
    for (size_t j = 0; j < basis.size(); ++j) a[i][j] = basis[j][i];
  Matrix<Rational> aug = a;
  for (size_t i = 0; i < v.size(); ++i) aug[i].push_back(v[i]);
  auto piv = rref(aug, basis.size() + 1);
  if (!piv.empty() && piv.back() == basis.size()) return false;
  for (size_t r = 0; r < piv.size(); ++r)
    if (aug[r][basis.size()].get_den() != 1) return false;
  return true;
}

}  // namespace

TEST(DualDescription, UnitSquareFromInequalities) {
  std::vector<Halfspace> hs = {{qv({-1, 0}), 0}, {qv({1, 0}), 1}, {qv({0, -1}), 0}, {qv({0, 1}), 1}};
  Polytope p = Polytope::from_inequalities(2, hs);
  EXPECT_EQ(p.vertices(), (std::vector<QVec>{qv({0, 0}), qv({0, 1}), qv({1, 0}), qv({1, 1})}));
  EXPECT_EQ(p.facets().size(), 4u);
  EXPECT_EQ(p.dim(), 2);
}

TEST(DualDescription, IrrationalSegmentHull) {
  Polytope p = sqrt2_segment();
  ASSERT_EQ(p.dim(), 1);
  ASSERT_EQ(p.affine_hull().equations().size(), 1u);
  const Hyperplane& eq = p.affine_hull().equations()[0];
  // Proportional to sqrt2 x1 - x2 = 0.
  EXPECT_TRUE(eq.rhs.is_zero());
  EXPECT_EQ(eq.normal[0] * QuadExt(-1), eq.normal[1] * r2(0, 1));
  EXPECT_FALSE(p.affine_hull().is_rational());
  EXPECT_TRUE(p.contains({QuadExt(Rational(1, 2)), r2(0, Rational(1, 2))}));
  EXPECT_FALSE(p.contains(qv({Rational(1, 2), Rational(1, 2)})));
}

TEST(DualDescription, ContradictionIsEmpty) {
  Polytope p = Polytope::from_inequalities(1, {{qv({1}), 0}, {qv({-1}), -1}});
  EXPECT_TRUE(p.is_empty());
}

TEST(DualDescription, UnboundedThrows) {
  try {
    Polytope::from_inequalities(2, {{qv({1, 0}), 1}});
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::Unbounded);
  }
}

TEST(DualDescription, RoundTripRandom) {
  std::mt19937 rng(21);
  for (int i = 0; i < 50; ++i) {
    Polytope p = i % 2 ? oracle::random_polygon(rng, 6) : oracle::random_polytope3(rng, 7);
    Polytope back = Polytope::from_inequalities(p.ambient_dim(), p.inequalities());
    ASSERT_EQ(back.vertices(), p.vertices()) << p.str();
    if (p.ambient_dim() == 2) {
      std::vector<oracle::Pt> raw;
      for (const auto& v : p.vertices()) raw.emplace_back(v[0].as_rational(), v[1].as_rational());
      ASSERT_EQ(oracle::as_points(p.vertices()), oracle::hull(raw));
    }
    for (const auto& v : p.vertices()) ASSERT_TRUE(back.contains(v));
  }
}

TEST(PiFace, Examples) {
  Polytope sq = unit_square();
  Face edge = pi_face(sq, qv({1, 0}));
  EXPECT_EQ(edge.offset, QuadExt(1));
  EXPECT_EQ(face_vertices(sq, edge), (std::set<QVec>{qv({1, 0}), qv({1, 1})}));
  Face corner = pi_face(sq, qv({1, 1}));
  EXPECT_EQ(corner.offset, QuadExt(2));
  EXPECT_EQ(face_vertices(sq, corner), (std::set<QVec>{qv({1, 1})}));

  Polytope seg = sqrt2_segment();
  Face whole = pi_face(seg, {r2(0, 1), QuadExt(-1)});
  EXPECT_TRUE(whole.offset.is_zero());
  EXPECT_EQ(whole.vertices.size(), 2u);
}

TEST(PiFace, FromInequalityRejectsNonSupporting) {
  Polytope sq = unit_square();
  for (const auto& off : {QuadExt(Rational(1, 2)), QuadExt(2)}) {
    try {
      face_from_inequality(sq, qv({1, 0}), off);
      FAIL();
    } catch (const Error& e) {
      EXPECT_EQ(e.kind(), ErrorKind::NotAFace);
    }
  }
}

TEST(PiFace, RandomDirectionsAttainMaximum) {
  std::mt19937 rng(22);
  std::uniform_int_distribution<int> coef(-3, 3);
  for (int i = 0; i < 40; ++i) {
    Polytope p = oracle::random_polygon(rng, 6);
    QVec pi = {QuadExt(coef(rng), coef(rng), 2), QuadExt(coef(rng))};
    if (is_zero(pi)) continue;
    Face f = pi_face(p, pi);
    std::set<size_t> in(f.vertices.begin(), f.vertices.end());
    ASSERT_FALSE(in.empty());
    for (size_t j = 0; j < p.vertices().size(); ++j) {
      QuadExt val = dot(pi, p.vertices()[j]);
      if (in.count(j)) ASSERT_EQ(val, f.offset);
      else ASSERT_LT(val, f.offset);
    }
  }
}

TEST(StabilityMargin, Examples) {
  Polytope sq = unit_square();
  Rational edge = face_stability_margin(sq, pi_face(sq, qv({1, 0})));
  Rational corner = face_stability_margin(sq, pi_face(sq, qv({1, 1})));
  Polytope seg = Polytope::from_vertices(2, {qv({0, 0}), qv({1, 0})});
  Rational end = face_stability_margin(seg, pi_face(seg, qv({1, 0})));
  EXPECT_GT(edge, 0);
  EXPECT_GT(corner, 0);
  EXPECT_GT(end, 0);
  try {
    face_stability_margin(sq, Face{qv({0, 0}), QuadExt(0), {0, 1, 2, 3}});
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::DegenerateFace);
  }
}

TEST(StabilityMargin, PerturbedDirectionsKeepFace) {
  std::mt19937 rng(23);
  std::uniform_int_distribution<int> num(-1000, 1000);
  struct Case {
    Polytope p;
    QVec unit;  // pi / |pi|
  };
  QuadExt h = r2(0, Rational(1, 2));  // 1/sqrt2
  std::vector<Case> cases = {{unit_square(), qv({1, 0})},
                             {unit_square(), {h, h}},
                             {Polytope::from_vertices(2, {qv({0, 0}), qv({1, 0})}), qv({1, 0})}};
  for (int i = 0; i < 6; ++i) {
    Polytope p = oracle::random_polygon(rng, 6);
    cases.push_back({p, qv({0, 1})});
    cases.push_back({p, {h, -h}});
  }
  for (const auto& c : cases) {
    Face f = pi_face(c.p, c.unit);
    if (f.vertices.size() == c.p.vertices().size()) continue;
    Rational eps = face_stability_margin(c.p, f);
    std::set<size_t> allowed(f.vertices.begin(), f.vertices.end());
    for (int s = 0; s < 100; ++s) {
      // Perturbation of Euclidean length below eps.
      RVec d = {Rational(num(rng), 1000) * eps / 2, Rational(num(rng), 1000) * eps / 2};
      ASSERT_LT(norm_sq(d), eps * eps);
      QVec pert = {c.unit[0] + QuadExt(d[0]), c.unit[1] + QuadExt(d[1])};
      Face g = pi_face(c.p, pert);
      for (size_t v : g.vertices) ASSERT_TRUE(allowed.count(v)) << c.p.str() << " eps " << eps;
    }
  }
}

TEST(ProjectedLattice, Examples) {
  ProjectedLattice horiz = projected_lattice(AffineSubspace::from_points(2, {qv({0, 0}), qv({1, 0})}));
  ASSERT_EQ(horiz.basis.size(), 1u);
  EXPECT_EQ(horiz.basis[0][1], 0);
  EXPECT_EQ(abs(horiz.basis[0][0]), 1);

  ProjectedLattice diag = projected_lattice(AffineSubspace::from_points(2, {qv({0, 0}), qv({1, 1})}));
  ASSERT_EQ(diag.basis.size(), 1u);
  EXPECT_EQ(abs(diag.basis[0][0]), Rational(1, 2));
  EXPECT_EQ(diag.basis[0][0], diag.basis[0][1]);

  ProjectedLattice whole = projected_lattice(AffineSubspace::whole(2));
  ASSERT_EQ(whole.basis.size(), 2u);
  Rational det = whole.basis[0][0] * whole.basis[1][1] - whole.basis[0][1] * whole.basis[1][0];
  EXPECT_EQ(abs(det), 1);
}

TEST(ProjectedLattice, PreimagesAndGenerators) {
  std::mt19937 rng(24);
  std::uniform_int_distribution<int> coef(-3, 3);
  for (int i = 0; i < 30; ++i) {
    size_t n = 2 + i % 3;
    // Affine hull of two or three random integral points.
    std::vector<QVec> pts;
    for (size_t k = 0; k < 1 + (i % 2) + 1; ++k) {
      QVec v;
      for (size_t j = 0; j < n; ++j) v.emplace_back(coef(rng));
      pts.push_back(v);
    }
    AffineSubspace space = AffineSubspace::from_points(n, pts);
    ProjectedLattice d = projected_lattice(space);
    std::vector<RVec> dirs;
    for (const auto& b : space.basis()) dirs.push_back(to_rvec(b));
    ASSERT_EQ(d.basis.size(), dirs.size());
    for (size_t k = 0; k < d.basis.size(); ++k) {
      RVec pre(d.preimages[k].begin(), d.preimages[k].end());
      ASSERT_EQ(project_onto(dirs, pre), d.basis[k]);
    }
    for (size_t j = 0; j < n; ++j) {
      RVec e(n, 0);
      e[j] = 1;
      ASSERT_TRUE(in_integer_span(d.basis, project_onto(dirs, e)));
    }
  }
}

TEST(InteriorRadius, Examples) {
  Polytope sq = unit_square();
  EXPECT_EQ(interior_radius(qv({Rational(1, 2), Rational(1, 2)}), ConvexBody(sq), AffineSubspace::whole(2)),
            Rational(1, 2));
  Polytope seg = Polytope::from_vertices(1, {qv({0}), qv({Rational(3, 2)})});
  EXPECT_EQ(interior_radius(qv({Rational(1, 2)}), ConvexBody(seg), AffineSubspace::whole(1)), Rational(1, 2));
  Rational disk = interior_radius(qv({0, 0}), ConvexBody(Ball{{0, 0}, Rational(3, 2)}), AffineSubspace::whole(2));
  EXPECT_GE(disk, 1);
  EXPECT_LE(disk, Rational(3, 2));
  try {
    interior_radius(qv({1, 0}), ConvexBody(sq), AffineSubspace::whole(2));
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::OnBoundary);
  }
}

TEST(InteriorRadius, NeverOverestimates) {
  std::mt19937 rng(25);
  for (int i = 0; i < 20; ++i) {
    Polytope p = oracle::random_polygon(rng, 6);
    RVec c(2, 0);
    for (const auto& v : p.vertices())
      for (size_t j = 0; j < 2; ++j) c[j] += v[j].as_rational() / Rational(p.vertices().size());
    Rational r = interior_radius(to_qvec(c), ConvexBody(p), AffineSubspace::whole(2));
    // Each facet a.x <= b is at distance (b - a.c)/|a| >= r, checked squared.
    for (const auto& f : p.facets()) {
      Rational slack = f.rhs.as_rational() - dot(to_rvec(f.normal), c);
      ASSERT_GE(slack * slack, r * r * norm_sq(to_rvec(f.normal)));
    }
  }
}

TEST(IntegerPoints, MatchesBoxEnumeration) {
  std::mt19937 rng(26);
  for (int i = 0; i < 30; ++i) {
    Polytope p = i % 3 ? oracle::random_polygon(rng, 5) : oracle::random_polytope3(rng, 6);
    size_t n = p.ambient_dim();
    std::vector<ZVec> got = integer_points(p.inequalities(), n, 100000);
    std::vector<ZVec> want;
    ZVec z(n, 0);
    // Generators lie in [0, 12]^2 or [0, 4]^3.
    const long top = n == 2 ? 13 : 5;
    std::function<void(size_t)> rec = [&](size_t j) {
      if (j == n) {
        if (p.contains(to_qvec(z))) want.push_back(z);
        return;
      }
      for (long t = -1; t <= top; ++t) {
        z[j] = t;
        rec(j + 1);
      }
    };
    rec(0);
    ASSERT_EQ(got, want) << p.str();
  }
}

TEST(IntegerPoints, Budget) {
  std::vector<Halfspace> box = {{qv({1, 0}), 100}, {qv({-1, 0}), 0}, {qv({0, 1}), 100}, {qv({0, -1}), 0}};
  try {
    integer_points(box, 2, 50);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::BudgetExhausted);
  }
}
