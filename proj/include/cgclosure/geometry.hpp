#pragma once

// Exact polytopes over Q or Q(sqrt m): double description, faces, affine
// hulls, projected lattices and interior radii.

#include <vector>

#include <boost/dynamic_bitset.hpp>

#include "cgclosure/linalg.hpp"

namespace cgc {

class ConvexBody;

/// normal . x <= rhs
struct Halfspace {
  QVec normal;
  QuadExt rhs;
};

/// normal . x == rhs
struct Hyperplane {
  QVec normal;
  QuadExt rhs;
};

/// Positive rational multiple of v whose rational and irrational parts are
/// coprime integers. The zero vector is returned unchanged.
QVec normalize_direction(const QVec& v);

class AffineSubspace {
 public:
  AffineSubspace() = default;

  static AffineSubspace whole(size_t n);
  static AffineSubspace empty(size_t n);
  /// Affine hull of a finite point set.
  static AffineSubspace from_points(size_t n, const std::vector<QVec>& points);
  /// Solution set of the equations (empty if inconsistent).
  static AffineSubspace from_equations(size_t n, const std::vector<Hyperplane>& eqs);

  size_t ambient_dim() const { return n_; }
  /// -1 for the empty subspace.
  int dim() const { return empty_ ? -1 : static_cast<int>(basis_.size()); }
  bool is_empty() const { return empty_; }

  const QVec& base() const { return base_; }
  /// Basis of the direction (lineality) space.
  const std::vector<QVec>& basis() const { return basis_; }
  /// Independent equations in canonical echelon form.
  const std::vector<Hyperplane>& equations() const { return equations_; }

  bool contains(const QVec& x) const;
  /// True if the subspace is cut out by rational equations.
  bool is_rational() const;
  /// Orthogonal projection of a direction onto the direction space.
  QVec project_direction(const QVec& v) const;

  friend bool operator==(const AffineSubspace& a, const AffineSubspace& b);

 private:
  void finish_from_equations();

  size_t n_ = 0;
  bool empty_ = false;
  QVec base_;
  std::vector<QVec> basis_;
  std::vector<Hyperplane> equations_;
};

/// Cone {z : h_i . z <= 0} as lineality basis plus extreme rays, each ray
/// carrying the set of constraints tight on it.
struct ConeRay {
  QVec z;
  boost::dynamic_bitset<> tight;
};
struct Cone {
  std::vector<QVec> lineality;
  std::vector<ConeRay> rays;
};
Cone double_description(size_t dim, const std::vector<QVec>& constraints);

class Polytope {
 public:
  /// The empty polytope in R^0; use empty(n) for a given ambient dimension.
  Polytope() = default;

  static Polytope empty(size_t n);
  /// Convex hull; points need not be in convex position.
  static Polytope from_vertices(size_t n, std::vector<QVec> points);
  /// Intersection of half-spaces. Throws Unbounded for nonempty unbounded input.
  static Polytope from_inequalities(size_t n, const std::vector<Halfspace>& halfspaces);

  size_t ambient_dim() const { return n_; }
  int dim() const { return aff_.dim(); }
  bool is_empty() const { return vertices_.empty(); }

  /// Sorted lexicographically.
  const std::vector<QVec>& vertices() const { return vertices_; }
  /// Relative facets: normals lie in the direction space of the affine hull.
  const std::vector<Halfspace>& facets() const { return facets_; }
  const AffineSubspace& affine_hull() const { return aff_; }
  /// Facets plus both directions of every affine-hull equation.
  std::vector<Halfspace> inequalities() const;

  bool contains(const QVec& x) const;
  /// All vertex coordinates rational.
  bool is_rational() const;
  int field() const;

  Polytope intersect(const std::vector<Halfspace>& extra) const;
  Polytope intersect(const Hyperplane& h) const;

  friend bool operator==(const Polytope& a, const Polytope& b) {
    return a.n_ == b.n_ && a.vertices_ == b.vertices_;
  }

  std::string str() const;

 private:
  size_t n_ = 0;
  std::vector<QVec> vertices_;
  std::vector<Halfspace> facets_;
  AffineSubspace aff_ = AffineSubspace::empty(0);
};

/// Exposed face {x in P : normal . x = offset} with offset = max over P.
struct Face {
  QVec normal;
  QuadExt offset;
  std::vector<size_t> vertices;
};

Face pi_face(const Polytope& p, const QVec& pi);
/// Face given by an explicit supporting inequality; throws NotAFace if the
/// inequality is violated or not tight anywhere.
Face face_from_inequality(const Polytope& p, const QVec& pi, const QuadExt& pi0);
Polytope face_polytope(const Polytope& p, const Face& f);

/// Positive epsilon such that every direction within epsilon of normal/|normal|
/// is maximized over p only at vertices of f. Throws DegenerateFace if f = p.
Rational face_stability_margin(const Polytope& p, const Face& f);

/// D = orthogonal projection of Z^n onto the direction space W of a
/// rational affine subspace.
struct ProjectedLattice {
  /// LLL-reduced basis of D.
  std::vector<RVec> basis;
  /// preimages[i] is integral and projects to basis[i].
  ZMat preimages;
  /// LLL-reduced basis of Z^n intersected with the orthogonal complement of W.
  ZMat orthogonal;
};
ProjectedLattice projected_lattice(const AffineSubspace& v);

/// Rational r > 0 such that the ball of radius r around v inside V lies in K.
/// Throws OnBoundary if no positive radius exists.
Rational interior_radius(const QVec& v, const ConvexBody& k, const AffineSubspace& space);

/// Integral points of the bounded polyhedron {y in R^k : hs}, lexicographic.
/// Throws Unbounded, or BudgetExhausted past `cap` points.
std::vector<ZVec> integer_points(const std::vector<Halfspace>& hs, size_t k, size_t cap);

/// True if v lies strictly inside every relative facet of p.
bool in_relative_interior(const Polytope& p, const QVec& v);

/// Orthogonal projection of a rational vector onto span(rows).
RVec project_onto(const std::vector<RVec>& rows, const RVec& v);

}  // namespace cgc
