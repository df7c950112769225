#pragma once

// Chvatal-Gomory cuts, cut pools, and deepest-cut selection along a
// projected lattice direction.

#include <map>
#include <string>

#include "cgclosure/body.hpp"

namespace cgc {

/// c . x <= rhs with integral c and rhs.
struct CGCut {
  ZVec c;
  Integer rhs;
  bool certified = true;
  std::string provenance;

  Halfspace halfspace() const;
  /// True if some vertex of p violates the cut.
  bool separates(const Polytope& p) const;
  bool satisfied_by(const QVec& x) const;
};

/// c . x <= floor(h_K(c)); c must be nonzero. Normals are kept as given.
CGCut cg_cut(const ConvexBody& k, const ZVec& c);

/// Keeps the smallest rhs per normal; iteration is lexicographic in c.
class CutPool {
 public:
  CutPool() = default;
  explicit CutPool(std::string source) : source_(std::move(source)) {}

  /// Returns true if the pool changed.
  bool insert(const CGCut& cut);
  void merge(const CutPool& other);
  std::vector<CGCut> cuts() const;
  std::vector<Halfspace> halfspaces() const;
  size_t size() const { return by_normal_.size(); }
  bool empty() const { return by_normal_.empty(); }
  const std::string& source() const { return source_; }

 private:
  std::string source_;
  std::map<ZVec, CGCut> by_normal_;
};

/// Which argument certified a deepest cut.
enum class DeepestRule { None, UniquePreimage, Coercive, LatticeBound, EmptiesPolytope, Exhaustive };
std::string_view to_string(DeepestRule rule);

struct DeepestCutResult {
  CGCut cut;
  /// floor(h_K(c)) - (c - d) . x0, the cut restricted to V reads d . x <= restricted_rhs.
  Rational restricted_rhs;
  bool certified = false;
  DeepestRule rule = DeepestRule::None;
  /// True if the cut removes a vertex of P.
  bool separates = false;
  /// Largest box radius searched over the complement lattice.
  long search_radius = 0;
  size_t evaluated = 0;
};

/// Precomputed data for deepest-cut searches over one polytope P.
struct DeepestCutContext {
  const Polytope* p = nullptr;
  const ConvexBody* k = nullptr;
  AffineSubspace space;
  ProjectedLattice lattice;
  RVec x0;
  /// Dual basis of the complement lattice rows and their norm upper bounds.
  std::vector<RVec> dual;
  RVec dual_norm;
  /// Denominator of the restricted-rhs value grid.
  Integer grid;
  /// K intersected with V when K is a polytope (for the value lower bound).
  std::optional<Polytope> slice;
  /// Vertices of P in the interior of a full-dimensional K with their radii.
  std::vector<std::pair<QVec, Rational>> interior;
  long search_cap = 64;
  size_t point_cap = 40000;
};

/// P must lie in the rational affine subspace `space`, x0 a rational point of it.
DeepestCutContext make_deepest_context(const Polytope& p, const AffineSubspace& space, const ConvexBody& k,
                                       const RVec& x0, long search_cap = 64);

/// Deepest cut among preimages of d, including d = 0.
DeepestCutResult deepest_cut(const DeepestCutContext& ctx, const RVec& d);

/// Public entry point: d must be a nonzero element of the projected lattice
/// of V. With require_separating set, throws NoCutNeeded when the best cut
/// found removes no vertex of P.
DeepestCutResult deepest_cut(const Polytope& p, const AffineSubspace& space, const RVec& d, const RVec& x0,
                             const ConvexBody& k, long search_cap = 64, bool require_separating = false);

/// Integral c0 with proj_W(c0) = d, or nullopt if d is not in the lattice.
std::optional<ZVec> lattice_preimage(const ProjectedLattice& lattice, const RVec& d);

/// Rational point of aff(P): rounded barycenter projected onto the hull.
RVec anchor_point(const Polytope& p);

/// Nonzero points of the lattice with norm below `bound`, plus 0, sorted lexicographically.
std::vector<RVec> short_lattice_vectors(const std::vector<RVec>& basis, size_t n, const Rational& bound,
                                        size_t cap);

}  // namespace cgc
