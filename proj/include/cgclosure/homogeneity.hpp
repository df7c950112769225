#pragma once

// Lifting a cut valid on a face F of a polytope K to finitely many CG cuts
// of K whose convex combination dominates (c + alpha pi) x <= floor(delta) + alpha pi0.

#include "cgclosure/cuts.hpp"
#include "cgclosure/kronecker.hpp"

namespace cgc {

struct WorkingConstants {
  /// delta, or delta + 1/2 when delta is an integer.
  QuadExt delta_used;
  Integer floor_delta;
  Rational eps;
  Rational eps1;
  /// Face stability margin; absent when F = K.
  std::optional<Rational> eps2;
  /// m >= n_bound guarantees every maximizer of (c + a) x lies on F.
  Integer n_bound;
  /// Upper bound on the norm of the vertices of F.
  Rational face_radius;
  bool degenerate = false;
};

struct FamilyMember {
  ZVec a;
  Integer m;
  QVec residual;
  /// floor(delta) + m pi0.
  Integer rhs;
  /// The CG cut with normal c + a and rhs floor(h_K(c + a)) <= rhs.
  CGCut cut;
};

struct HomogeneityCertificate {
  ZVec c;
  QuadExt delta;
  /// Face data after rescaling so that pi0 is -1, 0 or 1.
  QVec pi;
  QuadExt pi0;
  /// The input (pi, pi0) equals scale * (pi, pi0) above.
  QuadExt scale;
  WorkingConstants constants;
  /// Every m_i is at least this threshold (never above constants.n_bound).
  Integer threshold;
  std::vector<FamilyMember> family;
  QVec lambda;
  QuadExt alpha;
};

/// Throws NotAFace or CutInvalidOnFace on bad input.
WorkingConstants working_constants(const Polytope& k, const Face& f, const ZVec& c, const QuadExt& delta);

/// K must be a polytope body; f a face of it given by (normal, offset).
HomogeneityCertificate lift_cut(const ConvexBody& k, const Face& f, const ZVec& c, const QuadExt& delta);

/// Exact check of the certificate invariants against the support oracle of K.
/// Returns an empty string when all hold, else a description of the first failure.
std::string certificate_failure(const HomogeneityCertificate& cert, const ConvexBody& k);

struct PinningResult {
  CutPool pool;
  /// Cuts c.x <= floor(beta), -c.x <= floor(-beta) for rational equations c.x = beta of aff(K).
  std::vector<CGCut> rational_cuts;
  /// Lifts of the irrational hull equations with c = 0, delta = 0.
  std::vector<HomogeneityCertificate> certificates;
};

/// Rational equations satisfied by all of K: primitive integral normals with rational rhs.
std::vector<std::pair<ZVec, Rational>> rational_equations(const Polytope& k);

PinningResult pin_to_rational_subspace(const ConvexBody& k);

}  // namespace cgc
