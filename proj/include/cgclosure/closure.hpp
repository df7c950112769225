#pragma once

// Face-recursive CG closure of polytopes over Q or Q(sqrt m), the truncated
// brute-force oracle, and an independent verifier.

#include <memory>

#include "cgclosure/homogeneity.hpp"

namespace cgc {

struct ClosureOptions {
  /// Interior fixpoint rounds per node before giving up.
  size_t round_cap = 100;
  /// Box radius cap of the deepest-cut search over the complement lattice.
  long search_cap = 64;
  /// Maximum number of candidate directions per round.
  size_t candidate_cap = 200000;
  /// Keep only facet-defining cuts and implicit equalities.
  bool prune = true;
};

/// One interior cut: lattice direction d, the bound B_D = max 1/r that admitted it.
struct InteriorRecord {
  size_t round = 0;
  RVec d;
  Rational bound;
  CGCut cut;
  Rational restricted_rhs;
  DeepestRule rule = DeepestRule::None;
  bool certified = false;
};

struct CertificateLog {
  /// Cuts of K lifted from the closures of its facets.
  std::vector<CGCut> boundary_cuts;
  std::vector<HomogeneityCertificate> boundary_certificates;
  /// Cuts pinning K to a rational affine subspace (equation cuts and lifts).
  std::vector<CGCut> rational_cuts;
  std::vector<HomogeneityCertificate> pinning_certificates;
  std::vector<InteriorRecord> interior;
  size_t rounds = 0;
  bool round_cap_hit = false;
  /// Directions whose deepest cut was not certified in the final round.
  size_t uncertified_final = 0;
  std::vector<std::string> notes;
};

struct ClosureResult;

struct ChildFace {
  Face face;
  std::shared_ptr<const ClosureResult> result;
};

/// K lies in the rational affine subspace {x : s_1 x = y1}; the child works in
/// coordinates y2 = s_2 x and maps back by x = base + u_2 y2.
struct Reduction {
  /// Unimodular; rows 0..rank-1 are s_1.
  ZMat s;
  /// Inverse of s.
  ZMat u;
  size_t rank = 0;
  ZVec y1;
  ZVec base;
};

struct ClosureResult {
  Polytope body;
  Polytope closure;
  CutPool defining_cuts;
  CertificateLog log;
  /// One entry per relative facet of body.
  std::vector<ChildFace> children;
  std::optional<Reduction> reduction;
  std::shared_ptr<const ClosureResult> reduced;
  /// The computed polytope contains the closure but equality is not certified.
  bool upper_certificate_only = false;
  double seconds = 0;
};

/// Exact closure of a polytope body of dimension at most 4.
ClosureResult cg_closure(const ConvexBody& k, const ClosureOptions& opts = {});

struct DirectionBound {
  /// Vertices of the current polytope in the relative interior of K with their radii.
  std::vector<std::pair<QVec, Rational>> interior;
  /// max over interior vertices of 1/r; absent when there are none.
  std::optional<Rational> bound;
  /// Lattice points of D shorter than the bound, 0 included, lexicographic.
  std::vector<RVec> candidates;
};

DirectionBound interior_direction_bound(const Polytope& current, const ConvexBody& k, const AffineSubspace& v,
                                        size_t candidate_cap = 200000);

struct OracleResult {
  Polytope polytope;
  /// Every primitive cut with |c|_inf <= bound, lexicographic in c.
  std::vector<CGCut> cuts;
  /// Indices into cuts of those that removed a vertex when inserted.
  std::vector<size_t> inserted;
  long bound = 0;
  /// Same polytope at 2 * bound (false when not checked).
  bool stable = false;
  bool stability_checked = false;
};

/// Intersection of cg_cut(K, c) over nonzero integral c with |c|_inf <= bound.
OracleResult brute_force_closure(const ConvexBody& k, long bound, bool check_stability = true);

struct CheckResult {
  std::string name;
  bool passed = true;
  std::string detail;
};

struct VerifyReport {
  std::vector<CheckResult> checks;
  bool ok() const;
};

VerifyReport verify_closure(const ClosureResult& result, const ConvexBody& k, long bound);

}  // namespace cgc
