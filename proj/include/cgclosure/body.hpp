#pragma once

// Compact convex bodies with an exact support oracle: polytopes over Q or
// Q(sqrt m), Euclidean balls, and 2D ellipses.

#include <optional>
#include <variant>

#include "cgclosure/geometry.hpp"

namespace cgc {

struct Ball {
  RVec center;
  Rational radius;
};

/// {x : (x - center)^T shape^-1 (x - center) <= 1}; shape symmetric positive definite.
struct Ellipse2D {
  RVec center;
  Matrix<Rational> shape;
};

/// Value of h_K(c): exact in Q(sqrt m) for polytopes, offset + sqrt(radicand)
/// for smooth bodies.
struct SupportValue {
  std::variant<QuadExt, SqrtValue> value;
  /// Maximizing face, polytopes only.
  std::optional<Face> face;

  bool is_exact() const { return std::holds_alternative<QuadExt>(value); }
  const QuadExt& exact() const { return std::get<QuadExt>(value); }
  Integer floor(int budget = 64) const;
  CertifiedInterval enclosure(unsigned bits = 64) const;
  double to_double() const;
};

class ConvexBody {
 public:
  using Shape = std::variant<Polytope, Ball, Ellipse2D>;

  ConvexBody(Polytope p);
  ConvexBody(Ball b, int field = 0);
  ConvexBody(Ellipse2D e, int field = 0);

  const Shape& shape() const { return shape_; }
  size_t dim() const;
  bool is_polytope() const { return std::holds_alternative<Polytope>(shape_); }
  /// Throws InvalidInput for smooth bodies.
  const Polytope& polytope() const;
  int field() const { return field_; }
  std::string kind() const;

  /// h_K(c) = max over K of c.x; c must be nonzero.
  SupportValue support(const QVec& c) const;
  SupportValue support(const ZVec& c) const { return support(to_qvec(c)); }
  /// Exact floor of h_K(c).
  Integer support_floor(const ZVec& c) const { return support(c).floor(); }

  bool contains(const QVec& x) const;

 private:
  Shape shape_;
  int field_ = 0;
};

}  // namespace cgc
