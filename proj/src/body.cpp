#include "cgclosure/body.hpp"

namespace cgc {

Integer SupportValue::floor(int budget) const {
  if (auto q = std::get_if<QuadExt>(&value)) return q->floor();
  return std::get<SqrtValue>(value).floor(budget);
}

CertifiedInterval SupportValue::enclosure(unsigned bits) const {
  if (auto q = std::get_if<QuadExt>(&value)) return {q->lower_bound(bits), q->upper_bound(bits), false};
  return std::get<SqrtValue>(value).enclosure(bits);
}

double SupportValue::to_double() const {
  if (auto q = std::get_if<QuadExt>(&value)) return q->to_double();
  return std::get<SqrtValue>(value).to_double();
}

ConvexBody::ConvexBody(Polytope p) : shape_(std::move(p)) {
  const auto& poly = std::get<Polytope>(shape_);
  if (poly.is_empty()) throw Error(ErrorKind::InvalidInput, "body must be nonempty");
  field_ = poly.field();
}

ConvexBody::ConvexBody(Ball b, int field) : shape_(std::move(b)), field_(field) {
  const auto& ball = std::get<Ball>(shape_);
  if (sgn(ball.radius) <= 0) throw Error(ErrorKind::InvalidInput, "ball radius must be positive");
  if (ball.center.empty()) throw Error(ErrorKind::InvalidInput, "ball center is empty");
}

ConvexBody::ConvexBody(Ellipse2D e, int field) : shape_(std::move(e)), field_(field) {
  const auto& el = std::get<Ellipse2D>(shape_);
  if (el.center.size() != 2 || el.shape.size() != 2 || el.shape[0].size() != 2 || el.shape[1].size() != 2)
    throw Error(ErrorKind::InvalidInput, "ellipse needs a 2D center and a 2x2 shape matrix");
  const auto& q = el.shape;
  if (q[0][1] != q[1][0]) throw Error(ErrorKind::InvalidInput, "ellipse shape matrix must be symmetric");
  if (sgn(q[0][0]) <= 0 || sgn(q[0][0] * q[1][1] - q[0][1] * q[1][0]) <= 0)
    throw Error(ErrorKind::InvalidInput, "ellipse shape matrix must be positive definite");
}

size_t ConvexBody::dim() const {
  if (auto p = std::get_if<Polytope>(&shape_)) return p->ambient_dim();
  if (auto b = std::get_if<Ball>(&shape_)) return b->center.size();
  return 2;
}

const Polytope& ConvexBody::polytope() const {
  if (auto p = std::get_if<Polytope>(&shape_)) return *p;
  throw Error(ErrorKind::InvalidInput, "operation requires a polytope body, got " + kind());
}

std::string ConvexBody::kind() const {
  if (is_polytope()) return "polytope";
  if (std::holds_alternative<Ball>(shape_)) return "ball";
  return "ellipse";
}

namespace {

RVec rational_direction(const QVec& c) {
  if (!is_rational(c))
    throw Error(ErrorKind::InvalidInput, "smooth bodies take rational directions only");
  return to_rvec(c);
}

Matrix<Rational> inverse2(const Matrix<Rational>& q) {
  Rational det = q[0][0] * q[1][1] - q[0][1] * q[1][0];
  return {{q[1][1] / det, -q[0][1] / det}, {-q[1][0] / det, q[0][0] / det}};
}

}  // namespace

SupportValue ConvexBody::support(const QVec& c) const {
  if (c.size() != dim()) throw Error(ErrorKind::InvalidInput, "direction dimension mismatch");
  if (is_zero(c)) throw Error(ErrorKind::InvalidInput, "support direction must be nonzero");
  if (auto p = std::get_if<Polytope>(&shape_)) {
    Face f = pi_face(*p, c);
    QuadExt v = f.offset;
    return {std::move(v), std::move(f)};
  }
  RVec d = rational_direction(c);
  Rational offset, radicand;
  if (auto b = std::get_if<Ball>(&shape_)) {
    offset = dot(d, b->center);
    radicand = dot(d, d) * b->radius * b->radius;
  } else {
    const auto& e = std::get<Ellipse2D>(shape_);
    offset = dot(d, e.center);
    for (size_t i = 0; i < 2; ++i)
      for (size_t j = 0; j < 2; ++j) radicand += d[i] * e.shape[i][j] * d[j];
  }
  SqrtValue s(offset, radicand);
  if (auto q = s.exact(field_)) return {*q, std::nullopt};
  return {s, std::nullopt};
}

bool ConvexBody::contains(const QVec& x) const {
  if (x.size() != dim()) throw Error(ErrorKind::InvalidInput, "point dimension mismatch");
  if (auto p = std::get_if<Polytope>(&shape_)) return p->contains(x);
  // Quadratic form evaluated exactly in Q(sqrt m); mixed fields raise FieldMismatch.
  if (auto b = std::get_if<Ball>(&shape_)) {
    QuadExt s;
    for (size_t i = 0; i < x.size(); ++i) {
      QuadExt d = x[i] - QuadExt(b->center[i]);
      s += d * d;
    }
    return s <= QuadExt(b->radius * b->radius);
  }
  const auto& e = std::get<Ellipse2D>(shape_);
  Matrix<Rational> inv = inverse2(e.shape);
  QVec d = {x[0] - QuadExt(e.center[0]), x[1] - QuadExt(e.center[1])};
  QuadExt s;
  for (size_t i = 0; i < 2; ++i)
    for (size_t j = 0; j < 2; ++j) s += d[i] * QuadExt(inv[i][j]) * d[j];
  return s <= QuadExt(1);
}

Rational interior_radius(const QVec& v, const ConvexBody& k, const AffineSubspace& space) {
  if (!space.contains(v)) throw Error(ErrorKind::InvalidInput, "point is not in the subspace");
  auto on_boundary = [] { return Error(ErrorKind::OnBoundary, "point is on the boundary"); };
  if (auto p = std::get_if<Polytope>(&k.shape())) {
    if (!p->contains(v)) throw on_boundary();
    for (const auto& e : p->affine_hull().equations())
      for (const auto& w : space.basis())
        if (!dot(e.normal, w).is_zero()) throw on_boundary();
    std::optional<Rational> best;
    for (const auto& f : p->facets()) {
      QuadExt slack = f.rhs - dot(f.normal, v);
      if (slack.sign() <= 0) throw on_boundary();
      QVec proj = space.project_direction(f.normal);
      if (is_zero(proj)) continue;
      Rational r = slack.lower_bound() / norm_upper(proj);
      if (!best || r < *best) best = r;
    }
    // A point body or a subspace that meets no facet: any radius works.
    return best ? *best : Rational(1);
  }
  if (auto b = std::get_if<Ball>(&k.shape())) {
    QVec d(v.size());
    for (size_t i = 0; i < v.size(); ++i) d[i] = v[i] - QuadExt(b->center[i]);
    Rational r = b->radius - norm_upper(d);
    if (sgn(r) <= 0) throw on_boundary();
    return r;
  }
  const auto& e = std::get<Ellipse2D>(k.shape());
  Matrix<Rational> inv = inverse2(e.shape);
  QVec d = {v[0] - QuadExt(e.center[0]), v[1] - QuadExt(e.center[1])};
  QuadExt s;
  for (size_t i = 0; i < 2; ++i)
    for (size_t j = 0; j < 2; ++j) s += d[i] * QuadExt(inv[i][j]) * d[j];
  // lambda_min >= det / trace since lambda_max <= trace.
  Rational det = e.shape[0][0] * e.shape[1][1] - e.shape[0][1] * e.shape[1][0];
  Rational lam = det / (e.shape[0][0] + e.shape[1][1]);
  Rational depth = 1 - sqrt_upper(s.upper_bound(), 64);
  if (sgn(depth) <= 0) throw on_boundary();
  return sqrt_lower(lam, 64) * depth;
}

}  // namespace cgc
