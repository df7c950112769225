#include "cgclosure/homogeneity.hpp"

#include <algorithm>

namespace cgc {

namespace {

void check_face(const Polytope& k, Face& f) {
  if (f.normal.size() != k.ambient_dim()) throw Error(ErrorKind::InvalidInput, "face normal dimension mismatch");
  if (is_zero(f.normal)) throw Error(ErrorKind::NotAFace, "face normal is zero");
  Face actual = pi_face(k, f.normal);
  if (actual.offset != f.offset)
    throw Error(ErrorKind::NotAFace, "normal . x <= " + f.offset.str() + " does not support the body (max is " +
                                         actual.offset.str() + ")");
  if (f.vertices.empty()) f.vertices = actual.vertices;
  std::vector<size_t> given = f.vertices;
  std::sort(given.begin(), given.end());
  if (given != actual.vertices) throw Error(ErrorKind::NotAFace, "vertex set does not match the exposed face");
}

// Positive rational lower bound of a positive QuadExt.
Rational positive_lower(const QuadExt& x) {
  for (unsigned bits = 64;; bits *= 2) {
    Rational lo = x.lower_bound(bits);
    if (sgn(lo) > 0) return lo;
  }
}

}  // namespace

WorkingConstants working_constants(const Polytope& k, const Face& face, const ZVec& c, const QuadExt& delta) {
  Face f = face;
  check_face(k, f);
  if (c.size() != k.ambient_dim()) throw Error(ErrorKind::InvalidInput, "cut normal dimension mismatch");
  for (size_t i : f.vertices)
    if (dot(c, k.vertices()[i]) > delta)
      throw Error(ErrorKind::CutInvalidOnFace, "c . x exceeds delta on the face");
  WorkingConstants w;
  w.floor_delta = delta.floor();
  w.delta_used = delta.is_integer() ? delta + QuadExt(Rational(1, 2)) : delta;
  QuadExt frac = w.delta_used - QuadExt(w.delta_used.floor());
  QuadExt gap = std::min(frac, QuadExt(1) - frac);
  w.eps = positive_lower(gap) / 4;
  w.face_radius = 0;
  for (size_t i : f.vertices) w.face_radius = std::max(w.face_radius, norm_upper(k.vertices()[i]));
  w.eps1 = w.eps / (w.face_radius + 1);
  w.degenerate = f.vertices.size() == k.vertices().size();
  if (w.degenerate) {
    w.n_bound = 1;
    return w;
  }
  w.eps2 = face_stability_margin(k, f);
  Rational c_norm = sqrt_upper(Rational(dot(c, c)), 32);
  Rational pi_norm = norm_lower(f.normal);
  if (sgn(pi_norm) <= 0) pi_norm = positive_lower(norm_sq(f.normal)) / (norm_upper(f.normal) + 1);
  w.n_bound = floor_rational(2 * (c_norm + w.eps1) / (*w.eps2 * pi_norm)) + 1;
  return w;
}

HomogeneityCertificate lift_cut(const ConvexBody& body, const Face& face, const ZVec& c, const QuadExt& delta) {
  const Polytope& k = body.polytope();
  HomogeneityCertificate cert;
  cert.c = c;
  cert.delta = delta;
  cert.pi = face.normal;
  cert.pi0 = face.offset;
  cert.scale = 1;
  if (!face.offset.is_zero()) {
    cert.scale = face.offset.abs();
    for (auto& x : cert.pi) x /= cert.scale;
    cert.pi0 = face.offset / cert.scale;
  }
  Face scaled{cert.pi, cert.pi0, face.vertices};
  cert.constants = working_constants(k, scaled, c, delta);
  const WorkingConstants& w = cert.constants;
  const Integer pi0 = cert.pi0.floor();

  for (Integer t = 1;; t *= 2) {
    Integer threshold = std::min(t, w.n_bound);
    BalancedFamily fam = sign_balanced_approximants(cert.pi, w.eps1, threshold - 1);
    std::vector<FamilyMember> members;
    bool valid = true;
    for (const auto& ap : fam.members) {
      FamilyMember mem;
      mem.a = ap.a;
      mem.m = ap.n;
      mem.residual = ap.residual;
      mem.rhs = w.floor_delta + ap.n * pi0;
      ZVec normal = add(c, ap.a);
      if (is_zero(normal)) {
        valid = false;
        break;
      }
      mem.cut = cg_cut(body, normal);
      mem.cut.provenance = "lift";
      if (mem.cut.rhs > mem.rhs) {
        valid = false;
        break;
      }
      members.push_back(std::move(mem));
    }
    if (valid) {
      cert.threshold = threshold;
      cert.family = std::move(members);
      cert.lambda = fam.lambda;
      cert.alpha = 0;
      for (size_t i = 0; i < cert.family.size(); ++i) cert.alpha += cert.lambda[i] * QuadExt(cert.family[i].m);
      return cert;
    }
    if (threshold >= w.n_bound)
      throw Error(ErrorKind::CertificateFailure, "cut family invalid at the explicit threshold N");
  }
}

std::string certificate_failure(const HomogeneityCertificate& cert, const ConvexBody& k) {
  const size_t n = cert.c.size();
  const auto& w = cert.constants;
  if (cert.family.empty() || cert.family.size() != cert.lambda.size()) return "family and multipliers differ in size";
  if (w.floor_delta != cert.delta.floor()) return "floor(delta) recorded incorrectly";
  QuadExt sum_lambda, alpha, rhs_comb;
  QVec normal_comb(n, QuadExt(0));
  const QuadExt eps1_sq(w.eps1 * w.eps1);
  for (size_t i = 0; i < cert.family.size(); ++i) {
    const auto& mem = cert.family[i];
    const QuadExt& lam = cert.lambda[i];
    if (lam.sign() <= 0) return "multiplier " + std::to_string(i) + " is not positive";
    sum_lambda += lam;
    alpha += lam * QuadExt(mem.m);
    rhs_comb += lam * QuadExt(mem.rhs);
    for (size_t j = 0; j < n; ++j) normal_comb[j] += lam * QuadExt(Integer(cert.c[j] + mem.a[j]));
    if (mem.m < cert.threshold || mem.m < 1) return "m below the threshold";
    if (mem.cut.c != add(cert.c, mem.a)) return "cut normal differs from c + a";
    if (mem.cut.rhs != k.support_floor(mem.cut.c)) return "cut rhs is not floor(h_K)";
    if (mem.cut.rhs > mem.rhs) return "cut is weaker than floor(delta) + m pi0";
    if (mem.rhs != cert.constants.floor_delta + mem.m * cert.pi0.floor() || !cert.pi0.is_integer())
      return "family rhs differs from floor(delta) + m pi0";
    QuadExt res_sq;
    for (size_t j = 0; j < n; ++j) {
      QuadExt r = QuadExt(mem.a[j]) - QuadExt(mem.m) * cert.pi[j];
      if (r != mem.residual[j]) return "stored residual differs from a - m pi";
      res_sq += r * r;
    }
    if (res_sq >= eps1_sq) return "residual not below eps1";
  }
  if (sum_lambda != QuadExt(1)) return "multipliers do not sum to 1";
  if (alpha != cert.alpha || alpha.sign() <= 0) return "alpha is not sum lambda_i m_i > 0";
  for (size_t j = 0; j < n; ++j)
    if (normal_comb[j] != QuadExt(cert.c[j]) + alpha * cert.pi[j]) return "sum lambda_i (c + a_i) != c + alpha pi";
  if (rhs_comb != QuadExt(w.floor_delta) + alpha * cert.pi0) return "sum lambda_i rhs_i != floor(delta) + alpha pi0";
  return {};
}

std::vector<std::pair<ZVec, Rational>> rational_equations(const Polytope& k) {
  const size_t n = k.ambient_dim();
  Matrix<Rational> rows;
  for (const auto& v : k.vertices()) {
    RVec a(n + 1), b(n + 1);
    for (size_t i = 0; i < n; ++i) {
      a[i] = v[i].rat();
      b[i] = v[i].irr();
    }
    a[n] = -1;
    b[n] = 0;
    rows.push_back(std::move(a));
    if (!is_rational(v)) rows.push_back(std::move(b));
  }
  Matrix<Rational> null = nullspace(rows, n + 1);
  std::vector<std::pair<ZVec, Rational>> out;
  for (auto& v : null) {
    RVec c(v.begin(), v.begin() + static_cast<long>(n));
    Integer den = common_denominator(c);
    ZVec z(n);
    for (size_t i = 0; i < n; ++i) z[i] = Rational(c[i] * den).get_num();
    Integer g = gcd_of(z);
    Rational factor = Rational(den) / Rational(g);
    for (auto& x : z) x /= g;
    out.emplace_back(std::move(z), v[n] * factor);
  }
  return out;
}

PinningResult pin_to_rational_subspace(const ConvexBody& body) {
  const Polytope& k = body.polytope();
  PinningResult out;
  out.pool = CutPool("pinning");
  const auto& eqs = k.affine_hull().equations();
  if (eqs.empty()) return out;
  for (const auto& [c, beta] : rational_equations(k)) {
    ZVec neg = c;
    for (auto& x : neg) x = -x;
    for (const ZVec& normal : {c, neg}) {
      CGCut cut = cg_cut(body, normal);
      cut.provenance = "rational-equation";
      out.rational_cuts.push_back(cut);
      out.pool.insert(cut);
    }
  }
  std::vector<size_t> all(k.vertices().size());
  for (size_t i = 0; i < all.size(); ++i) all[i] = i;
  ZVec zero(k.ambient_dim(), 0);
  for (const auto& e : eqs) {
    if (is_rational(e.normal) && e.rhs.is_rational()) continue;
    QVec neg = e.normal;
    for (auto& x : neg) x = -x;
    for (int side = 0; side < 2; ++side) {
      Face f{side == 0 ? e.normal : neg, side == 0 ? e.rhs : -e.rhs, all};
      HomogeneityCertificate cert = lift_cut(body, f, zero, QuadExt(0));
      for (const auto& mem : cert.family) out.pool.insert(mem.cut);
      out.certificates.push_back(std::move(cert));
    }
  }
  return out;
}

}  // namespace cgc
