#include "cgclosure/geometry.hpp"

#include <algorithm>
#include <sstream>

namespace cgc {

QVec normalize_direction(const QVec& v) {
  Integer den = 1;
  for (const auto& x : v) {
    den = lcm(den, Integer(x.rat().get_den()));
    den = lcm(den, Integer(x.irr().get_den()));
  }
  Integer g = 0;
  for (const auto& x : v) {
    Rational r = x.rat() * den, i = x.irr() * den;
    g = gcd(g, Integer(r.get_num()));
    g = gcd(g, Integer(i.get_num()));
  }
  if (g == 0) return v;
  Rational factor(den, g);
  factor.canonicalize();
  QVec out;
  out.reserve(v.size());
  for (const auto& x : v) out.push_back(x * QuadExt(factor));
  return out;
}

// --------------------------------------------------------- AffineSubspace

AffineSubspace AffineSubspace::whole(size_t n) {
  AffineSubspace a;
  a.n_ = n;
  a.base_ = QVec(n, QuadExt(0));
  for (size_t i = 0; i < n; ++i) {
    QVec e(n, QuadExt(0));
    e[i] = 1;
    a.basis_.push_back(std::move(e));
  }
  return a;
}

AffineSubspace AffineSubspace::empty(size_t n) {
  AffineSubspace a;
  a.n_ = n;
  a.empty_ = true;
  return a;
}

AffineSubspace AffineSubspace::from_points(size_t n, const std::vector<QVec>& points) {
  if (points.empty()) return empty(n);
  Matrix<QuadExt> diffs;
  for (size_t i = 1; i < points.size(); ++i) {
    QVec d(n);
    for (size_t j = 0; j < n; ++j) d[j] = points[i][j] - points[0][j];
    diffs.push_back(std::move(d));
  }
  Matrix<QuadExt> normals = nullspace(diffs, n);
  std::vector<Hyperplane> eqs;
  for (auto& a : normals) {
    QuadExt rhs = dot(a, points[0]);
    eqs.push_back({std::move(a), std::move(rhs)});
  }
  AffineSubspace s = from_equations(n, eqs);
  return s;
}

AffineSubspace AffineSubspace::from_equations(size_t n, const std::vector<Hyperplane>& eqs) {
  AffineSubspace a;
  a.n_ = n;
  a.equations_ = eqs;
  a.finish_from_equations();
  return a;
}

void AffineSubspace::finish_from_equations() {
  Matrix<QuadExt> aug;
  for (const auto& e : equations_) {
    QVec row = e.normal;
    row.push_back(e.rhs);
    aug.push_back(std::move(row));
  }
  auto pivots = rref(aug, n_ + 1);
  equations_.clear();
  basis_.clear();
  base_.clear();
  if (!pivots.empty() && pivots.back() == n_) {
    empty_ = true;
    return;
  }
  empty_ = false;
  Matrix<QuadExt> normals;
  for (auto& row : aug) {
    QVec scaled = normalize_direction(row);
    QuadExt rhs = scaled.back();
    scaled.pop_back();
    normals.push_back(scaled);
    equations_.push_back({std::move(scaled), std::move(rhs)});
  }
  base_.assign(n_, QuadExt(0));
  for (size_t r = 0; r < pivots.size(); ++r) base_[pivots[r]] = aug[r][n_];
  basis_ = nullspace(normals, n_);
}

bool AffineSubspace::contains(const QVec& x) const {
  if (empty_) return false;
  for (const auto& e : equations_)
    if (dot(e.normal, x) != e.rhs) return false;
  return true;
}

bool AffineSubspace::is_rational() const {
  for (const auto& e : equations_)
    if (!e.rhs.is_rational() || !cgc::is_rational(e.normal)) return false;
  return true;
}

QVec AffineSubspace::project_direction(const QVec& v) const {
  if (equations_.empty()) return v;
  size_t k = equations_.size();
  Matrix<QuadExt> gram(k, QVec(k));
  QVec rhs(k);
  for (size_t i = 0; i < k; ++i) {
    for (size_t j = 0; j < k; ++j) gram[i][j] = dot(equations_[i].normal, equations_[j].normal);
    rhs[i] = dot(equations_[i].normal, v);
  }
  auto y = solve(gram, rhs, k);
  QVec out = v;
  for (size_t i = 0; i < k; ++i) {
    if ((*y)[i].is_zero()) continue;
    for (size_t j = 0; j < n_; ++j) out[j] -= (*y)[i] * equations_[i].normal[j];
  }
  return out;
}

bool operator==(const AffineSubspace& a, const AffineSubspace& b) {
  if (a.n_ != b.n_ || a.empty_ != b.empty_) return false;
  if (a.empty_) return true;
  if (a.equations_.size() != b.equations_.size()) return false;
  for (size_t i = 0; i < a.equations_.size(); ++i)
    if (a.equations_[i].normal != b.equations_[i].normal || a.equations_[i].rhs != b.equations_[i].rhs)
      return false;
  return true;
}

// ------------------------------------------------------ double description

Cone double_description(size_t d, const std::vector<QVec>& constraints) {
  Cone cone;
  const size_t m = constraints.size();
  for (size_t i = 0; i < d; ++i) {
    QVec e(d, QuadExt(0));
    e[i] = 1;
    cone.lineality.push_back(std::move(e));
  }
  for (size_t i = 0; i < m; ++i) {
    const QVec& h = constraints[i];
    size_t hit = cone.lineality.size();
    QuadExt s;
    for (size_t j = 0; j < cone.lineality.size(); ++j) {
      s = dot(h, cone.lineality[j]);
      if (!s.is_zero()) {
        hit = j;
        break;
      }
    }
    if (hit < cone.lineality.size()) {
      QVec l = cone.lineality[hit];
      if (s.sign() > 0) {
        for (auto& x : l) x = -x;
        s = -s;
      }
      auto eliminate = [&](QVec& z) {
        QuadExt t = dot(h, z);
        if (t.is_zero()) return;
        QuadExt f = t / s;
        for (size_t c = 0; c < d; ++c)
          if (!l[c].is_zero()) z[c] -= f * l[c];
        z = normalize_direction(z);
      };
      for (size_t j = 0; j < cone.lineality.size(); ++j)
        if (j != hit) eliminate(cone.lineality[j]);
      for (auto& r : cone.rays) {
        eliminate(r.z);
        r.tight.set(i);
      }
      ConeRay fresh{normalize_direction(l), boost::dynamic_bitset<>(m)};
      for (size_t j = 0; j < i; ++j) fresh.tight.set(j);
      cone.lineality.erase(cone.lineality.begin() + static_cast<long>(hit));
      cone.rays.push_back(std::move(fresh));
      continue;
    }

    std::vector<QuadExt> val(cone.rays.size());
    std::vector<size_t> pos, neg;
    for (size_t r = 0; r < cone.rays.size(); ++r) {
      val[r] = dot(h, cone.rays[r].z);
      int sg = val[r].sign();
      if (sg > 0) pos.push_back(r);
      else if (sg < 0) neg.push_back(r);
    }
    if (pos.empty()) {
      for (size_t r = 0; r < cone.rays.size(); ++r)
        if (val[r].is_zero()) cone.rays[r].tight.set(i);
      continue;
    }
    const long pointed = static_cast<long>(d) - static_cast<long>(cone.lineality.size());
    std::vector<ConeRay> next;
    for (size_t p : pos) {
      for (size_t q : neg) {
        boost::dynamic_bitset<> common = cone.rays[p].tight & cone.rays[q].tight;
        if (static_cast<long>(common.count()) < pointed - 2) continue;
        bool adjacent = true;
        for (size_t r = 0; r < cone.rays.size() && adjacent; ++r) {
          if (r == p || r == q) continue;
          if (common.is_subset_of(cone.rays[r].tight)) adjacent = false;
        }
        if (!adjacent) continue;
        QVec w(d);
        for (size_t c = 0; c < d; ++c) w[c] = val[p] * cone.rays[q].z[c] - val[q] * cone.rays[p].z[c];
        common.set(i);
        next.push_back({normalize_direction(w), std::move(common)});
      }
    }
    for (size_t r = 0; r < cone.rays.size(); ++r) {
      int sg = val[r].sign();
      if (sg > 0) continue;
      if (sg == 0) cone.rays[r].tight.set(i);
      next.push_back(std::move(cone.rays[r]));
    }
    cone.rays = std::move(next);
  }
  return cone;
}

// --------------------------------------------------------------- Polytope

Polytope Polytope::empty(size_t n) {
  Polytope p;
  p.n_ = n;
  p.aff_ = AffineSubspace::empty(n);
  return p;
}

Polytope Polytope::from_vertices(size_t n, std::vector<QVec> points) {
  for (const auto& x : points)
    if (x.size() != n) throw Error(ErrorKind::InvalidInput, "point dimension mismatch");
  std::sort(points.begin(), points.end());
  points.erase(std::unique(points.begin(), points.end()), points.end());
  Polytope p;
  p.n_ = n;
  if (points.empty()) return empty(n);
  p.aff_ = AffineSubspace::from_points(n, points);
  if (points.size() == 1) {
    p.vertices_ = std::move(points);
    return p;
  }
  std::vector<QVec> constraints;
  for (const auto& x : points) {
    QVec row = x;
    row.push_back(QuadExt(-1));
    constraints.push_back(std::move(row));
  }
  Cone cone = double_description(n + 1, constraints);
  std::vector<Halfspace> facets;
  for (const auto& ray : cone.rays) {
    if (ray.tight.none()) continue;
    QVec a(ray.z.begin(), ray.z.begin() + static_cast<long>(n));
    a = normalize_direction(p.aff_.project_direction(a));
    if (is_zero(a)) continue;
    size_t tight = ray.tight.find_first();
    QuadExt rhs = dot(a, points[tight]);
    facets.push_back({std::move(a), std::move(rhs)});
  }
  std::sort(facets.begin(), facets.end(),
            [](const Halfspace& x, const Halfspace& y) { return x.normal < y.normal; });
  facets.erase(std::unique(facets.begin(), facets.end(),
                           [](const Halfspace& x, const Halfspace& y) { return x.normal == y.normal; }),
               facets.end());
  // A point is a vertex when its tight facets and the hull equations have rank n.
  for (const auto& x : points) {
    Matrix<QuadExt> rows;
    for (const auto& e : p.aff_.equations()) rows.push_back(e.normal);
    for (const auto& f : facets)
      if (dot(f.normal, x) == f.rhs) rows.push_back(f.normal);
    if (rank(rows) == n) p.vertices_.push_back(x);
  }
  p.facets_ = std::move(facets);
  return p;
}

Polytope Polytope::from_inequalities(size_t n, const std::vector<Halfspace>& halfspaces) {
  std::vector<QVec> constraints;
  QVec t(n + 1, QuadExt(0));
  t[n] = -1;
  constraints.push_back(t);
  for (const auto& h : halfspaces) {
    if (h.normal.size() != n) throw Error(ErrorKind::InvalidInput, "inequality dimension mismatch");
    QVec row = h.normal;
    row.push_back(-h.rhs);
    constraints.push_back(std::move(row));
  }
  Cone cone = double_description(n + 1, constraints);
  std::vector<QVec> points;
  bool recession = !cone.lineality.empty();
  for (const auto& ray : cone.rays) {
    const QuadExt& tt = ray.z[n];
    if (tt.is_zero()) {
      recession = true;
      continue;
    }
    QVec x(n);
    for (size_t i = 0; i < n; ++i) x[i] = ray.z[i] / tt;
    points.push_back(std::move(x));
  }
  if (points.empty()) return empty(n);
  if (recession) throw Error(ErrorKind::Unbounded, "inequalities admit a recession direction");
  return from_vertices(n, std::move(points));
}

std::vector<Halfspace> Polytope::inequalities() const {
  std::vector<Halfspace> out = facets_;
  for (const auto& e : aff_.equations()) {
    out.push_back({e.normal, e.rhs});
    QVec neg = e.normal;
    for (auto& x : neg) x = -x;
    out.push_back({std::move(neg), -e.rhs});
  }
  return out;
}

bool Polytope::contains(const QVec& x) const {
  if (is_empty() || !aff_.contains(x)) return false;
  for (const auto& f : facets_)
    if (dot(f.normal, x) > f.rhs) return false;
  return true;
}

bool Polytope::is_rational() const {
  for (const auto& v : vertices_)
    if (!cgc::is_rational(v)) return false;
  return true;
}

int Polytope::field() const {
  int f = 0;
  for (const auto& v : vertices_) {
    int g = field_of(v);
    if (g != 0 && f != 0 && g != f) throw Error(ErrorKind::FieldMismatch, "polytope mixes fields");
    if (g != 0) f = g;
  }
  return f;
}

Polytope Polytope::intersect(const std::vector<Halfspace>& extra) const {
  if (is_empty()) return *this;
  std::vector<Halfspace> all = inequalities();
  all.insert(all.end(), extra.begin(), extra.end());
  return from_inequalities(n_, all);
}

Polytope Polytope::intersect(const Hyperplane& h) const {
  QVec neg = h.normal;
  for (auto& x : neg) x = -x;
  return intersect(std::vector<Halfspace>{{h.normal, h.rhs}, {std::move(neg), -h.rhs}});
}

std::string Polytope::str() const {
  if (is_empty()) return "empty";
  std::ostringstream os;
  os << "conv{";
  for (size_t i = 0; i < vertices_.size(); ++i) os << (i ? ", " : "") << to_string(vertices_[i]);
  os << "}";
  return os.str();
}

// ------------------------------------------------------------------ faces

Face pi_face(const Polytope& p, const QVec& pi) {
  if (is_zero(pi)) throw Error(ErrorKind::InvalidInput, "face normal must be nonzero");
  if (p.is_empty()) throw Error(ErrorKind::InvalidInput, "empty polytope has no faces");
  Face f;
  f.normal = pi;
  const auto& verts = p.vertices();
  for (size_t i = 0; i < verts.size(); ++i) {
    QuadExt v = dot(pi, verts[i]);
    if (f.vertices.empty() || v > f.offset) {
      f.offset = v;
      f.vertices.assign(1, i);
    } else if (v == f.offset) {
      f.vertices.push_back(i);
    }
  }
  return f;
}

Face face_from_inequality(const Polytope& p, const QVec& pi, const QuadExt& pi0) {
  Face f = pi_face(p, pi);
  if (f.offset != pi0)
    throw Error(ErrorKind::NotAFace, f.offset > pi0 ? "inequality is violated by the body"
                                                    : "inequality does not touch the body");
  return f;
}

Polytope face_polytope(const Polytope& p, const Face& f) {
  std::vector<QVec> pts;
  for (size_t i : f.vertices) pts.push_back(p.vertices()[i]);
  return Polytope::from_vertices(p.ambient_dim(), std::move(pts));
}

Rational face_stability_margin(const Polytope& p, const Face& f) {
  const auto& verts = p.vertices();
  if (f.vertices.size() >= verts.size())
    throw Error(ErrorKind::DegenerateFace, "face equals the polytope");
  std::vector<bool> in_face(verts.size(), false);
  for (size_t i : f.vertices) in_face[i] = true;
  Rational norm_up = norm_upper(f.normal);
  std::optional<Rational> slack;
  Rational radius = 0;
  for (size_t i = 0; i < verts.size(); ++i) {
    Rational r = norm_upper(verts[i]);
    if (r > radius) radius = r;
    if (in_face[i]) continue;
    Rational s = (f.offset - dot(f.normal, verts[i])).lower_bound() / norm_up;
    if (!slack || s < *slack) slack = s;
  }
  if (sgn(*slack) <= 0)
    throw Error(ErrorKind::CertificateFailure, "face vertex set is not exact");
  return *slack / (2 * radius + 2);
}

// ------------------------------------------------------ projected lattice

RVec project_onto(const std::vector<RVec>& rows, const RVec& v) {
  size_t k = rows.size();
  if (k == 0) return RVec(v.size(), Rational(0));
  Matrix<Rational> gram(k, RVec(k));
  RVec rhs(k);
  for (size_t i = 0; i < k; ++i) {
    for (size_t j = 0; j < k; ++j) gram[i][j] = dot(rows[i], rows[j]);
    rhs[i] = dot(rows[i], v);
  }
  auto y = solve(gram, rhs, k);
  RVec out(v.size(), Rational(0));
  for (size_t i = 0; i < k; ++i)
    for (size_t j = 0; j < v.size(); ++j) out[j] += (*y)[i] * rows[i][j];
  return out;
}

ProjectedLattice projected_lattice(const AffineSubspace& v) {
  if (!v.is_rational()) throw Error(ErrorKind::IrrationalSubspace, "subspace has irrational equations");
  if (v.is_empty()) throw Error(ErrorKind::InvalidInput, "empty subspace");
  const size_t n = v.ambient_dim();
  std::vector<RVec> w;
  for (const auto& b : v.basis()) w.push_back(to_rvec(b));
  ProjectedLattice out;
  auto identity = [n] {
    ZMat id(n, ZVec(n, 0));
    for (size_t i = 0; i < n; ++i) id[i][i] = 1;
    return id;
  };
  if (w.empty()) {
    out.orthogonal = identity();
    return out;
  }
  if (w.size() == n) {
    out.preimages = identity();
    for (const auto& e : out.preimages) out.basis.push_back(to_rvec(e));
    return out;
  }
  std::vector<RVec> proj;
  Integer den = 1;
  for (size_t i = 0; i < n; ++i) {
    RVec e(n, Rational(0));
    e[i] = 1;
    proj.push_back(project_onto(w, e));
    den = lcm(den, common_denominator(proj.back()));
  }
  ZMat gens(n, ZVec(n));
  for (size_t i = 0; i < n; ++i)
    for (size_t j = 0; j < n; ++j) gens[i][j] = Rational(proj[i][j] * den).get_num();
  RowReduction red = hermite_rows(gens, n);
  ZMat basis(red.h.begin(), red.h.begin() + static_cast<long>(red.rank));
  ZMat pre(red.t.begin(), red.t.begin() + static_cast<long>(red.rank));
  lll_reduce(basis, pre);
  for (const auto& b : basis) {
    RVec r(n);
    for (size_t j = 0; j < n; ++j) {
      r[j] = Rational(b[j], den);
      r[j].canonicalize();
    }
    out.basis.push_back(std::move(r));
  }
  out.preimages = std::move(pre);
  ZMat wint;
  for (const auto& b : w) wint.push_back(scale_to_primitive(b));
  out.orthogonal = integer_kernel(wint, n);
  return out;
}

bool in_relative_interior(const Polytope& p, const QVec& v) {
  if (!p.affine_hull().contains(v)) return false;
  for (const auto& f : p.facets())
    if (dot(f.normal, v) >= f.rhs) return false;
  return true;
}

namespace {

void integer_points_rec(const std::vector<QVec>& rows, const QVec& rhs, size_t k, ZVec& prefix,
                    std::vector<ZVec>& out, size_t cap) {
  const size_t depth = prefix.size();
  const size_t left = k - depth;
  if (left == 0) {
    for (const auto& r : rhs)
      if (r.sign() < 0) return;
    out.push_back(prefix);
    if (out.size() > cap) throw Error(ErrorKind::BudgetExhausted, "too many candidate directions");
    return;
  }
  std::optional<Integer> lo, hi;
  if (left == 1) {
    for (size_t i = 0; i < rows.size(); ++i) {
      const QuadExt& a = rows[i][0];
      if (a.is_zero()) {
        if (rhs[i].sign() < 0) return;
        continue;
      }
      QuadExt q = rhs[i] / a;
      if (a.sign() > 0) {
        Integer f = q.floor();
        if (!hi || f < *hi) hi = f;
      } else {
        Integer c = q.ceil();
        if (!lo || c > *lo) lo = c;
      }
    }
  } else {
    std::vector<Halfspace> hs;
    for (size_t i = 0; i < rows.size(); ++i) hs.push_back({rows[i], rhs[i]});
    Polytope q = Polytope::from_inequalities(left, hs);
    if (q.is_empty()) return;
    QuadExt mn = q.vertices().front()[0], mx = mn;
    for (const auto& v : q.vertices()) {
      mn = std::min(mn, v[0]);
      mx = std::max(mx, v[0]);
    }
    lo = mn.ceil();
    hi = mx.floor();
  }
  if (!lo || !hi) throw Error(ErrorKind::Unbounded, "candidate region is unbounded");
  for (Integer t = *lo; t <= *hi; ++t) {
    std::vector<QVec> sub_rows;
    QVec sub_rhs;
    for (size_t i = 0; i < rows.size(); ++i) {
      sub_rows.emplace_back(rows[i].begin() + 1, rows[i].end());
      sub_rhs.push_back(rhs[i] - rows[i][0] * QuadExt(t));
    }
    prefix.push_back(t);
    integer_points_rec(sub_rows, sub_rhs, k, prefix, out, cap);
    prefix.pop_back();
  }
}

}  // namespace

std::vector<ZVec> integer_points(const std::vector<Halfspace>& hs, size_t k, size_t cap) {
  std::vector<QVec> rows;
  QVec rhs;
  for (const auto& h : hs) {
    if (h.normal.size() != k) throw Error(ErrorKind::InvalidInput, "inequality dimension mismatch");
    rows.push_back(h.normal);
    rhs.push_back(h.rhs);
  }
  ZVec prefix;
  std::vector<ZVec> out;
  integer_points_rec(rows, rhs, k, prefix, out, cap);
  return out;
}

}  // namespace cgc
