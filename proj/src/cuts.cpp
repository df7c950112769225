#include "cgclosure/cuts.hpp"

#include <algorithm>

namespace cgc {

Halfspace CGCut::halfspace() const { return {to_qvec(c), QuadExt(rhs)}; }

bool CGCut::satisfied_by(const QVec& x) const { return dot(c, x) <= QuadExt(rhs); }

bool CGCut::separates(const Polytope& p) const {
  for (const auto& v : p.vertices())
    if (!satisfied_by(v)) return true;
  return false;
}

CGCut cg_cut(const ConvexBody& k, const ZVec& c) {
  if (c.size() != k.dim()) throw Error(ErrorKind::InvalidInput, "cut normal dimension mismatch");
  if (is_zero(c)) throw Error(ErrorKind::InvalidInput, "zero normal gives the trivial cut 0 <= 0");
  return {c, k.support_floor(c), true, "support"};
}

bool CutPool::insert(const CGCut& cut) {
  auto it = by_normal_.find(cut.c);
  if (it == by_normal_.end()) {
    by_normal_.emplace(cut.c, cut);
    return true;
  }
  if (cut.rhs < it->second.rhs) {
    it->second = cut;
    return true;
  }
  return false;
}

void CutPool::merge(const CutPool& other) {
  for (const auto& [c, cut] : other.by_normal_) insert(cut);
}

std::vector<CGCut> CutPool::cuts() const {
  std::vector<CGCut> out;
  out.reserve(by_normal_.size());
  for (const auto& [c, cut] : by_normal_) out.push_back(cut);
  return out;
}

std::vector<Halfspace> CutPool::halfspaces() const {
  std::vector<Halfspace> out;
  out.reserve(by_normal_.size());
  for (const auto& [c, cut] : by_normal_) out.push_back(cut.halfspace());
  return out;
}

std::string_view to_string(DeepestRule rule) {
  switch (rule) {
    case DeepestRule::None: return "none";
    case DeepestRule::UniquePreimage: return "unique-preimage";
    case DeepestRule::Coercive: return "coercive";
    case DeepestRule::LatticeBound: return "lattice-bound";
    case DeepestRule::EmptiesPolytope: return "empties-polytope";
    case DeepestRule::Exhaustive: return "exhaustive";
  }
  return "none";
}

std::optional<ZVec> lattice_preimage(const ProjectedLattice& lattice, const RVec& d) {
  const size_t n = d.size();
  if (lattice.basis.empty()) {
    for (const auto& x : d)
      if (sgn(x) != 0) return std::nullopt;
    return ZVec(n, 0);
  }
  size_t k = lattice.basis.size();
  Matrix<Rational> gt(n, RVec(k));
  for (size_t i = 0; i < n; ++i)
    for (size_t j = 0; j < k; ++j) gt[i][j] = lattice.basis[j][i];
  auto y = solve(gt, d, k);
  if (!y) return std::nullopt;
  ZVec c(n, 0);
  for (size_t j = 0; j < k; ++j) {
    if ((*y)[j].get_den() != 1) return std::nullopt;
    Integer yj = (*y)[j].get_num();
    for (size_t i = 0; i < n; ++i) c[i] += yj * lattice.preimages[j][i];
  }
  return c;
}

RVec anchor_point(const Polytope& p) {
  if (p.is_empty()) throw Error(ErrorKind::InvalidInput, "empty polytope has no anchor");
  if (!p.is_rational()) throw Error(ErrorKind::IrrationalSubspace, "anchor needs a rational polytope");
  const size_t n = p.ambient_dim();
  RVec bary(n, Rational(0));
  for (const auto& v : p.vertices())
    for (size_t i = 0; i < n; ++i) bary[i] += v[i].as_rational();
  QVec rounded(n);
  for (size_t i = 0; i < n; ++i) {
    bary[i] /= static_cast<long>(p.vertices().size());
    rounded[i] = QuadExt(floor_rational(bary[i] + Rational(1, 2)));
  }
  const auto& aff = p.affine_hull();
  QVec diff(n);
  for (size_t i = 0; i < n; ++i) diff[i] = rounded[i] - aff.base()[i];
  QVec proj = aff.project_direction(diff);
  RVec out(n);
  for (size_t i = 0; i < n; ++i) out[i] = (aff.base()[i] + proj[i]).as_rational();
  return out;
}

namespace {

std::vector<RVec> dual_rows(const std::vector<RVec>& rows) {
  size_t k = rows.size();
  if (k == 0) return {};
  Matrix<Rational> gram(k, RVec(k));
  for (size_t i = 0; i < k; ++i)
    for (size_t j = 0; j < k; ++j) gram[i][j] = dot(rows[i], rows[j]);
  auto inv = inverse(gram);
  return multiply(*inv, rows);
}

Rational norm_upper_r(const RVec& v) { return sqrt_upper(dot(v, v), 32); }

Integer round_nearest(const Rational& x) { return floor_rational(x + Rational(1, 2)); }

// Calls f on every z in [-radius, radius]^l with max |z_i| > inner.
template <class Fn>
void for_each_shell_point(size_t l, long radius, long inner, Fn&& f) {
  std::vector<long> z(l, -radius);
  while (true) {
    long m = 0;
    for (long x : z) m = std::max(m, std::abs(x));
    if (m > inner && !f(z)) return;
    size_t i = 0;
    while (i < l && z[i] == radius) z[i++] = -radius;
    if (i == l) return;
    ++z[i];
  }
}

}  // namespace

DeepestCutContext make_deepest_context(const Polytope& p, const AffineSubspace& space, const ConvexBody& k,
                                       const RVec& x0, long search_cap) {
  if (p.is_empty()) throw Error(ErrorKind::InvalidInput, "deepest cut needs a nonempty polytope");
  if (!space.contains(to_qvec(x0))) throw Error(ErrorKind::InvalidInput, "x0 is not in the subspace");
  for (const auto& v : p.vertices())
    if (!space.contains(v)) throw Error(ErrorKind::InvalidInput, "polytope is not inside the subspace");
  DeepestCutContext ctx;
  ctx.p = &p;
  ctx.k = &k;
  ctx.space = space;
  ctx.lattice = projected_lattice(space);
  ctx.x0 = x0;
  ctx.search_cap = search_cap;
  std::vector<RVec> rows;
  for (const auto& b : ctx.lattice.orthogonal) rows.push_back(to_rvec(b));
  ctx.dual = dual_rows(rows);
  for (const auto& r : ctx.dual) ctx.dual_norm.push_back(norm_upper_r(r));
  ctx.grid = 1;
  for (const auto& r : rows) ctx.grid = lcm(ctx.grid, Integer(Rational(dot(r, x0)).get_den()));
  const size_t n = k.dim();
  bool full = true;
  if (k.is_polytope()) {
    full = k.polytope().dim() == static_cast<int>(n);
    std::vector<Halfspace> eqs;
    for (const auto& e : space.equations()) {
      QVec neg = e.normal;
      for (auto& x : neg) x = -x;
      eqs.push_back({e.normal, e.rhs});
      eqs.push_back({std::move(neg), -e.rhs});
    }
    ctx.slice = eqs.empty() ? k.polytope() : k.polytope().intersect(eqs);
  }
  if (full) {
    for (const auto& v : p.vertices()) {
      if (k.is_polytope() && !in_relative_interior(k.polytope(), v)) continue;
      try {
        Rational r = interior_radius(v, k, AffineSubspace::whole(n));
        ctx.interior.emplace_back(v, r);
      } catch (const Error& e) {
        if (e.kind() != ErrorKind::OnBoundary) throw;
      }
    }
  }
  return ctx;
}

DeepestCutResult deepest_cut(const DeepestCutContext& ctx, const RVec& d) {
  const Polytope& p = *ctx.p;
  const ConvexBody& k = *ctx.k;
  const size_t n = d.size();
  auto pre = lattice_preimage(ctx.lattice, d);
  if (!pre) throw Error(ErrorKind::InvalidInput, "direction is not in the projected lattice");
  ZVec c0 = *pre;
  const ZMat& basis = ctx.lattice.orthogonal;
  const size_t l = basis.size();
  // Move c0 close to the smallest preimage.
  for (size_t j = 0; j < l; ++j) {
    Integer t = round_nearest(dot(ctx.dual[j], to_rvec(c0)));
    if (t != 0) c0 = sub(c0, scale(basis[j], t));
  }
  bool d_zero = true;
  for (const auto& x : d)
    if (sgn(x) != 0) d_zero = false;
  if (l == 0 && d_zero) throw Error(ErrorKind::NoCutNeeded, "the zero direction has only the zero preimage");

  QVec dq = to_qvec(d);
  Rational max_p, min_p;
  bool first = true;
  for (const auto& v : p.vertices()) {
    Rational val = dot(dq, v).as_rational();
    if (first || val > max_p) max_p = val;
    if (first || val < min_p) min_p = val;
    first = false;
  }
  const RVec diff0 = [&] {
    RVec r(n);
    for (size_t i = 0; i < n; ++i) r[i] = Rational(c0[i]) - d[i];
    return r;
  }();
  const Rational s0 = dot(diff0, ctx.x0);
  // Every preimage has restricted rhs on the grid -s0 + Z/q and above M - 1,
  // where M bounds d.x on K intersected with V from below.
  QuadExt slice_max = QuadExt(max_p);
  if (ctx.slice && !ctx.slice->is_empty()) {
    for (const auto& v : ctx.slice->vertices()) {
      QuadExt val = dot(dq, v);
      if (val > slice_max) slice_max = val;
    }
  }
  const Rational q(ctx.grid);
  Integer kk = ((slice_max - QuadExt(1) + QuadExt(s0)) * QuadExt(q)).floor() + 1;
  const Rational lower = Rational(kk) / q - s0;

  DeepestCutResult best;
  bool have = false;
  Rational best_norm;
  auto evaluate = [&](const ZVec& c) {
    if (is_zero(c)) return;
    ++best.evaluated;
    Integer f = k.support_floor(c);
    RVec diff(n);
    for (size_t i = 0; i < n; ++i) diff[i] = Rational(c[i]) - d[i];
    Rational rho = Rational(f) - dot(diff, ctx.x0);
    Rational nrm = dot(to_rvec(c), to_rvec(c));
    bool better = !have || rho < best.restricted_rhs ||
                  (rho == best.restricted_rhs && (nrm < best_norm || (nrm == best_norm && c < best.cut.c)));
    if (!better) return;
    have = true;
    best.cut = {c, f, false, "deepest"};
    best.restricted_rhs = rho;
    best_norm = nrm;
  };

  auto certify = [&](long radius) -> DeepestRule {
    if (!have) return DeepestRule::None;
    if (l == 0) return DeepestRule::UniquePreimage;
    if (best.restricted_rhs < min_p) return DeepestRule::EmptiesPolytope;
    if (best.restricted_rhs == lower) return DeepestRule::LatticeBound;
    if (ctx.interior.empty()) return DeepestRule::None;
    // An improving preimage needs |c| < (rho + 1 - d.v) / r_v for an interior vertex v.
    std::optional<Rational> reach;
    for (const auto& [v, r] : ctx.interior) {
      Rational bound = (best.restricted_rhs + 1 - dot(dq, v).as_rational()) / r;
      if (!reach || bound < *reach) reach = bound;
    }
    if (sgn(*reach) <= 0) return DeepestRule::Coercive;
    RVec c0r = to_rvec(c0);
    for (size_t j = 0; j < l; ++j) {
      Rational center = -dot(ctx.dual[j], c0r);
      Rational half = ctx.dual_norm[j] * *reach;
      if (center - half < Rational(-radius) || center + half > Rational(radius)) return DeepestRule::None;
    }
    return DeepestRule::Coercive;
  };

  if (l == 0) {
    evaluate(c0);
    best.rule = certify(0);
  } else {
    long inner = -1;
    for (long radius = 1;; radius *= 2) {
      bool budget_hit = false;
      for_each_shell_point(l, radius, inner, [&](const std::vector<long>& z) {
        ZVec c = c0;
        for (size_t j = 0; j < l; ++j)
          if (z[j] != 0) c = add(c, scale(basis[j], Integer(z[j])));
        evaluate(c);
        if (best.evaluated >= ctx.point_cap) {
          budget_hit = true;
          return false;
        }
        return true;
      });
      best.search_radius = radius;
      best.rule = certify(radius);
      if (best.rule != DeepestRule::None || budget_hit || radius >= ctx.search_cap) break;
      inner = radius;
    }
  }
  if (have && best.rule == DeepestRule::None && k.is_polytope()) {
    // Any improving preimage c0 + B^T z has c.w - (c - d).x0 < rho + 1 at
    // every vertex w of K; enumerate that region of z exactly.
    const auto& kv = k.polytope().vertices();
    std::vector<Halfspace> region;
    QVec x0q = to_qvec(ctx.x0);
    for (const auto& w : kv) {
      QVec row(l);
      QVec diff(n);
      for (size_t i = 0; i < n; ++i) diff[i] = w[i] - x0q[i];
      for (size_t j = 0; j < l; ++j) row[j] = dot(basis[j], diff);
      region.push_back({std::move(row), QuadExt(best.restricted_rhs + 1 + s0) - dot(c0, w)});
    }
    try {
      for (const auto& z : integer_points(region, l, ctx.point_cap)) {
        ZVec c = c0;
        for (size_t j = 0; j < l; ++j)
          if (z[j] != 0) c = add(c, scale(basis[j], z[j]));
        evaluate(c);
      }
      best.rule = DeepestRule::Exhaustive;
    } catch (const Error& e) {
      if (e.kind() != ErrorKind::Unbounded && e.kind() != ErrorKind::BudgetExhausted) throw;
    }
  }
  if (!have) throw Error(ErrorKind::NoCutNeeded, "no nonzero preimage in the search box");
  best.certified = best.rule != DeepestRule::None;
  best.cut.certified = best.certified;
  best.separates = best.cut.separates(p);
  return best;
}

DeepestCutResult deepest_cut(const Polytope& p, const AffineSubspace& space, const RVec& d, const RVec& x0,
                             const ConvexBody& k, long search_cap, bool require_separating) {
  bool zero = true;
  for (const auto& x : d)
    if (sgn(x) != 0) zero = false;
  if (zero) throw Error(ErrorKind::InvalidInput, "direction d must be nonzero");
  if (d.size() != k.dim()) throw Error(ErrorKind::InvalidInput, "direction dimension mismatch");
  DeepestCutContext ctx = make_deepest_context(p, space, k, x0, search_cap);
  DeepestCutResult r = deepest_cut(ctx, d);
  if (require_separating && !r.separates)
    throw Error(ErrorKind::NoCutNeeded, "deepest cut found removes no vertex of P");
  return r;
}

std::vector<RVec> short_lattice_vectors(const std::vector<RVec>& basis, size_t n, const Rational& bound,
                                        size_t cap) {
  std::vector<RVec> out;
  out.push_back(RVec(n, Rational(0)));
  if (basis.empty() || sgn(bound) <= 0) return out;
  std::vector<RVec> dual = dual_rows(basis);
  std::vector<long> range;
  size_t total = 1;
  for (const auto& g : dual) {
    Rational r = norm_upper_r(g) * bound;
    Integer f = floor_rational(r);
    if (f > 1000000) throw Error(ErrorKind::BudgetExhausted, "direction bound too large to enumerate");
    range.push_back(f.get_si());
    total *= static_cast<size_t>(2 * range.back() + 1);
    if (total > cap) throw Error(ErrorKind::BudgetExhausted, "too many candidate directions");
  }
  const Rational bound2 = bound * bound;
  size_t k = basis.size();
  std::vector<long> y(k);
  for (size_t j = 0; j < k; ++j) y[j] = -range[j];
  while (true) {
    RVec d(n, Rational(0));
    bool zero = true;
    for (size_t j = 0; j < k; ++j) {
      if (y[j] == 0) continue;
      zero = false;
      for (size_t i = 0; i < n; ++i) d[i] += basis[j][i] * y[j];
    }
    if (!zero && dot(d, d) < bound2) out.push_back(std::move(d));
    size_t j = 0;
    while (j < k && y[j] == range[j]) {
      y[j] = -range[j];
      ++j;
    }
    if (j == k) break;
    ++y[j];
  }
  std::sort(out.begin(), out.end());
  return out;
}

}  // namespace cgc
