#include "cgclosure/closure.hpp"

#include <algorithm>
#include <chrono>
#include <set>

namespace cgc {

namespace {

ZVec negate(ZVec v) {
  for (auto& x : v) x = -x;
  return v;
}

ZVec unit(size_t n, size_t i) {
  ZVec e(n, 0);
  e[i] = 1;
  return e;
}

CGCut tagged_cut(const ConvexBody& k, const ZVec& c, const char* provenance) {
  CGCut cut = cg_cut(k, c);
  cut.provenance = provenance;
  return cut;
}

bool subset_of(const Polytope& inner, const Polytope& outer) {
  for (const auto& v : inner.vertices())
    if (!outer.contains(v)) return false;
  return true;
}

// Facet-defining cuts of P plus the cuts tight on all of P.
CutPool prune(const Polytope& p, const CutPool& pool) {
  if (p.is_empty()) return pool;
  const auto& verts = p.vertices();
  auto tight_set = [&](const QVec& normal, const QuadExt& rhs) {
    std::vector<bool> t(verts.size());
    for (size_t i = 0; i < verts.size(); ++i) t[i] = dot(normal, verts[i]) == rhs;
    return t;
  };
  std::vector<CGCut> cuts = pool.cuts();
  std::vector<std::vector<bool>> tight;
  for (const auto& c : cuts) tight.push_back(tight_set(to_qvec(c.c), QuadExt(c.rhs)));
  CutPool out(pool.source());
  const std::vector<bool> all(verts.size(), true);
  for (size_t i = 0; i < cuts.size(); ++i)
    if (tight[i] == all) out.insert(cuts[i]);
  for (const auto& f : p.facets()) {
    auto want = tight_set(f.normal, f.rhs);
    size_t i = 0;
    while (i < cuts.size() && tight[i] != want) ++i;
    if (i == cuts.size()) return pool;
    out.insert(cuts[i]);
  }
  return out;
}

Polytope intersect_cuts(size_t n, const CutPool& pool) {
  try {
    return Polytope::from_inequalities(n, pool.halfspaces());
  } catch (const Error& e) {
    if (e.kind() != ErrorKind::Unbounded) throw;
    throw Error(ErrorKind::CertificateFailure, "boundary cuts do not bound the body");
  }
}

DirectionBound interior_radii(const Polytope& current, const ConvexBody& k, const AffineSubspace& v) {
  DirectionBound out;
  for (const auto& x : current.vertices()) {
    if (k.is_polytope() && !in_relative_interior(k.polytope(), x)) continue;
    try {
      Rational r = interior_radius(x, k, v);
      out.interior.emplace_back(x, r);
      Rational inv = 1 / r;
      if (!out.bound || inv > *out.bound) out.bound = inv;
    } catch (const Error& e) {
      if (e.kind() != ErrorKind::OnBoundary) throw;
    }
  }
  return out;
}

// Directions d of D whose cuts can remove an interior vertex v of P. With
// S = K n V and U a set of points known to lie in the closure, such a cut has
// max over S of d.(w - v) < 1 and d.(u - v) < 0 for all u in U. Coordinates
// are taken in the basis of D.
class CandidateRegion {
 public:
  CandidateRegion(const Polytope& slice, const std::vector<std::pair<QVec, Rational>>& interior,
                  const std::vector<QVec>& known, const ProjectedLattice& lat, size_t n)
      : lat_(lat), n_(n), k_(lat.basis.size()) {
    std::vector<QVec> basis;
    for (const auto& b : lat.basis) basis.push_back(to_qvec(b));
    auto row_of = [&](const QVec& w, const QVec& v) {
      QVec diff(n);
      for (size_t i = 0; i < n; ++i) diff[i] = w[i] - v[i];
      QVec row(k_);
      for (size_t j = 0; j < k_; ++j) row[j] = dot(basis[j], diff);
      return row;
    };
    for (const auto& [v, r] : interior) {
      Piece piece;
      for (const auto& w : slice.vertices()) {
        piece.rows.push_back(row_of(w, v));
        piece.rhs.push_back(QuadExt(1));
      }
      piece.polar_rows = piece.rows.size();
      for (const auto& u : known) {
        QVec row = row_of(u, v);
        if (is_zero(row)) continue;
        piece.rows.push_back(std::move(row));
        piece.rhs.push_back(QuadExt(0));
      }
      if (k_ > 0) {
        std::vector<Halfspace> hs;
        for (size_t i = 0; i < piece.rows.size(); ++i) hs.push_back({piece.rows[i], piece.rhs[i]});
        Polytope box = Polytope::from_inequalities(k_, hs);
        for (const auto& x : box.vertices())
          for (const auto& c : x) max_radius_ = std::max(max_radius_, c.abs().ceil());
      }
      pieces_.push_back(std::move(piece));
    }
  }

  /// Largest coordinate of the region; points(r) for r >= this is complete.
  const Integer& max_radius() const { return max_radius_; }

  /// Candidate directions with all basis coordinates in [-r, r], lexicographic.
  std::vector<RVec> points(const Integer& r, size_t cap) const {
    std::vector<ZVec> ys;
    for (const auto& piece : pieces_) {
      std::vector<QVec> rows = piece.rows;
      QVec rhs = piece.rhs;
      for (size_t j = 0; j < k_; ++j) {
        QVec e(k_, QuadExt(0));
        e[j] = 1;
        rows.push_back(e);
        rhs.push_back(QuadExt(r));
        e[j] = -1;
        rows.push_back(e);
        rhs.push_back(QuadExt(r));
      }
      std::vector<Halfspace> hs;
      for (size_t i = 0; i < rows.size(); ++i) hs.push_back({rows[i], rhs[i]});
      for (auto& y : integer_points(hs, k_, cap)) {
        bool strict = true;
        for (size_t i = 0; i < piece.rows.size() && strict; ++i) {
          QuadExt val;
          for (size_t j = 0; j < k_; ++j) val += piece.rows[i][j] * QuadExt(y[j]);
          strict = val < piece.rhs[i];
        }
        if (strict) ys.push_back(std::move(y));
      }
    }
    std::sort(ys.begin(), ys.end());
    ys.erase(std::unique(ys.begin(), ys.end()), ys.end());
    std::vector<RVec> out;
    for (const auto& y : ys) {
      RVec d(n_, Rational(0));
      for (size_t j = 0; j < k_; ++j)
        for (size_t i = 0; i < n_; ++i) d[i] += lat_.basis[j][i] * y[j];
      out.push_back(std::move(d));
    }
    std::sort(out.begin(), out.end());
    return out;
  }

 private:
  struct Piece {
    std::vector<QVec> rows;
    QVec rhs;
    size_t polar_rows = 0;
  };
  const ProjectedLattice& lat_;
  size_t n_, k_;
  std::vector<Piece> pieces_;
  Integer max_radius_ = 0;
};

class Solver {
 public:
  explicit Solver(const ClosureOptions& opts) : opts_(opts) {}

  std::shared_ptr<ClosureResult> solve(const Polytope& k) {
    auto res = std::make_shared<ClosureResult>();
    res->body = k;
    const size_t n = k.ambient_dim();
    if (n == 0) {
      res->closure = k;
      return res;
    }
    ConvexBody body(k);
    auto eqs = rational_equations(k);
    if (!eqs.empty()) {
      reduce(*res, body, eqs);
      return res;
    }
    if (k.dim() == 0) {
      irrational_point(*res, body);
      return res;
    }
    CutPool pool("closure");
    boundary(*res, body, pool);
    if (!k.affine_hull().is_rational()) {
      PinningResult pin = pin_to_rational_subspace(body);
      pool.merge(pin.pool);
      res->log.rational_cuts = pin.pool.cuts();
      res->log.pinning_certificates = std::move(pin.certificates);
    }
    Polytope p = intersect_cuts(n, pool);
    if (!subset_of(p, k)) throw Error(ErrorKind::CertificateFailure, "boundary polytope is not inside K");
    interior(*res, body, pool, p);
    res->defining_cuts = opts_.prune ? prune(p, pool) : pool;
    res->closure = std::move(p);
    return res;
  }

 private:
  void reduce(ClosureResult& res, const ConvexBody& body, const std::vector<std::pair<ZVec, Rational>>& eqs) {
    const Polytope& k = res.body;
    const size_t n = k.ambient_dim();
    const size_t r = eqs.size();
    // T A^T = [H; 0] gives A T^T = [H^T 0]; x = U y with U = T^T.
    ZMat at(n, ZVec(r));
    for (size_t i = 0; i < r; ++i)
      for (size_t j = 0; j < n; ++j) at[j][i] = eqs[i].first[j];
    RowReduction red = hermite_rows(at, r);
    Matrix<Rational> tq(n, RVec(n));
    for (size_t i = 0; i < n; ++i)
      for (size_t j = 0; j < n; ++j) tq[i][j] = red.t[i][j];
    Matrix<Rational> tinv = *inverse(tq);
    Reduction rd;
    rd.rank = r;
    rd.s.assign(n, ZVec(n));
    rd.u.assign(n, ZVec(n));
    for (size_t i = 0; i < n; ++i)
      for (size_t j = 0; j < n; ++j) {
        rd.s[i][j] = tinv[j][i].get_num();
        rd.u[i][j] = red.t[j][i];
      }
    // y1 = s_1 x, constant on K.
    const QVec& v0 = k.vertices().front();
    RVec y1(r);
    for (size_t i = 0; i < r; ++i) y1[i] = dot(rd.s[i], v0).as_rational();
    for (size_t i = 0; i < r; ++i) {
      CGCut up = tagged_cut(body, rd.s[i], "rational-equation");
      CGCut down = tagged_cut(body, negate(rd.s[i]), "rational-equation");
      res.log.rational_cuts.push_back(up);
      res.log.rational_cuts.push_back(down);
      res.defining_cuts.insert(up);
      res.defining_cuts.insert(down);
    }
    for (size_t i = 0; i < r; ++i)
      if (y1[i].get_den() != 1) {
        res.log.notes.push_back("rational hull contains no integral point");
        res.closure = Polytope::empty(n);
        return;
      }
    rd.y1.resize(r);
    for (size_t i = 0; i < r; ++i) rd.y1[i] = y1[i].get_num();
    rd.base.assign(n, 0);
    for (size_t i = 0; i < n; ++i)
      for (size_t j = 0; j < r; ++j) rd.base[i] += rd.u[i][j] * rd.y1[j];
    if (r == n) {
      QVec p = to_qvec(rd.base);
      for (size_t i = 0; i < n; ++i) {
        res.defining_cuts.insert(tagged_cut(body, unit(n, i), "integral-point"));
        res.defining_cuts.insert(tagged_cut(body, negate(unit(n, i)), "integral-point"));
      }
      res.closure = Polytope::from_vertices(n, {p});
      res.reduction = std::move(rd);
      return;
    }
    const size_t m = n - r;
    std::vector<QVec> pts;
    for (const auto& v : k.vertices()) {
      QVec y(m);
      for (size_t i = 0; i < m; ++i) y[i] = dot(rd.s[r + i], v);
      pts.push_back(std::move(y));
    }
    auto child = solve(Polytope::from_vertices(m, std::move(pts)));
    for (const auto& cut : child->defining_cuts.cuts()) {
      ZVec c(n, 0);
      for (size_t i = 0; i < m; ++i)
        for (size_t j = 0; j < n; ++j) c[j] += cut.c[i] * rd.s[r + i][j];
      CGCut mapped{c, cut.rhs, cut.certified, cut.provenance};
      res.defining_cuts.insert(mapped);
    }
    if (child->closure.is_empty()) {
      res.closure = Polytope::empty(n);
    } else {
      std::vector<QVec> back;
      for (const auto& y : child->closure.vertices()) {
        QVec x = to_qvec(rd.base);
        for (size_t j = 0; j < n; ++j)
          for (size_t i = 0; i < m; ++i) x[j] += QuadExt(rd.u[j][r + i]) * y[i];
        back.push_back(std::move(x));
      }
      res.closure = Polytope::from_vertices(n, std::move(back));
    }
    res.upper_certificate_only = child->upper_certificate_only;
    res.reduction = std::move(rd);
    res.reduced = std::move(child);
  }

  void irrational_point(ClosureResult& res, const ConvexBody& body) {
    const Polytope& k = res.body;
    const size_t n = k.ambient_dim();
    const QVec& p = k.vertices().front();
    size_t i = 0;
    while (p[i].is_rational()) ++i;
    res.defining_cuts.insert(tagged_cut(body, unit(n, i), "irrational-point"));
    res.defining_cuts.insert(tagged_cut(body, negate(unit(n, i)), "irrational-point"));
    res.closure = Polytope::empty(n);
  }

  void boundary(ClosureResult& res, const ConvexBody& body, CutPool& pool) {
    const Polytope& k = res.body;
    const ZVec zero(k.ambient_dim(), 0);
    for (const auto& facet : k.facets()) {
      Face face = pi_face(k, facet.normal);
      Polytope fp = face_polytope(k, face);
      auto child = solve(fp);
      std::vector<std::pair<ZVec, QuadExt>> lifts{{zero, QuadExt(0)}};
      for (const auto& cut : child->defining_cuts.cuts()) {
        QuadExt delta = dot(cut.c, fp.vertices().front());
        for (const auto& v : fp.vertices()) delta = std::max(delta, dot(cut.c, v));
        lifts.emplace_back(cut.c, delta);
      }
      for (const auto& [c, delta] : lifts) {
        HomogeneityCertificate cert = lift_cut(body, face, c, delta);
        for (const auto& mem : cert.family) {
          pool.insert(mem.cut);
          res.log.boundary_cuts.push_back(mem.cut);
        }
        res.log.boundary_certificates.push_back(std::move(cert));
      }
      if (child->upper_certificate_only) res.upper_certificate_only = true;
      res.children.push_back({std::move(face), std::move(child)});
    }
  }

  void interior(ClosureResult& res, const ConvexBody& body, CutPool& pool, Polytope& p) {
    const size_t n = res.body.ambient_dim();
    auto& log = res.log;
    // Facet closures lie in the closure of K.
    std::vector<QVec> known;
    for (const auto& ch : res.children)
      for (const auto& v : ch.result->closure.vertices()) known.push_back(v);
    std::sort(known.begin(), known.end());
    known.erase(std::unique(known.begin(), known.end()), known.end());
    for (size_t round = 1;; ++round) {
      if (p.is_empty()) break;
      if (round > opts_.round_cap) {
        log.round_cap_hit = true;
        res.upper_certificate_only = true;
        log.notes.push_back("round cap reached before the fixpoint");
        break;
      }
      log.rounds = round;
      const AffineSubspace& space = p.affine_hull();
      DirectionBound db = interior_radii(p, body, space);
      if (!db.bound) break;
      DeepestCutContext ctx = make_deepest_context(p, space, body, anchor_point(p), opts_.search_cap);
      CandidateRegion region(*ctx.slice, db.interior, known, ctx.lattice, n);
      std::vector<DeepestCutResult> batch;
      std::vector<RVec> batch_d;
      std::set<RVec> seen;
      size_t uncertified = 0;
      // Small directions first; the whole region is scanned only when nothing separates.
      for (Integer radius = 1;; radius *= 2) {
        if (radius > region.max_radius()) radius = region.max_radius();
        for (const auto& d : region.points(radius, opts_.candidate_cap)) {
          if (!seen.insert(d).second) continue;
          DeepestCutResult r;
          try {
            r = deepest_cut(ctx, d);
          } catch (const Error& e) {
            if (e.kind() != ErrorKind::NoCutNeeded) throw;
            continue;
          }
          if (!r.certified) ++uncertified;
          if (r.separates) {
            batch.push_back(std::move(r));
            batch_d.push_back(d);
          }
        }
        if (!batch.empty() || radius >= region.max_radius()) break;
      }
      if (batch.empty()) {
        log.uncertified_final = uncertified;
        if (uncertified > 0) {
          res.upper_certificate_only = true;
          log.notes.push_back("deepest cut not certified for " + std::to_string(uncertified) + " direction(s)");
        }
        break;
      }
      std::vector<Halfspace> hs;
      for (size_t i = 0; i < batch.size(); ++i) {
        const auto& r = batch[i];
        log.interior.push_back({round, batch_d[i], *db.bound, r.cut, r.restricted_rhs, r.rule, r.certified});
        if (pool.insert(r.cut)) hs.push_back(r.cut.halfspace());
      }
      p = p.intersect(hs);
    }
  }

  const ClosureOptions& opts_;
};

}  // namespace

ClosureResult cg_closure(const ConvexBody& k, const ClosureOptions& opts) {
  if (!k.is_polytope())
    throw Error(ErrorKind::InvalidInput, "exact closure needs a polytope body; use the brute-force oracle");
  if (k.dim() > 4) throw Error(ErrorKind::DimensionTooLarge, "ambient dimension " + std::to_string(k.dim()) + " > 4");
  auto start = std::chrono::steady_clock::now();
  Solver solver(opts);
  ClosureResult res = *solver.solve(k.polytope());
  res.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  return res;
}

DirectionBound interior_direction_bound(const Polytope& current, const ConvexBody& k, const AffineSubspace& v,
                                        size_t candidate_cap) {
  DirectionBound out = interior_radii(current, k, v);
  if (!out.bound) return out;
  ProjectedLattice lat = projected_lattice(v);
  out.candidates = short_lattice_vectors(lat.basis, current.ambient_dim(), *out.bound, candidate_cap);
  return out;
}

namespace {

// Calls f on every primitive c in [-bound, bound]^n, lexicographically.
template <class Fn>
void for_each_primitive(size_t n, long bound, Fn&& f) {
  ZVec c(n, Integer(-bound));
  while (true) {
    if (gcd_of(c) == 1) f(c);
    size_t i = n;
    while (i > 0 && c[i - 1] == bound) c[--i] = -bound;
    if (i == 0) return;
    ++c[i - 1];
  }
}

OracleResult run_oracle(const ConvexBody& k, long bound, bool keep_cuts) {
  if (bound < 1) throw Error(ErrorKind::InvalidInput, "bound must be at least 1");
  const size_t n = k.dim();
  OracleResult out;
  out.bound = bound;
  std::vector<Halfspace> box;
  for (size_t i = 0; i < n; ++i) {
    box.push_back(cg_cut(k, unit(n, i)).halfspace());
    box.push_back(cg_cut(k, negate(unit(n, i))).halfspace());
  }
  Polytope p = Polytope::from_inequalities(n, box);
  size_t index = 0;
  for_each_primitive(n, bound, [&](const ZVec& c) {
    CGCut cut = cg_cut(k, c);
    cut.provenance = "oracle";
    bool is_box = true;
    int nonzero = 0;
    for (const auto& x : c)
      if (x != 0) {
        ++nonzero;
        if (abs(x) != 1) is_box = false;
      }
    is_box = is_box && nonzero == 1;
    if (is_box) {
      out.inserted.push_back(index);
    } else if (cut.separates(p)) {
      p = p.intersect(std::vector<Halfspace>{cut.halfspace()});
      out.inserted.push_back(index);
    }
    if (keep_cuts) out.cuts.push_back(std::move(cut));
    ++index;
  });
  out.polytope = std::move(p);
  return out;
}

}  // namespace

OracleResult brute_force_closure(const ConvexBody& k, long bound, bool check_stability) {
  OracleResult out = run_oracle(k, bound, true);
  if (check_stability) {
    out.stability_checked = true;
    out.stable = run_oracle(k, 2 * bound, false).polytope == out.polytope;
  }
  return out;
}

bool VerifyReport::ok() const {
  return std::all_of(checks.begin(), checks.end(), [](const CheckResult& c) { return c.passed; });
}

namespace {

void check_faces(const ClosureResult& node, const std::string& path, CheckResult& out) {
  for (size_t i = 0; i < node.children.size(); ++i) {
    const auto& ch = node.children[i];
    std::string here = path + "/" + std::to_string(i);
    Polytope meet = node.closure.intersect(Hyperplane{ch.face.normal, ch.face.offset});
    if (!(meet == ch.result->closure) && out.passed) {
      out.passed = false;
      out.detail = "closure on face " + here + " is " + meet.str() + ", face closure is " + ch.result->closure.str();
    }
    check_faces(*ch.result, here, out);
  }
  if (node.reduced) check_faces(*node.reduced, path + "/reduced", out);
}

}  // namespace

VerifyReport verify_closure(const ClosureResult& result, const ConvexBody& k, long bound) {
  VerifyReport rep;
  const Polytope& cl = result.closure;
  const size_t n = k.dim();

  CheckResult defined{"cuts-define-closure", true, ""};
  try {
    Polytope from_cuts = result.defining_cuts.empty() ? Polytope() : intersect_cuts(n, result.defining_cuts);
    if (!(from_cuts == cl)) {
      defined.passed = false;
      defined.detail = "intersection of defining cuts is " + from_cuts.str();
    }
  } catch (const Error& e) {
    defined.passed = false;
    defined.detail = e.what();
  }
  rep.checks.push_back(defined);

  CheckResult rational{"closure-rational", cl.is_rational(), ""};
  if (!rational.passed) rational.detail = "closure has irrational vertex coordinates";
  rep.checks.push_back(rational);

  CheckResult inside{"closure-in-body", true, ""};
  for (const auto& v : cl.vertices())
    if (!k.contains(v)) {
      inside.passed = false;
      inside.detail = "vertex " + to_string(v) + " is outside K";
      break;
    }
  rep.checks.push_back(inside);

  CheckResult oracle{"closure-in-oracle", true, ""};
  if (bound >= 1 && !cl.is_empty()) {
    for_each_primitive(n, bound, [&](const ZVec& c) {
      if (!oracle.passed) return;
      Integer f = k.support_floor(c);
      for (const auto& v : cl.vertices())
        if (dot(c, v) > QuadExt(f)) {
          oracle.passed = false;
          oracle.detail = "vertex " + to_string(v) + " violates " + to_string(c) + " . x <= " + f.get_str();
          return;
        }
    });
  }
  rep.checks.push_back(oracle);

  CheckResult valid{"cuts-valid", true, ""};
  for (const auto& cut : result.defining_cuts.cuts()) {
    Integer f = k.support_floor(cut.c);
    if (cut.rhs < f) {
      valid.passed = false;
      valid.detail = to_string(cut.c) + " . x <= " + cut.rhs.get_str() + " is stronger than floor(h_K) = " + f.get_str();
      break;
    }
  }
  rep.checks.push_back(valid);

  CheckResult faces{"face-commutation", true, ""};
  check_faces(result, "", faces);
  rep.checks.push_back(faces);
  return rep;
}

}  // namespace cgc
