#include "cgclosure/kronecker.hpp"

namespace cgc {

SqrtConvergents::SqrtConvergents(long m) : m_(m) {
  if (!is_squarefree(m)) throw Error(ErrorKind::InvalidInput, "field index must be squarefree");
  a0_ = sqrt(Integer(m));
}

std::pair<Integer, Integer> SqrtConvergents::next() {
  if (!started_) {
    started_ = true;
    mk_ = 0;
    dk_ = 1;
    ak_ = a0_;
    p_prev_ = 1;
    q_prev_ = 0;
    p_ = a0_;
    q_ = 1;
    return {p_, q_};
  }
  mk_ = dk_ * ak_ - mk_;
  dk_ = (Integer(m_) - mk_ * mk_) / dk_;
  ak_ = (a0_ + mk_) / dk_;
  Integer p = ak_ * p_ + p_prev_;
  Integer q = ak_ * q_ + q_prev_;
  p_prev_ = p_;
  q_prev_ = q_;
  p_ = p;
  q_ = q;
  return {p_, q_};
}

bool KroneckerSubspace::contains(const QVec& x) const {
  if (!pivot) {
    for (const auto& v : x)
      if (!v.is_zero()) return false;
    return true;
  }
  for (const auto& e : equations)
    if (!dot(e, x).is_zero()) return false;
  return true;
}

namespace {

void split(const QVec& pi, RVec& p, RVec& q) {
  p.clear();
  q.clear();
  for (const auto& x : pi) {
    p.push_back(x.rat());
    q.push_back(x.irr());
  }
}

void check_target(const QVec& pi) {
  if (pi.empty() || is_zero(pi)) throw Error(ErrorKind::InvalidInput, "pi must be nonzero");
  (void)field_of(pi);
}

Approximant make(const QVec& pi, ZVec a, Integer n) {
  Approximant out{std::move(a), std::move(n), {}, {}};
  out.residual.resize(pi.size());
  for (size_t i = 0; i < pi.size(); ++i) out.residual[i] = QuadExt(out.a[i]) - QuadExt(out.n) * pi[i];
  out.residual_norm_sq = norm_sq(out.residual);
  return out;
}

Approximant rational_hit(const QVec& pi, const Integer& n0) {
  RVec p = to_rvec(pi);
  Integer l = common_denominator(p);
  Integer k = n0 < 0 ? Integer(1) : Integer(n0 / l + 1);
  Integer n = l * k;
  ZVec a(p.size());
  for (size_t i = 0; i < p.size(); ++i) a[i] = Rational(p[i] * n).get_num();
  return make(pi, std::move(a), std::move(n));
}

// Walks convergents of sqrt(m) and yields the approximants N = L t, a = t y + s z.
class ApproximantStream {
 public:
  explicit ApproximantStream(const QVec& pi) : pi_(pi), cf_(field_of(pi)) {
    RVec p, q;
    split(pi, p, q);
    RVec both = p;
    both.insert(both.end(), q.begin(), q.end());
    l_ = common_denominator(both);
    for (size_t i = 0; i < pi.size(); ++i) {
      y_.push_back(Rational(p[i] * l_).get_num());
      z_.push_back(Rational(q[i] * l_).get_num());
    }
  }
  Approximant next() {
    auto [s, t] = cf_.next();
    ZVec a(pi_.size());
    for (size_t i = 0; i < pi_.size(); ++i) a[i] = t * y_[i] + s * z_[i];
    return make(pi_, std::move(a), l_ * t);
  }

 private:
  QVec pi_;
  SqrtConvergents cf_;
  Integer l_;
  ZVec y_, z_;
};

}  // namespace

KroneckerSubspace dense_subspace(const QVec& pi) {
  check_target(pi);
  KroneckerSubspace v;
  v.field = field_of(pi);
  const size_t n = pi.size();
  v.offsets.assign(n, 0);
  v.coefficients.assign(n, 0);
  if (is_rational(pi)) {
    v.pi_tilde = pi;
    return v;
  }
  size_t js = 0;
  while (pi[js].is_rational()) ++js;
  v.pivot = js;
  v.rational_part_dim = 1;
  // pi_j = c_j + r_j pi_{j*} with rational r_j, c_j.
  RVec r(n), c(n);
  for (size_t j = 0; j < n; ++j) {
    r[j] = pi[j].irr() / pi[js].irr();
    c[j] = pi[j].rat() - r[j] * pi[js].rat();
  }
  RVec all;
  for (size_t j = 0; j < n; ++j)
    if (j != js) {
      all.push_back(r[j]);
      all.push_back(c[j]);
    }
  v.mstar = common_denominator(all);
  for (size_t j = 0; j < n; ++j) {
    if (j == js) {
      v.coefficients[j] = v.mstar;
      continue;
    }
    v.coefficients[j] = Rational(r[j] * v.mstar).get_num();
    v.offsets[j] = Rational(c[j] * v.mstar).get_num();
    ZVec eq(n, 0);
    eq[j] = v.mstar;
    eq[js] = -v.coefficients[j];
    v.equations.push_back(std::move(eq));
  }
  v.generator = v.coefficients;
  v.pi_tilde.resize(n);
  for (size_t j = 0; j < n; ++j) v.pi_tilde[j] = QuadExt(v.mstar) * pi[j] - QuadExt(v.offsets[j]);
  return v;
}

Approximant approximate(const QVec& pi, const Rational& eps, const Integer& n0, int max_steps) {
  check_target(pi);
  if (sgn(eps) <= 0) throw Error(ErrorKind::InvalidInput, "eps must be positive");
  if (is_rational(pi)) return rational_hit(pi, n0);
  const QuadExt eps2(eps * eps);
  ApproximantStream stream(pi);
  for (int step = 0; step < max_steps; ++step) {
    Approximant cand = stream.next();
    if (cand.n > n0 && cand.residual_norm_sq < eps2) return cand;
  }
  throw Error(ErrorKind::BudgetExhausted, "no approximant within " + std::to_string(max_steps) + " convergents");
}

BalancedFamily sign_balanced_approximants(const QVec& pi, const Rational& eps, const Integer& n0,
                                          int max_steps) {
  check_target(pi);
  if (sgn(eps) <= 0) throw Error(ErrorKind::InvalidInput, "eps must be positive");
  BalancedFamily fam;
  if (is_rational(pi)) {
    fam.members.push_back(rational_hit(pi, n0));
    fam.lambda = {QuadExt(1)};
    return fam;
  }
  const QuadExt eps2(eps * eps);
  size_t js = 0;
  while (pi[js].is_rational()) ++js;
  ApproximantStream stream(pi);
  std::optional<Approximant> prev;
  for (int step = 0; step < max_steps; ++step) {
    Approximant cand = stream.next();
    bool ok = cand.n > n0 && cand.residual_norm_sq < eps2;
    if (ok && prev) {
      // Residuals lie on the line spanned by the irrational parts; compare
      // their signed coordinate at the pivot.
      const QuadExt& e1 = prev->residual[js];
      const QuadExt& e2 = cand.residual[js];
      if (e1.sign() * e2.sign() < 0) {
        QuadExt span = e2 - e1;
        fam.lambda = {e2 / span, -e1 / span};
        fam.members = {*prev, cand};
        return fam;
      }
    }
    prev = ok ? std::optional<Approximant>(cand) : std::nullopt;
  }
  throw Error(ErrorKind::BudgetExhausted, "no balanced pair within " + std::to_string(max_steps) + " convergents");
}

}  // namespace cgc
