#include "cgclosure/numeric.hpp"

#include <cctype>
#include <cmath>
#include <sstream>

namespace cgc {

std::string_view to_string(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::InvalidInput: return "InvalidInput";
    case ErrorKind::FieldMismatch: return "FieldMismatch";
    case ErrorKind::AmbiguousFloor: return "AmbiguousFloor";
    case ErrorKind::Unbounded: return "Unbounded";
    case ErrorKind::DegenerateFace: return "DegenerateFace";
    case ErrorKind::IrrationalSubspace: return "IrrationalSubspace";
    case ErrorKind::OnBoundary: return "OnBoundary";
    case ErrorKind::UndecidableMembership: return "UndecidableMembership";
    case ErrorKind::NoCutNeeded: return "NoCutNeeded";
    case ErrorKind::BudgetExhausted: return "BudgetExhausted";
    case ErrorKind::NotAFace: return "NotAFace";
    case ErrorKind::CutInvalidOnFace: return "CutInvalidOnFace";
    case ErrorKind::CertificateFailure: return "CertificateFailure";
    case ErrorKind::DimensionTooLarge: return "DimensionTooLarge";
    case ErrorKind::NotPlottable: return "NotPlottable";
  }
  return "Unknown";
}

Integer floor_rational(const Rational& q) {
  Integer r;
  mpz_fdiv_q(r.get_mpz_t(), q.get_num_mpz_t(), q.get_den_mpz_t());
  return r;
}

Integer ceil_rational(const Rational& q) {
  Integer r;
  mpz_cdiv_q(r.get_mpz_t(), q.get_num_mpz_t(), q.get_den_mpz_t());
  return r;
}

int sign(const Rational& q) { return sgn(q); }

Rational parse_rational(const std::string& raw) {
  std::string text;
  for (char ch : raw)
    if (!std::isspace(static_cast<unsigned char>(ch))) text.push_back(ch);
  if (text.empty()) throw Error(ErrorKind::InvalidInput, "empty rational");
  auto bad = [&] { return Error(ErrorKind::InvalidInput, "malformed rational '" + raw + "'"); };
  auto valid_int = [](const std::string& s) {
    size_t i = (!s.empty() && (s[0] == '-' || s[0] == '+')) ? 1 : 0;
    if (i >= s.size()) return false;
    for (; i < s.size(); ++i)
      if (!std::isdigit(static_cast<unsigned char>(s[i]))) return false;
    return true;
  };
  auto as_int = [](std::string s) {
    if (!s.empty() && s[0] == '+') s.erase(0, 1);
    return Integer(s, 10);
  };
  if (auto slash = text.find('/'); slash != std::string::npos) {
    std::string num = text.substr(0, slash), den = text.substr(slash + 1);
    if (!valid_int(num) || !valid_int(den)) throw bad();
    Integer d = as_int(den);
    if (d == 0) throw Error(ErrorKind::InvalidInput, "zero denominator in '" + raw + "'");
    Rational q(as_int(num), d);
    q.canonicalize();
    return q;
  }
  if (auto dot = text.find('.'); dot != std::string::npos) {
    std::string whole = text.substr(0, dot), frac = text.substr(dot + 1);
    bool negative = !whole.empty() && whole[0] == '-';
    std::string digits = whole + frac;
    if (whole.empty() || whole == "-" || whole == "+") digits = whole + "0" + frac;
    if (!valid_int(digits) || frac.empty()) throw bad();
    Integer scale;
    mpz_ui_pow_ui(scale.get_mpz_t(), 10, frac.size());
    Rational q(as_int(digits), scale);
    q.canonicalize();
    (void)negative;
    return q;
  }
  if (!valid_int(text)) throw bad();
  return Rational(as_int(text));
}

std::string to_string(const Rational& q) { return q.get_str(); }

std::optional<Rational> exact_sqrt(const Rational& q) {
  if (sgn(q) < 0) return std::nullopt;
  if (mpz_perfect_square_p(q.get_num_mpz_t()) == 0 || mpz_perfect_square_p(q.get_den_mpz_t()) == 0)
    return std::nullopt;
  Rational r(sqrt(Integer(q.get_num())), sqrt(Integer(q.get_den())));
  r.canonicalize();
  return r;
}

namespace {

// floor(sqrt(q) * 2^bits) for q >= 0.
Integer scaled_isqrt(const Rational& q, unsigned bits) {
  Integer num = q.get_num();
  Integer den = q.get_den();
  Integer shifted = num * den;
  mpz_mul_2exp(shifted.get_mpz_t(), shifted.get_mpz_t(), 2 * bits);
  Integer root = sqrt(shifted);  // floor(sqrt(num*den*4^bits))
  Integer out;
  mpz_fdiv_q(out.get_mpz_t(), root.get_mpz_t(), den.get_mpz_t());
  return out;
}

Rational dyadic(const Integer& v, unsigned bits) {
  Integer den = 1;
  mpz_mul_2exp(den.get_mpz_t(), den.get_mpz_t(), bits);
  Rational r(v, den);
  r.canonicalize();
  return r;
}

}  // namespace

Rational sqrt_lower(const Rational& q, unsigned bits) {
  if (sgn(q) < 0) throw Error(ErrorKind::InvalidInput, "sqrt of negative rational");
  if (auto e = exact_sqrt(q)) return *e;
  return dyadic(scaled_isqrt(q, bits), bits);
}

Rational sqrt_upper(const Rational& q, unsigned bits) {
  if (sgn(q) < 0) throw Error(ErrorKind::InvalidInput, "sqrt of negative rational");
  if (auto e = exact_sqrt(q)) return *e;
  return dyadic(scaled_isqrt(q, bits) + 1, bits);
}

bool is_squarefree(long m) {
  if (m < 2) return false;
  for (long p = 2; p * p <= m; ++p)
    if (m % (p * p) == 0) return false;
  return true;
}

// ---------------------------------------------------------------- QuadExt

QuadExt::QuadExt(Rational rat, Rational irr, int field)
    : rat_(std::move(rat)), irr_(std::move(irr)), field_(field) {
  if (field != 0 && !is_squarefree(field))
    throw Error(ErrorKind::InvalidInput, "field index must be a squarefree integer >= 2");
  if (sgn(irr_) != 0 && field == 0)
    throw Error(ErrorKind::InvalidInput, "irrational part requires a field index");
}

QuadExt QuadExt::root(int field) { return QuadExt(Rational(0), Rational(1), field); }

int QuadExt::joint_field(const QuadExt& a, const QuadExt& b) {
  bool ai = sgn(a.irr_) != 0, bi = sgn(b.irr_) != 0;
  if (ai && bi && a.field_ != b.field_)
    throw Error(ErrorKind::FieldMismatch, "cannot combine sqrt(" + std::to_string(a.field_) +
                                              ") with sqrt(" + std::to_string(b.field_) + ")");
  if (ai) return a.field_;
  if (bi) return b.field_;
  return a.field_ != 0 ? a.field_ : b.field_;
}

int QuadExt::sign() const {
  int sa = sgn(rat_), sb = sgn(irr_);
  if (sb == 0) return sa;
  if (sa == 0 || sa == sb) return sb;
  // Opposite signs: compare rat^2 against irr^2 * m.
  Rational lhs = rat_ * rat_;
  Rational rhs = irr_ * irr_ * field_;
  int c = cmp(lhs, rhs);
  return c == 0 ? 0 : (c > 0 ? sa : sb);
}

Integer QuadExt::floor() const {
  if (is_rational()) return floor_rational(rat_);
  // irr*sqrt(m) = sign(irr) * sqrt(irr^2 m); bracket it by an integer square root.
  Rational sq = irr_ * irr_ * field_;
  Integer g = scaled_isqrt(sq, 0);
  Integer guess = sgn(irr_) > 0 ? floor_rational(rat_ + g) : floor_rational(rat_ - g - 1);
  while (QuadExt(guess) > *this) guess -= 1;
  while (QuadExt(Integer(guess + 1)) <= *this) guess += 1;
  return guess;
}

Integer QuadExt::ceil() const { return -(-*this).floor(); }

QuadExt QuadExt::conjugate() const {
  QuadExt r = *this;
  r.irr_ = -r.irr_;
  return r;
}

Rational QuadExt::lower_bound(unsigned bits) const {
  if (is_rational()) return rat_;
  Rational m(field_);
  Rational lo = sqrt_lower(m, bits + 4), hi = sqrt_upper(m, bits + 4);
  // Widen precision by the size of irr so that the enclosure width stays small.
  unsigned extra = static_cast<unsigned>(mpz_sizeinbase(irr_.get_num_mpz_t(), 2));
  if (extra > 0) {
    lo = sqrt_lower(m, bits + 4 + extra);
    hi = sqrt_upper(m, bits + 4 + extra);
  }
  return rat_ + irr_ * (sgn(irr_) > 0 ? lo : hi);
}

Rational QuadExt::upper_bound(unsigned bits) const { return -(-*this).lower_bound(bits); }

double QuadExt::to_double() const {
  return rat_.get_d() + irr_.get_d() * std::sqrt(static_cast<double>(field_));
}

const Rational& QuadExt::as_rational() const {
  if (!is_rational()) throw Error(ErrorKind::InvalidInput, "expected a rational value, got " + str());
  return rat_;
}

QuadExt QuadExt::operator-() const {
  QuadExt r = *this;
  r.rat_ = -r.rat_;
  r.irr_ = -r.irr_;
  return r;
}

QuadExt& QuadExt::operator+=(const QuadExt& o) {
  field_ = joint_field(*this, o);
  rat_ += o.rat_;
  if (sgn(o.irr_) != 0) irr_ += o.irr_;
  return *this;
}

QuadExt& QuadExt::operator-=(const QuadExt& o) {
  field_ = joint_field(*this, o);
  rat_ -= o.rat_;
  if (sgn(o.irr_) != 0) irr_ -= o.irr_;
  return *this;
}

QuadExt& QuadExt::operator*=(const QuadExt& o) {
  int f = joint_field(*this, o);
  bool ai = sgn(irr_) != 0, bi = sgn(o.irr_) != 0;
  if (!ai && !bi) {
    rat_ *= o.rat_;
  } else if (!bi) {
    rat_ *= o.rat_;
    irr_ *= o.rat_;
  } else if (!ai) {
    irr_ = rat_ * o.irr_;
    rat_ *= o.rat_;
  } else {
    Rational r = rat_ * o.rat_ + irr_ * o.irr_ * f;
    Rational i = rat_ * o.irr_ + irr_ * o.rat_;
    rat_ = std::move(r);
    irr_ = std::move(i);
  }
  field_ = f;
  return *this;
}

QuadExt& QuadExt::operator/=(const QuadExt& o) {
  if (o.is_zero()) throw Error(ErrorKind::InvalidInput, "division by zero");
  if (o.is_rational()) {
    int f = joint_field(*this, o);
    rat_ /= o.rat_;
    irr_ /= o.rat_;
    field_ = f;
    return *this;
  }
  // 1/(a + b sqrt m) = (a - b sqrt m) / (a^2 - b^2 m)
  Rational norm = o.rat_ * o.rat_ - o.irr_ * o.irr_ * o.field_;
  *this *= o.conjugate();
  rat_ /= norm;
  irr_ /= norm;
  return *this;
}

std::strong_ordering operator<=>(const QuadExt& a, const QuadExt& b) {
  int s = (a - b).sign();
  if (s < 0) return std::strong_ordering::less;
  if (s > 0) return std::strong_ordering::greater;
  return std::strong_ordering::equal;
}

std::string QuadExt::str() const {
  if (is_rational()) return rat_.get_str();
  return "[" + rat_.get_str() + "," + irr_.get_str() + "]";
}

Integer floor_quad(const QuadExt& x) { return x.floor(); }

std::strong_ordering compare_quad(const QuadExt& x, const QuadExt& y) { return x <=> y; }

// ------------------------------------------------------- certified floors

Integer floor_interval(CertifiedInterval iv, const Refiner& refine, int budget) {
  if (iv.lo > iv.hi) throw Error(ErrorKind::InvalidInput, "interval with lo > hi");
  for (int step = 0;; ++step) {
    Integer f = floor_rational(iv.lo);
    if (iv.hi < Rational(f + 1) || iv.lo == iv.hi) return f;
    if (!iv.refinable || !refine || step >= budget)
      throw Error(ErrorKind::AmbiguousFloor,
                  "integer " + Integer(f + 1).get_str() + " still inside [" + iv.lo.get_str() + ", " +
                      iv.hi.get_str() + "]");
    CertifiedInterval next = refine(iv);
    if (next.lo > next.hi) throw Error(ErrorKind::InvalidInput, "refiner returned lo > hi");
    iv = std::move(next);
  }
}

SqrtValue::SqrtValue(Rational offset, Rational radicand)
    : offset_(std::move(offset)), radicand_(std::move(radicand)) {
  if (sgn(radicand_) < 0) throw Error(ErrorKind::InvalidInput, "negative radicand");
}

std::optional<QuadExt> SqrtValue::exact(int field) const {
  if (auto r = exact_sqrt(radicand_)) return QuadExt(offset_ + *r);
  if (field >= 2) {
    Rational q = radicand_ / field;
    if (auto r = exact_sqrt(q)) return QuadExt(offset_, *r, field);
  }
  return std::nullopt;
}

CertifiedInterval SqrtValue::enclosure(unsigned bits) const {
  return {offset_ + sqrt_lower(radicand_, bits), offset_ + sqrt_upper(radicand_, bits),
          !exact_sqrt(radicand_).has_value()};
}

Integer SqrtValue::floor(int budget) const {
  if (auto r = exact_sqrt(radicand_)) return floor_rational(offset_ + *r);
  // A non-square radicand gives an irrational value, so refinement terminates.
  unsigned bits = 32;
  auto refine = [this, &bits](const CertifiedInterval&) {
    bits *= 2;
    return enclosure(bits);
  };
  return floor_interval(enclosure(bits), refine, budget);
}

double SqrtValue::to_double() const { return offset_.get_d() + std::sqrt(radicand_.get_d()); }

// ----------------------------------------------------------------- vectors

QuadExt dot(const QVec& a, const QVec& b) {
  QuadExt s;
  for (size_t i = 0; i < a.size(); ++i)
    if (!a[i].is_zero() && !b[i].is_zero()) s += a[i] * b[i];
  return s;
}

QuadExt dot(const ZVec& a, const QVec& b) {
  QuadExt s;
  for (size_t i = 0; i < a.size(); ++i)
    if (a[i] != 0) s += QuadExt(a[i]) * b[i];
  return s;
}

Rational dot(const RVec& a, const RVec& b) {
  Rational s;
  for (size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
  return s;
}

Integer dot(const ZVec& a, const ZVec& b) {
  Integer s;
  for (size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
  return s;
}

QuadExt norm_sq(const QVec& a) { return dot(a, a); }

Rational norm_sq(const RVec& a) { return dot(a, a); }

Rational norm_upper(const QVec& a, unsigned bits) {
  Rational sq = norm_sq(a).upper_bound(bits);
  return sqrt_upper(sq, bits);
}

Rational norm_lower(const QVec& a, unsigned bits) {
  Rational sq = norm_sq(a).lower_bound(bits);
  if (sgn(sq) <= 0) return Rational(0);
  return sqrt_lower(sq, bits);
}

QVec to_qvec(const ZVec& v) { return QVec(v.begin(), v.end()); }

QVec to_qvec(const RVec& v) { return QVec(v.begin(), v.end()); }

bool is_rational(const QVec& v) {
  for (const auto& x : v)
    if (!x.is_rational()) return false;
  return true;
}

RVec to_rvec(const QVec& v) {
  RVec out;
  out.reserve(v.size());
  for (const auto& x : v) out.push_back(x.as_rational());
  return out;
}

bool is_zero(const QVec& v) {
  for (const auto& x : v)
    if (!x.is_zero()) return false;
  return true;
}

bool is_zero(const ZVec& v) {
  for (const auto& x : v)
    if (x != 0) return false;
  return true;
}

int field_of(const QVec& v) {
  int f = 0;
  for (const auto& x : v) {
    if (x.is_rational()) continue;
    if (f != 0 && f != x.field())
      throw Error(ErrorKind::FieldMismatch, "vector mixes quadratic fields");
    f = x.field();
  }
  return f;
}

std::string to_string(const QVec& v) {
  std::ostringstream os;
  os << "(";
  for (size_t i = 0; i < v.size(); ++i) os << (i ? ", " : "") << v[i].str();
  os << ")";
  return os.str();
}

std::string to_string(const ZVec& v) {
  std::ostringstream os;
  os << "(";
  for (size_t i = 0; i < v.size(); ++i) os << (i ? ", " : "") << v[i].get_str();
  os << ")";
  return os.str();
}

}  // namespace cgc
