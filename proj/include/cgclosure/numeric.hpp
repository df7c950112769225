#pragma once

// Exact scalars: arbitrary-precision integers and rationals (GMP), elements
// a + b*sqrt(m) of a real quadratic field, and certified rational enclosures.

#include <compare>
#include <functional>
#include <optional>
#include <string>
#include <vector>

#include <gmpxx.h>

#include "cgclosure/error.hpp"

namespace cgc {

using Integer = mpz_class;
using Rational = mpq_class;

using ZVec = std::vector<Integer>;
using RVec = std::vector<Rational>;

Integer floor_rational(const Rational& q);
Integer ceil_rational(const Rational& q);
int sign(const Rational& q);

/// Parses "p/q", "p" or a finite decimal such as "-1.25".
Rational parse_rational(const std::string& text);
std::string to_string(const Rational& q);

std::optional<Rational> exact_sqrt(const Rational& q);
/// Rational enclosure of sqrt(q) with width at most 2^-bits (exact when q is a square).
Rational sqrt_lower(const Rational& q, unsigned bits);
Rational sqrt_upper(const Rational& q, unsigned bits);

bool is_squarefree(long m);

/// Element rat + irr*sqrt(field) of Q(sqrt(field)).
///
/// A value whose irrational part is zero is a plain rational and combines
/// with any field. Two values with nonzero irrational parts over different
/// fields cannot be combined (FieldMismatch).
class QuadExt {
 public:
  QuadExt() = default;
  QuadExt(int v) : rat_(v) {}
  QuadExt(long v) : rat_(v) {}
  QuadExt(const Integer& v) : rat_(v) {}
  QuadExt(Rational v) : rat_(std::move(v)) {}
  QuadExt(Rational rat, Rational irr, int field);

  /// sqrt(field) itself.
  static QuadExt root(int field);

  const Rational& rat() const { return rat_; }
  const Rational& irr() const { return irr_; }
  int field() const { return field_; }

  bool is_rational() const { return sgn(irr_) == 0; }
  bool is_zero() const { return sgn(rat_) == 0 && sgn(irr_) == 0; }
  bool is_integer() const { return is_rational() && rat_.get_den() == 1; }

  /// Exact sign; no floating point involved.
  int sign() const;
  Integer floor() const;
  Integer ceil() const;
  QuadExt abs() const { return sign() < 0 ? -*this : *this; }
  QuadExt conjugate() const;

  /// Rational bounds within 2^-bits of the value.
  Rational lower_bound(unsigned bits = 64) const;
  Rational upper_bound(unsigned bits = 64) const;
  double to_double() const;

  /// Throws InvalidInput when the value is not rational.
  const Rational& as_rational() const;

  QuadExt operator-() const;
  QuadExt& operator+=(const QuadExt& o);
  QuadExt& operator-=(const QuadExt& o);
  QuadExt& operator*=(const QuadExt& o);
  QuadExt& operator/=(const QuadExt& o);

  friend QuadExt operator+(QuadExt a, const QuadExt& b) { return a += b; }
  friend QuadExt operator-(QuadExt a, const QuadExt& b) { return a -= b; }
  friend QuadExt operator*(QuadExt a, const QuadExt& b) { return a *= b; }
  friend QuadExt operator/(QuadExt a, const QuadExt& b) { return a /= b; }

  friend bool operator==(const QuadExt& a, const QuadExt& b) {
    return a.rat_ == b.rat_ && a.irr_ == b.irr_ && (sgn(a.irr_) == 0 || a.field_ == b.field_);
  }
  friend std::strong_ordering operator<=>(const QuadExt& a, const QuadExt& b);

  std::string str() const;

 private:
  static int joint_field(const QuadExt& a, const QuadExt& b);

  Rational rat_;
  Rational irr_;
  int field_ = 0;
};

using QVec = std::vector<QuadExt>;

/// floor(x) decided exactly: f <= x < f + 1.
Integer floor_quad(const QuadExt& x);
std::strong_ordering compare_quad(const QuadExt& x, const QuadExt& y);

/// Closed rational enclosure [lo, hi] of a real value.
struct CertifiedInterval {
  Rational lo;
  Rational hi;
  bool refinable = true;
};

using Refiner = std::function<CertifiedInterval(const CertifiedInterval&)>;

/// Floor of the enclosed value. Refines until no integer lies in the
/// ambiguity zone; throws AmbiguousFloor once `budget` refinements are spent.
Integer floor_interval(CertifiedInterval iv, const Refiner& refine, int budget = 64);

/// offset + sqrt(radicand) with rational offset and radicand >= 0; the support
/// value of balls and ellipses.
class SqrtValue {
 public:
  SqrtValue(Rational offset, Rational radicand);

  const Rational& offset() const { return offset_; }
  const Rational& radicand() const { return radicand_; }

  /// Exact representation in Q(sqrt(field)) when the radicand is q^2 or q^2*field.
  std::optional<QuadExt> exact(int field) const;
  CertifiedInterval enclosure(unsigned bits) const;
  Integer floor(int budget = 64) const;
  double to_double() const;

 private:
  Rational offset_;
  Rational radicand_;
};

// Vector helpers.
QuadExt dot(const QVec& a, const QVec& b);
QuadExt dot(const ZVec& a, const QVec& b);
Rational dot(const RVec& a, const RVec& b);
Integer dot(const ZVec& a, const ZVec& b);
QuadExt norm_sq(const QVec& a);
Rational norm_sq(const RVec& a);
Rational norm_upper(const QVec& a, unsigned bits = 64);
Rational norm_lower(const QVec& a, unsigned bits = 64);
QVec to_qvec(const ZVec& v);
QVec to_qvec(const RVec& v);
bool is_rational(const QVec& v);
RVec to_rvec(const QVec& v);
bool is_zero(const QVec& v);
bool is_zero(const ZVec& v);
/// Common field of the nonzero irrational parts (0 if all rational).
int field_of(const QVec& v);

std::string to_string(const QVec& v);
std::string to_string(const ZVec& v);

}  // namespace cgc
