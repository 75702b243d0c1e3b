#pragma once

#include <gmpxx.h>

#include <cstdint>
#include <stdexcept>
#include <string>

namespace crtube {

using BigInt = mpz_class;

/// Arbitrary-precision rational in canonical form: positive denominator,
/// gcd(|num|, den) = 1, zero stored as 0/1.
class Rational {
public:
  Rational() : v_(0) {}
  Rational(long n) : v_(n) {}
  Rational(const BigInt& n) : v_(n) {}
  Rational(long num, long den);
  Rational(const BigInt& num, const BigInt& den);

  /// Parses "p", "-p" or "p/q". Throws std::invalid_argument on bad syntax,
  /// std::domain_error("division by zero") on q = 0.
  static Rational fromString(const std::string& s);

  const BigInt num() const { return v_.get_num(); }
  const BigInt den() const { return v_.get_den(); }
  const mpq_class& raw() const { return v_; }

  bool isZero() const { return sgn(v_) == 0; }
  bool isOne() const { return v_ == 1; }
  bool isInteger() const { return v_.get_den() == 1; }
  int sign() const { return sgn(v_); }

  Rational operator-() const { return Rational(mpq_class(-v_)); }
  Rational abs() const { return sign() < 0 ? -*this : *this; }
  Rational inv() const;

  friend Rational operator+(const Rational& a, const Rational& b) { return Rational(mpq_class(a.v_ + b.v_)); }
  friend Rational operator-(const Rational& a, const Rational& b) { return Rational(mpq_class(a.v_ - b.v_)); }
  friend Rational operator*(const Rational& a, const Rational& b) { return Rational(mpq_class(a.v_ * b.v_)); }
  friend Rational operator/(const Rational& a, const Rational& b);

  Rational& operator+=(const Rational& b) { v_ += b.v_; return *this; }
  Rational& operator-=(const Rational& b) { v_ -= b.v_; return *this; }
  Rational& operator*=(const Rational& b) { v_ *= b.v_; return *this; }

  friend bool operator==(const Rational& a, const Rational& b) { return a.v_ == b.v_; }
  friend bool operator!=(const Rational& a, const Rational& b) { return a.v_ != b.v_; }
  friend bool operator<(const Rational& a, const Rational& b) { return a.v_ < b.v_; }
  friend bool operator<=(const Rational& a, const Rational& b) { return a.v_ <= b.v_; }
  friend bool operator>(const Rational& a, const Rational& b) { return a.v_ > b.v_; }
  friend bool operator>=(const Rational& a, const Rational& b) { return a.v_ >= b.v_; }

  double toDouble() const { return v_.get_d(); }

  /// "p" or "p/q".
  std::string str() const;
  /// "p/q" with the denominator always present (report encoding).
  std::string strPQ() const;

private:
  explicit Rational(const mpq_class& q) : v_(q) {}
  mpq_class v_;  // mpq_class keeps itself canonical under arithmetic
};

/// Element of the field Q(i, sqrt2), stored as  a + b*i + c*sqrt2 + d*i*sqrt2
/// with rational components. The representation is unique, so component-wise
/// equality is semantic equality.
class Scalar {
public:
  Scalar() = default;
  Scalar(long n) : a_(n) {}
  Scalar(const Rational& a) : a_(a) {}
  Scalar(Rational a, Rational b, Rational c, Rational d)
      : a_(std::move(a)), b_(std::move(b)), c_(std::move(c)), d_(std::move(d)) {}

  static Scalar i() { return Scalar(Rational(0), Rational(1), Rational(0), Rational(0)); }
  static Scalar sqrt2() { return Scalar(Rational(0), Rational(0), Rational(1), Rational(0)); }
  static Scalar iSqrt2() { return Scalar(Rational(0), Rational(0), Rational(0), Rational(1)); }

  const Rational& one() const { return a_; }
  const Rational& iPart() const { return b_; }
  const Rational& sqrt2Part() const { return c_; }
  const Rational& iSqrt2Part() const { return d_; }

  bool isZero() const { return a_.isZero() && b_.isZero() && c_.isZero() && d_.isZero(); }
  bool isOne() const { return a_.isOne() && b_.isZero() && c_.isZero() && d_.isZero(); }
  /// Fixed under conjugation, i.e. lies in Q(sqrt2).
  bool isReal() const { return b_.isZero() && d_.isZero(); }
  bool isRational() const { return b_.isZero() && c_.isZero() && d_.isZero(); }

  /// i -> -i, sqrt2 fixed. Involutive field automorphism.
  Scalar conj() const { return Scalar(a_, -b_, c_, -d_); }

  /// Real part (a + c*sqrt2) and imaginary part (b + d*sqrt2), as elements
  /// of Q(sqrt2) embedded back into the tower.
  Scalar realPart() const { return Scalar(a_, Rational(0), c_, Rational(0)); }
  Scalar imagPart() const { return Scalar(b_, Rational(0), d_, Rational(0)); }

  Scalar operator-() const { return Scalar(-a_, -b_, -c_, -d_); }
  Scalar inv() const;  // throws std::domain_error("not invertible") on zero

  friend Scalar operator+(const Scalar& x, const Scalar& y) {
    return Scalar(x.a_ + y.a_, x.b_ + y.b_, x.c_ + y.c_, x.d_ + y.d_);
  }
  friend Scalar operator-(const Scalar& x, const Scalar& y) {
    return Scalar(x.a_ - y.a_, x.b_ - y.b_, x.c_ - y.c_, x.d_ - y.d_);
  }
  friend Scalar operator*(const Scalar& x, const Scalar& y);
  friend Scalar operator/(const Scalar& x, const Scalar& y) { return x * y.inv(); }

  Scalar& operator+=(const Scalar& y) { *this = *this + y; return *this; }
  Scalar& operator-=(const Scalar& y) { *this = *this - y; return *this; }
  Scalar& operator*=(const Scalar& y) { *this = *this * y; return *this; }

  friend bool operator==(const Scalar& x, const Scalar& y) {
    return x.a_ == y.a_ && x.b_ == y.b_ && x.c_ == y.c_ && x.d_ == y.d_;
  }
  friend bool operator!=(const Scalar& x, const Scalar& y) { return !(x == y); }

  /// Exact sign of a real element a + c*sqrt2. Throws std::domain_error if
  /// the element is not real.
  int signReal() const;

  double toDouble() const;

  std::string str() const;

private:
  Rational a_, b_, c_, d_;
};

}  // namespace crtube
