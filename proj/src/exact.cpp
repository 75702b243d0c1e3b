#include "crtube/exact.hpp"

#include <cmath>
#include <sstream>

namespace crtube {

Rational::Rational(long num, long den) : Rational(BigInt(num), BigInt(den)) {}

Rational::Rational(const BigInt& num, const BigInt& den) {
  if (sgn(den) == 0) throw std::domain_error("division by zero");
  v_ = mpq_class(num, den);
  v_.canonicalize();
}

Rational Rational::fromString(const std::string& s) {
  auto slash = s.find('/');
  try {
    if (slash == std::string::npos) {
      return Rational(BigInt(s));
    }
    BigInt num(s.substr(0, slash));
    BigInt den(s.substr(slash + 1));
    return Rational(num, den);
  } catch (const std::invalid_argument&) {
    throw std::invalid_argument("malformed rational literal: " + s);
  }
}

Rational Rational::inv() const {
  if (isZero()) throw std::domain_error("division by zero");
  mpq_class r(v_.get_den(), v_.get_num());
  r.canonicalize();
  return Rational(r);
}

Rational operator/(const Rational& a, const Rational& b) {
  if (b.isZero()) throw std::domain_error("division by zero");
  mpq_class r(a.v_ / b.v_);
  return Rational(r);
}

std::string Rational::str() const {
  if (v_.get_den() == 1) return v_.get_num().get_str();
  return v_.get_num().get_str() + "/" + v_.get_den().get_str();
}

std::string Rational::strPQ() const {
  return v_.get_num().get_str() + "/" + v_.get_den().get_str();
}

// Multiplication table of {1, i, sqrt2, i*sqrt2} with i^2 = -1, (sqrt2)^2 = 2.
Scalar operator*(const Scalar& x, const Scalar& y) {
  const Rational &a = x.a_, &b = x.b_, &c = x.c_, &d = x.d_;
  const Rational &e = y.a_, &f = y.b_, &g = y.c_, &h = y.d_;
  Rational two(2);
  return Scalar(a * e - b * f + two * (c * g - d * h),
                a * f + b * e + two * (c * h + d * g),
                a * g + c * e - b * h - d * f,
                a * h + d * e + b * g + c * f);
}

Scalar Scalar::inv() const {
  if (isZero()) throw std::domain_error("not invertible");
  // First kill the i-components: u = z * conj(z) lies in Q(sqrt2),
  // then the sqrt2-component: N = u * (u with sqrt2 -> -sqrt2) lies in Q.
  Scalar u = (*this) * conj();
  Scalar ur(u.a_, Rational(0), -u.c_, Rational(0));
  Rational n = u.a_ * u.a_ - Rational(2) * u.c_ * u.c_;
  Scalar num = conj() * ur;
  Rational ni = n.inv();
  return Scalar(num.a_ * ni, num.b_ * ni, num.c_ * ni, num.d_ * ni);
}

int Scalar::signReal() const {
  if (!isReal()) throw std::domain_error("sign of a non-real scalar");
  int sa = a_.sign(), sc = c_.sign();
  if (sa == 0 && sc == 0) return 0;
  if (sa >= 0 && sc >= 0) return 1;
  if (sa <= 0 && sc <= 0) return -1;
  // Mixed signs: compare a^2 with 2 c^2; sqrt2 irrational so no tie.
  Rational lhs = a_ * a_, rhs = Rational(2) * c_ * c_;
  if (sa > 0) return lhs > rhs ? 1 : -1;
  return lhs > rhs ? -1 : 1;
}

double Scalar::toDouble() const {
  static const double r2 = std::sqrt(2.0);
  return a_.toDouble() + c_.toDouble() * r2;
}

std::string Scalar::str() const {
  if (isZero()) return "0";
  std::ostringstream os;
  bool first = true;
  auto emit = [&](const Rational& r, const char* unit) {
    if (r.isZero()) return;
    if (!first) os << (r.sign() > 0 ? " + " : " - ");
    else if (r.sign() < 0) os << "-";
    first = false;
    Rational ar = r.abs();
    if (unit[0] == '\0') {
      os << ar.str();
    } else {
      if (!ar.isOne()) os << ar.str() << "*";
      os << unit;
    }
  };
  emit(a_, "");
  emit(b_, "I");
  emit(c_, "SQRT2");
  emit(d_, "I*SQRT2");
  return os.str();
}

}  // namespace crtube
