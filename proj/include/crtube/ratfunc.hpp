#pragma once

#include <optional>
#include <string>
#include <vector>

#include "crtube/fields.hpp"

namespace crtube {

/// Quotient of holomorphic polynomials. No gcd simplification is performed;
/// equality and zero tests go through cross-multiplication, which keeps
/// everything exact.
struct RationalFunction {
  HoloPoly num;
  HoloPoly den;

  explicit RationalFunction(int ncoords)
      : num(HoloPoly::zero(ncoords)), den(HoloPoly::constant(ncoords, Scalar(1))) {}
  RationalFunction(HoloPoly n, HoloPoly d);

  static RationalFunction ofPoly(const HoloPoly& p) { return RationalFunction(p, HoloPoly::constant(p.ncoords(), Scalar(1))); }
  static RationalFunction coordinate(int ncoords, int k) { return ofPoly(HoloPoly::coordinate(ncoords, k)); }
  static RationalFunction constant(int ncoords, const Scalar& c) { return ofPoly(HoloPoly::constant(ncoords, c)); }

  bool isZero() const { return num.isZero(); }

  friend RationalFunction operator+(const RationalFunction& a, const RationalFunction& b);
  friend RationalFunction operator-(const RationalFunction& a, const RationalFunction& b);
  friend RationalFunction operator*(const RationalFunction& a, const RationalFunction& b);
  RationalFunction operator-() const { return RationalFunction(-num, den); }
  RationalFunction inv() const;  // throws std::domain_error on zero
  RationalFunction scaled(const Scalar& c) const { return RationalFunction(num.scaled(c), den); }

  /// a == b as rational functions: a.num * b.den == b.num * a.den.
  friend bool eq(const RationalFunction& a, const RationalFunction& b) {
    return a.num * b.den == b.num * a.den;
  }
};

/// Substitutes rational functions for the coordinates of a polynomial.
RationalFunction composePoly(const HoloPoly& p, const std::vector<RationalFunction>& args);

/// Rational map between coordinate spaces, with an optional explicit inverse.
struct RationalMap {
  int srcCoords = 0;
  int dstCoords = 0;
  std::vector<RationalFunction> comps;             // dstCoords entries in src coordinates
  std::vector<RationalFunction> inverseComps;      // srcCoords entries in dst coordinates; may be empty

  bool hasInverse() const { return !inverseComps.empty(); }
};

/// Checks inverse(map(x)) = x as a cleared-denominator polynomial identity.
/// Returns the index of the first failing component, or -1 on success.
int composeIdentityCheck(const RationalMap& map);
/// Checks map(inverse(y)) = y likewise.
int composeIdentityCheckReverse(const RationalMap& map);

struct PushforwardResult {
  bool proportional = false;
  Scalar factor;           // c with Dphi . xi = c . (target o phi)
  std::string residual;    // description of the first mismatch, if any
};

/// Verifies Dphi(p) xi(p) = c target(phi(p)) as a rational-function identity
/// after clearing denominators, solving for the constant c.
/// Requires map.hasInverse() (the map must be birational on its domain);
/// throws std::invalid_argument otherwise.
PushforwardResult pushforward(const HoloVectorField& xi, const RationalMap& map,
                              const HoloVectorField& target);

/// Small matrices over rational functions (used for matrix-valued maps).
using RFMat = std::vector<std::vector<RationalFunction>>;
RFMat rfMatMul(const RFMat& a, const RFMat& b);
RationalFunction rfDet(const RFMat& a);      // sizes 1..3
RFMat rfMatInverse(const RFMat& a);          // adjugate / det, sizes 1..3

}  // namespace crtube
