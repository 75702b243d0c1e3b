#pragma once

#include <map>
#include <set>
#include <string>
#include <vector>

#include "crtube/exact.hpp"
#include "crtube/series.hpp"

namespace crtube {

using PExpo = std::vector<uint16_t>;  // exponents over the holomorphic coordinates only

/// Exact polynomial in the holomorphic coordinates (no conjugates, no v,
/// no truncation semantics).
class HoloPoly {
public:
  explicit HoloPoly(int ncoords) : ncoords_(ncoords) {}
  static HoloPoly zero(int ncoords) { return HoloPoly(ncoords); }
  static HoloPoly constant(int ncoords, const Scalar& c);
  static HoloPoly coordinate(int ncoords, int k);
  static HoloPoly monomial(int ncoords, const PExpo& e, const Scalar& c);

  int ncoords() const { return ncoords_; }
  const std::map<PExpo, Scalar>& terms() const { return terms_; }
  bool isZero() const { return terms_.empty(); }
  int degree() const;  // -1 for the zero polynomial
  Scalar coefficient(const PExpo& e) const;

  HoloPoly operator-() const;
  friend HoloPoly operator+(const HoloPoly& a, const HoloPoly& b);
  friend HoloPoly operator-(const HoloPoly& a, const HoloPoly& b);
  friend HoloPoly operator*(const HoloPoly& a, const HoloPoly& b);
  HoloPoly scaled(const Scalar& c) const;
  HoloPoly partial(int k) const;

  Scalar eval(const std::vector<Scalar>& point) const;

  friend bool operator==(const HoloPoly& a, const HoloPoly& b) {
    return a.ncoords_ == b.ncoords_ && a.terms_ == b.terms_;
  }
  friend bool operator!=(const HoloPoly& a, const HoloPoly& b) { return !(a == b); }

  /// Injects the polynomial into a series ring whose holomorphic generators
  /// correspond to the coordinates (coordinate k -> generator genOf[k]).
  TruncatedSeries toSeries(const VarSet& vars, int cutoff,
                           const std::vector<int>& genOf) const;
  /// Same, but as the formal conjugate: conjugated coefficients on the
  /// paired generators.
  TruncatedSeries toSeriesConj(const VarSet& vars, int cutoff,
                               const std::vector<int>& genOf) const;

  std::string str(const std::vector<std::string>& names) const;

private:
  void addTerm(const PExpo& e, const Scalar& c);
  void prune();
  int ncoords_;
  std::map<PExpo, Scalar> terms_;
};

/// Holomorphic polynomial vector field, one component per coordinate, under
/// the real-field convention: applied to a function it acts as
///   xi F = sum_k f_k dF/dx_k + conj(f_k) dF/dconj(x_k).
struct HoloVectorField {
  int ncoords = 0;
  bool hasW = false;  // coordinate 0 is w when set
  std::vector<HoloPoly> comps;

  HoloVectorField() = default;
  HoloVectorField(int n, bool w);

  bool isZero() const;
  int degree() const;  // max component degree, -1 if zero
  VarSet ringVars() const { return VarSet{ncoords - (hasW ? 1 : 0), hasW}; }
  std::vector<int> coordGens() const;  // generator index per coordinate
  std::vector<std::string> coordNames() const;

  HoloVectorField operator-() const;
  friend HoloVectorField operator+(const HoloVectorField& a, const HoloVectorField& b);
  friend HoloVectorField operator-(const HoloVectorField& a, const HoloVectorField& b);
  HoloVectorField scaled(const Scalar& c) const;

  friend bool operator==(const HoloVectorField& a, const HoloVectorField& b) {
    return a.ncoords == b.ncoords && a.hasW == b.hasW && a.comps == b.comps;
  }

  std::string str() const;
};

/// Lie bracket [xi, eta]_k = xi(eta_k) - eta(xi_k), fields acting as
/// holomorphic derivations. Throws on mismatched coordinate counts.
HoloVectorField bracket(const HoloVectorField& xi, const HoloVectorField& eta);

/// xi F for a series F in the matching ambient ring.
TruncatedSeries applyField(const HoloVectorField& xi, const TruncatedSeries& f);

/// Point of the eigenvalue lattice  {a + b i : a + b even}.
struct LatticePoint {
  long re = 0, im = 0;
  friend bool operator==(const LatticePoint& a, const LatticePoint& b) {
    return a.re == b.re && a.im == b.im;
  }
  friend bool operator<(const LatticePoint& a, const LatticePoint& b) {
    return a.re != b.re ? a.re < b.re : a.im < b.im;
  }
  LatticePoint operator+(const LatticePoint& o) const { return {re + o.re, im + o.im}; }
  bool inLattice() const { return (re + im) % 2 == 0; }
  std::string str() const;
};

/// Weight of the monomial field w^m z1^n z2^l d/dx_k (k = 0 for w) under the
/// adjoint action of the two dilation fields: (2m+n+k-2) + i(n+2l-k).
LatticePoint monomialWeight(int m, int n, int l, int k);

/// Number of monomial fields on (w, z1, z2) of degree <= bound with weight
/// lambda, by enumeration.
int dimPLambda(const LatticePoint& lambda, int bound);

/// Projection onto the weight-lambda component (fields on (w, z1, z2)).
HoloVectorField gradeComponent(const HoloVectorField& xi, const LatticePoint& lambda);

/// All weights appearing in xi.
std::set<LatticePoint> weightSupport(const HoloVectorField& xi);

}  // namespace crtube
