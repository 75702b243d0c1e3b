#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "crtube/exact.hpp"
#include "crtube/parallel.hpp"

namespace crtube {

/// Generator layout of a truncated series ring. The ring always contains the
/// holomorphic generators z1..zn, their formal conjugates cz1..czn and the
/// real generator v; the ambient variant adds w and cw in front.
///
/// Index order: [w, cw,] z1..zn, cz1..czn, v.
struct VarSet {
  int nz = 0;
  bool hasW = false;

  int count() const { return (hasW ? 2 : 0) + 2 * nz + 1; }
  int wIdx() const { return hasW ? 0 : -1; }
  int cwIdx() const { return hasW ? 1 : -1; }
  int zIdx(int j) const { return (hasW ? 2 : 0) + j; }        // j in [0, nz)
  int czIdx(int j) const { return (hasW ? 2 : 0) + nz + j; }
  int vIdx() const { return count() - 1; }

  /// The conjugation involution on generator indices; v is self-paired.
  int conjOf(int g) const;
  bool isHolomorphic(int g) const;  // w or some zj
  std::string name(int g) const;

  friend bool operator==(const VarSet& a, const VarSet& b) {
    return a.nz == b.nz && a.hasW == b.hasW;
  }
  friend bool operator!=(const VarSet& a, const VarSet& b) { return !(a == b); }
};

using Expo = std::vector<uint16_t>;

int degreeOf(const Expo& e);

/// Sparse truncated power series over Scalar: a sorted map from exponent
/// vectors of total degree <= cutoff to nonzero coefficients. v counts as
/// degree 1. All arithmetic is exact modulo degree > cutoff.
class TruncatedSeries {
public:
  TruncatedSeries(VarSet vars, int cutoff) : vars_(vars), cutoff_(cutoff) {}

  static TruncatedSeries zero(VarSet vars, int cutoff) { return TruncatedSeries(vars, cutoff); }
  static TruncatedSeries constant(VarSet vars, int cutoff, const Scalar& c);
  static TruncatedSeries generator(VarSet vars, int cutoff, int g);
  static TruncatedSeries monomial(VarSet vars, int cutoff, const Expo& e, const Scalar& c);
  /// Normalizes: duplicate exponents are summed, zero coefficients dropped.
  /// Throws std::invalid_argument if an exponent exceeds the cutoff.
  static TruncatedSeries fromTerms(VarSet vars, int cutoff,
                                   const std::vector<std::pair<Expo, Scalar>>& terms);

  const VarSet& vars() const { return vars_; }
  int cutoff() const { return cutoff_; }
  const std::map<Expo, Scalar>& terms() const { return terms_; }
  size_t termCount() const { return terms_.size(); }

  bool isZero() const { return terms_.empty(); }
  bool isZeroToDegree(int d) const;
  Scalar coefficient(const Expo& e) const;
  Scalar constantTerm() const;
  /// Lowest term in the (degree-respecting map) order, if any.
  std::optional<std::pair<Expo, Scalar>> leadingTerm() const;
  int maxWDegree() const;  // max combined w+cw exponent over all terms
  int valuation() const;   // min total degree of a term; cutoff+1 if zero

  TruncatedSeries truncated(int newCutoff) const;

  friend TruncatedSeries operator+(const TruncatedSeries& a, const TruncatedSeries& b);
  friend TruncatedSeries operator-(const TruncatedSeries& a, const TruncatedSeries& b);
  friend TruncatedSeries operator*(const TruncatedSeries& a, const TruncatedSeries& b);
  TruncatedSeries operator-() const;
  TruncatedSeries scaled(const Scalar& c) const;

  /// Multiplicative inverse; requires a nonzero constant term.
  /// Throws std::domain_error("non-unit series") otherwise.
  TruncatedSeries inverse() const;

  /// Formal partial derivative in generator g (stored at the same cutoff;
  /// exact one degree below the input's guarantee).
  TruncatedSeries partial(int g) const;

  /// Swaps conjugate generator pairs, fixes v, conjugates coefficients.
  TruncatedSeries conjugate() const;

  /// General substitution: assigns a series (in `target`'s ring, all at
  /// cutoff `targetCutoff`) to every generator. Truncation is sound when a
  /// generator assigned a series with nonzero constant term is listed in
  /// `polynomialGens` (caller certifies the dependence on it is polynomially
  /// complete in this series). Throws std::domain_error otherwise.
  TruncatedSeries substituted(const std::vector<TruncatedSeries>& assignment,
                              const VarSet& target, int targetCutoff,
                              const std::set<int>& polynomialGens = {}) const;

  /// Substitution within the same ring: unassigned generators map to
  /// themselves.
  TruncatedSeries substitutedPartial(const std::map<int, TruncatedSeries>& assignment,
                                     const std::set<int>& polynomialGens = {}) const;

  bool isReal() const { return conjugate() == *this; }

  friend bool operator==(const TruncatedSeries& a, const TruncatedSeries& b) {
    return a.vars_ == b.vars_ && a.cutoff_ == b.cutoff_ && a.terms_ == b.terms_;
  }
  friend bool operator!=(const TruncatedSeries& a, const TruncatedSeries& b) { return !(a == b); }

  std::string str() const;

private:
  void addTerm(const Expo& e, const Scalar& c);
  void prune();
  static void checkCompatible(const TruncatedSeries& a, const TruncatedSeries& b);

  VarSet vars_;
  int cutoff_;
  std::map<Expo, Scalar> terms_;
};

std::string monomialStr(const VarSet& vars, const Expo& e);

}  // namespace crtube
