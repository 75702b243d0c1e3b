#pragma once

#include <optional>
#include <string>
#include <vector>

#include "crtube/fields.hpp"
#include "crtube/linalg.hpp"
#include "crtube/series.hpp"

namespace crtube {

/// Real hypersurface germ at 0 in graph form  w + cw = rho(z, cz, v),
/// rho a real series without constant or linear terms, in the restricted
/// ring over n-1 holomorphic coordinates.
class HypersurfaceGerm {
public:
  /// Validates rho (realness, no constant/linear part). With
  /// `requireNormalForm`, additionally checks that the quadric part is
  /// 2 z1 cz1, the pure cubic part is z1^2 cz2 + cz1^2 z2, and every other
  /// term has degree >= 4 or degree 3 containing v.
  static HypersurfaceGerm make(const TruncatedSeries& rho, bool requireNormalForm);

  int ambientDim() const { return rho_.vars().nz + 1; }
  int cutoff() const { return rho_.cutoff(); }
  const TruncatedSeries& rho() const { return rho_; }
  bool inNormalForm() const { return normalForm_; }
  bool rhoDependsOnV() const;
  int vDegree() const;

  /// Ambient defining series  w + cw - rho  with v eliminated via
  /// v = -i/2 (w - cw), at the given ambient cutoff.
  TruncatedSeries definingSeries(int ambientCutoff) const;

private:
  explicit HypersurfaceGerm(TruncatedSeries rho, bool nf)
      : rho_(std::move(rho)), normalForm_(nf) {}
  TruncatedSeries rho_;
  bool normalForm_;
};

/// The built-in deformation family: w + cw = (2 z1 cz1 + z1^2 cz2 + cz1^2 z2)
/// * (1 - t z2 cz2)^{-1}, expanded to the cutoff.
HypersurfaceGerm familyGerm(const Rational& t, int cutoff);

/// Hyperquadric w + cw = 2 z1 cz1 in C^2 (used as an independent solver
/// anchor in the tests).
HypersurfaceGerm quadricGermC2(int cutoff);

/// Substitutes w -> rho/2 + i v, cw -> rho/2 - i v. The result is exact to
/// degree outCutoff provided f is; requires f.cutoff >= outCutoff + (max
/// combined w,cw-degree of f) and outCutoff <= germ cutoff.
/// Throws std::invalid_argument("insufficient ambient cutoff") otherwise.
TruncatedSeries restrictSeries(const TruncatedSeries& f, const HypersurfaceGerm& germ,
                               int outCutoff);

/// Tangency test to order D: applies the field to the defining series in the
/// ambient ring and restricts. Returns std::nullopt when the residual
/// vanishes to degree D, the residual otherwise. Requires germ cutoff
/// >= D + 1 so the degree-D coefficients of the residual are exact.
std::optional<TruncatedSeries> isTangent(const HoloVectorField& xi,
                                         const HypersurfaceGerm& germ, int D);

struct HolBasisReport {
  int d = 0;
  int D = 0;
  int dimension = 0;
  std::vector<HoloVectorField> basis;
  std::vector<std::pair<int, int>> stability;  // (D', dimension at D')
  bool stable = false;
};

/// Degree-bounded realization of hol(M, 0): the space of polynomial fields
/// of degree <= d whose application to the defining equation vanishes on M
/// to degree D. Sets up the exact real-linear system over the coefficient
/// unknowns and returns the canonical nullspace basis (graded-lex column
/// order, RREF tie-breaking). Also reruns at D-1, D-2 for the stability
/// table. Requires D >= 2d + 2 and germ cutoff >= D + d + 1.
HolBasisReport holSolve(const HypersurfaceGerm& germ, int d, int D);

struct LeviResult {
  SMat matrix;        // (n-1) x (n-1) hermitian
  SMat kernelBasis;   // exact kernel, canonical
  Scalar determinant; // for 1x1 and 2x2 blocks; det of the full matrix
};

/// Levi matrix  L_jk = d^2 rho / dz_j dcz_k  evaluated at z = point,
/// cz = conj(point), v = 0. Errors if v is nonzero while rho depends on v.
LeviResult leviMatrix(const HypersurfaceGerm& germ, const std::vector<Scalar>& zPoint,
                      const Scalar& v = Scalar(0));

/// True iff the residual series q of a normal-form germ matches
/// (2 z1 cz1 + z1^2 cz2 + cz1^2 z2) sum_{j>=1} (z2 cz2)^j to the cutoff,
/// i.e. the germ agrees with the t = 1 member of the family. By the
/// homogeneity criterion this is equivalent to local homogeneity for germs
/// with the standing dilation symmetries.
bool homogeneityNormalFormCheck(const HypersurfaceGerm& germ);

// Distinguished polynomial fields on (w, z1, z2).
HoloVectorField zeta1Field();   // 2w Dw + z1 Dz1
HoloVectorField zeta2Field();   // z1 Dz1 + 2z2 Dz2
HoloVectorField etaField();     // 2z1 Dw + (1 - z2) Dz1
HoloVectorField chiField();     // z1^2 Dw - z1 z2 Dz1 + (1 - z2^2) Dz2

/// Root field of weight lambda for the family member at parameter t.
/// Defined for lambda in {+-2, +-2i} for every t and for {+-1+-i} in the
/// t = 1 normalization.
HoloVectorField rootField(const LatticePoint& lambda, const Rational& t);

/// Real combination  xi^lambda + xi^conj(lambda)  (Im lambda >= 0) or
/// i xi^lambda - i xi^conj(lambda)  (Im lambda < 0).
HoloVectorField realPairField(const LatticePoint& lambda, const Rational& t);

}  // namespace crtube
