#pragma once

#include <array>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "crtube/exact.hpp"
#include "crtube/fields.hpp"
#include "crtube/germs.hpp"
#include "crtube/linalg.hpp"
#include "crtube/ratfunc.hpp"
#include "crtube/rng.hpp"

namespace crtube {

/// Symmetric n x n matrix over Scalar.
struct SymMatrixPoint {
  int n = 0;
  SMat entries;

  static SymMatrixPoint make(const SMat& e);
  SymMatrixPoint conj() const;
  friend SymMatrixPoint operator+(const SymMatrixPoint& a, const SymMatrixPoint& b);
};

Scalar symDet2(const SMat& m);
Scalar trace(const SMat& m);

enum class TubeVerdict { OnTube, InDomain, Neither };

struct TubeMembership {
  TubeVerdict verdict = TubeVerdict::Neither;
  Scalar det;     // det(z + conj z)
  Scalar reTrace; // Re tr(z), unnormalized trace
};

/// det(z + conj z) = 0 and Re tr(z) > 0 puts z on the tube; z + conj z
/// positive definite puts it in the domain. Size 2.
TubeMembership tubeMembership(const SymMatrixPoint& z);

/// Inertia (p, q) of a real symmetric rational matrix.
Inertia coneType(const QMat& x);

struct AffineCheck {
  bool detIdentity = false;      // det(g M g^T) = (det g)^2 det M symbolically
  bool translationFixed = false; // z + i v leaves z + conj z unchanged
  bool samplesOnTube = false;    // sampled tube points stay on the tube
  Rational detFactor;            // (det g)^2
};

/// Verifies the affine invariance of the tube equation for a rational g with
/// det g != 0, symbolically in the entries of the real part, plus sampled
/// membership transport. Throws std::domain_error on singular g.
AffineCheck affineInvarianceCheck(const QMat& g, int samples, DetRng& rng);

/// The ten-field basis (b + cz + zc' + zdz) d/dz, b, d in iV, c real 2x2,
/// in the coordinates (z1, z2, z3) <-> ((z1, z2), (z2, z3)).
std::vector<HoloVectorField> sp2Basis();

/// The two diagonal dilation fields within that coordinate system.
HoloVectorField tubeZeta1();
HoloVectorField tubeZeta2();
/// Root vectors of the eight roots (indexed by their lattice weight).
HoloVectorField tubeRootField(const LatticePoint& nu);

/// Tangency of a field to the cone tube: pulls xi(det(z + conj z)) back
/// through the parametrization z = y y^T + i v and tests polynomial
/// vanishing. Returns the pullback polynomial when nonzero.
std::optional<TruncatedSeries> coneTangency(const HoloVectorField& xi);

/// Membership of (b + cz + zc' - z conj(a) z) style fields in the bounded
/// realization's automorphism algebra: a in E, c skew-hermitian.
bool ballFieldMembership(const HoloVectorField& xi);

struct MapVerifyReport {
  std::string mapId;
  bool inverseIdentity = false;   // inverse o map = id (cleared denominators)
  bool forwardIdentity = false;   // map o inverse = id
  bool targetIdentity = false;    // target defining identity on the source germ
  bool basePointOnTarget = false; // image of 0 lies on the target cone
  std::string residual;           // first nonzero residual term, if any
  std::map<std::string, std::string> pushforwardFactors;  // computed multiples
};

/// The Cayley-type maps. mapId one of {"cayley", "phi_oc", "phi_ob"};
/// phi_ob takes block sizes (p, k) with p + k <= 3.
MapVerifyReport mapVerify(const std::string& mapId, int D, int p = 1, int k = 1);

/// Rational map of the graph realization onto the tube (the n = 2 case),
/// with its inverse.
RationalMap phiOcMap();
RationalMap cayleyMap();
/// Block (partial Cayley) realization map for block sizes (p, k), k = 1,
/// p + k <= 3, with its derived inverse.
RationalMap phiObMap(int p, int k);

struct DeltaReport {
  bool flipIdentity = false;       // delta(j z) = -delta(z) on det z = 1
  bool leftRightInvariance = false;  // delta(g z h^{-1}) = delta(z), sampled g, h
  bool hermitianInvariance = false;  // det(z + z*) - 2 invariant under z -> g z g*
  bool criticalValueExample = false; // delta = -2 at the recorded critical point
};

DeltaReport deltaChecks(int samples, DetRng& rng);

struct QtMembership {
  bool inN = false;  // v = r (y y^T) + s e solvable
  Rational r, s;     // the witness when inN
  Scalar phi1, phi2; // image under (tr z, tr z^2 - (tr z)^2), normalized trace
  bool certificate = false;  // equality on N / strict inequality on W
};

/// Decides N vs W membership for z = y y^T + i v and certifies the image
/// equation x2 = x1^2 - y2^2 / (4 x1^2) (equality on N, strict < on W).
/// Throws std::domain_error when y = 0.
QtMembership lemmaQtMembership(const std::vector<Rational>& y, const QMat& v);

struct SigmaResult {
  bool unbounded = false;
  BigInt count;  // p for t = p/q in lowest terms
};

/// Number of points indistinguishable by global CR-functions on the deformed
/// tube: p for rational t = p/q > 0 in lowest terms, unbounded for
/// irrational t. Throws std::domain_error for t <= 0.
SigmaResult sigmaT(const std::optional<Rational>& t);

/// Fundamental group of the higher tube over the (p, q) cone, n >= 3,
/// p, q >= 0, 0 < p + q < n.
std::string pi1Tube(int n, int p, int q);

struct QrSeriesReport {
  std::vector<Rational> cOverPi;  // c_k = cOverPi[k] * pi
  std::vector<Rational> aOverPi;  // a_k = binom(1/2, k) c_k
  bool recursionVerified = false;
  double radiusEstimate = 0.0;    // |a_k|^{-1/k} at k = kMax (report only)
};

QrSeriesReport qrSeries(int kMax);

/// Element of the affine group acting on the covering coordinates
/// (r, phi, v): (r, phi, v) -> (r + s, phi + psi, e^s lambda_psi v + w).
/// Exact mode: psi a quarter turn; translation parts are kept as formal sums
/// sum_q e^q * (symmetric matrix) so that composition stays exact for any
/// rational s.
struct ThetaElement {
  Rational s;
  int quarterTurns = 0;  // psi = quarterTurns * pi/2, mod 4
  // exponent -> symmetric 2x2 (entries v11, v12, v22)
  std::map<Rational, std::array<Rational, 3>> translation;

  static ThetaElement identity() { return ThetaElement{}; }
  static ThetaElement make(const Rational& s, int quarterTurns,
                           const std::array<Rational, 3>& w);
  friend bool operator==(const ThetaElement& a, const ThetaElement& b);
};

/// Group law: compose(a, b) acts as first b, then a.
ThetaElement thetaCompose(const ThetaElement& a, const ThetaElement& b);

/// Exact rotation action lambda_psi v = mu_{psi/2} v mu_{psi/2}' for quarter
/// turns (entries in Q via the sqrt2 tower).
std::array<Rational, 3> lambdaQuarter(int quarterTurns, const std::array<Rational, 3>& v);

/// Point of the covering in exact mode.
struct CoverPoint {
  Rational r;
  int quarterTurns = 0;
  std::map<Rational, std::array<Rational, 3>> v;  // formal sum, as above
};

CoverPoint thetaApply(const ThetaElement& g, const CoverPoint& x);
bool operator==(const CoverPoint& a, const CoverPoint& b);

}  // namespace crtube
