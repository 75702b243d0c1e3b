#pragma once

#include <map>
#include <optional>
#include <string>
#include <vector>

#include "crtube/fields.hpp"
#include "crtube/linalg.hpp"

namespace crtube {

/// Finite presentation of a real Lie algebra of vector fields: a basis (real
/// span understood) together with the exact structure constants
/// [b_i, b_j] = sum_k c_ij^k b_k. When some bracket leaves the span, `closed`
/// is false and `offending` records the first such pair.
struct LiePresentation {
  std::vector<HoloVectorField> basis;
  std::vector<std::vector<std::vector<Rational>>> c;  // c[i][j][k]
  bool closed = true;
  std::optional<std::pair<int, int>> offending;

  int dim() const { return static_cast<int>(basis.size()); }
  /// Coordinates of [x, y] given coordinates of x and y.
  QVec bracketCoords(const QVec& x, const QVec& y) const;
  /// ad(b_r) as a matrix (column j holds the coordinates of [b_r, b_j]).
  QMat adMatrix(int r) const;
};

/// Expands every bracket of the given fields in their real span.
/// Throws std::invalid_argument listing a dependency if the fields are not
/// linearly independent over Q.
LiePresentation structureConstants(const std::vector<HoloVectorField>& fields);

/// Exact membership of a field in the real span of the presentation basis.
std::optional<QVec> memberCoords(const LiePresentation& p, const HoloVectorField& x);

/// Coordinates of x in the real span of an arbitrary field list (which need
/// not be independent); std::nullopt when x is outside the span.
std::optional<QVec> spanCoords(const std::vector<HoloVectorField>& span,
                               const HoloVectorField& x);

struct KillingData {
  QMat matrix;
  int rank = 0;
  int positives = 0;
  int negatives = 0;
};

/// K(x, y) = trace(ad x . ad y) on the basis; signature by exact congruence
/// diagonalization. Throws std::domain_error on a non-closed presentation.
KillingData killingSignature(const LiePresentation& p);

struct SolvabilityResult {
  bool solvable = false;
  std::vector<int> derivedDims;  // dims of the derived series until stabilization
};

SolvabilityResult solvability(const LiePresentation& p);

struct AdGradingResult {
  std::map<LatticePoint, int> dims;  // complex dims of nonzero generalized eigenspaces
  bool sumsToDim = false;
  bool bracketGraded = true;  // [g^l, g^m] subset g^{l+m} for all computed pairs
};

/// Generalized eigenspace decomposition of the complexified span under
/// ad(x) with x = xRe + i xIm (coordinates in the presentation basis; xRe
/// and xIm must commute). Scans lambda in the lattice with |Re|, |Im| <=
/// bound. For the hypersurface algebras pass xRe = coords(zeta1) +
/// coords(i zeta2), xIm = 0; for the tube algebra xRe = coords(zeta1),
/// xIm = coords(zeta2). Both realize the grading by ad(zeta1 + i zeta2).
AdGradingResult adGrading(const LiePresentation& p, const QVec& xRe, const QVec& xIm,
                          int bound);

/// Decision table on (dim, Killing rank, signature, solvability). Covers the
/// real forms this engine produces plus the nearby ones; everything else is
/// reported as unrecognized(...).
std::string classifyAlgebra(const LiePresentation& p);

}  // namespace crtube
