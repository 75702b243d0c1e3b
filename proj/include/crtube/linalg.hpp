#pragma once

#include <optional>
#include <vector>

#include "crtube/exact.hpp"
#include "crtube/parallel.hpp"

namespace crtube {

using QVec = std::vector<Rational>;
using QMat = std::vector<QVec>;
using SVec = std::vector<Scalar>;
using SMat = std::vector<SVec>;

/// Reduced row echelon form over Q. Canonical: RREF of a matrix is unique,
/// so the output does not depend on the elimination strategy.
struct Rref {
  int ncols = 0;
  QMat rows;                   // nonzero RREF rows, leading entry 1
  std::vector<int> pivotCols;  // ascending, one per row
  int rank() const { return static_cast<int>(rows.size()); }
};

/// Fraction-free elimination on gcd-stripped integer rows, followed by exact
/// back-substitution. Deterministic; the parallel mode batches the row
/// pre-reduction and yields the identical RREF.
Rref rrefQ(const QMat& rows, int ncols);

/// Canonical nullspace basis from an RREF: one vector per free column, unit
/// entry at the free column, ordered by free column index.
QMat nullspaceQ(const Rref& a);

/// Exact solve A x = b (free variables set to 0). std::nullopt if inconsistent.
std::optional<QVec> solveQ(const QMat& a, const QVec& b, int ncols);

/// Rank over Q.
int rankQ(const QMat& rows, int ncols);

/// Inertia of a symmetric rational matrix, by congruence diagonalization.
/// Zero diagonal pivots fall back to a symmetric pivot search; a fully
/// hyperbolic 2x2 block contributes (+1, -1).
struct Inertia {
  int pos = 0, neg = 0, nullity = 0;
  int rank() const { return pos + neg; }
};
Inertia signatureQ(const QMat& sym);

/// Gaussian elimination over the field Q(i, sqrt2).
struct SRref {
  int ncols = 0;
  SMat rows;
  std::vector<int> pivotCols;
  int rank() const { return static_cast<int>(rows.size()); }
};
SRref rrefS(const SMat& rows, int ncols);
SMat nullspaceS(const SRref& a);
std::optional<SVec> solveS(const SMat& a, const SVec& b, int ncols);

SMat matMulS(const SMat& a, const SMat& b);
SMat matPowS(SMat a, int e);

}  // namespace crtube
