#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "crtube/germs.hpp"
#include "crtube/liealg.hpp"
#include "crtube/matrixgeo.hpp"
#include "crtube/rng.hpp"

using namespace crtube;

namespace {

LiePresentation holPresentation(const Rational& t) {
  HypersurfaceGerm g = familyGerm(t, 11);
  HolBasisReport rep = holSolve(g, 2, 8);
  return structureConstants(rep.basis);
}

// Independent oracle: Killing form of so(2,3) from an explicit matrix basis,
// X^T J + J X = 0 with J = diag(1,1,-1,-1,-1); kappa(X, Y) = 3 tr(X Y).
Inertia so23KillingOracle() {
  const int n = 5;
  std::vector<int> eps = {1, 1, -1, -1, -1};
  std::vector<QMat> basis;
  for (int i = 0; i < n; ++i)
    for (int j = i + 1; j < n; ++j) {
      QMat x(n, QVec(n));
      x[i][j] = Rational(1);
      x[j][i] = Rational(-eps[i] * eps[j]);
      basis.push_back(x);
    }
  const int dim = static_cast<int>(basis.size());
  QMat killing(dim, QVec(dim));
  for (int a = 0; a < dim; ++a)
    for (int b = 0; b < dim; ++b) {
      Rational tr;
      for (int i = 0; i < n; ++i)
        for (int k = 0; k < n; ++k) tr += basis[a][i][k] * basis[b][k][i];
      killing[a][b] = Rational(3) * tr;
    }
  return signatureQ(killing);
}

QVec coordsOrFail(const LiePresentation& p, const HoloVectorField& f) {
  auto c = memberCoords(p, f);
  REQUIRE(c.has_value());
  return *c;
}

QVec addQ(const QVec& a, const QVec& b) {
  QVec out = a;
  for (size_t i = 0; i < out.size(); ++i) out[i] += b[i];
  return out;
}

}  // namespace

TEST_CASE("structure constants of small algebras") {
  // Affine line: [d/dz1, z1 d/dz1] = d/dz1.
  HoloVectorField e(3, true), h(3, true);
  e.comps[1] = HoloPoly::constant(3, Scalar(1));
  h.comps[1] = HoloPoly::coordinate(3, 1);
  LiePresentation p = structureConstants({e, h});
  CHECK(p.closed);
  CHECK(p.c[0][1][0] == Rational(1));
  CHECK(p.c[0][1][1] == Rational(0));
  CHECK(p.c[1][0][0] == Rational(-1));

  // Commuting pair.
  LiePresentation ab = structureConstants({zeta1Field(), zeta2Field()});
  CHECK(ab.closed);
  for (int k = 0; k < 2; ++k) CHECK(ab.c[0][1][k].isZero());

  // A dependent list is rejected with a dependency.
  CHECK_THROWS_AS(structureConstants({e, e}), std::invalid_argument);
}

TEST_CASE("sl(2) triple from the family fields") {
  // {i Dw, zeta1, xi^2(t=1)} closes: [ root(-2), root(2) ] = -zeta1.
  std::vector<HoloVectorField> triple{rootField(LatticePoint{-2, 0}, Rational(1)),
                                      zeta1Field(),
                                      rootField(LatticePoint{2, 0}, Rational(1))};
  LiePresentation p = structureConstants(triple);
  CHECK(p.closed);
  // [b0, b2] = -b1
  CHECK(p.c[0][2][1] == Rational(-1));
  // [b1, b0] = -2 b0 and [b1, b2] = 2 b2 (weights under zeta1).
  CHECK(p.c[1][0][0] == Rational(-2));
  CHECK(p.c[1][2][2] == Rational(2));
}

TEST_CASE("non-closed presentations are flagged") {
  // d/dz2 and chi do not close at degree 2 within their own span.
  HoloVectorField dz2(3, true);
  dz2.comps[2] = HoloPoly::constant(3, Scalar(1));
  LiePresentation p = structureConstants({dz2, chiField()});
  CHECK(!p.closed);
  REQUIRE(p.offending.has_value());
}

TEST_CASE("Jacobi identity on the structure table") {
  LiePresentation p = holPresentation(Rational(1));
  const int n = p.dim();
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j)
      for (int k = 0; k < n; ++k) {
        QVec ei(n), ej(n), ek(n);
        ei[i] = Rational(1);
        ej[j] = Rational(1);
        ek[k] = Rational(1);
        QVec s1 = p.bracketCoords(ei, p.bracketCoords(ej, ek));
        QVec s2 = p.bracketCoords(ej, p.bracketCoords(ek, ei));
        QVec s3 = p.bracketCoords(ek, p.bracketCoords(ei, ej));
        for (int l = 0; l < n; ++l) CHECK((s1[l] + s2[l] + s3[l]).isZero());
      }
}

TEST_CASE("Killing signatures across the family") {
  Inertia oracle = so23KillingOracle();
  CHECK(oracle.pos == 6);
  CHECK(oracle.neg == 4);

  KillingData k1 = killingSignature(holPresentation(Rational(1)));
  CHECK(k1.rank == 10);
  CHECK(k1.positives == oracle.pos);
  CHECK(k1.negatives == oracle.neg);

  KillingData k2 = killingSignature(holPresentation(Rational(2)));
  CHECK(k2.rank == 6);
  CHECK(k2.positives == 4);
  CHECK(k2.negatives == 2);

  KillingData km = killingSignature(holPresentation(Rational(-1)));
  CHECK(km.rank == 6);
  CHECK(km.positives == 2);
  CHECK(km.negatives == 4);
}

TEST_CASE("Killing form ad-invariance") {
  LiePresentation p = holPresentation(Rational(2));
  KillingData k = killingSignature(p);
  DetRng rng(606);
  const int n = p.dim();
  auto kForm = [&](const QVec& x, const QVec& y) {
    Rational acc;
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j) acc += x[i] * k.matrix[i][j] * y[j];
    return acc;
  };
  for (int t = 0; t < 30; ++t) {
    QVec x(n), y(n), z(n);
    for (int i = 0; i < n; ++i) {
      x[i] = rng.rational(3, 2);
      y[i] = rng.rational(3, 2);
      z[i] = rng.rational(3, 2);
    }
    Rational lhs = kForm(p.bracketCoords(x, y), z);
    Rational rhs = -kForm(y, p.bracketCoords(x, z));
    CHECK(lhs == rhs);
  }
}

TEST_CASE("solvability") {
  LiePresentation p0 = holPresentation(Rational(0));
  SolvabilityResult s0 = solvability(p0);
  CHECK(s0.solvable);
  REQUIRE(s0.derivedDims.size() == 3);
  CHECK(s0.derivedDims[0] == 6);
  CHECK(s0.derivedDims[1] == 4);
  CHECK(s0.derivedDims[2] == 0);

  LiePresentation ab = structureConstants({zeta1Field(), zeta2Field()});
  SolvabilityResult sab = solvability(ab);
  CHECK(sab.solvable);
  CHECK(sab.derivedDims == std::vector<int>{2, 0});

  CHECK(!solvability(holPresentation(Rational(1))).solvable);
}

TEST_CASE("ad grading of the t = 1 algebra") {
  LiePresentation p = holPresentation(Rational(1));
  QVec z1 = coordsOrFail(p, zeta1Field());
  QVec iz2 = coordsOrFail(p, zeta2Field().scaled(Scalar::i()));
  QVec xRe = addQ(z1, iz2);
  QVec zero(p.dim());
  AdGradingResult g = adGrading(p, xRe, zero, 4);
  CHECK(g.sumsToDim);
  CHECK(g.bracketGraded);
  std::map<LatticePoint, int> expect{
      {{0, 0}, 2},  {{2, 0}, 1},  {{-2, 0}, 1}, {{0, 2}, 1},  {{0, -2}, 1},
      {{1, 1}, 1},  {{1, -1}, 1}, {{-1, 1}, 1}, {{-1, -1}, 1}};
  CHECK(g.dims == expect);
}

TEST_CASE("ad grading of a deformed algebra") {
  LiePresentation p = holPresentation(Rational(2));
  QVec z1 = coordsOrFail(p, zeta1Field());
  QVec iz2 = coordsOrFail(p, zeta2Field().scaled(Scalar::i()));
  QVec xRe = addQ(z1, iz2);
  QVec zero(p.dim());
  AdGradingResult g = adGrading(p, xRe, zero, 4);
  CHECK(g.sumsToDim);
  CHECK(g.bracketGraded);
  std::map<LatticePoint, int> expect{
      {{0, 0}, 2}, {{2, 0}, 1}, {{-2, 0}, 1}, {{0, 2}, 1}, {{0, -2}, 1}};
  CHECK(g.dims == expect);
}

TEST_CASE("ad grading rejects non-commuting elements") {
  LiePresentation p = holPresentation(Rational(1));
  QVec z1 = coordsOrFail(p, zeta1Field());
  QVec eta = coordsOrFail(p, etaField());
  CHECK_THROWS_AS(adGrading(p, z1, eta, 4), std::domain_error);
}

TEST_CASE("classification table") {
  CHECK(classifyAlgebra(holPresentation(Rational(1))) == "so(2,3)");
  CHECK(classifyAlgebra(holPresentation(Rational(2))) == "sl(2,R)+sl(2,R)");
  CHECK(classifyAlgebra(holPresentation(Rational(1, 2))) == "sl(2,R)+sl(2,R)");
  CHECK(classifyAlgebra(holPresentation(Rational(-1))) == "sl(2,R)+su(2)");
  CHECK(classifyAlgebra(holPresentation(Rational(0))) == "solvable");
}

TEST_CASE("classification is basis-invariant") {
  DetRng rng(17);
  LiePresentation p = holPresentation(Rational(-1));
  std::string label = classifyAlgebra(p);
  const int n = p.dim();
  for (int trial = 0; trial < 3; ++trial) {
    // Random unitriangular change of basis (exact, invertible).
    std::vector<HoloVectorField> newBasis = p.basis;
    for (int i = 0; i < n; ++i)
      for (int j = i + 1; j < n; ++j) {
        Rational f = rng.rational(2, 2);
        if (f.isZero()) continue;
        newBasis[i] = newBasis[i] + p.basis[j].scaled(Scalar(f));
      }
    LiePresentation q = structureConstants(newBasis);
    CHECK(q.closed);
    CHECK(classifyAlgebra(q) == label);
  }
}
