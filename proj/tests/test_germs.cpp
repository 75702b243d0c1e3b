#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "crtube/germs.hpp"
#include "crtube/liealg.hpp"
#include "crtube/rng.hpp"

using namespace crtube;

namespace {

const VarSet kR{2, false};

Expo expo(const VarSet& vars, std::initializer_list<std::pair<int, int>> assign) {
  Expo e(vars.count(), 0);
  for (auto [g, k] : assign) e[g] = static_cast<uint16_t>(k);
  return e;
}

}  // namespace

TEST_CASE("family germ: t = 1 expansion") {
  HypersurfaceGerm g = familyGerm(Rational(1), 8);
  // rho = (2 z1 cz1 + z1^2 cz2 + cz1^2 z2)(1 + x + x^2 + x^3), x = z2 cz2.
  TruncatedSeries num =
      TruncatedSeries::monomial(kR, 8, expo(kR, {{kR.zIdx(0), 1}, {kR.czIdx(0), 1}}), Scalar(2)) +
      TruncatedSeries::monomial(kR, 8, expo(kR, {{kR.zIdx(0), 2}, {kR.czIdx(1), 1}}), Scalar(1)) +
      TruncatedSeries::monomial(kR, 8, expo(kR, {{kR.czIdx(0), 2}, {kR.zIdx(1), 1}}), Scalar(1));
  TruncatedSeries x = TruncatedSeries::monomial(
      kR, 8, expo(kR, {{kR.zIdx(1), 1}, {kR.czIdx(1), 1}}), Scalar(1));
  TruncatedSeries one = TruncatedSeries::constant(kR, 8, Scalar(1));
  CHECK(g.rho() == num * (one + x + x * x + x * x * x));
  CHECK(g.rho().isReal());
  CHECK(g.inNormalForm());
}

TEST_CASE("family germ: t = 0 is exactly cubic") {
  HypersurfaceGerm g = familyGerm(Rational(0), 8);
  CHECK(g.rho().termCount() == 3);
  for (const auto& [e, c] : g.rho().terms()) CHECK(degreeOf(e) <= 3);
}

TEST_CASE("germ validation rejects bad input") {
  // z1 cz1 + i v z1 is not real.
  TruncatedSeries bad =
      TruncatedSeries::monomial(kR, 6, expo(kR, {{kR.zIdx(0), 1}, {kR.czIdx(0), 1}}), Scalar(1)) +
      TruncatedSeries::monomial(kR, 6, expo(kR, {{kR.vIdx(), 1}, {kR.zIdx(0), 1}}), Scalar::i());
  CHECK_THROWS_WITH_AS(HypersurfaceGerm::make(bad, false), "defining function not real",
                       std::domain_error);

  // linear terms rejected
  TruncatedSeries lin = TruncatedSeries::generator(kR, 6, kR.vIdx());
  CHECK_THROWS_AS(HypersurfaceGerm::make(lin, false), std::domain_error);

  // wrong quadric coefficient fails normal-form validation
  TruncatedSeries q = TruncatedSeries::monomial(
      kR, 6, expo(kR, {{kR.zIdx(0), 1}, {kR.czIdx(0), 1}}), Scalar(3));
  CHECK_THROWS_AS(HypersurfaceGerm::make(q, true), std::domain_error);
}

TEST_CASE("restriction") {
  HypersurfaceGerm g0 = familyGerm(Rational(0), 9);
  const VarSet amb{2, true};
  const int A = 9;
  auto gen = [&](int gi) { return TruncatedSeries::generator(amb, A, gi); };

  // Defining series restricts to zero.
  TruncatedSeries f = g0.definingSeries(A);
  CHECK(restrictSeries(f, g0, 8).isZero());

  // w - cw -> 2 i v
  TruncatedSeries diff = gen(amb.wIdx()) - gen(amb.cwIdx());
  TruncatedSeries r = restrictSeries(diff, g0, 8);
  TruncatedSeries expect =
      TruncatedSeries::generator(kR, 8, kR.vIdx()).scaled(Scalar(2) * Scalar::i());
  CHECK(r == expect);

  // w cw -> (rho/2)^2 + v^2 for the cubic germ
  TruncatedSeries prod = gen(amb.wIdx()) * gen(amb.cwIdx());
  TruncatedSeries rr = restrictSeries(prod, g0, 7);
  TruncatedSeries rho7 = g0.rho().truncated(7);
  TruncatedSeries half = rho7.scaled(Scalar(Rational(1, 2)));
  TruncatedSeries v = TruncatedSeries::generator(kR, 7, kR.vIdx());
  CHECK(rr == half * half + v * v);

  // Insufficient ambient cutoff is rejected.
  CHECK_THROWS_AS(restrictSeries(prod, g0, 9), std::invalid_argument);
}

TEST_CASE("tangency of the dilation fields") {
  for (long tv : {1L, 2L, -1L, 0L}) {
    HypersurfaceGerm g = familyGerm(Rational(tv), 11);
    CHECK(!isTangent(zeta1Field(), g, 8).has_value());
    CHECK(!isTangent(zeta2Field().scaled(Scalar::i()), g, 8).has_value());

    auto res = isTangent(zeta2Field(), g, 8);
    REQUIRE(res.has_value());
    auto lead = res->leadingTerm();
    REQUIRE(lead.has_value());
    CHECK(degreeOf(lead->first) == 2);
    CHECK(lead->first == expo(kR, {{kR.zIdx(0), 1}, {kR.czIdx(0), 1}}));
    CHECK(lead->second == Scalar(-4));
  }
}

TEST_CASE("tangency of the homogeneity pair on the t = 1 germ") {
  HypersurfaceGerm g1 = familyGerm(Rational(1), 11);
  CHECK(!isTangent(etaField(), g1, 8).has_value());
  CHECK(!isTangent(chiField(), g1, 8).has_value());
  // eta is not tangent for t != 1
  HypersurfaceGerm g2 = familyGerm(Rational(2), 11);
  CHECK(isTangent(etaField(), g2, 8).has_value());
}

TEST_CASE("tangency of the weight-two root combinations") {
  for (long tv : {1L, 2L, -1L}) {
    Rational t(tv);
    HypersurfaceGerm g = familyGerm(t, 11);
    // xi^2 and xi^{2i} generate with their conjugates the real pairs; the
    // individual fields are tangent as real fields via the pair combinations.
    CHECK(!isTangent(realPairField(LatticePoint{2, 0}, t), g, 8).has_value());
    CHECK(!isTangent(realPairField(LatticePoint{-2, 0}, t), g, 8).has_value());
    CHECK(!isTangent(realPairField(LatticePoint{0, 2}, t), g, 8).has_value());
    CHECK(!isTangent(realPairField(LatticePoint{0, -2}, t), g, 8).has_value());
    // The pure weight-2 field itself (paper's xi^2) is tangent: i t w^2 Dw +
    // i t w z1 Dz1 - i z1^2 Dz2 applied to the defining equation cancels
    // against its own conjugate.
    CHECK(!isTangent(rootField(LatticePoint{2, 0}, t), g, 8).has_value());
  }
}

TEST_CASE("hol solver on the C^2 hyperquadric") {
  // w + cw = 2 z1 cz1 has an 8-dimensional algebra of degree <= 2 fields.
  HypersurfaceGerm q = quadricGermC2(11);
  HolBasisReport rep = holSolve(q, 2, 8);
  CHECK(rep.dimension == 8);
  CHECK(rep.stable);
  for (const auto& b : rep.basis) CHECK(!isTangent(b, q, 8).has_value());
}

TEST_CASE("hol solver monotonicity grid") {
  HypersurfaceGerm q = quadricGermC2(12);
  std::map<std::pair<int, int>, int> dims;
  for (int d : {1, 2})
    for (int D : {6, 7, 8}) {
      if (D < 2 * d + 2) continue;
      dims[{d, D}] = holSolve(q, d, D).dimension;
    }
  // Non-increasing in D at fixed d.
  CHECK(dims[{1, 7}] <= dims[{1, 6}]);
  CHECK(dims[{1, 8}] <= dims[{1, 7}]);
  CHECK(dims[{2, 7}] <= dims[{2, 6}]);
  CHECK(dims[{2, 8}] <= dims[{2, 7}]);
  // Non-decreasing in d at fixed D.
  CHECK(dims[{2, 6}] >= dims[{1, 6}]);
  CHECK(dims[{2, 8}] >= dims[{1, 8}]);
}

TEST_CASE("hol solver on the t = 1 germ") {
  HypersurfaceGerm g1 = familyGerm(Rational(1), 11);
  HolBasisReport rep = holSolve(g1, 2, 8);
  CHECK(rep.dimension == 10);
  CHECK(rep.stable);
  for (const auto& b : rep.basis) CHECK(!isTangent(b, g1, 8).has_value());

  // zeta1 and i zeta2 lie in the span.
  LiePresentation p = structureConstants(rep.basis);
  CHECK(p.closed);
  CHECK(memberCoords(p, zeta1Field()).has_value());
  CHECK(memberCoords(p, zeta2Field().scaled(Scalar::i())).has_value());
  CHECK(!memberCoords(p, zeta2Field()).has_value());

  // Brackets of basis elements stay in the span when the degree permits.
  for (size_t i = 0; i < rep.basis.size(); ++i)
    for (size_t j = i + 1; j < rep.basis.size(); ++j) {
      HoloVectorField br = bracket(rep.basis[i], rep.basis[j]);
      if (br.degree() <= 2) CHECK(spanCoords(rep.basis, br).has_value());
    }
}

TEST_CASE("hol solver on a deformed germ") {
  HypersurfaceGerm g2 = familyGerm(Rational(2), 11);
  HolBasisReport rep = holSolve(g2, 2, 8);
  CHECK(rep.dimension == 6);
  CHECK(rep.stable);
  LiePresentation p = structureConstants(rep.basis);
  CHECK(p.closed);
  CHECK(memberCoords(p, zeta1Field()).has_value());
  CHECK(memberCoords(p, zeta2Field().scaled(Scalar::i())).has_value());
}

TEST_CASE("levi matrix") {
  // At the origin: ((2, 0), (0, 0)), kernel the z2 axis.
  HypersurfaceGerm g = familyGerm(Rational(2), 6);
  LeviResult at0 = leviMatrix(g, {Scalar(0), Scalar(0)});
  CHECK(at0.matrix[0][0] == Scalar(2));
  CHECK(at0.matrix[0][1].isZero());
  CHECK(at0.matrix[1][0].isZero());
  CHECK(at0.matrix[1][1].isZero());
  REQUIRE(at0.kernelBasis.size() == 1);
  CHECK(at0.kernelBasis[0][0].isZero());
  CHECK(!at0.kernelBasis[0][1].isZero());

  // Slice point (z1 = 1, z2 = 0), t = 3: ((2,2),(2,6)), det 8 = 4 (t - 1).
  HypersurfaceGerm g3 = familyGerm(Rational(3), 6);
  LeviResult slice = leviMatrix(g3, {Scalar(1), Scalar(0)});
  CHECK(slice.matrix[0][0] == Scalar(2));
  CHECK(slice.matrix[0][1] == Scalar(2));
  CHECK(slice.matrix[1][0] == Scalar(2));
  CHECK(slice.matrix[1][1] == Scalar(6));
  CHECK(slice.determinant == Scalar(8));

  // t = 1 degenerate on the slice.
  HypersurfaceGerm g1 = familyGerm(Rational(1), 6);
  CHECK(leviMatrix(g1, {Scalar(1), Scalar(0)}).determinant.isZero());
}

TEST_CASE("levi matrix is hermitian at sampled points") {
  DetRng rng(31337);
  HypersurfaceGerm g = familyGerm(Rational(1, 2), 6);
  for (int t = 0; t < 10; ++t) {
    std::vector<Scalar> pt{rng.gaussian(2, 2), rng.gaussian(2, 2)};
    LeviResult l = leviMatrix(g, pt);
    for (int i = 0; i < 2; ++i)
      for (int j = 0; j < 2; ++j) CHECK(l.matrix[i][j] == l.matrix[j][i].conj());
  }
}

TEST_CASE("homogeneity criterion") {
  CHECK(homogeneityNormalFormCheck(familyGerm(Rational(1), 8)));
  CHECK(!homogeneityNormalFormCheck(familyGerm(Rational(0), 8)));
  CHECK(!homogeneityNormalFormCheck(familyGerm(Rational(2), 8)));
}
