#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "crtube/rng.hpp"
#include "crtube/series.hpp"

using namespace crtube;

namespace {

const VarSet kR{2, false};  // z1, z2, cz1, cz2, v

Expo expo(const VarSet& vars, std::initializer_list<std::pair<int, int>> assign) {
  Expo e(vars.count(), 0);
  for (auto [g, k] : assign) e[g] = static_cast<uint16_t>(k);
  return e;
}

TruncatedSeries gen(const VarSet& vars, int cutoff, int g) {
  return TruncatedSeries::generator(vars, cutoff, g);
}

TruncatedSeries randomSeries(DetRng& rng, const VarSet& vars, int cutoff, int nterms) {
  std::vector<std::pair<Expo, Scalar>> terms;
  for (int t = 0; t < nterms; ++t) {
    Expo e(vars.count(), 0);
    int budget = static_cast<int>(rng.below(cutoff + 1));
    for (int g = 0; g < vars.count() && budget > 0; ++g) {
      int take = static_cast<int>(rng.below(budget + 1));
      e[g] = static_cast<uint16_t>(take);
      budget -= take;
    }
    terms.emplace_back(e, rng.scalar(4, 3));
  }
  return TruncatedSeries::fromTerms(vars, cutoff, terms);
}

}  // namespace

TEST_CASE("construction and normalization") {
  TruncatedSeries zero = TruncatedSeries::zero(kR, 4);
  CHECK(zero.isZero());

  // quadric term 2 z1 cz1
  TruncatedSeries q = TruncatedSeries::monomial(
      kR, 4, expo(kR, {{kR.zIdx(0), 1}, {kR.czIdx(0), 1}}), Scalar(2));
  CHECK(q.termCount() == 1);

  // duplicate entries (v:1)->1 and (v:1)->2 collapse to 3v
  TruncatedSeries dup = TruncatedSeries::fromTerms(
      kR, 4,
      {{expo(kR, {{kR.vIdx(), 1}}), Scalar(1)}, {expo(kR, {{kR.vIdx(), 1}}), Scalar(2)}});
  CHECK(dup.termCount() == 1);
  CHECK(dup.coefficient(expo(kR, {{kR.vIdx(), 1}})) == Scalar(3));

  CHECK_THROWS_AS(
      TruncatedSeries::monomial(kR, 2, expo(kR, {{kR.zIdx(0), 3}}), Scalar(1)),
      std::invalid_argument);
}

TEST_CASE("arithmetic with cutoff") {
  // (1 + z1)(1 - z1) at D=2 -> 1 - z1^2
  TruncatedSeries one = TruncatedSeries::constant(kR, 2, Scalar(1));
  TruncatedSeries z1 = gen(kR, 2, kR.zIdx(0));
  TruncatedSeries prod = (one + z1) * (one - z1);
  CHECK(prod == one - z1 * z1);

  // (z1 cz1)(z2 cz2) at D=3 -> 0
  TruncatedSeries a = TruncatedSeries::monomial(
      kR, 3, expo(kR, {{kR.zIdx(0), 1}, {kR.czIdx(0), 1}}), Scalar(1));
  TruncatedSeries b = TruncatedSeries::monomial(
      kR, 3, expo(kR, {{kR.zIdx(1), 1}, {kR.czIdx(1), 1}}), Scalar(1));
  CHECK((a * b).isZero());

  CHECK_THROWS_AS(TruncatedSeries::zero(kR, 2) + TruncatedSeries::zero(kR, 3),
                  std::invalid_argument);
  CHECK_THROWS_AS(TruncatedSeries::zero(VarSet{1, false}, 2) + TruncatedSeries::zero(kR, 2),
                  std::invalid_argument);
}

TEST_CASE("normal-form numerator times unit, hand oracle") {
  // (2 z1 cz1 + z1^2 cz2 + cz1^2 z2)(1 + z2 cz2) at D=5: six terms.
  const int D = 5;
  TruncatedSeries num =
      TruncatedSeries::monomial(kR, D, expo(kR, {{kR.zIdx(0), 1}, {kR.czIdx(0), 1}}), Scalar(2)) +
      TruncatedSeries::monomial(kR, D, expo(kR, {{kR.zIdx(0), 2}, {kR.czIdx(1), 1}}), Scalar(1)) +
      TruncatedSeries::monomial(kR, D, expo(kR, {{kR.czIdx(0), 2}, {kR.zIdx(1), 1}}), Scalar(1));
  TruncatedSeries unit = TruncatedSeries::constant(kR, D, Scalar(1)) +
                         TruncatedSeries::monomial(
                             kR, D, expo(kR, {{kR.zIdx(1), 1}, {kR.czIdx(1), 1}}), Scalar(1));
  TruncatedSeries prod = num * unit;
  CHECK(prod.termCount() == 6);
  // Hand expansion: degree-5 parts 2 z1 cz1 z2 cz2, z1^2 cz2 z2 cz2 (deg 5),
  // cz1^2 z2 z2 cz2 truncated? (deg 5) -- all six:
  CHECK(prod.coefficient(expo(kR, {{kR.zIdx(0), 1}, {kR.czIdx(0), 1}})) == Scalar(2));
  CHECK(prod.coefficient(expo(kR, {{kR.zIdx(0), 2}, {kR.czIdx(1), 1}})) == Scalar(1));
  CHECK(prod.coefficient(expo(kR, {{kR.czIdx(0), 2}, {kR.zIdx(1), 1}})) == Scalar(1));
  CHECK(prod.coefficient(expo(kR, {{kR.zIdx(0), 1},
                                   {kR.czIdx(0), 1},
                                   {kR.zIdx(1), 1},
                                   {kR.czIdx(1), 1}})) == Scalar(2));
  CHECK(prod.coefficient(expo(kR, {{kR.zIdx(0), 2}, {kR.czIdx(1), 2}, {kR.zIdx(1), 1}})) ==
        Scalar(1));
  CHECK(prod.coefficient(expo(kR, {{kR.czIdx(0), 2}, {kR.zIdx(1), 2}, {kR.czIdx(1), 1}})) ==
        Scalar(1));
}

TEST_CASE("geometric inverse") {
  // inverse(1 - z2 cz2) at D=6 -> 1 + x + x^2 + x^3 for x = z2 cz2
  const int D = 6;
  TruncatedSeries x = TruncatedSeries::monomial(
      kR, D, expo(kR, {{kR.zIdx(1), 1}, {kR.czIdx(1), 1}}), Scalar(1));
  TruncatedSeries one = TruncatedSeries::constant(kR, D, Scalar(1));
  TruncatedSeries inv = (one - x).inverse();
  CHECK(inv == one + x + x * x + x * x * x);

  CHECK(TruncatedSeries::constant(kR, 3, Scalar(1)).inverse() ==
        TruncatedSeries::constant(kR, 3, Scalar(1)));

  // inverse(2 + v) at D=2 -> 1/2 - v/4 + v^2/8
  TruncatedSeries v = gen(kR, 2, kR.vIdx());
  TruncatedSeries s = TruncatedSeries::constant(kR, 2, Scalar(2)) + v;
  TruncatedSeries si = s.inverse();
  CHECK(si.coefficient(expo(kR, {})) == Scalar(Rational(1, 2)));
  CHECK(si.coefficient(expo(kR, {{kR.vIdx(), 1}})) == Scalar(Rational(-1, 4)));
  CHECK(si.coefficient(expo(kR, {{kR.vIdx(), 2}})) == Scalar(Rational(1, 8)));
  CHECK((s * si) == TruncatedSeries::constant(kR, 2, Scalar(1)));

  CHECK_THROWS_AS(gen(kR, 3, kR.zIdx(0)).inverse(), std::domain_error);
}

TEST_CASE("inverse on random units") {
  DetRng rng(314159);
  const int D = 4;
  for (int t = 0; t < 50; ++t) {
    TruncatedSeries s = randomSeries(rng, kR, D, 5);
    TruncatedSeries unit = s + TruncatedSeries::constant(kR, D, rng.scalarNonZero(3, 2));
    if (unit.constantTerm().isZero()) continue;
    CHECK(unit * unit.inverse() == TruncatedSeries::constant(kR, D, Scalar(1)));
  }
}

TEST_CASE("substitution") {
  const int D = 6;
  const VarSet amb{2, true};
  // substitute z1 -> 0 in 2 z1 cz1 + v -> v
  TruncatedSeries s =
      TruncatedSeries::monomial(kR, D, expo(kR, {{kR.zIdx(0), 1}, {kR.czIdx(0), 1}}), Scalar(2)) +
      gen(kR, D, kR.vIdx());
  std::map<int, TruncatedSeries> a;
  a.emplace(kR.zIdx(0), TruncatedSeries::zero(kR, D));
  a.emplace(kR.czIdx(0), TruncatedSeries::zero(kR, D));
  CHECK(s.substitutedPartial(a) == gen(kR, D, kR.vIdx()));

  // substitute w -> iv, cw -> -iv in w + cw -> 0
  TruncatedSeries wcw = gen(amb, D, amb.wIdx()) + gen(amb, D, amb.cwIdx());
  std::map<int, TruncatedSeries> b;
  b.emplace(amb.wIdx(), gen(amb, D, amb.vIdx()).scaled(Scalar::i()));
  b.emplace(amb.cwIdx(), gen(amb, D, amb.vIdx()).scaled(-Scalar::i()));
  CHECK(wcw.substitutedPartial(b).isZero());

  // substitute w -> rho/2 + iv with rho = 2 z1 cz1 into w^2
  TruncatedSeries rho = TruncatedSeries::monomial(
      amb, D, expo(amb, {{amb.zIdx(0), 1}, {amb.czIdx(0), 1}}), Scalar(2));
  TruncatedSeries img = rho.scaled(Scalar(Rational(1, 2))) +
                        gen(amb, D, amb.vIdx()).scaled(Scalar::i());
  std::map<int, TruncatedSeries> c;
  c.emplace(amb.wIdx(), img);
  TruncatedSeries w2 = gen(amb, D, amb.wIdx()) * gen(amb, D, amb.wIdx());
  TruncatedSeries expect = img * img;
  CHECK(w2.substitutedPartial(c) == expect);

  // soundness: nonzero constant term requires certification
  std::map<int, TruncatedSeries> badMap;
  badMap.emplace(kR.zIdx(0), TruncatedSeries::constant(kR, D, Scalar(1)));
  CHECK_THROWS_AS(s.substitutedPartial(badMap), std::domain_error);
  CHECK_NOTHROW(s.substitutedPartial(badMap, {kR.zIdx(0)}));
}

TEST_CASE("partial derivatives") {
  const int D = 5;
  TruncatedSeries q = TruncatedSeries::monomial(
      kR, D, expo(kR, {{kR.zIdx(0), 1}, {kR.czIdx(0), 1}}), Scalar(2));
  CHECK(q.partial(kR.zIdx(0)) ==
        TruncatedSeries::monomial(kR, D, expo(kR, {{kR.czIdx(0), 1}}), Scalar(2)));

  TruncatedSeries v2 = TruncatedSeries::monomial(kR, D, expo(kR, {{kR.vIdx(), 2}}), Scalar(1));
  CHECK(v2.partial(kR.vIdx()) ==
        TruncatedSeries::monomial(kR, D, expo(kR, {{kR.vIdx(), 1}}), Scalar(2)));
}

TEST_CASE("derivative of product matches product rule oracle") {
  const int D = 5;
  TruncatedSeries num =
      TruncatedSeries::monomial(kR, D, expo(kR, {{kR.zIdx(0), 1}, {kR.czIdx(0), 1}}), Scalar(2)) +
      TruncatedSeries::monomial(kR, D, expo(kR, {{kR.zIdx(0), 2}, {kR.czIdx(1), 1}}), Scalar(1)) +
      TruncatedSeries::monomial(kR, D, expo(kR, {{kR.czIdx(0), 2}, {kR.zIdx(1), 1}}), Scalar(1));
  TruncatedSeries unit = TruncatedSeries::constant(kR, D, Scalar(1)) +
                         TruncatedSeries::monomial(
                             kR, D, expo(kR, {{kR.zIdx(1), 1}, {kR.czIdx(1), 1}}), Scalar(1));
  int g = kR.czIdx(1);
  TruncatedSeries lhs = (num * unit).partial(g);
  TruncatedSeries rhs = num.partial(g) * unit + num * unit.partial(g);
  // Derivative is exact one degree below the cutoff.
  CHECK((lhs - rhs).isZeroToDegree(D - 1));
}

TEST_CASE("conjugation") {
  const int D = 4;
  TruncatedSeries iz1 = gen(kR, D, kR.zIdx(0)).scaled(Scalar::i());
  TruncatedSeries expect = gen(kR, D, kR.czIdx(0)).scaled(-Scalar::i());
  CHECK(iz1.conjugate() == expect);

  TruncatedSeries real =
      TruncatedSeries::monomial(kR, D, expo(kR, {{kR.zIdx(0), 1}, {kR.czIdx(0), 1}}), Scalar(2)) +
      gen(kR, D, kR.vIdx());
  CHECK(real.conjugate() == real);
  CHECK(real.isReal());

  TruncatedSeries cubic =
      TruncatedSeries::monomial(kR, D, expo(kR, {{kR.zIdx(0), 2}, {kR.czIdx(1), 1}}), Scalar(1));
  TruncatedSeries cc = cubic.conjugate();
  CHECK(cc == TruncatedSeries::monomial(kR, D, expo(kR, {{kR.czIdx(0), 2}, {kR.zIdx(1), 1}}),
                                        Scalar(1)));
  CHECK((cubic + cc).isReal());
}

TEST_CASE("ring laws on random triples") {
  DetRng rng(271828);
  const int D = 4;
  for (int t = 0; t < 40; ++t) {
    TruncatedSeries a = randomSeries(rng, kR, D, 4);
    TruncatedSeries b = randomSeries(rng, kR, D, 4);
    TruncatedSeries c = randomSeries(rng, kR, D, 4);
    CHECK((a * b) * c == a * (b * c));
    CHECK(a * (b + c) == a * b + a * c);
    CHECK(a * b == b * a);
    CHECK((a.conjugate() * b.conjugate()) == (a * b).conjugate());
    CHECK(a.conjugate().conjugate() == a);
    // Leibniz in every generator (one degree of exactness is consumed).
    for (int g = 0; g < kR.count(); ++g) {
      TruncatedSeries lhs = (a * b).partial(g);
      TruncatedSeries rhs = a.partial(g) * b + a * b.partial(g);
      CHECK((lhs - rhs).isZeroToDegree(D - 1));
    }
  }
}

TEST_CASE("substitution is a ring homomorphism") {
  DetRng rng(5551212);
  const int D = 4;
  for (int t = 0; t < 20; ++t) {
    TruncatedSeries a = randomSeries(rng, kR, D, 3);
    TruncatedSeries b = randomSeries(rng, kR, D, 3);
    // Assign every generator a zero-constant-term series.
    std::vector<TruncatedSeries> assign;
    for (int g = 0; g < kR.count(); ++g) {
      TruncatedSeries s = randomSeries(rng, kR, D, 2);
      TruncatedSeries noConst =
          s - TruncatedSeries::constant(kR, D, s.constantTerm());
      assign.push_back(noConst);
    }
    TruncatedSeries lhs = (a * b).substituted(assign, kR, D);
    TruncatedSeries rhs =
        a.substituted(assign, kR, D) * b.substituted(assign, kR, D);
    CHECK(lhs == rhs);
  }
}

TEST_CASE("serial and parallel multiplication agree") {
  DetRng rng(8080);
  const int D = 6;
  TruncatedSeries a = randomSeries(rng, kR, D, 120);
  TruncatedSeries b = randomSeries(rng, kR, D, 80);
  ExecMode saved = execMode();
  execMode() = ExecMode::Serial;
  TruncatedSeries s = a * b;
  execMode() = ExecMode::Parallel;
  TruncatedSeries p = a * b;
  execMode() = saved;
  CHECK(s == p);
}
