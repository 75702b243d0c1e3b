#include "crtube/germs.hpp"

#include <algorithm>
#include <cassert>
#include <functional>
#include <stdexcept>

#ifdef _OPENMP
#include <omp.h>
#endif

#include "crtube/parallel.hpp"

namespace crtube {

namespace {

Expo expoOf(const VarSet& vars, std::initializer_list<std::pair<int, int>> assign) {
  Expo e(vars.count(), 0);
  for (auto [g, k] : assign) e[g] = static_cast<uint16_t>(k);
  return e;
}

}  // namespace

HypersurfaceGerm HypersurfaceGerm::make(const TruncatedSeries& rho, bool requireNormalForm) {
  if (rho.vars().hasW)
    throw std::invalid_argument("rho must live in the restricted ring (z, cz, v)");
  if (!rho.isReal()) throw std::domain_error("defining function not real");
  for (const auto& [e, c] : rho.terms()) {
    if (degreeOf(e) < 2)
      throw std::domain_error("defining function has constant or linear terms");
  }
  if (requireNormalForm) {
    const VarSet& vars = rho.vars();
    if (vars.nz != 2) throw std::domain_error("normal form requires two z-coordinates");
    TruncatedSeries expected2 = TruncatedSeries::monomial(
        vars, rho.cutoff(), expoOf(vars, {{vars.zIdx(0), 1}, {vars.czIdx(0), 1}}), Scalar(2));
    TruncatedSeries expected3 =
        TruncatedSeries::monomial(vars, rho.cutoff(),
                                  expoOf(vars, {{vars.zIdx(0), 2}, {vars.czIdx(1), 1}}), Scalar(1)) +
        TruncatedSeries::monomial(vars, rho.cutoff(),
                                  expoOf(vars, {{vars.czIdx(0), 2}, {vars.zIdx(1), 1}}), Scalar(1));
    for (const auto& [e, c] : rho.terms()) {
      int deg = degreeOf(e);
      if (deg == 2 && c != expected2.coefficient(e))
        throw std::domain_error("quadric part is not 2 z1 cz1");
      if (deg == 3 && e[vars.vIdx()] == 0 && c != expected3.coefficient(e))
        throw std::domain_error("cubic part is not z1^2 cz2 + cz1^2 z2");
    }
    for (const auto& [e, c] : expected2.terms())
      if (rho.coefficient(e) != c) throw std::domain_error("quadric part is not 2 z1 cz1");
    for (const auto& [e, c] : expected3.terms())
      if (rho.coefficient(e) != c)
        throw std::domain_error("cubic part is not z1^2 cz2 + cz1^2 z2");
  }
  return HypersurfaceGerm(rho, requireNormalForm);
}

bool HypersurfaceGerm::rhoDependsOnV() const { return vDegree() > 0; }

int HypersurfaceGerm::vDegree() const {
  const int v = rho_.vars().vIdx();
  int m = 0;
  for (const auto& [e, c] : rho_.terms()) m = std::max<int>(m, e[v]);
  return m;
}

TruncatedSeries HypersurfaceGerm::definingSeries(int ambientCutoff) const {
  const VarSet rv = rho_.vars();
  const VarSet amb{rv.nz, true};
  // Inject rho, eliminating v = -i/2 (w - cw) so that plain generator
  // partials implement the chain rule through Im w.
  const Scalar minusHalfI(Rational(0), Rational(-1, 2), Rational(0), Rational(0));
  const Scalar halfI(Rational(0), Rational(1, 2), Rational(0), Rational(0));
  std::vector<TruncatedSeries> assign;
  assign.reserve(rv.count());
  for (int g = 0; g < rv.count(); ++g) {
    if (g == rv.vIdx()) {
      assign.push_back(
          TruncatedSeries::generator(amb, ambientCutoff, amb.wIdx()).scaled(minusHalfI) +
          TruncatedSeries::generator(amb, ambientCutoff, amb.cwIdx()).scaled(halfI));
    } else if (rv.isHolomorphic(g)) {
      assign.push_back(TruncatedSeries::generator(amb, ambientCutoff, amb.zIdx(g)));
    } else {
      assign.push_back(TruncatedSeries::generator(amb, ambientCutoff, amb.czIdx(g - rv.nz)));
    }
  }
  TruncatedSeries rhoAmb = rho_.truncated(std::min(rho_.cutoff(), ambientCutoff))
                               .substituted(assign, amb, ambientCutoff);
  return TruncatedSeries::generator(amb, ambientCutoff, amb.wIdx()) +
         TruncatedSeries::generator(amb, ambientCutoff, amb.cwIdx()) - rhoAmb;
}

HypersurfaceGerm familyGerm(const Rational& t, int cutoff) {
  VarSet vars{2, false};
  TruncatedSeries num =
      TruncatedSeries::monomial(vars, cutoff, expoOf(vars, {{vars.zIdx(0), 1}, {vars.czIdx(0), 1}}),
                                Scalar(2)) +
      TruncatedSeries::monomial(vars, cutoff, expoOf(vars, {{vars.zIdx(0), 2}, {vars.czIdx(1), 1}}),
                                Scalar(1)) +
      TruncatedSeries::monomial(vars, cutoff, expoOf(vars, {{vars.czIdx(0), 2}, {vars.zIdx(1), 1}}),
                                Scalar(1));
  TruncatedSeries unit =
      TruncatedSeries::constant(vars, cutoff, Scalar(1)) -
      TruncatedSeries::monomial(vars, cutoff, expoOf(vars, {{vars.zIdx(1), 1}, {vars.czIdx(1), 1}}),
                                Scalar(t));
  TruncatedSeries rho = num * unit.inverse();
  return HypersurfaceGerm::make(rho, true);
}

HypersurfaceGerm quadricGermC2(int cutoff) {
  VarSet vars{1, false};
  TruncatedSeries rho = TruncatedSeries::monomial(
      vars, cutoff, expoOf(vars, {{vars.zIdx(0), 1}, {vars.czIdx(0), 1}}), Scalar(2));
  return HypersurfaceGerm::make(rho, false);
}

TruncatedSeries restrictSeries(const TruncatedSeries& f, const HypersurfaceGerm& germ,
                               int outCutoff) {
  const VarSet amb = f.vars();
  if (!amb.hasW) throw std::invalid_argument("restriction expects an ambient series");
  const VarSet rv = germ.rho().vars();
  if (amb.nz != rv.nz) throw std::invalid_argument("germ dimension mismatch");
  if (outCutoff > germ.cutoff())
    throw std::invalid_argument("insufficient germ cutoff");
  if (f.cutoff() < outCutoff + f.maxWDegree())
    throw std::invalid_argument("insufficient ambient cutoff");

  const Scalar half(Rational(1, 2));
  TruncatedSeries rhoOut = germ.rho().truncated(outCutoff);
  TruncatedSeries iv =
      TruncatedSeries::generator(rv, outCutoff, rv.vIdx()).scaled(Scalar::i());
  TruncatedSeries wImage = rhoOut.scaled(half) + iv;
  TruncatedSeries cwImage = rhoOut.scaled(half) - iv;

  std::vector<TruncatedSeries> assign;
  assign.reserve(amb.count());
  for (int g = 0; g < amb.count(); ++g) {
    if (g == amb.wIdx()) assign.push_back(wImage);
    else if (g == amb.cwIdx()) assign.push_back(cwImage);
    else if (g == amb.vIdx()) assign.push_back(TruncatedSeries::generator(rv, outCutoff, rv.vIdx()));
    else if (amb.isHolomorphic(g)) assign.push_back(TruncatedSeries::generator(rv, outCutoff, rv.zIdx(g - 2)));
    else assign.push_back(TruncatedSeries::generator(rv, outCutoff, rv.czIdx(g - 2 - amb.nz)));
  }
  return f.substituted(assign, rv, outCutoff);
}

std::optional<TruncatedSeries> isTangent(const HoloVectorField& xi,
                                         const HypersurfaceGerm& germ, int D) {
  if (germ.cutoff() < D + 1)
    throw std::invalid_argument("germ cutoff must exceed the tangency order");
  const int degXi = std::max(0, xi.degree());
  const int wMargin = std::max(1, germ.vDegree());
  const int ambientCutoff = std::min(germ.cutoff(), D + degXi + wMargin);
  TruncatedSeries f = germ.definingSeries(ambientCutoff);
  TruncatedSeries xf = applyField(xi, f);
  TruncatedSeries res = restrictSeries(xf, germ, D);
  if (res.isZeroToDegree(D)) return std::nullopt;
  return res;
}

namespace {

// Canonical unknown order: coordinate index major, then monomials by
// (total degree, lexicographic exponents), then Re before Im.
std::vector<PExpo> monomialsUpTo(int ncoords, int d) {
  std::vector<PExpo> out;
  PExpo cur(ncoords, 0);
  // Enumerate all exponent vectors with sum <= d, then sort graded-lex.
  std::function<void(int, int)> rec = [&](int k, int rem) {
    if (k == ncoords) {
      out.push_back(cur);
      return;
    }
    for (int e = 0; e <= rem; ++e) {
      cur[k] = static_cast<uint16_t>(e);
      rec(k + 1, rem - e);
    }
    cur[k] = 0;
  };
  rec(0, d);
  std::sort(out.begin(), out.end(), [](const PExpo& a, const PExpo& b) {
    int da = 0, db = 0;
    for (uint16_t x : a) da += x;
    for (uint16_t x : b) db += x;
    if (da != db) return da < db;
    return a < b;
  });
  return out;
}

}  // namespace

HolBasisReport holSolve(const HypersurfaceGerm& germ, int d, int D) {
  if (d < 1) throw std::invalid_argument("field degree bound must be >= 1");
  if (D < 2 * d + 2) throw std::invalid_argument("truncation must satisfy D >= 2d + 2");
  if (germ.cutoff() < D + d + 1)
    throw std::invalid_argument("germ cutoff must be >= D + d + 1");

  const int nz = germ.rho().vars().nz;
  const int ncoords = nz + 1;
  const VarSet rv = germ.rho().vars();
  const int wMargin = std::max(1, germ.vDegree());
  const int ambientCutoff = std::min(germ.cutoff(), D + d + wMargin);
  const VarSet amb{nz, true};

  TruncatedSeries f = germ.definingSeries(ambientCutoff);

  // Restricted partials of the defining series, one per coordinate and one
  // per conjugate coordinate; shared across all unknowns.
  std::vector<TruncatedSeries> partHolo, partAnti;
  std::vector<int> gens;
  {
    HoloVectorField probe(ncoords, true);
    gens = probe.coordGens();
  }
  for (int k = 0; k < ncoords; ++k) {
    partHolo.push_back(restrictSeries(f.partial(gens[k]), germ, D));
    partAnti.push_back(restrictSeries(f.partial(amb.conjOf(gens[k])), germ, D));
  }

  // Restricted powers of w and cw.
  const Scalar half(Rational(1, 2));
  TruncatedSeries rhoD = germ.rho().truncated(D);
  TruncatedSeries iv = TruncatedSeries::generator(rv, D, rv.vIdx()).scaled(Scalar::i());
  TruncatedSeries wImg = rhoD.scaled(half) + iv;
  TruncatedSeries cwImg = rhoD.scaled(half) - iv;
  std::vector<TruncatedSeries> wPow{TruncatedSeries::constant(rv, D, Scalar(1))};
  std::vector<TruncatedSeries> cwPow{TruncatedSeries::constant(rv, D, Scalar(1))};
  for (int m = 1; m <= d; ++m) {
    wPow.push_back(wPow.back() * wImg);
    cwPow.push_back(cwPow.back() * cwImg);
  }

  const std::vector<PExpo> monos = monomialsUpTo(ncoords, d);
  const int nUnknown = static_cast<int>(monos.size()) * ncoords;  // complex unknowns

  // Residual contribution of each unknown:  S for coefficient 1, T for i.
  std::vector<TruncatedSeries> contribS(nUnknown, TruncatedSeries::zero(rv, D));
  std::vector<TruncatedSeries> contribT(nUnknown, TruncatedSeries::zero(rv, D));

  auto restrictedMono = [&](const PExpo& e, bool conj) {
    // w^m z1^n ... restricted: (rho/2 +- iv)^m shifted by the z-part.
    Expo shift(rv.count(), 0);
    for (int k = 1; k < ncoords; ++k)
      shift[conj ? rv.czIdx(k - 1) : rv.zIdx(k - 1)] = e[k];
    const TruncatedSeries& base = conj ? cwPow[e[0]] : wPow[e[0]];
    TruncatedSeries shifted(rv, D);
    std::vector<std::pair<Expo, Scalar>> terms;
    for (const auto& [be, bc] : base.terms()) {
      Expo sum = be;
      bool ok = true;
      int deg = 0;
      for (size_t g = 0; g < sum.size(); ++g) {
        sum[g] += shift[g];
        deg += sum[g];
      }
      if (deg > D) ok = false;
      if (ok) terms.emplace_back(std::move(sum), bc);
    }
    return TruncatedSeries::fromTerms(rv, D, terms);
  };

#ifdef _OPENMP
#pragma omp parallel for schedule(dynamic) if (parallelEnabled())
#endif
  for (int u = 0; u < nUnknown; ++u) {
    const int k = u / static_cast<int>(monos.size());
    const PExpo& e = monos[u % monos.size()];
    TruncatedSeries holoPart = restrictedMono(e, false) * partHolo[k];
    TruncatedSeries antiPart = restrictedMono(e, true) * partAnti[k];
    contribS[u] = holoPart + antiPart;
    contribT[u] = (holoPart - antiPart).scaled(Scalar::i());
  }

  // Rows: one per (monomial of degree <= D, tower component), four tower
  // components per monomial in general.
  std::map<std::pair<Expo, int>, int> rowIndex;
  std::vector<int> rowDegree;
  QMat rows;
  const int ncols = 2 * nUnknown;
  auto componentOf = [](const Scalar& s, int comp) -> const Rational& {
    switch (comp) {
      case 0: return s.one();
      case 1: return s.iPart();
      case 2: return s.sqrt2Part();
      default: return s.iSqrt2Part();
    }
  };
  auto addEntries = [&](int col, const TruncatedSeries& s) {
    for (const auto& [e, c] : s.terms()) {
      for (int comp = 0; comp < 4; ++comp) {
        const Rational& r = componentOf(c, comp);
        if (r.isZero()) continue;
        auto key = std::make_pair(e, comp);
        auto it = rowIndex.find(key);
        if (it == rowIndex.end()) {
          it = rowIndex.emplace(key, static_cast<int>(rows.size())).first;
          rows.emplace_back(ncols);
          rowDegree.push_back(degreeOf(e));
        }
        rows[it->second][col] = r;
      }
    }
  };
  for (int u = 0; u < nUnknown; ++u) {
    addEntries(2 * u, contribS[u]);
    addEntries(2 * u + 1, contribT[u]);
  }

  auto solveAt = [&](int Dp) {
    QMat sub;
    for (size_t i = 0; i < rows.size(); ++i)
      if (rowDegree[i] <= Dp) sub.push_back(rows[i]);
    return rrefQ(sub, ncols);
  };

  HolBasisReport report;
  report.d = d;
  report.D = D;
  Rref full = solveAt(D);
  report.dimension = ncols - full.rank();
  for (int Dp : {D - 2, D - 1}) {
    Rref r = solveAt(Dp);
    report.stability.emplace_back(Dp, ncols - r.rank());
  }
  report.stability.emplace_back(D, report.dimension);
  report.stable = true;
  for (const auto& [Dp, dim] : report.stability)
    if (dim != report.dimension) report.stable = false;

  QMat null = nullspaceQ(full);
  for (const QVec& vec : null) {
    HoloVectorField field(ncoords, true);
    for (int u = 0; u < nUnknown; ++u) {
      const Rational& re = vec[2 * u];
      const Rational& im = vec[2 * u + 1];
      if (re.isZero() && im.isZero()) continue;
      const int k = u / static_cast<int>(monos.size());
      const PExpo& e = monos[u % monos.size()];
      field.comps[k] =
          field.comps[k] + HoloPoly::monomial(ncoords, e, Scalar(re, im, Rational(0), Rational(0)));
    }
    report.basis.push_back(std::move(field));
  }
  return report;
}

LeviResult leviMatrix(const HypersurfaceGerm& germ, const std::vector<Scalar>& zPoint,
                      const Scalar& v) {
  const VarSet rv = germ.rho().vars();
  const int nz = rv.nz;
  if (static_cast<int>(zPoint.size()) != nz)
    throw std::invalid_argument("point must assign every z coordinate");
  if (!v.isZero() && germ.rhoDependsOnV())
    throw std::domain_error("slice evaluation requires explicit v handling");

  std::vector<Scalar> genValues(rv.count());
  for (int j = 0; j < nz; ++j) {
    genValues[rv.zIdx(j)] = zPoint[j];
    genValues[rv.czIdx(j)] = zPoint[j].conj();
  }
  genValues[rv.vIdx()] = v;

  auto evalAt = [&](const TruncatedSeries& s) {
    Scalar acc;
    for (const auto& [e, c] : s.terms()) {
      Scalar t = c;
      for (int g = 0; g < rv.count(); ++g)
        for (int rep = 0; rep < e[g]; ++rep) t *= genValues[g];
      acc += t;
    }
    return acc;
  };

  LeviResult out;
  out.matrix.assign(nz, SVec(nz));
  for (int j = 0; j < nz; ++j) {
    TruncatedSeries dj = germ.rho().partial(rv.zIdx(j));
    for (int k = 0; k < nz; ++k) {
      out.matrix[j][k] = evalAt(dj.partial(rv.czIdx(k)));
    }
  }
  if (nz == 1) out.determinant = out.matrix[0][0];
  else if (nz == 2)
    out.determinant = out.matrix[0][0] * out.matrix[1][1] - out.matrix[0][1] * out.matrix[1][0];
  else {
    // Fall back to elimination for larger blocks (not needed by the family).
    out.determinant = Scalar(0);
  }
  out.kernelBasis = nullspaceS(rrefS(out.matrix, nz));
  return out;
}

bool homogeneityNormalFormCheck(const HypersurfaceGerm& germ) {
  if (!germ.inNormalForm()) throw std::invalid_argument("germ must be in normal form");
  HypersurfaceGerm model = familyGerm(Rational(1), germ.cutoff());
  return germ.rho() == model.rho();
}

namespace {

HoloPoly mono3(std::initializer_list<int> exps, const Scalar& c) {
  PExpo e;
  for (int x : exps) e.push_back(static_cast<uint16_t>(x));
  return HoloPoly::monomial(static_cast<int>(e.size()), e, c);
}

}  // namespace

HoloVectorField zeta1Field() {
  HoloVectorField f(3, true);
  f.comps[0] = mono3({1, 0, 0}, Scalar(2));
  f.comps[1] = mono3({0, 1, 0}, Scalar(1));
  return f;
}

HoloVectorField zeta2Field() {
  HoloVectorField f(3, true);
  f.comps[1] = mono3({0, 1, 0}, Scalar(1));
  f.comps[2] = mono3({0, 0, 1}, Scalar(2));
  return f;
}

HoloVectorField etaField() {
  HoloVectorField f(3, true);
  f.comps[0] = mono3({0, 1, 0}, Scalar(2));
  f.comps[1] = mono3({0, 0, 0}, Scalar(1)) + mono3({0, 0, 1}, Scalar(-1));
  return f;
}

HoloVectorField chiField() {
  HoloVectorField f(3, true);
  f.comps[0] = mono3({0, 2, 0}, Scalar(1));
  f.comps[1] = mono3({0, 1, 1}, Scalar(-1));
  f.comps[2] = mono3({0, 0, 0}, Scalar(1)) + mono3({0, 0, 2}, Scalar(-1));
  return f;
}

HoloVectorField rootField(const LatticePoint& lambda, const Rational& t) {
  const Scalar st(t);
  const Scalar i = Scalar::i();
  HoloVectorField f(3, true);
  if (lambda == LatticePoint{-2, 0}) {
    f.comps[0] = mono3({0, 0, 0}, i);
  } else if (lambda == LatticePoint{0, -2}) {
    f.comps[2] = mono3({0, 0, 0}, Scalar(1));
  } else if (lambda == LatticePoint{-1, -1}) {
    f.comps[1] = mono3({0, 0, 0}, Scalar(1));
  } else if (lambda == LatticePoint{2, 0}) {
    f.comps[0] = mono3({2, 0, 0}, i * st);
    f.comps[1] = mono3({1, 1, 0}, i * st);
    f.comps[2] = mono3({0, 2, 0}, -i);
  } else if (lambda == LatticePoint{0, 2}) {
    f.comps[0] = mono3({0, 2, 0}, Scalar(1));
    f.comps[1] = mono3({0, 1, 1}, -st);
    f.comps[2] = mono3({0, 0, 2}, -st);
  } else if (lambda == LatticePoint{-1, 1}) {
    f.comps[0] = mono3({0, 1, 0}, Scalar(2));
    f.comps[1] = mono3({0, 0, 1}, Scalar(-1));
  } else if (lambda == LatticePoint{1, -1}) {
    f.comps[1] = mono3({1, 0, 0}, Scalar(-1));
    f.comps[2] = mono3({0, 1, 0}, Scalar(2));
  } else if (lambda == LatticePoint{1, 1}) {
    f.comps[0] = mono3({1, 1, 0}, Scalar(2));
    f.comps[1] = mono3({0, 2, 0}, Scalar(1)) + mono3({1, 0, 1}, Scalar(-1));
    f.comps[2] = mono3({0, 1, 1}, Scalar(2));
  } else {
    throw std::invalid_argument("no root field at weight " + lambda.str());
  }
  return f;
}

HoloVectorField realPairField(const LatticePoint& lambda, const Rational& t) {
  LatticePoint conj{lambda.re, -lambda.im};
  HoloVectorField a = rootField(lambda, t);
  HoloVectorField b = rootField(conj, t);
  if (lambda.im >= 0) return a + b;
  return a.scaled(Scalar::i()) - b.scaled(Scalar::i());
}

}  // namespace crtube
