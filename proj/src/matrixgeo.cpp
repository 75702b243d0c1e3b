#include "crtube/matrixgeo.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>
#include <stdexcept>

#include "crtube/liealg.hpp"

namespace crtube {

// ---------------------------------------------------------------------------
// Points and membership

SymMatrixPoint SymMatrixPoint::make(const SMat& e) {
  SymMatrixPoint p;
  p.n = static_cast<int>(e.size());
  for (const auto& row : e)
    if (static_cast<int>(row.size()) != p.n) throw std::invalid_argument("not square");
  for (int i = 0; i < p.n; ++i)
    for (int j = 0; j < p.n; ++j)
      if (e[i][j] != e[j][i]) throw std::invalid_argument("matrix not symmetric");
  p.entries = e;
  return p;
}

SymMatrixPoint SymMatrixPoint::conj() const {
  SymMatrixPoint out = *this;
  for (auto& row : out.entries)
    for (auto& x : row) x = x.conj();
  return out;
}

SymMatrixPoint operator+(const SymMatrixPoint& a, const SymMatrixPoint& b) {
  SymMatrixPoint out = a;
  for (int i = 0; i < a.n; ++i)
    for (int j = 0; j < a.n; ++j) out.entries[i][j] += b.entries[i][j];
  return out;
}

Scalar symDet2(const SMat& m) { return m[0][0] * m[1][1] - m[0][1] * m[1][0]; }

Scalar trace(const SMat& m) {
  Scalar t;
  for (size_t i = 0; i < m.size(); ++i) t += m[i][i];
  return t;
}

TubeMembership tubeMembership(const SymMatrixPoint& z) {
  if (z.n != 2) throw std::invalid_argument("tube membership is for 2x2 points");
  TubeMembership out;
  SMat re = (z + z.conj()).entries;
  out.det = symDet2(re);
  out.reTrace = trace(z.entries).realPart();
  // In the domain iff z + conj z is positive definite (leading minors);
  // on the tube iff det(z + conj z) = 0 and Re tr(z) > 0.
  int m1 = re[0][0].signReal();
  int m2 = out.det.signReal();
  if (m1 > 0 && m2 > 0) {
    out.verdict = TubeVerdict::InDomain;
  } else if (m2 == 0 && out.reTrace.signReal() > 0) {
    out.verdict = TubeVerdict::OnTube;
  } else {
    out.verdict = TubeVerdict::Neither;
  }
  return out;
}

Inertia coneType(const QMat& x) { return signatureQ(x); }

// ---------------------------------------------------------------------------
// Affine invariance

namespace {

HoloPoly pmono(int n, std::initializer_list<int> exps, const Scalar& c) {
  PExpo e;
  for (int x : exps) e.push_back(static_cast<uint16_t>(x));
  (void)n;
  return HoloPoly::monomial(static_cast<int>(e.size()), e, c);
}

}  // namespace

AffineCheck affineInvarianceCheck(const QMat& g, int samples, DetRng& rng) {
  Rational detG = g[0][0] * g[1][1] - g[0][1] * g[1][0];
  if (detG.isZero()) throw std::domain_error("singular transformation");
  AffineCheck out;
  out.detFactor = detG * detG;

  // Symbolic identity in the entries (m1, m2, m3) of M = z + conj z:
  // det(g M g') = (det g)^2 det M.
  HoloPoly m1 = pmono(3, {1, 0, 0}, Scalar(1));
  HoloPoly m2 = pmono(3, {0, 1, 0}, Scalar(1));
  HoloPoly m3 = pmono(3, {0, 0, 1}, Scalar(1));
  auto sc = [](const Rational& r) { return Scalar(r); };
  // g M = ((g00 m1 + g01 m2, g00 m2 + g01 m3), (g10 m1 + g11 m2, g10 m2 + g11 m3))
  HoloPoly a = m1.scaled(sc(g[0][0])) + m2.scaled(sc(g[0][1]));
  HoloPoly b = m2.scaled(sc(g[0][0])) + m3.scaled(sc(g[0][1]));
  HoloPoly c = m1.scaled(sc(g[1][0])) + m2.scaled(sc(g[1][1]));
  HoloPoly d = m2.scaled(sc(g[1][0])) + m3.scaled(sc(g[1][1]));
  // (g M) g' entries
  HoloPoly e00 = a.scaled(sc(g[0][0])) + b.scaled(sc(g[0][1]));
  HoloPoly e01 = a.scaled(sc(g[1][0])) + b.scaled(sc(g[1][1]));
  HoloPoly e10 = c.scaled(sc(g[0][0])) + d.scaled(sc(g[0][1]));
  HoloPoly e11 = c.scaled(sc(g[1][0])) + d.scaled(sc(g[1][1]));
  HoloPoly lhs = e00 * e11 - e01 * e10;
  HoloPoly rhs = (m1 * m3 - m2 * m2).scaled(sc(out.detFactor));
  out.detIdentity = (lhs == rhs);

  // Translations z -> z + iv leave z + conj z unchanged: iv + conj(iv) = 0.
  out.translationFixed = true;
  for (int t = 0; t < 4; ++t) {
    Scalar entry = Scalar::i() * Scalar(rng.rational(5, 3));
    if (!(entry + entry.conj()).isZero()) out.translationFixed = false;
  }

  // Sampled tube points stay on the tube under z -> g z g' + iv'.
  out.samplesOnTube = true;
  for (int t = 0; t < samples; ++t) {
    Rational y1 = rng.rational(4, 3), y2 = rng.rational(4, 3);
    if (y1.isZero() && y2.isZero()) y1 = Rational(1);
    SMat z(2, SVec(2));
    z[0][0] = Scalar(y1 * y1);
    z[0][1] = z[1][0] = Scalar(y1 * y2);
    z[1][1] = Scalar(y2 * y2);
    for (int i = 0; i < 2; ++i)
      for (int j = i; j < 2; ++j) {
        Scalar iv = Scalar::i() * Scalar(rng.rational(4, 3));
        z[i][j] += iv;
        if (i != j) z[j][i] += iv;
      }
    // image = g z g' + iv'
    SMat gz(2, SVec(2)), img(2, SVec(2));
    for (int i = 0; i < 2; ++i)
      for (int j = 0; j < 2; ++j)
        for (int k = 0; k < 2; ++k) gz[i][j] += Scalar(g[i][k]) * z[k][j];
    for (int i = 0; i < 2; ++i)
      for (int j = 0; j < 2; ++j)
        for (int k = 0; k < 2; ++k) img[i][j] += gz[i][k] * Scalar(g[j][k]);
    for (int i = 0; i < 2; ++i)
      for (int j = i; j < 2; ++j) {
        Scalar iv = Scalar::i() * Scalar(rng.rational(4, 3));
        img[i][j] += iv;
        if (i != j) img[j][i] += iv;
      }
    if (detG.sign() != 0) {
      TubeMembership tm = tubeMembership(SymMatrixPoint::make(img));
      if (tm.verdict != TubeVerdict::OnTube) out.samplesOnTube = false;
    }
  }
  return out;
}

// ---------------------------------------------------------------------------
// The ten-dimensional field basis on E

namespace {

// Components of the quadratic field z M z for symmetric M = ((m1,m2),(m2,m3))
// in the coordinates (z1, z2, z3) <-> ((z1,z2),(z2,z3)).
HoloVectorField quadField(const Scalar& q1, const Scalar& q2, const Scalar& q3) {
  HoloVectorField f(3, false);
  f.comps[0] = pmono(3, {2, 0, 0}, q1) + pmono(3, {1, 1, 0}, Scalar(2) * q2) +
               pmono(3, {0, 2, 0}, q3);
  f.comps[1] = pmono(3, {1, 1, 0}, q1) + pmono(3, {1, 0, 1}, q2) + pmono(3, {0, 2, 0}, q2) +
               pmono(3, {0, 1, 1}, q3);
  f.comps[2] = pmono(3, {0, 2, 0}, q1) + pmono(3, {0, 1, 1}, Scalar(2) * q2) +
               pmono(3, {0, 0, 2}, q3);
  return f;
}

// Components of the linear field (c z + z c') d/dz for a 2x2 matrix c.
HoloVectorField linField(const Scalar& c00, const Scalar& c01, const Scalar& c10,
                         const Scalar& c11) {
  HoloVectorField f(3, false);
  f.comps[0] = pmono(3, {1, 0, 0}, Scalar(2) * c00) + pmono(3, {0, 1, 0}, Scalar(2) * c01);
  f.comps[1] = pmono(3, {1, 0, 0}, c10) + pmono(3, {0, 1, 0}, c00 + c11) + pmono(3, {0, 0, 1}, c01);
  f.comps[2] = pmono(3, {0, 1, 0}, Scalar(2) * c10) + pmono(3, {0, 0, 1}, Scalar(2) * c11);
  return f;
}

HoloVectorField constField(const Scalar& b1, const Scalar& b2, const Scalar& b3) {
  HoloVectorField f(3, false);
  f.comps[0] = HoloPoly::constant(3, b1);
  f.comps[1] = HoloPoly::constant(3, b2);
  f.comps[2] = HoloPoly::constant(3, b3);
  return f;
}

}  // namespace

std::vector<HoloVectorField> sp2Basis() {
  const Scalar i = Scalar::i(), one(1), zero(0);
  std::vector<HoloVectorField> out;
  // b in iV
  out.push_back(constField(i, zero, zero));
  out.push_back(constField(zero, i, zero));
  out.push_back(constField(zero, zero, i));
  // c real
  out.push_back(linField(one, zero, zero, zero));
  out.push_back(linField(zero, one, zero, zero));
  out.push_back(linField(zero, zero, one, zero));
  out.push_back(linField(zero, zero, zero, one));
  // d in iV
  out.push_back(quadField(i, zero, zero));
  out.push_back(quadField(zero, i, zero));
  out.push_back(quadField(zero, zero, i));
  return out;
}

HoloVectorField tubeZeta1() { return linField(Scalar(1), Scalar(0), Scalar(0), Scalar(0)); }
HoloVectorField tubeZeta2() { return linField(Scalar(0), Scalar(0), Scalar(0), Scalar(1)); }

HoloVectorField tubeRootField(const LatticePoint& nu) {
  const Scalar i = Scalar::i(), one(1), zero(0);
  if (nu == LatticePoint{0, 2}) return quadField(zero, zero, i);
  if (nu == LatticePoint{-1, 1}) return linField(zero, one, zero, zero);
  if (nu == LatticePoint{1, 1}) return quadField(zero, i, zero);
  if (nu == LatticePoint{-2, 0}) return constField(i, zero, zero);
  if (nu == LatticePoint{2, 0}) return quadField(i, zero, zero);
  if (nu == LatticePoint{-1, -1}) return constField(zero, i, zero);
  if (nu == LatticePoint{1, -1}) return linField(zero, zero, one, zero).scaled(Scalar(-1));
  if (nu == LatticePoint{0, -2}) return constField(zero, zero, i);
  throw std::invalid_argument("no root vector at " + nu.str());
}

std::optional<TruncatedSeries> coneTangency(const HoloVectorField& xi) {
  if (xi.ncoords != 3 || xi.hasW)
    throw std::invalid_argument("cone tangency expects fields on the 2x2 symmetric space");
  const VarSet ev{3, false};
  const int cutoff = 2 * (std::max(1, xi.degree()) + 2);
  // delta0 = det(z + conj z) = (z1 + cz1)(z3 + cz3) - (z2 + cz2)^2.
  auto gen = [&](int g) { return TruncatedSeries::generator(ev, cutoff, g); };
  TruncatedSeries d0 = (gen(ev.zIdx(0)) + gen(ev.czIdx(0))) * (gen(ev.zIdx(2)) + gen(ev.czIdx(2))) -
                       (gen(ev.zIdx(1)) + gen(ev.czIdx(1))) * (gen(ev.zIdx(1)) + gen(ev.czIdx(1)));
  TruncatedSeries xd = applyField(xi, d0);

  // Pull back through z = y y^T + i v, with real parameters
  // (y1, y2, v11, v12, v22) as the holomorphic generators of a fresh ring.
  const VarSet pv{5, false};
  auto pgen = [&](int j) { return TruncatedSeries::generator(pv, cutoff, pv.zIdx(j)); };
  const Scalar i = Scalar::i();
  // The parameters y, v are real, so the conjugate coordinates pull back to
  // the same generators with the opposite sign on the imaginary part.
  TruncatedSeries zImg[3] = {pgen(0) * pgen(0) + pgen(2).scaled(i),
                             pgen(0) * pgen(1) + pgen(3).scaled(i),
                             pgen(1) * pgen(1) + pgen(4).scaled(i)};
  TruncatedSeries czImg[3] = {pgen(0) * pgen(0) - pgen(2).scaled(i),
                              pgen(0) * pgen(1) - pgen(3).scaled(i),
                              pgen(1) * pgen(1) - pgen(4).scaled(i)};
  std::vector<TruncatedSeries> assign;
  for (int g = 0; g < ev.count(); ++g) {
    if (g == ev.vIdx()) {
      assign.push_back(TruncatedSeries::zero(pv, cutoff));
    } else if (ev.isHolomorphic(g)) {
      assign.push_back(zImg[g]);
    } else {
      assign.push_back(czImg[g - 3]);
    }
  }
  TruncatedSeries pulled = xd.substituted(assign, pv, cutoff);
  if (pulled.isZero()) return std::nullopt;
  return pulled;
}

bool ballFieldMembership(const HoloVectorField& xi) {
  // Basis of { (a + cz + zc' - z conj(a) z) d/dz : a in E, c skew-hermitian }.
  std::vector<HoloVectorField> basis;
  const Scalar i = Scalar::i(), one(1), zero(0);
  auto aField = [&](int slot, const Scalar& u) {
    Scalar b1 = slot == 0 ? u : zero, b2 = slot == 1 ? u : zero, b3 = slot == 2 ? u : zero;
    Scalar m = -u.conj();
    HoloVectorField f = constField(b1, b2, b3);
    Scalar q1 = slot == 0 ? m : zero, q2 = slot == 1 ? m : zero, q3 = slot == 2 ? m : zero;
    return f + quadField(q1, q2, q3);
  };
  for (int slot = 0; slot < 3; ++slot) {
    basis.push_back(aField(slot, one));
    basis.push_back(aField(slot, i));
  }
  basis.push_back(linField(i, zero, zero, zero));              // c = diag(i, 0)
  basis.push_back(linField(zero, zero, zero, i));              // c = diag(0, i)
  basis.push_back(linField(zero, one, -one, zero));            // c = ((0,1),(-1,0))
  basis.push_back(linField(zero, i, i, zero));                 // c = ((0,i),(i,0))
  return spanCoords(basis, xi).has_value();
}

// ---------------------------------------------------------------------------
// Cayley-type maps

RationalMap cayleyMap() {
  // z -> (z - e)(z + e)^{-1} on symmetric 2x2, coordinates (z1, z2, z3).
  RationalMap m;
  m.srcCoords = 3;
  m.dstCoords = 3;
  auto rf = [&](const HoloPoly& n, const HoloPoly& d) { return RationalFunction(n, d); };
  HoloPoly z1 = HoloPoly::coordinate(3, 0), z2 = HoloPoly::coordinate(3, 1),
           z3 = HoloPoly::coordinate(3, 2);
  HoloPoly one = HoloPoly::constant(3, Scalar(1));
  // det(z + e) = (z1 + 1)(z3 + 1) - z2^2
  HoloPoly det = (z1 + one) * (z3 + one) - z2 * z2;
  // (z - e)(z + e)^{-1} = (z - e) adj(z + e) / det
  // adj(z + e) = ((z3 + 1, -z2), (-z2, z1 + 1))
  HoloPoly n11 = (z1 - one) * (z3 + one) - z2 * z2;
  HoloPoly n12 = (z1 - one) * (-z2) + z2 * (z1 + one);  // = 2 z2 ... keep exact form
  HoloPoly n22 = (z3 - one) * (z1 + one) - z2 * z2;
  m.comps = {rf(n11, det), rf(n12, det), rf(n22, det)};
  // Inverse: w -> (e + w)(e - w)^{-1}.
  HoloPoly w1 = HoloPoly::coordinate(3, 0), w2 = HoloPoly::coordinate(3, 1),
           w3 = HoloPoly::coordinate(3, 2);
  HoloPoly detInv = (one - w1) * (one - w3) - w2 * w2;
  HoloPoly i11 = (one + w1) * (one - w3) + w2 * w2;
  HoloPoly i12 = (one + w1) * w2 + w2 * (one - w1);
  HoloPoly i22 = (one + w3) * (one - w1) + w2 * w2;
  m.inverseComps = {rf(i11, detInv), rf(i12, detInv), rf(i22, detInv)};
  return m;
}

RationalMap phiOcMap() {
  RationalMap m;
  m.srcCoords = 3;  // (w, z1, z2)
  m.dstCoords = 3;  // matrix entries (x1, x2, x3)
  HoloPoly w = HoloPoly::coordinate(3, 0), z1 = HoloPoly::coordinate(3, 1),
           z2 = HoloPoly::coordinate(3, 2);
  HoloPoly one = HoloPoly::constant(3, Scalar(1));
  HoloPoly den = one + z2;
  const Scalar r2 = Scalar::sqrt2();
  m.comps = {RationalFunction(w + w * z2 + z1 * z1, den),
             RationalFunction(z1.scaled(r2), den),
             RationalFunction(one - z2, den)};
  HoloPoly x = HoloPoly::coordinate(3, 0), y = HoloPoly::coordinate(3, 1),
           t = HoloPoly::coordinate(3, 2);
  HoloPoly oneT = HoloPoly::constant(3, Scalar(1)) + t;
  m.inverseComps = {RationalFunction(x + x * t - y * y, oneT),
                    RationalFunction(y.scaled(r2), oneT),
                    RationalFunction(HoloPoly::constant(3, Scalar(1)) - t, oneT)};
  return m;
}

namespace {

// Symmetric index helpers for p x p symmetric blocks stored as upper rows.
int symCount(int p) { return p * (p + 1) / 2; }
int symSlot(int p, int i, int j) {
  if (i > j) std::swap(i, j);
  int s = 0;
  for (int r = 0; r < i; ++r) s += p - r;
  return s + (j - i);
}

// phi_ob block map for sizes p (z2 block) and k (w block), p + k <= 3.
// Coordinates: w entries (symmetric k x k), then z1 (p x k), then z2
// (symmetric p x p). Destination: symmetric (k + p) x (k + p) entries in
// row-major upper order.
struct BlockLayout {
  int p, k;
  int nW, nZ1, nZ2, nSrc, nDst;
  BlockLayout(int p_, int k_) : p(p_), k(k_) {
    nW = symCount(k);
    nZ1 = p * k;
    nZ2 = symCount(p);
    nSrc = nW + nZ1 + nZ2;
    nDst = symCount(p + k);
  }
  int wSlot(int i, int j) const { return symSlot(k, i, j); }
  int z1Slot(int r, int c) const { return nW + r * k + c; }  // r < p, c < k
  int z2Slot(int i, int j) const { return nW + nZ1 + symSlot(p, i, j); }
  int dstSlot(int i, int j) const { return symSlot(p + k, i, j); }
};

// Polynomial matrices with one shared denominator per block keep the
// rational-function degrees small through the matrix algebra.
using PMat = std::vector<std::vector<HoloPoly>>;

PMat pmZero(int rows, int cols, int nc) {
  return PMat(rows, std::vector<HoloPoly>(cols, HoloPoly::zero(nc)));
}

PMat pmMul(const PMat& a, const PMat& b) {
  const size_t n = a.size(), m = b[0].size(), k = b.size();
  PMat out = pmZero(n, m, a[0][0].ncoords());
  for (size_t i = 0; i < n; ++i)
    for (size_t l = 0; l < k; ++l)
      for (size_t j = 0; j < m; ++j) out[i][j] = out[i][j] + a[i][l] * b[l][j];
  return out;
}

PMat pmTranspose(const PMat& a) {
  PMat out = pmZero(a[0].size(), a.size(), a[0][0].ncoords());
  for (size_t i = 0; i < a.size(); ++i)
    for (size_t j = 0; j < a[0].size(); ++j) out[j][i] = a[i][j];
  return out;
}

// det and adjugate for sizes 1 and 2 (the only inverted blocks).
HoloPoly pmDet(const PMat& a) {
  if (a.size() == 1) return a[0][0];
  if (a.size() == 2) return a[0][0] * a[1][1] - a[0][1] * a[1][0];
  throw std::invalid_argument("pmDet supports sizes 1..2");
}

PMat pmAdj(const PMat& a) {
  const int nc = a[0][0].ncoords();
  if (a.size() == 1) {
    PMat out = pmZero(1, 1, nc);
    out[0][0] = HoloPoly::constant(nc, Scalar(1));
    return out;
  }
  if (a.size() == 2) {
    PMat out = pmZero(2, 2, nc);
    out[0][0] = a[1][1];
    out[0][1] = -a[0][1];
    out[1][0] = -a[1][0];
    out[1][1] = a[0][0];
    return out;
  }
  throw std::invalid_argument("pmAdj supports sizes 1..2");
}

}  // namespace

RationalMap phiObMap(int p, int k) {
  if (p < 1 || k < 1 || p + k > 3) throw std::invalid_argument("phi_ob supports p + k <= 3");
  if (k != 1)
    throw std::invalid_argument(
        "k >= 2 is not a hypersurface graph; supported sizes have k = 1");
  BlockLayout L(p, k);
  RationalMap m;
  m.srcCoords = L.nSrc;
  m.dstCoords = L.nDst;
  const Scalar r2 = Scalar::sqrt2();

  // Source-side polynomial blocks.
  auto coord = [&](int slot) { return HoloPoly::coordinate(L.nSrc, slot); };
  PMat wMat = pmZero(k, k, L.nSrc), z1Mat = pmZero(p, k, L.nSrc), z2Mat = pmZero(p, p, L.nSrc);
  for (int i = 0; i < k; ++i)
    for (int j = 0; j < k; ++j) wMat[i][j] = coord(L.wSlot(i, j));
  for (int r = 0; r < p; ++r)
    for (int c = 0; c < k; ++c) z1Mat[r][c] = coord(L.z1Slot(r, c));
  for (int i = 0; i < p; ++i)
    for (int j = 0; j < p; ++j) z2Mat[i][j] = coord(L.z2Slot(i, j));
  PMat onePlus = z2Mat, oneMinus = z2Mat;
  for (int i = 0; i < p; ++i)
    for (int j = 0; j < p; ++j) {
      HoloPoly delta = HoloPoly::constant(L.nSrc, Scalar(i == j ? 1 : 0));
      onePlus[i][j] = delta + z2Mat[i][j];
      oneMinus[i][j] = delta - z2Mat[i][j];
    }
  // y = adj(1 + z2) / det(1 + z2); every block shares the denominator dy.
  HoloPoly dy = pmDet(onePlus);
  PMat yNum = pmAdj(onePlus);

  // A = w + z1' y z1, B = sqrt2 z1' y, C = (1 - z2) y.
  PMat z1T = pmTranspose(z1Mat);
  PMat aNum = pmMul(z1T, pmMul(yNum, z1Mat));
  for (int i = 0; i < k; ++i)
    for (int j = 0; j < k; ++j) aNum[i][j] = aNum[i][j] + wMat[i][j] * dy;
  PMat bNum = pmMul(z1T, yNum);
  for (auto& row : bNum)
    for (auto& e : row) e = e.scaled(r2);
  PMat cNum = pmMul(oneMinus, yNum);

  m.comps.assign(L.nDst, RationalFunction(L.nSrc));
  for (int i = 0; i < k + p; ++i)
    for (int j = i; j < k + p; ++j) {
      HoloPoly num = HoloPoly::zero(L.nSrc);
      if (i < k && j < k) num = aNum[i][j];
      else if (i < k) num = bNum[i][j - k];
      else num = cNum[i - k][j - k];
      m.comps[L.dstSlot(i, j)] = RationalFunction(num, dy);
    }

  // Inverse from the destination blocks A, B, C:
  //   z2 = adj(1+C)(1-C)/det(1+C),  z1 = sqrt2 adj(1+C) B'/det(1+C),
  //   w  = (A det(1+C) - B adj(1+C) B')/det(1+C).
  auto dcoord = [&](int slot) { return HoloPoly::coordinate(L.nDst, slot); };
  PMat aD = pmZero(k, k, L.nDst), bD = pmZero(k, p, L.nDst), cD = pmZero(p, p, L.nDst);
  for (int i = 0; i < k; ++i)
    for (int j = 0; j < k; ++j) aD[i][j] = dcoord(L.dstSlot(i, j));
  for (int i = 0; i < k; ++i)
    for (int j = 0; j < p; ++j) bD[i][j] = dcoord(L.dstSlot(i, k + j));
  for (int i = 0; i < p; ++i)
    for (int j = 0; j < p; ++j) cD[i][j] = dcoord(L.dstSlot(k + i, k + j));
  PMat onePlusC = cD, oneMinusC = cD;
  for (int i = 0; i < p; ++i)
    for (int j = 0; j < p; ++j) {
      HoloPoly delta = HoloPoly::constant(L.nDst, Scalar(i == j ? 1 : 0));
      onePlusC[i][j] = delta + cD[i][j];
      oneMinusC[i][j] = delta - cD[i][j];
    }
  HoloPoly dC = pmDet(onePlusC);
  PMat adjC = pmAdj(onePlusC);
  PMat z2Inv = pmMul(adjC, oneMinusC);
  PMat z1Inv = pmMul(adjC, pmTranspose(bD));
  for (auto& row : z1Inv)
    for (auto& e : row) e = e.scaled(r2);
  PMat wInv = pmMul(bD, pmMul(adjC, pmTranspose(bD)));
  for (int i = 0; i < k; ++i)
    for (int j = 0; j < k; ++j) wInv[i][j] = aD[i][j] * dC - wInv[i][j];

  m.inverseComps.assign(L.nSrc, RationalFunction(L.nDst));
  for (int i = 0; i < k; ++i)
    for (int j = i; j < k; ++j) m.inverseComps[L.wSlot(i, j)] = RationalFunction(wInv[i][j], dC);
  for (int r = 0; r < p; ++r)
    for (int c = 0; c < k; ++c)
      m.inverseComps[L.z1Slot(r, c)] = RationalFunction(z1Inv[r][c], dC);
  for (int i = 0; i < p; ++i)
    for (int j = i; j < p; ++j)
      m.inverseComps[L.z2Slot(i, j)] = RationalFunction(z2Inv[i][j], dC);
  return m;
}

namespace {

// Expands a rational function of the source coordinates as a series in the
// ambient germ ring (coordinate 0 = w), then restricts to the germ.
TruncatedSeries restrictRational(const RationalFunction& f, const HypersurfaceGerm& germ, int D,
                                 const std::vector<int>& gens, const VarSet& amb,
                                 int ambCutoff) {
  TruncatedSeries num = f.num.toSeries(amb, ambCutoff, gens);
  TruncatedSeries den = f.den.toSeries(amb, ambCutoff, gens);
  TruncatedSeries expanded = num * den.inverse();
  return restrictSeries(expanded, germ, D);
}

// The graph germ of the block realization (p, k): w + cw = x + conj x with
// x = conj(z1)' (1 - z2 conj(z2))^{-1} (z1 + z2 conj(z1)), all in the
// restricted ring over the source z-coordinates (everything except w).
HypersurfaceGerm blockGerm(int p, int k, int cutoff) {
  BlockLayout L(p, k);
  if (k != 1) throw std::invalid_argument("block germ implemented for k = 1");
  const int nz = L.nSrc - 1;  // z1 entries then z2 entries
  VarSet rv{nz, false};
  auto zGen = [&](int j) { return TruncatedSeries::generator(rv, cutoff, rv.zIdx(j)); };
  auto czGen = [&](int j) { return TruncatedSeries::generator(rv, cutoff, rv.czIdx(j)); };
  // z1 column (p x 1): coordinates 0..p-1; z2 symmetric: slots p...
  std::vector<TruncatedSeries> z1, cz1;
  for (int r = 0; r < p; ++r) {
    z1.push_back(zGen(r));
    cz1.push_back(czGen(r));
  }
  std::vector<std::vector<TruncatedSeries>> z2(p,
      std::vector<TruncatedSeries>(p, TruncatedSeries::zero(rv, cutoff)));
  std::vector<std::vector<TruncatedSeries>> cz2 = z2;
  for (int i = 0; i < p; ++i)
    for (int j = i; j < p; ++j) {
      int slot = p + symSlot(p, i, j);
      z2[i][j] = z2[j][i] = zGen(slot);
      cz2[i][j] = cz2[j][i] = czGen(slot);
    }
  // S = 1 - z2 cz2;  x = cz1' S^{-1} (z1 + z2 cz1).
  std::vector<std::vector<TruncatedSeries>> s(p,
      std::vector<TruncatedSeries>(p, TruncatedSeries::zero(rv, cutoff)));
  for (int i = 0; i < p; ++i)
    for (int j = 0; j < p; ++j) {
      TruncatedSeries acc = TruncatedSeries::zero(rv, cutoff);
      for (int l = 0; l < p; ++l) acc = acc + z2[i][l] * cz2[l][j];
      s[i][j] = (i == j ? TruncatedSeries::constant(rv, cutoff, Scalar(1)) : TruncatedSeries::zero(rv, cutoff)) - acc;
    }
  // Inverse of s via adjugate (p <= 2).
  std::vector<std::vector<TruncatedSeries>> sInv(p,
      std::vector<TruncatedSeries>(p, TruncatedSeries::zero(rv, cutoff)));
  if (p == 1) {
    sInv[0][0] = s[0][0].inverse();
  } else {
    TruncatedSeries det = s[0][0] * s[1][1] - s[0][1] * s[1][0];
    TruncatedSeries dInv = det.inverse();
    sInv[0][0] = s[1][1] * dInv;
    sInv[0][1] = -s[0][1] * dInv;
    sInv[1][0] = -s[1][0] * dInv;
    sInv[1][1] = s[0][0] * dInv;
  }
  std::vector<TruncatedSeries> rhs;
  for (int i = 0; i < p; ++i) {
    TruncatedSeries acc = z1[i];
    for (int l = 0; l < p; ++l) acc = acc + z2[i][l] * cz1[l];
    rhs.push_back(acc);
  }
  TruncatedSeries x = TruncatedSeries::zero(rv, cutoff);
  for (int i = 0; i < p; ++i) {
    TruncatedSeries acc = TruncatedSeries::zero(rv, cutoff);
    for (int l = 0; l < p; ++l) acc = acc + sInv[i][l] * rhs[l];
    x = x + cz1[i] * acc;
  }
  TruncatedSeries rho = x + x.conjugate();
  return HypersurfaceGerm::make(rho, false);
}

}  // namespace

MapVerifyReport mapVerify(const std::string& mapId, int D, int p, int k) {
  MapVerifyReport out;
  out.mapId = mapId;

  if (mapId == "cayley") {
    RationalMap m = cayleyMap();
    out.inverseIdentity = composeIdentityCheck(m) < 0;
    out.forwardIdentity = composeIdentityCheckReverse(m) < 0;
    // Sampled membership transport T -> R: det(e - z conj z) = 0 and
    // tr(e - z conj z) > 0 for images of tube points.
    DetRng rng(2718);
    bool ok = true;
    for (int t = 0; t < 12; ++t) {
      Rational y1 = rng.rational(3, 2), y2 = rng.rational(3, 2);
      if (y1.isZero() && y2.isZero()) y1 = Rational(1);
      Scalar z1 = Scalar(y1 * y1), z2 = Scalar(y1 * y2), z3 = Scalar(y2 * y2);
      z1 += Scalar::i() * Scalar(rng.rational(3, 2));
      z2 += Scalar::i() * Scalar(rng.rational(3, 2));
      z3 += Scalar::i() * Scalar(rng.rational(3, 2));
      std::vector<Scalar> pt{z1, z2, z3};
      Scalar den = m.comps[0].den.eval(pt);
      if (den.isZero()) continue;
      Scalar c1 = m.comps[0].num.eval(pt) / den;
      Scalar c2 = m.comps[1].num.eval(pt) / m.comps[1].den.eval(pt);
      Scalar c3 = m.comps[2].num.eval(pt) / m.comps[2].den.eval(pt);
      // e - z conj z for the image point
      SMat img = {{c1, c2}, {c2, c3}};
      SMat zz(2, SVec(2));
      for (int a = 0; a < 2; ++a)
        for (int b = 0; b < 2; ++b)
          for (int c = 0; c < 2; ++c) zz[a][b] += img[a][c] * img[c][b].conj();
      SMat rMat = {{Scalar(1) - zz[0][0], -zz[0][1]}, {-zz[1][0], Scalar(1) - zz[1][1]}};
      Scalar det = rMat[0][0] * rMat[1][1] - rMat[0][1] * rMat[1][0];
      Scalar tr = rMat[0][0] + rMat[1][1];
      if (!det.isZero() || !(tr.realPart().signReal() > 0)) ok = false;
    }
    out.targetIdentity = ok;
    // Base point of the domain: e in H maps to 0, the center of the ball.
    {
      std::vector<Scalar> e{Scalar(1), Scalar(0), Scalar(1)};
      bool zero = true;
      for (int j = 0; j < 3; ++j)
        if (!m.comps[j].num.eval(e).isZero()) zero = false;
      out.basePointOnTarget = zero;
    }
    return out;
  }

  if (mapId == "phi_oc" || (mapId == "phi_ob" && p == 1 && k == 1)) {
    RationalMap m = mapId == "phi_oc" ? phiOcMap() : phiObMap(1, 1);
    out.inverseIdentity = composeIdentityCheck(m) < 0;
    out.forwardIdentity = composeIdentityCheckReverse(m) < 0;

    HypersurfaceGerm germ = familyGerm(Rational(1), D);
    const VarSet amb{2, true};
    const int ambCutoff = D + 1;
    std::vector<int> gens{amb.wIdx(), amb.zIdx(0), amb.zIdx(1)};
    std::vector<TruncatedSeries> phi;
    for (int j = 0; j < 3; ++j)
      phi.push_back(restrictRational(m.comps[j], germ, D, gens, amb, ambCutoff));
    TruncatedSeries a = phi[0] + phi[0].conjugate();
    TruncatedSeries b = phi[1] + phi[1].conjugate();
    TruncatedSeries c = phi[2] + phi[2].conjugate();
    TruncatedSeries det = a * c - b * b;
    out.targetIdentity = det.isZeroToDegree(D);
    if (!out.targetIdentity && det.leadingTerm())
      out.residual = monomialStr(det.vars(), det.leadingTerm()->first) + " : " +
                     det.leadingTerm()->second.str();

    // Base point: phi(0) = ((0,0),(0,1)).
    std::vector<Scalar> origin{Scalar(0), Scalar(0), Scalar(0)};
    SMat img = {{m.comps[0].num.eval(origin) / m.comps[0].den.eval(origin),
                 m.comps[1].num.eval(origin) / m.comps[1].den.eval(origin)},
                {Scalar(0), m.comps[2].num.eval(origin) / m.comps[2].den.eval(origin)}};
    img[1][0] = img[0][1];
    TubeMembership tm = tubeMembership(SymMatrixPoint::make(img));
    out.basePointOnTarget = tm.verdict == TubeVerdict::OnTube;

    if (mapId == "phi_oc") {
      // Computed pushforward multiples onto the matrix-side fields.
      struct Probe {
        const char* name;
        HoloVectorField src;
        HoloVectorField dst;
      };
      std::vector<Probe> probes;
      probes.push_back({"zeta1 -> zeta1", zeta1Field(), tubeZeta1()});
      probes.push_back({"eta -> root(-1,1)", etaField(), tubeRootField(LatticePoint{-1, 1})});
      probes.push_back({"chi -> zeta2", chiField(), tubeZeta2()});
      probes.push_back({"root(2) -> root(2,0)", rootField(LatticePoint{2, 0}, Rational(1)),
                        tubeRootField(LatticePoint{2, 0})});
      probes.push_back({"root(-2) -> root(-2,0)", rootField(LatticePoint{-2, 0}, Rational(1)),
                        tubeRootField(LatticePoint{-2, 0})});
      for (auto& pr : probes) {
        PushforwardResult r = pushforward(pr.src, m, pr.dst);
        out.pushforwardFactors[pr.name] = r.proportional ? r.factor.str() : "mismatch";
      }
    }
    return out;
  }

  if (mapId == "phi_ob") {
    RationalMap m = phiObMap(p, k);
    out.inverseIdentity = composeIdentityCheck(m) < 0;
    out.forwardIdentity = composeIdentityCheckReverse(m) < 0;

    HypersurfaceGerm germ = blockGerm(p, k, D);
    BlockLayout L(p, k);
    const VarSet amb{L.nSrc - 1, true};
    const int ambCutoff = D + 1;
    std::vector<int> gens;
    gens.push_back(amb.wIdx());
    for (int j = 0; j < L.nSrc - 1; ++j) gens.push_back(amb.zIdx(j));
    std::vector<TruncatedSeries> phi;
    for (int j = 0; j < L.nDst; ++j)
      phi.push_back(restrictRational(m.comps[j], germ, D, gens, amb, ambCutoff));
    // det(Phi + conj Phi) over the full (p + k) x (p + k) symmetric matrix.
    const int n = p + k;
    std::vector<std::vector<TruncatedSeries>> re(n,
        std::vector<TruncatedSeries>(n, TruncatedSeries::zero(germ.rho().vars(), D)));
    for (int i = 0; i < n; ++i)
      for (int j = i; j < n; ++j) {
        TruncatedSeries e = phi[L.dstSlot(i, j)];
        re[i][j] = re[j][i] = e + e.conjugate();
      }
    TruncatedSeries det = TruncatedSeries::zero(germ.rho().vars(), D);
    if (n == 2) {
      det = re[0][0] * re[1][1] - re[0][1] * re[1][0];
    } else {
      det = re[0][0] * (re[1][1] * re[2][2] - re[1][2] * re[2][1]) -
            re[0][1] * (re[1][0] * re[2][2] - re[1][2] * re[2][0]) +
            re[0][2] * (re[1][0] * re[2][1] - re[1][1] * re[2][0]);
    }
    out.targetIdentity = det.isZeroToDegree(D);
    if (!out.targetIdentity && det.leadingTerm())
      out.residual = monomialStr(det.vars(), det.leadingTerm()->first) + " : " +
                     det.leadingTerm()->second.str();

    // Base point: image has real part 2 diag(0_k, 1_p); inertia (p, 0).
    std::vector<Scalar> origin(L.nSrc, Scalar(0));
    QMat reOrigin(n, QVec(n));
    bool rational = true;
    for (int i = 0; i < n; ++i)
      for (int j = i; j < n; ++j) {
        Scalar e = m.comps[L.dstSlot(i, j)].num.eval(origin) /
                   m.comps[L.dstSlot(i, j)].den.eval(origin);
        Scalar reE = e + e.conj();
        if (!reE.isRational()) rational = false;
        reOrigin[i][j] = reOrigin[j][i] = reE.one();
      }
    Inertia in = coneType(reOrigin);
    out.basePointOnTarget = rational && in.pos == p && in.neg == 0;
    return out;
  }

  throw std::invalid_argument("unknown map id: " + mapId);
}

// ---------------------------------------------------------------------------
// Invariant function checks on SL(2, C)

DeltaReport deltaChecks(int samples, DetRng& rng) {
  DeltaReport out;
  const VarSet ev{4, false};  // entries a, b, c, d and their conjugates
  const int cutoff = 4;
  auto gen = [&](int j) { return TruncatedSeries::generator(ev, cutoff, ev.zIdx(j)); };
  auto cgen = [&](int j) { return TruncatedSeries::generator(ev, cutoff, ev.czIdx(j)); };
  TruncatedSeries a = gen(0), b = gen(1), c = gen(2), d = gen(3);
  TruncatedSeries ca = cgen(0), cb = cgen(1), cc = cgen(2), cd = cgen(3);
  TruncatedSeries two = TruncatedSeries::constant(ev, cutoff, Scalar(2));
  TruncatedSeries four = TruncatedSeries::constant(ev, cutoff, Scalar(4));

  auto deltaOf = [&](const TruncatedSeries& m11, const TruncatedSeries& m12,
                     const TruncatedSeries& m21, const TruncatedSeries& m22) {
    return (m11 + m11.conjugate()) * (m22 + m22.conjugate()) -
           (m12 + m12.conjugate()) * (m21 + m21.conjugate()) - two;
  };

  TruncatedSeries delta = deltaOf(a, b, c, d);
  // j z = ((i c, i d), (i a, i b)).
  const Scalar i = Scalar::i();
  TruncatedSeries deltaJ = deltaOf(c.scaled(i), d.scaled(i), a.scaled(i), b.scaled(i));
  // Free identity behind delta(jz) = -delta(z) on det z = 1:
  //   delta(jz) + delta(z) = 2 det z + 2 conj(det z) - 4.
  TruncatedSeries detz = a * d - b * c;
  TruncatedSeries lhs = deltaJ + delta;
  TruncatedSeries rhs = detz.scaled(Scalar(2)) + detz.conjugate().scaled(Scalar(2)) - four;
  out.flipIdentity = (lhs == rhs);

  // delta(g z h^{-1}) = delta(z) for sampled rational g, h with det 1.
  auto elemSL2 = [&](bool gaussian) {
    // product of elementary matrices, det exactly 1
    SMat m = {{Scalar(1), Scalar(0)}, {Scalar(0), Scalar(1)}};
    for (int step = 0; step < 3; ++step) {
      Scalar x = gaussian ? rng.gaussian(3, 2) : Scalar(rng.rational(3, 2));
      SMat e = {{Scalar(1), Scalar(0)}, {Scalar(0), Scalar(1)}};
      if (step % 2 == 0) e[0][1] = x;
      else e[1][0] = x;
      SMat prod(2, SVec(2));
      for (int r = 0; r < 2; ++r)
        for (int s = 0; s < 2; ++s)
          for (int t = 0; t < 2; ++t) prod[r][s] += m[r][t] * e[t][s];
      m = prod;
    }
    return m;
  };

  out.leftRightInvariance = true;
  for (int t = 0; t < samples; ++t) {
    SMat g = elemSL2(false), h = elemSL2(false);
    // h^{-1} for det 1: ((h22, -h12), (-h21, h11))
    SMat hi = {{h[1][1], -h[0][1]}, {-h[1][0], h[0][0]}};
    // entries of g z h^{-1} as linear series in (a, b, c, d)
    TruncatedSeries zM[2][2] = {{a, b}, {c, d}};
    TruncatedSeries res[2][2] = {{TruncatedSeries::zero(ev, cutoff), TruncatedSeries::zero(ev, cutoff)},
                                 {TruncatedSeries::zero(ev, cutoff), TruncatedSeries::zero(ev, cutoff)}};
    for (int r = 0; r < 2; ++r)
      for (int s = 0; s < 2; ++s)
        for (int u = 0; u < 2; ++u)
          for (int v = 0; v < 2; ++v)
            res[r][s] = res[r][s] + zM[u][v].scaled(g[r][u] * hi[v][s]);
    TruncatedSeries moved = deltaOf(res[0][0], res[0][1], res[1][0], res[1][1]);
    if (!(moved == delta)) out.leftRightInvariance = false;
  }

  // Hermitian variant: delta'(z) = det(z + z*) - 2 invariant under z -> g z g*.
  auto deltaHerm = [&](const TruncatedSeries& m11, const TruncatedSeries& m12,
                       const TruncatedSeries& m21, const TruncatedSeries& m22) {
    // z* entries: conj transpose; formal conjugate swaps generators.
    return (m11 + m11.conjugate()) * (m22 + m22.conjugate()) -
           (m12 + m21.conjugate()) * (m21 + m12.conjugate()) - two;
  };
  TruncatedSeries deltaH = deltaHerm(a, b, c, d);
  out.hermitianInvariance = true;
  for (int t = 0; t < samples; ++t) {
    SMat g = elemSL2(true);
    TruncatedSeries zM[2][2] = {{a, b}, {c, d}};
    TruncatedSeries gz[2][2] = {{TruncatedSeries::zero(ev, cutoff), TruncatedSeries::zero(ev, cutoff)},
                                {TruncatedSeries::zero(ev, cutoff), TruncatedSeries::zero(ev, cutoff)}};
    for (int r = 0; r < 2; ++r)
      for (int s = 0; s < 2; ++s)
        for (int u = 0; u < 2; ++u) gz[r][s] = gz[r][s] + zM[u][s].scaled(g[r][u]);
    TruncatedSeries gzg[2][2] = {{TruncatedSeries::zero(ev, cutoff), TruncatedSeries::zero(ev, cutoff)},
                                 {TruncatedSeries::zero(ev, cutoff), TruncatedSeries::zero(ev, cutoff)}};
    for (int r = 0; r < 2; ++r)
      for (int s = 0; s < 2; ++s)
        for (int u = 0; u < 2; ++u) gzg[r][s] = gzg[r][s] + gz[r][u].scaled(g[s][u].conj());
    TruncatedSeries moved = deltaHerm(gzg[0][0], gzg[0][1], gzg[1][0], gzg[1][1]);
    if (!(moved == deltaH)) out.hermitianInvariance = false;
  }

  // delta' at z = ((1, i), (i, 0)): det((2,0),(0,0)) - 2 = -2.
  {
    SMat z = {{Scalar(1), Scalar::i()}, {Scalar::i(), Scalar(0)}};
    SMat zs(2, SVec(2));
    for (int r = 0; r < 2; ++r)
      for (int s = 0; s < 2; ++s) zs[r][s] = z[s][r].conj();
    SMat sum(2, SVec(2));
    for (int r = 0; r < 2; ++r)
      for (int s = 0; s < 2; ++s) sum[r][s] = z[r][s] + zs[r][s];
    Scalar dh = symDet2(sum) - Scalar(2);
    out.criticalValueExample = (dh == Scalar(-2));
  }
  return out;
}

// ---------------------------------------------------------------------------
// Global invariants of the deformed tubes

QtMembership lemmaQtMembership(const std::vector<Rational>& y, const QMat& v) {
  if (y.size() != 2 || v.size() != 2) throw std::invalid_argument("expected 2x2 data");
  if (y[0].isZero() && y[1].isZero()) throw std::domain_error("not on T");
  if (v[0][1] != v[1][0]) throw std::invalid_argument("v must be symmetric");
  QtMembership out;

  // Membership in N: v = r (y y^T) + s e.
  QMat sys = {{y[0] * y[0], Rational(1)}, {y[0] * y[1], Rational(0)}, {y[1] * y[1], Rational(1)}};
  QVec rhs = {v[0][0], v[0][1], v[1][1]};
  auto sol = solveQ(sys, rhs, 2);
  out.inN = sol.has_value();
  if (sol) {
    out.r = (*sol)[0];
    out.s = (*sol)[1];
  }

  // phi(z) = (tr z, tr z^2 - (tr z)^2) with the normalized trace.
  SMat z(2, SVec(2));
  z[0][0] = Scalar(y[0] * y[0]) + Scalar::i() * Scalar(v[0][0]);
  z[0][1] = z[1][0] = Scalar(y[0] * y[1]) + Scalar::i() * Scalar(v[0][1]);
  z[1][1] = Scalar(y[1] * y[1]) + Scalar::i() * Scalar(v[1][1]);
  const Scalar half(Rational(1, 2));
  Scalar tr = (z[0][0] + z[1][1]) * half;
  SMat z2(2, SVec(2));
  for (int i = 0; i < 2; ++i)
    for (int j = 0; j < 2; ++j)
      for (int k = 0; k < 2; ++k) z2[i][j] += z[i][k] * z[k][j];
  Scalar tr2 = (z2[0][0] + z2[1][1]) * half;
  out.phi1 = tr;
  out.phi2 = tr2 - tr * tr;

  // Certificate: x2 = x1^2 - y2^2 / (4 x1^2), equality on N, strict < on W.
  Rational x1 = out.phi1.realPart().one();
  Rational x2 = out.phi2.realPart().one();
  Rational y2im = out.phi2.imagPart().one();
  Rational bound = x1 * x1 - y2im * y2im / (Rational(4) * x1 * x1);
  out.certificate = out.inN ? (x2 == bound) : (x2 < bound);
  return out;
}

SigmaResult sigmaT(const std::optional<Rational>& t) {
  SigmaResult out;
  if (!t) {
    out.unbounded = true;
    return out;
  }
  if (t->sign() <= 0) throw std::domain_error("deformation parameter must be positive");
  out.count = t->num();  // canonical form has gcd(p, q) = 1, q > 0
  return out;
}

std::string pi1Tube(int n, int p, int q) {
  if (n < 3 || p < 0 || q < 0 || p + q <= 0 || p + q >= n)
    throw std::invalid_argument("arguments outside the tube range (n >= 3, 0 < p+q < n)");
  if (n == 3 && p == 1 && q == 1) return "Q8";
  if (n > 3 && p > 0 && q > 0) return "Z2+Z2";
  return "Z2";
}

QrSeriesReport qrSeries(int kMax) {
  if (kMax < 4) throw std::invalid_argument("kMax must be at least 4");
  QrSeriesReport out;
  out.cOverPi.resize(kMax + 1);
  out.aOverPi.resize(kMax + 1);
  out.cOverPi[0] = Rational(2);
  out.cOverPi[1] = Rational(0);
  for (int k = 2; k <= kMax; ++k)
    out.cOverPi[k] = out.cOverPi[k - 2] * Rational(k - 1, k);
  Rational binom(1);
  out.aOverPi[0] = out.cOverPi[0];
  for (int k = 1; k <= kMax; ++k) {
    binom = binom * (Rational(1, 2) - Rational(k - 1)) / Rational(k);
    out.aOverPi[k] = binom * out.cOverPi[k];
  }
  // Independent check of the recursion against the closed double-factorial
  // form c_{2m} = 2 pi (2m-1)!! / (2m)!!.
  out.recursionVerified = true;
  Rational closed(2);
  for (int m = 1; 2 * m <= kMax; ++m) {
    closed = closed * Rational(2 * m - 1, 2 * m);
    if (out.cOverPi[2 * m] != closed) out.recursionVerified = false;
    if (2 * m + 1 <= kMax && !out.cOverPi[2 * m + 1].isZero()) out.recursionVerified = false;
  }
  // Radius estimate |a_k|^{-1/k} at k = kMax (even index; floating point,
  // report only).
  int k = kMax % 2 == 0 ? kMax : kMax - 1;
  const Rational& ak = out.aOverPi[k];
  signed long int expNum = 0, expDen = 0;
  double mNum = mpz_get_d_2exp(&expNum, mpz_class(ak.num()).get_mpz_t());
  double mDen = mpz_get_d_2exp(&expDen, mpz_class(ak.den()).get_mpz_t());
  double log2a = std::log2(std::fabs(mNum)) + static_cast<double>(expNum) -
                 (std::log2(std::fabs(mDen)) + static_cast<double>(expDen)) +
                 std::log2(3.14159265358979323846);
  out.radiusEstimate = std::exp2(-log2a / static_cast<double>(k));
  return out;
}

// ---------------------------------------------------------------------------
// The affine group on the covering coordinates

namespace {

std::array<Rational, 3> addV(const std::array<Rational, 3>& a, const std::array<Rational, 3>& b) {
  return {a[0] + b[0], a[1] + b[1], a[2] + b[2]};
}

bool isZeroV(const std::array<Rational, 3>& a) {
  return a[0].isZero() && a[1].isZero() && a[2].isZero();
}

void mergeTranslation(std::map<Rational, std::array<Rational, 3>>& into,
                      const Rational& exponent, const std::array<Rational, 3>& vec) {
  if (isZeroV(vec)) return;
  auto [it, inserted] = into.emplace(exponent, vec);
  if (!inserted) {
    it->second = addV(it->second, vec);
    if (isZeroV(it->second)) into.erase(it);
  }
}

}  // namespace

std::array<Rational, 3> lambdaQuarter(int quarterTurns, const std::array<Rational, 3>& v) {
  int q = ((quarterTurns % 4) + 4) % 4;
  // mu = rotation by psi/2 = q pi/4; lambda v = mu v mu'.
  Scalar c, s;
  const Scalar h = Scalar::sqrt2() * Scalar(Rational(1, 2));
  switch (q) {
    case 0: c = Scalar(1); s = Scalar(0); break;
    case 1: c = h; s = h; break;
    case 2: c = Scalar(0); s = Scalar(1); break;
    default: c = -h; s = h; break;
  }
  Scalar v11(v[0]), v12(v[1]), v22(v[2]);
  // mu = ((c, s), (-s, c)); m = mu v mu'
  Scalar m11 = c * (c * v11 + s * v12) + s * (c * v12 + s * v22);
  Scalar m12 = (-s) * (c * v11 + s * v12) + c * (c * v12 + s * v22);
  Scalar m22 = (-s) * (-s * v11 + c * v12) + c * (-s * v12 + c * v22);
  if (!m11.isRational() || !m12.isRational() || !m22.isRational())
    throw std::logic_error("quarter-turn rotation should stay rational");
  return {m11.one(), m12.one(), m22.one()};
}

ThetaElement ThetaElement::make(const Rational& s, int quarterTurns,
                                const std::array<Rational, 3>& w) {
  ThetaElement e;
  e.s = s;
  e.quarterTurns = quarterTurns;
  mergeTranslation(e.translation, Rational(0), w);
  return e;
}

bool operator==(const ThetaElement& a, const ThetaElement& b) {
  return a.s == b.s && a.quarterTurns == b.quarterTurns && a.translation == b.translation;
}

ThetaElement thetaCompose(const ThetaElement& a, const ThetaElement& b) {
  ThetaElement out;
  out.s = a.s + b.s;
  out.quarterTurns = a.quarterTurns + b.quarterTurns;
  // (theta_a o theta_b)(x): translation part  e^{s_a} lambda_{psi_a} w_b + w_a.
  for (const auto& [e, vec] : b.translation)
    mergeTranslation(out.translation, e + a.s, lambdaQuarter(a.quarterTurns, vec));
  for (const auto& [e, vec] : a.translation) mergeTranslation(out.translation, e, vec);
  return out;
}

CoverPoint thetaApply(const ThetaElement& g, const CoverPoint& x) {
  CoverPoint out;
  out.r = x.r + g.s;
  out.quarterTurns = x.quarterTurns + g.quarterTurns;
  for (const auto& [e, vec] : x.v)
    mergeTranslation(out.v, e + g.s, lambdaQuarter(g.quarterTurns, vec));
  for (const auto& [e, vec] : g.translation) mergeTranslation(out.v, e, vec);
  return out;
}

bool operator==(const CoverPoint& a, const CoverPoint& b) {
  return a.r == b.r && a.quarterTurns == b.quarterTurns && a.v == b.v;
}

}  // namespace crtube
