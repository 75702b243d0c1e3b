#include "crtube/ratfunc.hpp"

#include <stdexcept>

namespace crtube {

RationalFunction::RationalFunction(HoloPoly n, HoloPoly d) : num(std::move(n)), den(std::move(d)) {
  if (den.isZero()) throw std::domain_error("zero denominator polynomial");
}

RationalFunction operator+(const RationalFunction& a, const RationalFunction& b) {
  return RationalFunction(a.num * b.den + b.num * a.den, a.den * b.den);
}

RationalFunction operator-(const RationalFunction& a, const RationalFunction& b) {
  return RationalFunction(a.num * b.den - b.num * a.den, a.den * b.den);
}

RationalFunction operator*(const RationalFunction& a, const RationalFunction& b) {
  return RationalFunction(a.num * b.num, a.den * b.den);
}

RationalFunction RationalFunction::inv() const {
  if (num.isZero()) throw std::domain_error("inverse of zero rational function");
  return RationalFunction(den, num);
}

RationalFunction composePoly(const HoloPoly& p, const std::vector<RationalFunction>& args) {
  const int n = p.ncoords();
  if (static_cast<int>(args.size()) != n)
    throw std::invalid_argument("composition needs one argument per coordinate");
  const int m = args.empty() ? 0 : args[0].num.ncoords();
  // Common-denominator form: with M_k the largest exponent of coordinate k,
  //   p(N/D) = sum_e c_e prod N_k^{e_k} D_k^{M_k - e_k}  /  prod D_k^{M_k},
  // which keeps denominators from multiplying per term.
  std::vector<int> maxExp(n, 0);
  for (const auto& [e, c] : p.terms())
    for (int k = 0; k < n; ++k) maxExp[k] = std::max<int>(maxExp[k], e[k]);

  std::vector<std::vector<HoloPoly>> numPow(n), denPow(n);
  for (int k = 0; k < n; ++k) {
    numPow[k].push_back(HoloPoly::constant(m, Scalar(1)));
    denPow[k].push_back(HoloPoly::constant(m, Scalar(1)));
    for (int j = 1; j <= maxExp[k]; ++j) {
      numPow[k].push_back(numPow[k].back() * args[k].num);
      denPow[k].push_back(denPow[k].back() * args[k].den);
    }
  }
  HoloPoly num = HoloPoly::zero(m);
  for (const auto& [e, c] : p.terms()) {
    HoloPoly term = HoloPoly::constant(m, c);
    for (int k = 0; k < n; ++k) {
      if (e[k] > 0) term = term * numPow[k][e[k]];
      if (maxExp[k] - e[k] > 0) term = term * denPow[k][maxExp[k] - e[k]];
    }
    num = num + term;
  }
  HoloPoly den = HoloPoly::constant(m, Scalar(1));
  for (int k = 0; k < n; ++k)
    if (maxExp[k] > 0) den = den * denPow[k][maxExp[k]];
  return RationalFunction(num, den);
}

int composeIdentityCheck(const RationalMap& map) {
  // inverse o map, in source coordinates.
  for (int k = 0; k < map.srcCoords; ++k) {
    RationalFunction comp = composePoly(map.inverseComps[k].num, map.comps) *
                            composePoly(map.inverseComps[k].den, map.comps).inv();
    if (!eq(comp, RationalFunction::coordinate(map.srcCoords, k))) return k;
  }
  return -1;
}

int composeIdentityCheckReverse(const RationalMap& map) {
  for (int k = 0; k < map.dstCoords; ++k) {
    RationalFunction comp = composePoly(map.comps[k].num, map.inverseComps) *
                            composePoly(map.comps[k].den, map.inverseComps).inv();
    if (!eq(comp, RationalFunction::coordinate(map.dstCoords, k))) return k;
  }
  return -1;
}

PushforwardResult pushforward(const HoloVectorField& xi, const RationalMap& map,
                              const HoloVectorField& target) {
  if (!map.hasInverse())
    throw std::invalid_argument("pushforward requires a map with an explicit inverse");
  if (xi.ncoords != map.srcCoords || target.ncoords != map.dstCoords)
    throw std::invalid_argument("pushforward: coordinate mismatch");

  const int n = map.srcCoords;
  const int m = map.dstCoords;

  // (Dphi . xi)_i = sum_j d(phi_i)/dx_j xi_j, as rational functions in x.
  std::vector<RationalFunction> push;
  push.reserve(m);
  for (int i = 0; i < m; ++i) {
    RationalFunction acc = RationalFunction::constant(n, Scalar(0));
    for (int j = 0; j < n; ++j) {
      if (xi.comps[j].isZero()) continue;
      const HoloPoly& nu = map.comps[i].num;
      const HoloPoly& de = map.comps[i].den;
      RationalFunction dphi(nu.partial(j) * de - nu * de.partial(j), de * de);
      acc = acc + dphi * RationalFunction::ofPoly(xi.comps[j]);
    }
    push.push_back(acc);
  }

  // target_i o phi, as rational functions in x.
  std::vector<RationalFunction> pulled;
  pulled.reserve(m);
  for (int i = 0; i < m; ++i) pulled.push_back(composePoly(target.comps[i], map.comps));

  // Solve push_i = c pulled_i: with P_i = push_i.num * pulled_i.den and
  // Q_i = pulled_i.num * push_i.den the condition is P_i = c Q_i for all i.
  PushforwardResult out;
  std::optional<Scalar> c;
  for (int i = 0; i < m; ++i) {
    HoloPoly p = push[i].num * pulled[i].den;
    HoloPoly q = pulled[i].num * push[i].den;
    if (q.isZero()) {
      if (!p.isZero()) {
        out.residual = "component " + std::to_string(i) + ": target vanishes, image does not";
        return out;
      }
      continue;
    }
    if (!c) {
      const auto& [e, qc] = *q.terms().begin();
      c = p.coefficient(e) / qc;
    }
    if (!(p == q.scaled(*c))) {
      out.residual = "component " + std::to_string(i) + ": not a constant multiple";
      return out;
    }
  }
  out.proportional = true;
  out.factor = c.value_or(Scalar(0));
  return out;
}

RFMat rfMatMul(const RFMat& a, const RFMat& b) {
  const size_t n = a.size(), m = b[0].size(), k = b.size();
  const int nc = a[0][0].num.ncoords();
  RFMat out(n, std::vector<RationalFunction>(m, RationalFunction(nc)));
  for (size_t i = 0; i < n; ++i)
    for (size_t l = 0; l < k; ++l)
      for (size_t j = 0; j < m; ++j) out[i][j] = out[i][j] + a[i][l] * b[l][j];
  return out;
}

RationalFunction rfDet(const RFMat& a) {
  const size_t n = a.size();
  if (n == 1) return a[0][0];
  if (n == 2) return a[0][0] * a[1][1] - a[0][1] * a[1][0];
  if (n == 3) {
    return a[0][0] * (a[1][1] * a[2][2] - a[1][2] * a[2][1]) -
           a[0][1] * (a[1][0] * a[2][2] - a[1][2] * a[2][0]) +
           a[0][2] * (a[1][0] * a[2][1] - a[1][1] * a[2][0]);
  }
  throw std::invalid_argument("rfDet supports sizes 1..3");
}

RFMat rfMatInverse(const RFMat& a) {
  const size_t n = a.size();
  RationalFunction det = rfDet(a);
  RationalFunction dInv = det.inv();
  RFMat out(n, std::vector<RationalFunction>(n, RationalFunction(a[0][0].num.ncoords())));
  if (n == 1) {
    out[0][0] = dInv;
    return out;
  }
  if (n == 2) {
    out[0][0] = a[1][1] * dInv;
    out[0][1] = -a[0][1] * dInv;
    out[1][0] = -a[1][0] * dInv;
    out[1][1] = a[0][0] * dInv;
    return out;
  }
  if (n == 3) {
    auto minor = [&](size_t r, size_t c) {
      RFMat m2;
      for (size_t i = 0; i < 3; ++i) {
        if (i == r) continue;
        std::vector<RationalFunction> row;
        for (size_t j = 0; j < 3; ++j)
          if (j != c) row.push_back(a[i][j]);
        m2.push_back(std::move(row));
      }
      return rfDet(m2);
    };
    for (size_t i = 0; i < 3; ++i)
      for (size_t j = 0; j < 3; ++j) {
        RationalFunction cof = minor(j, i);
        if ((i + j) % 2 == 1) cof = -cof;
        out[i][j] = cof * dInv;
      }
    return out;
  }
  throw std::invalid_argument("rfMatInverse supports sizes 1..3");
}

}  // namespace crtube
