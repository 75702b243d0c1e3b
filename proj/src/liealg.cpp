#include "crtube/liealg.hpp"

#include <sstream>
#include <stdexcept>

namespace crtube {

namespace {

// Slot map: every (coordinate, monomial, tower component) that appears in any
// of the fields becomes one real coordinate, in deterministic order.
struct SlotMap {
  std::map<std::tuple<int, PExpo, int>, int> index;

  static SlotMap build(const std::vector<HoloVectorField>& fields) {
    SlotMap sm;
    for (const auto& f : fields) {
      for (int k = 0; k < f.ncoords; ++k) {
        for (const auto& [e, c] : f.comps[k].terms()) {
          for (int comp = 0; comp < 4; ++comp)
            sm.index.emplace(std::make_tuple(k, e, comp), 0);
        }
      }
    }
    int n = 0;
    for (auto& [key, idx] : sm.index) idx = n++;
    return sm;
  }

  int size() const { return static_cast<int>(index.size()); }

  // Coordinate vector of a field; nullopt if the field uses a slot that is
  // not present in the map.
  std::optional<QVec> vectorOf(const HoloVectorField& f) const {
    QVec v(size());
    for (int k = 0; k < f.ncoords; ++k) {
      for (const auto& [e, c] : f.comps[k].terms()) {
        const Rational comps[4] = {c.one(), c.iPart(), c.sqrt2Part(), c.iSqrt2Part()};
        for (int comp = 0; comp < 4; ++comp) {
          if (comps[comp].isZero()) continue;
          auto it = index.find(std::make_tuple(k, e, comp));
          if (it == index.end()) return std::nullopt;
          v[it->second] = comps[comp];
        }
      }
    }
    return v;
  }
};

// Rows = slots, columns = fields.
QMat slotMatrix(const SlotMap& sm, const std::vector<HoloVectorField>& fields) {
  QMat m(sm.size(), QVec(fields.size()));
  for (size_t j = 0; j < fields.size(); ++j) {
    QVec col = *sm.vectorOf(fields[j]);
    for (int i = 0; i < sm.size(); ++i) m[i][j] = col[i];
  }
  return m;
}

}  // namespace

QVec LiePresentation::bracketCoords(const QVec& x, const QVec& y) const {
  const int n = dim();
  QVec out(n);
  for (int i = 0; i < n; ++i) {
    if (x[i].isZero()) continue;
    for (int j = 0; j < n; ++j) {
      if (y[j].isZero()) continue;
      const Rational f = x[i] * y[j];
      for (int k = 0; k < n; ++k) {
        if (!c[i][j][k].isZero()) out[k] += f * c[i][j][k];
      }
    }
  }
  return out;
}

QMat LiePresentation::adMatrix(int r) const {
  const int n = dim();
  QMat m(n, QVec(n));
  for (int j = 0; j < n; ++j)
    for (int k = 0; k < n; ++k) m[k][j] = c[r][j][k];
  return m;
}

LiePresentation structureConstants(const std::vector<HoloVectorField>& fields) {
  if (fields.empty()) throw std::invalid_argument("empty basis");
  const int n = static_cast<int>(fields.size());
  SlotMap sm = SlotMap::build(fields);
  QMat m = slotMatrix(sm, fields);

  // Independence over Q (real span).
  Rref r = rrefQ(m, n);
  if (r.rank() < n) {
    QMat dep = nullspaceQ(r);
    std::ostringstream os;
    os << "dependent input basis:";
    for (int j = 0; j < n; ++j)
      if (!dep[0][j].isZero()) os << " " << dep[0][j].str() << "*b" << (j + 1);
    os << " = 0";
    throw std::invalid_argument(os.str());
  }

  LiePresentation p;
  p.basis = fields;
  p.c.assign(n, std::vector<std::vector<Rational>>(n, std::vector<Rational>(n)));
  for (int i = 0; i < n; ++i) {
    for (int j = i + 1; j < n; ++j) {
      HoloVectorField br = bracket(fields[i], fields[j]);
      std::optional<QVec> rhs = sm.vectorOf(br);
      std::optional<QVec> sol;
      if (rhs) sol = solveQ(m, *rhs, n);
      if (!sol) {
        if (p.closed) {
          p.closed = false;
          p.offending = std::make_pair(i, j);
        }
        continue;
      }
      for (int k = 0; k < n; ++k) {
        p.c[i][j][k] = (*sol)[k];
        p.c[j][i][k] = -(*sol)[k];
      }
    }
  }
  return p;
}

std::optional<QVec> memberCoords(const LiePresentation& p, const HoloVectorField& x) {
  return spanCoords(p.basis, x);
}

std::optional<QVec> spanCoords(const std::vector<HoloVectorField>& span,
                               const HoloVectorField& x) {
  SlotMap sm = SlotMap::build(span);
  std::optional<QVec> rhs = sm.vectorOf(x);
  if (!rhs) return std::nullopt;
  return solveQ(slotMatrix(sm, span), *rhs, static_cast<int>(span.size()));
}

KillingData killingSignature(const LiePresentation& p) {
  if (!p.closed) throw std::domain_error("presentation is not closed under brackets");
  const int n = p.dim();
  KillingData out;
  out.matrix.assign(n, QVec(n));
  for (int i = 0; i < n; ++i) {
    for (int j = i; j < n; ++j) {
      Rational k;
      for (int a = 0; a < n; ++a)
        for (int b = 0; b < n; ++b) k += p.c[i][b][a] * p.c[j][a][b];
      out.matrix[i][j] = k;
      out.matrix[j][i] = k;
    }
  }
  Inertia in = signatureQ(out.matrix);
  out.rank = in.rank();
  out.positives = in.pos;
  out.negatives = in.neg;
  return out;
}

SolvabilityResult solvability(const LiePresentation& p) {
  if (!p.closed) throw std::domain_error("presentation is not closed under brackets");
  const int n = p.dim();
  SolvabilityResult out;
  // Current subspace as RREF rows of coordinate vectors.
  QMat current;
  for (int i = 0; i < n; ++i) {
    QVec e(n);
    e[i] = Rational(1);
    current.push_back(std::move(e));
  }
  out.derivedDims.push_back(n);
  while (true) {
    int prevDim = static_cast<int>(current.size());
    if (prevDim == 0) {
      out.solvable = true;
      break;
    }
    QMat brackets;
    for (int a = 0; a < prevDim; ++a)
      for (int b = a + 1; b < prevDim; ++b)
        brackets.push_back(p.bracketCoords(current[a], current[b]));
    Rref r = rrefQ(brackets, n);
    QMat next = r.rows;
    int nextDim = static_cast<int>(next.size());
    out.derivedDims.push_back(nextDim);
    if (nextDim == prevDim) {
      out.solvable = false;
      break;
    }
    current = std::move(next);
  }
  return out;
}

AdGradingResult adGrading(const LiePresentation& p, const QVec& xRe, const QVec& xIm,
                          int bound) {
  if (!p.closed) throw std::domain_error("presentation is not closed under brackets");
  const int n = p.dim();
  {
    QVec comm = p.bracketCoords(xRe, xIm);
    for (const Rational& r : comm)
      if (!r.isZero()) throw std::domain_error("grading elements do not commute");
  }
  // Complexified operator T = ad(xRe) + i ad(xIm) on the span.
  SMat t(n, SVec(n));
  for (int r = 0; r < n; ++r) {
    if (xRe[r].isZero() && xIm[r].isZero()) continue;
    QMat ad = p.adMatrix(r);
    const Scalar f(xRe[r], xIm[r], Rational(0), Rational(0));
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j) {
        if (ad[i][j].isZero()) continue;
        t[i][j] += f * Scalar(ad[i][j]);
      }
  }

  AdGradingResult out;
  std::map<LatticePoint, SMat> spaces;
  std::map<LatticePoint, SMat> powerCache;
  auto shiftedPower = [&](const LatticePoint& lambda) -> const SMat& {
    auto it = powerCache.find(lambda);
    if (it != powerCache.end()) return it->second;
    SMat shifted = t;
    const Scalar l(Rational(lambda.re), Rational(lambda.im), Rational(0), Rational(0));
    for (int i = 0; i < n; ++i) shifted[i][i] -= l;
    return powerCache.emplace(lambda, matPowS(std::move(shifted), n)).first->second;
  };
  int total = 0;
  for (long re = -bound; re <= bound; ++re) {
    for (long im = -bound; im <= bound; ++im) {
      LatticePoint lambda{re, im};
      if (!lambda.inLattice()) continue;
      SMat kernel = nullspaceS(rrefS(shiftedPower(lambda), n));
      if (kernel.empty()) continue;
      out.dims[lambda] = static_cast<int>(kernel.size());
      spaces[lambda] = std::move(kernel);
      total += out.dims[lambda];
    }
  }
  out.sumsToDim = (total == n);

  // Bracket grading closure on the computed spaces.
  auto bracketS = [&](const SVec& x, const SVec& y) {
    SVec z(n);
    for (int i = 0; i < n; ++i) {
      if (x[i].isZero()) continue;
      for (int j = 0; j < n; ++j) {
        if (y[j].isZero()) continue;
        const Scalar f = x[i] * y[j];
        for (int k = 0; k < n; ++k)
          if (!p.c[i][j][k].isZero()) z[k] += f * Scalar(p.c[i][j][k]);
      }
    }
    return z;
  };
  auto isZeroVec = [](const SVec& v) {
    for (const Scalar& s : v)
      if (!s.isZero()) return false;
    return true;
  };
  for (const auto& [l, lBasis] : spaces) {
    for (const auto& [m, mBasis] : spaces) {
      LatticePoint sum = l + m;
      for (const SVec& x : lBasis) {
        for (const SVec& y : mBasis) {
          SVec z = bracketS(x, y);
          if (isZeroVec(z)) continue;
          if (!spaces.count(sum)) {
            out.bracketGraded = false;
            continue;
          }
          // Membership in the generalized eigenspace: (T - sum)^n z = 0.
          const SMat& power = shiftedPower(sum);
          SVec img(n);
          for (int i = 0; i < n; ++i)
            for (int j = 0; j < n; ++j)
              if (!power[i][j].isZero() && !z[j].isZero()) img[i] += power[i][j] * z[j];
          if (!isZeroVec(img)) out.bracketGraded = false;
        }
      }
    }
  }
  return out;
}

std::string classifyAlgebra(const LiePresentation& p) {
  KillingData k = killingSignature(p);
  const int n = p.dim();
  if (k.rank == n) {
    if (n == 10 && k.positives == 6 && k.negatives == 4) return "so(2,3)";
    if (n == 6) {
      if (k.positives == 4 && k.negatives == 2) return "sl(2,R)+sl(2,R)";
      if (k.positives == 2 && k.negatives == 4) return "sl(2,R)+su(2)";
      if (k.positives == 0 && k.negatives == 6) return "su(2)+su(2)";
      if (k.positives == 3 && k.negatives == 3) return "sl(2,C) as real";
    }
  } else if (solvability(p).solvable) {
    return "solvable";
  }
  std::ostringstream os;
  os << "unrecognized(dim=" << n << ", rank=" << k.rank << ", signature=(" << k.positives
     << "," << k.negatives << "))";
  return os.str();
}

}  // namespace crtube
