#include "crtube/series.hpp"

#include <algorithm>
#include <sstream>
#include <stdexcept>

#ifdef _OPENMP
#include <omp.h>
#endif

namespace crtube {

int VarSet::conjOf(int g) const {
  if (hasW) {
    if (g == 0) return 1;
    if (g == 1) return 0;
  }
  if (g == vIdx()) return g;
  int base = hasW ? 2 : 0;
  int off = g - base;
  return off < nz ? g + nz : g - nz;
}

bool VarSet::isHolomorphic(int g) const {
  if (g == vIdx()) return false;
  if (hasW) {
    if (g == 0) return true;
    if (g == 1) return false;
  }
  int base = hasW ? 2 : 0;
  return g - base < nz;
}

std::string VarSet::name(int g) const {
  if (hasW) {
    if (g == 0) return "w";
    if (g == 1) return "cw";
  }
  if (g == vIdx()) return "v";
  int base = hasW ? 2 : 0;
  int off = g - base;
  if (off < nz) return "z" + std::to_string(off + 1);
  return "cz" + std::to_string(off - nz + 1);
}

int degreeOf(const Expo& e) {
  int d = 0;
  for (uint16_t x : e) d += x;
  return d;
}

TruncatedSeries TruncatedSeries::constant(VarSet vars, int cutoff, const Scalar& c) {
  TruncatedSeries s(vars, cutoff);
  if (!c.isZero()) s.terms_.emplace(Expo(vars.count(), 0), c);
  return s;
}

TruncatedSeries TruncatedSeries::generator(VarSet vars, int cutoff, int g) {
  Expo e(vars.count(), 0);
  e[g] = 1;
  return monomial(vars, cutoff, e, Scalar(1));
}

TruncatedSeries TruncatedSeries::monomial(VarSet vars, int cutoff, const Expo& e, const Scalar& c) {
  if (static_cast<int>(e.size()) != vars.count())
    throw std::invalid_argument("exponent vector has wrong length");
  if (degreeOf(e) > cutoff) throw std::invalid_argument("exponent exceeds cutoff");
  TruncatedSeries s(vars, cutoff);
  if (!c.isZero()) s.terms_.emplace(e, c);
  return s;
}

TruncatedSeries TruncatedSeries::fromTerms(VarSet vars, int cutoff,
                                           const std::vector<std::pair<Expo, Scalar>>& terms) {
  TruncatedSeries s(vars, cutoff);
  for (const auto& [e, c] : terms) {
    if (static_cast<int>(e.size()) != vars.count())
      throw std::invalid_argument("exponent vector has wrong length");
    if (degreeOf(e) > cutoff) throw std::invalid_argument("exponent exceeds cutoff");
    s.addTerm(e, c);
  }
  s.prune();
  return s;
}

bool TruncatedSeries::isZeroToDegree(int d) const {
  for (const auto& [e, c] : terms_)
    if (degreeOf(e) <= d && !c.isZero()) return false;
  return true;
}

Scalar TruncatedSeries::coefficient(const Expo& e) const {
  auto it = terms_.find(e);
  return it == terms_.end() ? Scalar() : it->second;
}

Scalar TruncatedSeries::constantTerm() const { return coefficient(Expo(vars_.count(), 0)); }

std::optional<std::pair<Expo, Scalar>> TruncatedSeries::leadingTerm() const {
  if (terms_.empty()) return std::nullopt;
  auto best = terms_.begin();
  int bestDeg = degreeOf(best->first);
  for (auto it = terms_.begin(); it != terms_.end(); ++it) {
    int d = degreeOf(it->first);
    if (d < bestDeg) { best = it; bestDeg = d; }
  }
  return std::make_pair(best->first, best->second);
}

int TruncatedSeries::maxWDegree() const {
  if (!vars_.hasW) return 0;
  int m = 0;
  for (const auto& [e, c] : terms_) m = std::max(m, e[0] + e[1]);
  return m;
}

int TruncatedSeries::valuation() const {
  int v = cutoff_ + 1;
  for (const auto& [e, c] : terms_) v = std::min(v, degreeOf(e));
  return v;
}

TruncatedSeries TruncatedSeries::truncated(int newCutoff) const {
  TruncatedSeries out(vars_, newCutoff);
  for (const auto& [e, c] : terms_)
    if (degreeOf(e) <= newCutoff) out.terms_.emplace(e, c);
  return out;
}

void TruncatedSeries::addTerm(const Expo& e, const Scalar& c) {
  auto [it, inserted] = terms_.emplace(e, c);
  if (!inserted) it->second += c;
}

void TruncatedSeries::prune() {
  for (auto it = terms_.begin(); it != terms_.end();) {
    if (it->second.isZero()) it = terms_.erase(it);
    else ++it;
  }
}

void TruncatedSeries::checkCompatible(const TruncatedSeries& a, const TruncatedSeries& b) {
  if (a.vars_ != b.vars_) throw std::invalid_argument("mismatched variable sets");
  if (a.cutoff_ != b.cutoff_) throw std::invalid_argument("mismatched cutoffs");
}

TruncatedSeries operator+(const TruncatedSeries& a, const TruncatedSeries& b) {
  TruncatedSeries::checkCompatible(a, b);
  TruncatedSeries out = a;
  for (const auto& [e, c] : b.terms_) out.addTerm(e, c);
  out.prune();
  return out;
}

TruncatedSeries operator-(const TruncatedSeries& a, const TruncatedSeries& b) {
  TruncatedSeries::checkCompatible(a, b);
  TruncatedSeries out = a;
  for (const auto& [e, c] : b.terms_) out.addTerm(e, -c);
  out.prune();
  return out;
}

TruncatedSeries TruncatedSeries::operator-() const {
  TruncatedSeries out(vars_, cutoff_);
  for (const auto& [e, c] : terms_) out.terms_.emplace(e, -c);
  return out;
}

TruncatedSeries TruncatedSeries::scaled(const Scalar& c) const {
  TruncatedSeries out(vars_, cutoff_);
  if (c.isZero()) return out;
  for (const auto& [e, k] : terms_) {
    Scalar p = k * c;
    if (!p.isZero()) out.terms_.emplace(e, p);
  }
  return out;
}

namespace {

using TermVec = std::vector<std::pair<Expo, Scalar>>;

void mulRange(const TermVec& at, size_t lo, size_t hi,
              const std::map<Expo, Scalar>& bt, int cutoff,
              std::map<Expo, Scalar>& acc) {
  Expo sum;
  for (size_t i = lo; i < hi; ++i) {
    const Expo& ea = at[i].first;
    const int da = degreeOf(ea);
    for (const auto& [eb, cb] : bt) {
      if (da + degreeOf(eb) > cutoff) continue;
      sum = ea;
      for (size_t k = 0; k < sum.size(); ++k) sum[k] += eb[k];
      Scalar prod = at[i].second * cb;
      auto [it, inserted] = acc.emplace(sum, prod);
      if (!inserted) it->second += prod;
    }
  }
}

}  // namespace

TruncatedSeries operator*(const TruncatedSeries& a, const TruncatedSeries& b) {
  TruncatedSeries::checkCompatible(a, b);
  TruncatedSeries out(a.vars_, a.cutoff_);
  if (a.terms_.empty() || b.terms_.empty()) return out;
  TermVec at(a.terms_.begin(), a.terms_.end());

  bool par = parallelEnabled() && at.size() >= 64 && b.terms_.size() >= 8;
  if (par) {
#ifdef _OPENMP
    int nth = omp_get_max_threads();
    std::vector<std::map<Expo, Scalar>> partial(nth);
    size_t chunk = (at.size() + nth - 1) / nth;
#pragma omp parallel num_threads(nth)
    {
      int t = omp_get_thread_num();
      size_t lo = std::min(at.size(), t * chunk);
      size_t hi = std::min(at.size(), lo + chunk);
      mulRange(at, lo, hi, b.terms_, a.cutoff_, partial[t]);
    }
    // Exact addition is associative and commutative, so merging the partial
    // maps in any order gives the same coefficients as the serial pass.
    for (auto& p : partial)
      for (const auto& [e, c] : p) out.addTerm(e, c);
#else
    mulRange(at, 0, at.size(), b.terms_, a.cutoff_, out.terms_);
#endif
  } else {
    mulRange(at, 0, at.size(), b.terms_, a.cutoff_, out.terms_);
  }
  out.prune();
  return out;
}

TruncatedSeries TruncatedSeries::inverse() const {
  Scalar c0 = constantTerm();
  if (c0.isZero()) throw std::domain_error("non-unit series");
  // a = c0 (1 - u) with val(u) >= 1:  a^{-1} = c0^{-1} (1 + u + ... + u^D).
  Scalar c0inv = c0.inv();
  TruncatedSeries u = (constant(vars_, cutoff_, c0) - *this).scaled(c0inv);
  TruncatedSeries acc = constant(vars_, cutoff_, Scalar(1));
  TruncatedSeries out = acc;
  for (int k = 1; k <= cutoff_; ++k) {
    acc = acc * u;
    if (acc.isZero()) break;
    out = out + acc;
  }
  return out.scaled(c0inv);
}

TruncatedSeries TruncatedSeries::partial(int g) const {
  TruncatedSeries out(vars_, cutoff_);
  for (const auto& [e, c] : terms_) {
    if (e[g] == 0) continue;
    Expo d = e;
    d[g] -= 1;
    out.addTerm(d, c * Scalar(Rational(static_cast<long>(e[g]))));
  }
  out.prune();
  return out;
}

TruncatedSeries TruncatedSeries::conjugate() const {
  TruncatedSeries out(vars_, cutoff_);
  const int n = vars_.count();
  for (const auto& [e, c] : terms_) {
    Expo f(n, 0);
    for (int g = 0; g < n; ++g) f[vars_.conjOf(g)] = e[g];
    out.terms_.emplace(f, c.conj());
  }
  return out;
}

TruncatedSeries TruncatedSeries::substituted(const std::vector<TruncatedSeries>& assignment,
                                             const VarSet& target, int targetCutoff,
                                             const std::set<int>& polynomialGens) const {
  const int n = vars_.count();
  if (static_cast<int>(assignment.size()) != n)
    throw std::invalid_argument("substitution must assign every generator");
  for (int g = 0; g < n; ++g) {
    if (assignment[g].vars() != target || assignment[g].cutoff() != targetCutoff)
      throw std::invalid_argument("substituted series in wrong ring");
    if (!assignment[g].constantTerm().isZero() && !polynomialGens.count(g))
      throw std::domain_error("substitution with nonzero constant term into generator " +
                              vars_.name(g) + " breaks truncation soundness");
  }
  // Cached powers per generator.
  std::vector<std::vector<TruncatedSeries>> powers(n);
  auto powerOf = [&](int g, int e) -> const TruncatedSeries& {
    auto& cache = powers[g];
    if (cache.empty()) cache.push_back(TruncatedSeries::constant(target, targetCutoff, Scalar(1)));
    while (static_cast<int>(cache.size()) <= e) cache.push_back(cache.back() * assignment[g]);
    return cache[e];
  };
  TruncatedSeries out(target, targetCutoff);
  for (const auto& [e, c] : terms_) {
    TruncatedSeries term = TruncatedSeries::constant(target, targetCutoff, c);
    for (int g = 0; g < n && !term.isZero(); ++g)
      if (e[g] > 0) term = term * powerOf(g, e[g]);
    out = out + term;
  }
  return out;
}

TruncatedSeries TruncatedSeries::substitutedPartial(
    const std::map<int, TruncatedSeries>& assignment,
    const std::set<int>& polynomialGens) const {
  std::vector<TruncatedSeries> full;
  full.reserve(vars_.count());
  for (int g = 0; g < vars_.count(); ++g) {
    auto it = assignment.find(g);
    full.push_back(it != assignment.end() ? it->second
                                          : TruncatedSeries::generator(vars_, cutoff_, g));
  }
  return substituted(full, vars_, cutoff_, polynomialGens);
}

std::string monomialStr(const VarSet& vars, const Expo& e) {
  std::ostringstream os;
  bool first = true;
  for (int g = 0; g < vars.count(); ++g) {
    if (e[g] == 0) continue;
    if (!first) os << "*";
    first = false;
    os << vars.name(g);
    if (e[g] > 1) os << "^" << e[g];
  }
  if (first) return "1";
  return os.str();
}

std::string TruncatedSeries::str() const {
  if (terms_.empty()) return "0";
  std::ostringstream os;
  bool first = true;
  for (const auto& [e, c] : terms_) {
    if (!first) os << " + ";
    first = false;
    os << "(" << c.str() << ")";
    if (degreeOf(e) > 0) os << "*" << monomialStr(vars_, e);
  }
  return os.str();
}

}  // namespace crtube
