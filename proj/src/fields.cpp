#include "crtube/fields.hpp"

#include <sstream>
#include <stdexcept>

namespace crtube {

HoloPoly HoloPoly::constant(int ncoords, const Scalar& c) {
  HoloPoly p(ncoords);
  if (!c.isZero()) p.terms_.emplace(PExpo(ncoords, 0), c);
  return p;
}

HoloPoly HoloPoly::coordinate(int ncoords, int k) {
  PExpo e(ncoords, 0);
  e[k] = 1;
  return monomial(ncoords, e, Scalar(1));
}

HoloPoly HoloPoly::monomial(int ncoords, const PExpo& e, const Scalar& c) {
  if (static_cast<int>(e.size()) != ncoords)
    throw std::invalid_argument("exponent vector has wrong length");
  HoloPoly p(ncoords);
  if (!c.isZero()) p.terms_.emplace(e, c);
  return p;
}

int HoloPoly::degree() const {
  int d = -1;
  for (const auto& [e, c] : terms_) {
    int t = 0;
    for (uint16_t x : e) t += x;
    d = std::max(d, t);
  }
  return d;
}

Scalar HoloPoly::coefficient(const PExpo& e) const {
  auto it = terms_.find(e);
  return it == terms_.end() ? Scalar() : it->second;
}

void HoloPoly::addTerm(const PExpo& e, const Scalar& c) {
  auto [it, inserted] = terms_.emplace(e, c);
  if (!inserted) it->second += c;
}

void HoloPoly::prune() {
  for (auto it = terms_.begin(); it != terms_.end();) {
    if (it->second.isZero()) it = terms_.erase(it);
    else ++it;
  }
}

HoloPoly HoloPoly::operator-() const {
  HoloPoly out(ncoords_);
  for (const auto& [e, c] : terms_) out.terms_.emplace(e, -c);
  return out;
}

HoloPoly operator+(const HoloPoly& a, const HoloPoly& b) {
  if (a.ncoords_ != b.ncoords_) throw std::invalid_argument("mismatched coordinates");
  HoloPoly out = a;
  for (const auto& [e, c] : b.terms_) out.addTerm(e, c);
  out.prune();
  return out;
}

HoloPoly operator-(const HoloPoly& a, const HoloPoly& b) { return a + (-b); }

HoloPoly operator*(const HoloPoly& a, const HoloPoly& b) {
  if (a.ncoords_ != b.ncoords_) throw std::invalid_argument("mismatched coordinates");
  HoloPoly out(a.ncoords_);
  for (const auto& [ea, ca] : a.terms_) {
    for (const auto& [eb, cb] : b.terms_) {
      PExpo e = ea;
      for (size_t k = 0; k < e.size(); ++k) e[k] += eb[k];
      out.addTerm(e, ca * cb);
    }
  }
  out.prune();
  return out;
}

HoloPoly HoloPoly::scaled(const Scalar& c) const {
  HoloPoly out(ncoords_);
  if (c.isZero()) return out;
  for (const auto& [e, k] : terms_) {
    Scalar p = k * c;
    if (!p.isZero()) out.terms_.emplace(e, p);
  }
  return out;
}

HoloPoly HoloPoly::partial(int k) const {
  HoloPoly out(ncoords_);
  for (const auto& [e, c] : terms_) {
    if (e[k] == 0) continue;
    PExpo d = e;
    d[k] -= 1;
    out.addTerm(d, c * Scalar(Rational(static_cast<long>(e[k]))));
  }
  out.prune();
  return out;
}

Scalar HoloPoly::eval(const std::vector<Scalar>& point) const {
  if (static_cast<int>(point.size()) != ncoords_)
    throw std::invalid_argument("evaluation point has wrong length");
  Scalar acc;
  for (const auto& [e, c] : terms_) {
    Scalar t = c;
    for (int k = 0; k < ncoords_; ++k)
      for (int j = 0; j < e[k]; ++j) t *= point[k];
    acc += t;
  }
  return acc;
}

TruncatedSeries HoloPoly::toSeries(const VarSet& vars, int cutoff,
                                   const std::vector<int>& genOf) const {
  std::vector<std::pair<Expo, Scalar>> terms;
  for (const auto& [e, c] : terms_) {
    Expo f(vars.count(), 0);
    for (int k = 0; k < ncoords_; ++k) f[genOf[k]] = e[k];
    terms.emplace_back(std::move(f), c);
  }
  return TruncatedSeries::fromTerms(vars, cutoff, terms);
}

TruncatedSeries HoloPoly::toSeriesConj(const VarSet& vars, int cutoff,
                                       const std::vector<int>& genOf) const {
  std::vector<std::pair<Expo, Scalar>> terms;
  for (const auto& [e, c] : terms_) {
    Expo f(vars.count(), 0);
    for (int k = 0; k < ncoords_; ++k) f[vars.conjOf(genOf[k])] = e[k];
    terms.emplace_back(std::move(f), c.conj());
  }
  return TruncatedSeries::fromTerms(vars, cutoff, terms);
}

std::string HoloPoly::str(const std::vector<std::string>& names) const {
  if (terms_.empty()) return "0";
  std::ostringstream os;
  bool first = true;
  for (const auto& [e, c] : terms_) {
    if (!first) os << " + ";
    first = false;
    os << "(" << c.str() << ")";
    for (int k = 0; k < ncoords_; ++k) {
      if (e[k] == 0) continue;
      os << "*" << names[k];
      if (e[k] > 1) os << "^" << e[k];
    }
  }
  return os.str();
}

HoloVectorField::HoloVectorField(int n, bool w) : ncoords(n), hasW(w) {
  comps.assign(n, HoloPoly(n));
}

bool HoloVectorField::isZero() const {
  for (const auto& p : comps)
    if (!p.isZero()) return false;
  return true;
}

int HoloVectorField::degree() const {
  int d = -1;
  for (const auto& p : comps) d = std::max(d, p.degree());
  return d;
}

std::vector<int> HoloVectorField::coordGens() const {
  VarSet vars = ringVars();
  std::vector<int> g(ncoords);
  for (int k = 0; k < ncoords; ++k) {
    if (hasW) g[k] = (k == 0) ? vars.wIdx() : vars.zIdx(k - 1);
    else g[k] = vars.zIdx(k);
  }
  return g;
}

std::vector<std::string> HoloVectorField::coordNames() const {
  std::vector<std::string> names(ncoords);
  VarSet vars = ringVars();
  std::vector<int> g = coordGens();
  for (int k = 0; k < ncoords; ++k) names[k] = vars.name(g[k]);
  return names;
}

HoloVectorField HoloVectorField::operator-() const {
  HoloVectorField out(ncoords, hasW);
  for (int k = 0; k < ncoords; ++k) out.comps[k] = -comps[k];
  return out;
}

HoloVectorField operator+(const HoloVectorField& a, const HoloVectorField& b) {
  if (a.ncoords != b.ncoords || a.hasW != b.hasW)
    throw std::invalid_argument("mismatched coordinates");
  HoloVectorField out(a.ncoords, a.hasW);
  for (int k = 0; k < a.ncoords; ++k) out.comps[k] = a.comps[k] + b.comps[k];
  return out;
}

HoloVectorField operator-(const HoloVectorField& a, const HoloVectorField& b) {
  return a + (-b);
}

HoloVectorField HoloVectorField::scaled(const Scalar& c) const {
  HoloVectorField out(ncoords, hasW);
  for (int k = 0; k < ncoords; ++k) out.comps[k] = comps[k].scaled(c);
  return out;
}

std::string HoloVectorField::str() const {
  std::vector<std::string> names = coordNames();
  std::ostringstream os;
  bool first = true;
  for (int k = 0; k < ncoords; ++k) {
    if (comps[k].isZero()) continue;
    if (!first) os << " + ";
    first = false;
    os << "[" << comps[k].str(names) << "] D" << names[k];
  }
  if (first) return "0";
  return os.str();
}

HoloVectorField bracket(const HoloVectorField& xi, const HoloVectorField& eta) {
  if (xi.ncoords != eta.ncoords || xi.hasW != eta.hasW)
    throw std::invalid_argument("mismatched coordinates");
  const int n = xi.ncoords;
  HoloVectorField out(n, xi.hasW);
  for (int k = 0; k < n; ++k) {
    HoloPoly acc(n);
    for (int j = 0; j < n; ++j) {
      acc = acc + xi.comps[j] * eta.comps[k].partial(j) - eta.comps[j] * xi.comps[k].partial(j);
    }
    out.comps[k] = acc;
  }
  return out;
}

TruncatedSeries applyField(const HoloVectorField& xi, const TruncatedSeries& f) {
  const VarSet vars = f.vars();
  if (vars != xi.ringVars())
    throw std::invalid_argument("series ring does not match the field's coordinates");
  std::vector<int> gens = xi.coordGens();
  TruncatedSeries out(vars, f.cutoff());
  for (int k = 0; k < xi.ncoords; ++k) {
    if (xi.comps[k].isZero()) continue;
    int g = gens[k];
    TruncatedSeries holo = xi.comps[k].toSeries(vars, f.cutoff(), gens);
    out = out + holo * f.partial(g);
    TruncatedSeries anti = xi.comps[k].toSeriesConj(vars, f.cutoff(), gens);
    out = out + anti * f.partial(vars.conjOf(g));
  }
  return out;
}

std::string LatticePoint::str() const {
  std::ostringstream os;
  if (re != 0 || im == 0) os << re;
  if (im != 0) {
    if (im > 0 && (re != 0)) os << "+";
    if (im == -1) os << "-";
    else if (im != 1) os << im;
    os << "i";
  }
  return os.str();
}

LatticePoint monomialWeight(int m, int n, int l, int k) {
  return LatticePoint{2L * m + n + k - 2, static_cast<long>(n) + 2 * l - k};
}

int dimPLambda(const LatticePoint& lambda, int bound) {
  int count = 0;
  for (int k = 0; k <= 2; ++k)
    for (int m = 0; m <= bound; ++m)
      for (int n = 0; n + m <= bound; ++n)
        for (int l = 0; l + n + m <= bound; ++l)
          if (monomialWeight(m, n, l, k) == lambda) ++count;
  return count;
}

HoloVectorField gradeComponent(const HoloVectorField& xi, const LatticePoint& lambda) {
  if (xi.ncoords != 3 || !xi.hasW)
    throw std::invalid_argument("weight grading is defined on (w, z1, z2) fields");
  HoloVectorField out(3, true);
  for (int k = 0; k < 3; ++k) {
    for (const auto& [e, c] : xi.comps[k].terms()) {
      if (monomialWeight(e[0], e[1], e[2], k) == lambda)
        out.comps[k] = out.comps[k] + HoloPoly::monomial(3, e, c);
    }
  }
  return out;
}

std::set<LatticePoint> weightSupport(const HoloVectorField& xi) {
  if (xi.ncoords != 3 || !xi.hasW)
    throw std::invalid_argument("weight grading is defined on (w, z1, z2) fields");
  std::set<LatticePoint> out;
  for (int k = 0; k < 3; ++k)
    for (const auto& [e, c] : xi.comps[k].terms())
      out.insert(monomialWeight(e[0], e[1], e[2], k));
  return out;
}

}  // namespace crtube
