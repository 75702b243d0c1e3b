#include "crtube/linalg.hpp"

#include <algorithm>
#include <cassert>
#include <map>

#ifdef _OPENMP
#include <omp.h>
#endif

namespace crtube {

ExecMode& execMode() {
#ifdef _OPENMP
  static ExecMode mode = ExecMode::Parallel;
#else
  static ExecMode mode = ExecMode::Serial;
#endif
  return mode;
}

namespace {

using ZRow = std::vector<BigInt>;

// Clears denominators and strips the integer content; leading entry positive.
ZRow toIntegerRow(const QVec& row) {
  BigInt lcm(1);
  for (const Rational& r : row)
    if (!r.isZero()) mpz_lcm(lcm.get_mpz_t(), lcm.get_mpz_t(), r.den().get_mpz_t());
  ZRow out(row.size());
  for (size_t j = 0; j < row.size(); ++j) {
    if (row[j].isZero()) continue;
    out[j] = row[j].num() * (lcm / row[j].den());
  }
  return out;
}

int leadCol(const ZRow& row) {
  for (size_t j = 0; j < row.size(); ++j)
    if (sgn(row[j]) != 0) return static_cast<int>(j);
  return -1;
}

void stripContent(ZRow& row, int from) {
  BigInt g(0);
  for (size_t j = from; j < row.size(); ++j)
    if (sgn(row[j]) != 0) mpz_gcd(g.get_mpz_t(), g.get_mpz_t(), row[j].get_mpz_t());
  if (sgn(g) == 0) return;
  int lead = leadCol(row);
  if (lead >= 0 && sgn(row[lead]) < 0) g = -g;
  if (g == 1) return;
  for (size_t j = from; j < row.size(); ++j)
    if (sgn(row[j]) != 0) row[j] /= g;
}

// row <- pivLead * row - rowEntry * piv, starting at column `col`.
void eliminate(ZRow& row, const ZRow& piv, int col) {
  BigInt a = piv[col];
  BigInt b = row[col];
  for (size_t j = col; j < row.size(); ++j) {
    row[j] = a * row[j] - b * piv[j];
  }
}

struct Echelon {
  // pivot rows keyed by leading column; integer, content-free, positive lead
  std::map<int, ZRow> pivots;

  // Reduce `row` against the current pivots without inserting.
  void reduce(ZRow& row) const {
    int lead = leadCol(row);
    while (lead >= 0) {
      auto it = pivots.find(lead);
      if (it == pivots.end()) return;
      eliminate(row, it->second, lead);
      stripContent(row, lead);
      lead = leadCol(row);
    }
  }

  // Reduce and insert; returns true if the row added a new pivot.
  bool insert(ZRow row) {
    reduce(row);
    int lead = leadCol(row);
    if (lead < 0) return false;
    stripContent(row, lead);
    pivots.emplace(lead, std::move(row));
    return true;
  }
};

Rref finishRref(Echelon& ech, int ncols) {
  Rref out;
  out.ncols = ncols;
  for (auto& [col, zrow] : ech.pivots) {
    out.pivotCols.push_back(col);
    QVec row(ncols);
    Rational lead(zrow[col]);
    for (int j = col; j < ncols; ++j)
      if (sgn(zrow[j]) != 0) row[j] = Rational(zrow[j]) / lead;
    out.rows.push_back(std::move(row));
  }
  // Back-substitution to the reduced form.
  int r = out.rank();
  for (int i = r - 1; i >= 0; --i) {
    for (int k = 0; k < i; ++k) {
      const Rational f = out.rows[k][out.pivotCols[i]];
      if (f.isZero()) continue;
      for (int j = out.pivotCols[i]; j < ncols; ++j) {
        if (!out.rows[i][j].isZero()) out.rows[k][j] -= f * out.rows[i][j];
      }
    }
  }
  return out;
}

}  // namespace

Rref rrefQ(const QMat& rows, int ncols) {
  Echelon ech;
  if (parallelEnabled() && rows.size() > 64) {
    // Batched mode: pre-reduce pending rows against the current pivot set in
    // parallel, then insert survivors sequentially in input order. The final
    // RREF is canonical, hence identical to the serial path.
    std::vector<ZRow> pending;
    pending.reserve(rows.size());
    for (const QVec& row : rows) pending.push_back(toIntegerRow(row));
    while (!pending.empty()) {
      std::vector<ZRow> reduced(pending.size());
#ifdef _OPENMP
#pragma omp parallel for schedule(dynamic)
#endif
      for (size_t i = 0; i < pending.size(); ++i) {
        reduced[i] = std::move(pending[i]);
        ech.reduce(reduced[i]);
      }
      pending.clear();
      for (ZRow& row : reduced) {
        if (leadCol(row) < 0) continue;
        ech.insert(std::move(row));
      }
    }
  } else {
    for (const QVec& row : rows) ech.insert(toIntegerRow(row));
  }
  return finishRref(ech, ncols);
}

QMat nullspaceQ(const Rref& a) {
  std::vector<bool> isPivot(a.ncols, false);
  for (int c : a.pivotCols) isPivot[c] = true;
  QMat basis;
  for (int f = 0; f < a.ncols; ++f) {
    if (isPivot[f]) continue;
    QVec v(a.ncols);
    v[f] = Rational(1);
    for (int i = 0; i < a.rank(); ++i) v[a.pivotCols[i]] = -a.rows[i][f];
    basis.push_back(std::move(v));
  }
  return basis;
}

std::optional<QVec> solveQ(const QMat& a, const QVec& b, int ncols) {
  QMat aug;
  aug.reserve(a.size());
  for (size_t i = 0; i < a.size(); ++i) {
    QVec row = a[i];
    row.resize(ncols);
    row.push_back(b[i]);
    aug.push_back(std::move(row));
  }
  Rref r = rrefQ(aug, ncols + 1);
  QVec x(ncols);
  for (int i = 0; i < r.rank(); ++i) {
    if (r.pivotCols[i] == ncols) return std::nullopt;  // 0 = 1 row
    x[r.pivotCols[i]] = r.rows[i][ncols];
  }
  return x;
}

int rankQ(const QMat& rows, int ncols) { return rrefQ(rows, ncols).rank(); }

Inertia signatureQ(const QMat& sym) {
  QMat m = sym;
  const int n = static_cast<int>(m.size());
  std::vector<bool> done(n, false);
  Inertia out;
  int remaining = n;
  while (remaining > 0) {
    // Symmetric pivot search: prefer a nonzero diagonal entry.
    int p = -1;
    for (int i = 0; i < n; ++i)
      if (!done[i] && !m[i][i].isZero()) { p = i; break; }
    if (p >= 0) {
      const Rational d = m[p][p];
      (d.sign() > 0 ? out.pos : out.neg)++;
      done[p] = true;
      --remaining;
      // Congruence update on the active block: m_ij -= m_ip m_jp / d.
      for (int i = 0; i < n; ++i) {
        if (done[i] || m[i][p].isZero()) continue;
        const Rational f = m[i][p] / d;
        for (int j = 0; j < n; ++j)
          if (!done[j]) m[i][j] -= f * m[p][j];
      }
      for (int i = 0; i < n; ++i)
        if (!done[i]) m[i][p] = m[p][i] = Rational(0);
      continue;
    }
    // Diagonal all zero on the active block: find a hyperbolic pair.
    int q = -1;
    for (int i = 0; i < n && p < 0; ++i) {
      if (done[i]) continue;
      for (int j = i + 1; j < n; ++j)
        if (!done[j] && !m[i][j].isZero()) { p = i; q = j; break; }
    }
    if (p < 0) {
      out.nullity = remaining;
      return out;
    }
    // Block ((0,b),(b,0)) splits as (+1, -1). Projecting the remaining basis
    // vectors off the block gives m_ij -= (a_i c_j + a_j c_i) / b with
    // a_i = m_ip, c_i = m_iq.
    const Rational b = m[p][q];
    out.pos++;
    out.neg++;
    done[p] = done[q] = true;
    remaining -= 2;
    std::vector<Rational> a(n), c(n);
    for (int i = 0; i < n; ++i) {
      if (done[i]) continue;
      a[i] = m[i][p];
      c[i] = m[i][q];
    }
    for (int i = 0; i < n; ++i) {
      if (done[i]) continue;
      for (int j = 0; j < n; ++j) {
        if (done[j]) continue;
        m[i][j] -= (a[i] * c[j] + a[j] * c[i]) / b;
      }
    }
    for (int i = 0; i < n; ++i) {
      if (done[i]) continue;
      m[i][p] = m[p][i] = m[i][q] = m[q][i] = Rational(0);
    }
  }
  return out;
}

SRref rrefS(const SMat& rows, int ncols) {
  SMat work;
  work.reserve(rows.size());
  for (const SVec& r : rows) work.push_back(r);
  SRref out;
  out.ncols = ncols;
  int pivotRow = 0;
  const int nrows = static_cast<int>(work.size());
  for (int col = 0; col < ncols && pivotRow < nrows; ++col) {
    int sel = -1;
    for (int i = pivotRow; i < nrows; ++i)
      if (!work[i][col].isZero()) { sel = i; break; }
    if (sel < 0) continue;
    std::swap(work[pivotRow], work[sel]);
    const Scalar inv = work[pivotRow][col].inv();
    for (int j = col; j < ncols; ++j) work[pivotRow][j] = work[pivotRow][j] * inv;
    for (int i = 0; i < nrows; ++i) {
      if (i == pivotRow || work[i][col].isZero()) continue;
      const Scalar f = work[i][col];
      for (int j = col; j < ncols; ++j) work[i][j] -= f * work[pivotRow][j];
    }
    out.pivotCols.push_back(col);
    ++pivotRow;
  }
  out.rows.assign(work.begin(), work.begin() + pivotRow);
  return out;
}

SMat nullspaceS(const SRref& a) {
  std::vector<bool> isPivot(a.ncols, false);
  for (int c : a.pivotCols) isPivot[c] = true;
  SMat basis;
  for (int f = 0; f < a.ncols; ++f) {
    if (isPivot[f]) continue;
    SVec v(a.ncols);
    v[f] = Scalar(1);
    for (int i = 0; i < a.rank(); ++i) v[a.pivotCols[i]] = -a.rows[i][f];
    basis.push_back(std::move(v));
  }
  return basis;
}

std::optional<SVec> solveS(const SMat& a, const SVec& b, int ncols) {
  SMat aug;
  for (size_t i = 0; i < a.size(); ++i) {
    SVec row = a[i];
    row.resize(ncols);
    row.push_back(b[i]);
    aug.push_back(std::move(row));
  }
  SRref r = rrefS(aug, ncols + 1);
  SVec x(ncols);
  for (int i = 0; i < r.rank(); ++i) {
    if (r.pivotCols[i] == ncols) return std::nullopt;
    x[r.pivotCols[i]] = r.rows[i][ncols];
  }
  return x;
}

SMat matMulS(const SMat& a, const SMat& b) {
  const int n = static_cast<int>(a.size());
  const int m = static_cast<int>(b[0].size());
  const int k = static_cast<int>(b.size());
  SMat out(n, SVec(m));
  for (int i = 0; i < n; ++i)
    for (int l = 0; l < k; ++l) {
      if (a[i][l].isZero()) continue;
      for (int j = 0; j < m; ++j) {
        if (b[l][j].isZero()) continue;
        out[i][j] += a[i][l] * b[l][j];
      }
    }
  return out;
}

SMat matPowS(SMat a, int e) {
  const int n = static_cast<int>(a.size());
  SMat out(n, SVec(n));
  for (int i = 0; i < n; ++i) out[i][i] = Scalar(1);
  while (e > 0) {
    if (e & 1) out = matMulS(out, a);
    e >>= 1;
    if (e) a = matMulS(a, a);
  }
  return out;
}

}  // namespace crtube
