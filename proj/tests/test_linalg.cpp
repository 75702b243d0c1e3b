#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "crtube/linalg.hpp"
#include "crtube/rng.hpp"

using namespace crtube;

namespace {

QMat randomMatrix(DetRng& rng, int rows, int cols, long maxNum, long maxDen) {
  QMat m(rows, QVec(cols));
  for (int i = 0; i < rows; ++i)
    for (int j = 0; j < cols; ++j) m[i][j] = rng.rational(maxNum, maxDen);
  return m;
}

}  // namespace

TEST_CASE("rref basics") {
  QMat m = {{Rational(1), Rational(2)}, {Rational(2), Rational(4)}};
  Rref r = rrefQ(m, 2);
  CHECK(r.rank() == 1);
  CHECK(r.rows[0][0] == Rational(1));
  CHECK(r.rows[0][1] == Rational(2));

  QMat ns = nullspaceQ(r);
  REQUIRE(ns.size() == 1);
  CHECK(ns[0][0] == Rational(-2));
  CHECK(ns[0][1] == Rational(1));
}

TEST_CASE("rref is canonical across row orders") {
  DetRng rng(42);
  for (int trial = 0; trial < 20; ++trial) {
    QMat m = randomMatrix(rng, 6, 4, 5, 3);
    QMat shuffled = m;
    std::swap(shuffled[0], shuffled[3]);
    std::swap(shuffled[2], shuffled[5]);
    Rref a = rrefQ(m, 4);
    Rref b = rrefQ(shuffled, 4);
    CHECK(a.rows == b.rows);
    CHECK(a.pivotCols == b.pivotCols);
  }
}

TEST_CASE("serial and parallel rref agree") {
  DetRng rng(99);
  QMat m = randomMatrix(rng, 200, 12, 7, 4);
  ExecMode saved = execMode();
  execMode() = ExecMode::Serial;
  Rref a = rrefQ(m, 12);
  execMode() = ExecMode::Parallel;
  Rref b = rrefQ(m, 12);
  execMode() = saved;
  CHECK(a.rows == b.rows);
  CHECK(a.pivotCols == b.pivotCols);
}

TEST_CASE("solve") {
  QMat a = {{Rational(1), Rational(1)}, {Rational(1), Rational(-1)}};
  QVec b = {Rational(3), Rational(1)};
  auto x = solveQ(a, b, 2);
  REQUIRE(x.has_value());
  CHECK((*x)[0] == Rational(2));
  CHECK((*x)[1] == Rational(1));

  QMat bad = {{Rational(1), Rational(1)}, {Rational(1), Rational(1)}};
  QVec rhs = {Rational(0), Rational(1)};
  CHECK(!solveQ(bad, rhs, 2).has_value());
}

TEST_CASE("nullspace vectors satisfy the system") {
  DetRng rng(7);
  for (int trial = 0; trial < 10; ++trial) {
    QMat m = randomMatrix(rng, 5, 8, 4, 3);
    Rref r = rrefQ(m, 8);
    QMat ns = nullspaceQ(r);
    CHECK(static_cast<int>(ns.size()) == 8 - r.rank());
    for (const QVec& v : ns) {
      for (const QVec& row : m) {
        Rational dot;
        for (int j = 0; j < 8; ++j) dot += row[j] * v[j];
        CHECK(dot.isZero());
      }
    }
  }
}

TEST_CASE("signature: diagonal and hyperbolic") {
  QMat d = {{Rational(2), Rational(0), Rational(0)},
            {Rational(0), Rational(-3), Rational(0)},
            {Rational(0), Rational(0), Rational(0)}};
  Inertia i = signatureQ(d);
  CHECK(i.pos == 1);
  CHECK(i.neg == 1);
  CHECK(i.nullity == 1);

  QMat h = {{Rational(0), Rational(5)}, {Rational(5), Rational(0)}};
  Inertia ih = signatureQ(h);
  CHECK(ih.pos == 1);
  CHECK(ih.neg == 1);
}

TEST_CASE("signature invariant under congruence") {
  DetRng rng(2024);
  for (int trial = 0; trial < 15; ++trial) {
    const int n = 4;
    QMat sym(n, QVec(n));
    for (int i = 0; i < n; ++i)
      for (int j = i; j < n; ++j) {
        sym[i][j] = rng.rational(4, 2);
        sym[j][i] = sym[i][j];
      }
    // Random unitriangular congruence g^T sym g keeps the inertia.
    QMat g(n, QVec(n));
    for (int i = 0; i < n; ++i) g[i][i] = Rational(1);
    for (int i = 0; i < n; ++i)
      for (int j = i + 1; j < n; ++j) g[i][j] = rng.rational(3, 2);
    QMat gs(n, QVec(n)), gsg(n, QVec(n));
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j)
        for (int k = 0; k < n; ++k) gs[i][j] += g[k][i] * sym[k][j];
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j)
        for (int k = 0; k < n; ++k) gsg[i][j] += gs[i][k] * g[k][j];
    Inertia a = signatureQ(sym);
    Inertia b = signatureQ(gsg);
    CHECK(a.pos == b.pos);
    CHECK(a.neg == b.neg);
  }
}

TEST_CASE("scalar-field elimination") {
  // Kernel of ((1, i), (-i, 1)) is spanned by (-i, 1) ... check rank/kernel.
  SMat m = {{Scalar(1), Scalar::i()}, {-Scalar::i(), Scalar(1)}};
  SRref r = rrefS(m, 2);
  CHECK(r.rank() == 1);
  SMat ker = nullspaceS(r);
  REQUIRE(ker.size() == 1);
  // (1, i) . k = 0
  Scalar dot = m[0][0] * ker[0][0] + m[0][1] * ker[0][1];
  CHECK(dot.isZero());
}

TEST_CASE("matrix power over scalars") {
  SMat m = {{Scalar(0), Scalar(1)}, {Scalar(0), Scalar(0)}};
  SMat p = matPowS(m, 2);
  for (const auto& row : p)
    for (const auto& e : row) CHECK(e.isZero());
}
