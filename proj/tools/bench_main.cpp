// Benchmark comparing the serial reference kernels against the OpenMP
// variants: truncated series products, constraint assembly + exact
// elimination (the tangent-algebra solver), and batched row reduction.

#include <chrono>
#include <cstdio>
#include <functional>
#include <string>

#include "crtube/germs.hpp"
#include "crtube/linalg.hpp"
#include "crtube/parallel.hpp"
#include "crtube/rng.hpp"

using namespace crtube;
using Clock = std::chrono::steady_clock;

namespace {

double run(ExecMode mode, const std::function<void()>& body, int reps) {
  execMode() = mode;
  double best = 1e300;
  for (int r = 0; r < reps; ++r) {
    auto start = Clock::now();
    body();
    double ms = std::chrono::duration<double, std::milli>(Clock::now() - start).count();
    if (ms < best) best = ms;
  }
  return best;
}

void report(const std::string& name, double serialMs, double parallelMs) {
  std::printf("%-34s serial %9.2f ms   omp %9.2f ms   speedup %.2fx\n", name.c_str(),
              serialMs, parallelMs, serialMs / parallelMs);
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
    terms.emplace_back(e, rng.scalar(5, 4));
  }
  return TruncatedSeries::fromTerms(vars, cutoff, terms);
}

}  // namespace

int main() {
  std::printf("crtube kernel benchmark (best of 3)\n\n");

  {
    DetRng rng(42);
    const VarSet vars{2, false};
    TruncatedSeries a = randomSeries(rng, vars, 10, 900);
    TruncatedSeries b = randomSeries(rng, vars, 10, 700);
    auto body = [&] {
      TruncatedSeries c = a * b;
      (void)c;
    };
    double s = run(ExecMode::Serial, body, 3);
    double p = run(ExecMode::Parallel, body, 3);
    report("series product (dense, D=10)", s, p);
  }

  {
    DetRng rng(43);
    QMat rows(1500, QVec(60));
    for (auto& row : rows)
      for (auto& e : row) e = rng.rational(9, 7);
    auto body = [&] {
      Rref r = rrefQ(rows, 60);
      (void)r;
    };
    double s = run(ExecMode::Serial, body, 3);
    double p = run(ExecMode::Parallel, body, 3);
    report("row reduction (1500 x 60)", s, p);
  }

  {
    HypersurfaceGerm germ = familyGerm(Rational(1), 13);
    auto body = [&] {
      HolBasisReport rep = holSolve(germ, 3, 10);
      (void)rep;
    };
    double s = run(ExecMode::Serial, body, 3);
    double p = run(ExecMode::Parallel, body, 3);
    report("tangent-algebra solver (d=3, D=10)", s, p);
  }

  return 0;
}
