#pragma once

#include <cstdint>

#include "crtube/exact.hpp"

namespace crtube {

/// Deterministic splitmix64 generator. Used instead of <random> so that
/// sampled checks and golden files are bit-identical across platforms and
/// standard library versions.
class DetRng {
public:
  explicit DetRng(uint64_t seed) : state_(seed) {}

  uint64_t next() {
    uint64_t z = (state_ += 0x9e3779b97f4a7c15ULL);
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
  }

  /// Uniform in [0, n).
  uint64_t below(uint64_t n) { return n == 0 ? 0 : next() % n; }

  /// Uniform integer in [lo, hi].
  long intIn(long lo, long hi) {
    return lo + static_cast<long>(below(static_cast<uint64_t>(hi - lo + 1)));
  }

  /// Rational with numerator in [-maxNum, maxNum] and denominator in [1, maxDen].
  Rational rational(long maxNum, long maxDen) {
    return Rational(intIn(-maxNum, maxNum), intIn(1, maxDen));
  }

  Rational rationalNonZero(long maxNum, long maxDen) {
    for (;;) {
      Rational r = rational(maxNum, maxDen);
      if (!r.isZero()) return r;
    }
  }

  /// Scalar with all four components random.
  Scalar scalar(long maxNum, long maxDen) {
    return Scalar(rational(maxNum, maxDen), rational(maxNum, maxDen),
                  rational(maxNum, maxDen), rational(maxNum, maxDen));
  }

  Scalar scalarNonZero(long maxNum, long maxDen) {
    for (;;) {
      Scalar s = scalar(maxNum, maxDen);
      if (!s.isZero()) return s;
    }
  }

  /// Scalar in Q(i) only (no sqrt2 components).
  Scalar gaussian(long maxNum, long maxDen) {
    return Scalar(rational(maxNum, maxDen), rational(maxNum, maxDen), Rational(0), Rational(0));
  }

private:
  uint64_t state_;
};

}  // namespace crtube
