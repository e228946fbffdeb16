#pragma once

// Test-only reference computations. Nothing here calls into the closed-form
// exponentials or factorization code under test.

#include <cmath>
#include <complex>
#include <random>
#include <vector>

#include <Eigen/Dense>

namespace lieprop::testing {

using Mat2 = Eigen::Matrix2cd;
using V3 = Eigen::Vector3d;

/// exp(M) by scaling and squaring around a 30-term Taylor series.
inline Mat2 taylor_expm(const Mat2& m) {
  int squarings = 0;
  double norm = m.norm();
  while (norm > 0.5) {
    norm *= 0.5;
    ++squarings;
  }
  const Mat2 scaled = m / std::pow(2.0, squarings);
  Mat2 term = Mat2::Identity();
  Mat2 sum = Mat2::Identity();
  for (int k = 1; k <= 30; ++k) {
    term = term * scaled / static_cast<double>(k);
    sum += term;
  }
  for (int s = 0; s < squarings; ++s) sum = sum * sum;
  return sum;
}

/// Pauli matrices written out independently of the library.
inline Mat2 pauli(int j) {
  using namespace std::complex_literals;
  Mat2 m;
  if (j == 1) m << 0.0, 1.0, 1.0, 0.0;
  if (j == 2) m << 0.0, -1i, 1i, 0.0;
  if (j == 3) m << 1.0, 0.0, 0.0, -1.0;
  return m;
}

class Rng {
 public:
  explicit Rng(unsigned long long seed) : engine_(seed) {}

  double uniform(double lo, double hi) { return std::uniform_real_distribution<double>(lo, hi)(engine_); }

  V3 vec(double lo = -1.0, double hi = 1.0) { return {uniform(lo, hi), uniform(lo, hi), uniform(lo, hi)}; }

  V3 unit() {
    V3 v;
    do {
      v = vec();
    } while (v.norm() < 1e-3);
    return v.normalized();
  }

 private:
  std::mt19937_64 engine_;
};

}  // namespace lieprop::testing
