#pragma once

// Seeded random numbers with a platform-independent double conversion
// (std distributions differ between standard libraries).

#include <cstdint>
#include <random>

#include "uaext/types.hpp"

namespace uaext {

class Rng {
 public:
  explicit Rng(std::uint64_t seed) : engine_(seed) {}

  /// Uniform on [0, 1).
  double uniform() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }
  double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }
  std::size_t index(std::size_t n) { return static_cast<std::size_t>(uniform() * static_cast<double>(n)); }
  /// Real and imaginary parts uniform on [-1, 1).
  Complex complex() {
    const double re = uniform(-1.0, 1.0);
    return {re, uniform(-1.0, 1.0)};
  }
  CVector complex_vector(Eigen::Index n) {
    CVector v(n);
    for (Eigen::Index i = 0; i < n; ++i) v[i] = complex();
    return v;
  }

 private:
  std::mt19937_64 engine_;
};

}  // namespace uaext
