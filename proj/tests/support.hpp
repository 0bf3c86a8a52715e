#pragma once

// Shared helpers for the unit tests: seeded generators and independent oracles.

#include "swe_carleman/lattice.hpp"

#include <cmath>
#include <random>

namespace swe::test {

inline std::mt19937_64& rng() {
  static std::mt19937_64 gen(0x5eedULL);
  return gen;
}

inline double uniform(double lo, double hi) {
  return std::uniform_real_distribution<double>(lo, hi)(rng());
}

/// N x 3 field with entries in (lo, hi).
inline DistributionField random_field(int n, double lo = 0.05, double hi = 1.0) {
  DistributionField f(n, 3);
  for (Eigen::Index a = 0; a < f.rows(); ++a)
    for (int i = 0; i < 3; ++i) f(a, i) = uniform(lo, hi);
  return f;
}

inline double rel_diff(double a, double b) {
  return std::abs(a - b) / std::max({std::abs(a), std::abs(b), 1e-300});
}

/// Equilibrium with hu^2 -> (hu)^2 (2 - h), evaluated straight from the
/// Hermite form w_i [h + c_i hu / cs2 + (g h^2/2 - cs2 h + hu^2)(c_i^2 - cs2)/(2 cs2^2)].
inline Eigen::Vector3d truncated_equilibrium(const Eigen::Vector3d& f, double g) {
  const double cs2 = 1.0 / 3.0;
  const double w[3] = {2.0 / 3.0, 1.0 / 6.0, 1.0 / 6.0};
  const double c[3] = {0.0, 1.0, -1.0};
  const double h = f.sum();
  const double hu = f(1) - f(2);
  const double hu2 = hu * hu * (2.0 - h);
  Eigen::Vector3d out;
  for (int i = 0; i < 3; ++i)
    out(i) = w[i] * (h + c[i] * hu / cs2 +
                     (g * h * h / 2.0 - cs2 * h + hu2) * (c[i] * c[i] - cs2) / (2.0 * cs2 * cs2));
  return out;
}

}  // namespace swe::test
