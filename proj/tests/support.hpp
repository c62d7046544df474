#pragma once

#include <cmath>
#include <cstdint>
#include <random>

#include "solwave/field.hpp"
#include "solwave/grid.hpp"

namespace solwave::testing {

inline constexpr double pi = 3.141592653589793;

/// sqrt(2) B sech(B x): the s = 2, r = 0 solitary wave with speed 1 - B^2
/// and mass 2 B.
inline Field sech_wave(const GridPtr& grid, double B) {
  return Field::from_function(grid, [B](double x) { return std::sqrt(2.0) * B / std::cosh(B * x); });
}

/// Random trigonometric polynomial with modes 1..band (plus a mean).
inline Field random_trig(const GridPtr& grid, int band, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> g;
  std::vector<double> a(band + 1), b(band + 1);
  for (int k = 0; k <= band; ++k) {
    a[k] = g(rng) / (1.0 + k);
    b[k] = g(rng) / (1.0 + k);
  }
  const double L = grid->length();
  return Field::from_function(grid, [&](double x) {
    double v = a[0];
    for (int k = 1; k <= band; ++k) {
      const double t = 2.0 * pi * k * x / L;
      v += a[k] * std::cos(t) + b[k] * std::sin(t);
    }
    return v;
  });
}

inline double l2(const Field& u) {
  double s = 0.0;
  for (double v : u.values()) s += v * v;
  return std::sqrt(s * u.grid().spacing());
}

inline double l2_diff(const Field& a, const Field& b) { return l2(a - b); }

inline double max_diff(const Field& a, const Field& b) { return (a - b).max_abs(); }

}  // namespace solwave::testing
