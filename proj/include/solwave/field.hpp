#pragma once

#include <cstddef>
#include <functional>
#include <span>
#include <vector>

#include "solwave/fft.hpp"
#include "solwave/grid.hpp"

namespace solwave {

/// Real samples of a function on a Grid. Value type; the grid is shared.
class Field {
 public:
  explicit Field(GridPtr grid);
  Field(GridPtr grid, std::vector<double> values);

  static Field from_function(GridPtr grid, const std::function<double(double)>& f);
  static Field from_spectrum(GridPtr grid, std::span<const Complex> coeffs);

  const Grid& grid() const { return *grid_; }
  const GridPtr& grid_ptr() const { return grid_; }

  std::size_t size() const { return values_.size(); }
  std::span<const double> values() const { return values_; }
  std::span<double> values() { return values_; }
  double operator[](std::size_t j) const { return values_[j]; }
  double& operator[](std::size_t j) { return values_[j]; }

  /// Fourier amplitudes in transform order (phase origin at x_0 = -L/2).
  Spectrum spectrum() const;

  /// Fourier amplitudes referred to x = 0, i.e. c_k exp(-i xi_k L/2); real
  /// for even profiles centred at the origin.
  Spectrum centred_spectrum() const;

  /// Trigonometric interpolant sampled on `points` nodes of the same box
  /// (zero-padding or truncation of the spectrum).
  Field with_points(int points) const;

  bool is_finite() const;
  double max_abs() const;

  Field& operator+=(const Field& other);
  Field& operator-=(const Field& other);
  Field& operator*=(double c);

  friend Field operator+(Field a, const Field& b) { return a += b; }
  friend Field operator-(Field a, const Field& b) { return a -= b; }
  friend Field operator*(Field a, double c) { return a *= c; }
  friend Field operator*(double c, Field a) { return a *= c; }

 private:
  void require_same_grid(const Field& other) const;

  GridPtr grid_;
  std::vector<double> values_;
};

/// Throws std::invalid_argument unless both fields live on equal grids.
void require_same_grid(const Field& a, const Field& b);

}  // namespace solwave
