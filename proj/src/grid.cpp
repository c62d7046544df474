#include "solwave/grid.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>
#include <string>

namespace solwave {

Grid::Grid(double length, int points) : length_(length), points_(points) {
  if (!(length > 0.0) || !std::isfinite(length)) {
    throw std::invalid_argument("grid length must be positive and finite, got " +
                                std::to_string(length));
  }
  if (points < 8 || points % 2 != 0) {
    throw std::invalid_argument("grid points must be an even integer >= 8, got " +
                                std::to_string(points));
  }
}

std::vector<double> Grid::nodes() const {
  std::vector<double> x(points_);
  for (int j = 0; j < points_; ++j) x[j] = node(j);
  return x;
}

double Grid::wavenumber(int k) const { return 2.0 * std::numbers::pi * k / length_; }

std::vector<double> Grid::wavenumbers() const {
  std::vector<double> xi(points_);
  for (int i = 0; i < points_; ++i) xi[i] = wavenumber(i - points_ / 2);
  return xi;
}

double Grid::max_wavenumber() const { return std::numbers::pi * points_ / length_; }

GridPtr make_grid(double length, int points) {
  return std::make_shared<const Grid>(length, points);
}

}  // namespace solwave
