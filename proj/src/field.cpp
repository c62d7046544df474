#include "solwave/field.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace solwave {

Field::Field(GridPtr grid) : grid_(std::move(grid)) {
  if (!grid_) throw std::invalid_argument("Field requires a grid");
  values_.assign(grid_->points(), 0.0);
}

Field::Field(GridPtr grid, std::vector<double> values)
    : grid_(std::move(grid)), values_(std::move(values)) {
  if (!grid_) throw std::invalid_argument("Field requires a grid");
  if (static_cast<int>(values_.size()) != grid_->points()) {
    throw std::invalid_argument("Field: sample count does not match grid");
  }
}

Field Field::from_function(GridPtr grid, const std::function<double(double)>& f) {
  Field u(std::move(grid));
  for (int j = 0; j < u.grid().points(); ++j) u.values_[j] = f(u.grid().node(j));
  return u;
}

Field Field::from_spectrum(GridPtr grid, std::span<const Complex> coeffs) {
  const int n = grid->points();
  if (static_cast<int>(coeffs.size()) != n / 2 + 1) {
    throw std::invalid_argument("Field::from_spectrum: expected N/2+1 coefficients");
  }
  return Field(std::move(grid), RealFft::of(n).inverse(coeffs));
}

Spectrum Field::spectrum() const { return RealFft::of(grid_->points()).forward(values_); }

Spectrum Field::centred_spectrum() const {
  Spectrum c = spectrum();
  // x_0 = -L/2, so moving the phase origin to x = 0 multiplies by (-1)^k
  for (std::size_t k = 1; k < c.size(); k += 2) c[k] = -c[k];
  return c;
}

Field Field::with_points(int points) const {
  if (points == grid_->points()) return *this;
  auto target = make_grid(grid_->length(), points);
  const Spectrum c = spectrum();
  const int from = static_cast<int>(c.size()) - 1;
  const int to = points / 2;
  Spectrum out(to + 1);
  if (to > from) {
    for (int k = 0; k < from; ++k) out[k] = c[k];
    out[from] = 0.5 * c[from].real();
  } else {
    for (int k = 0; k < to; ++k) out[k] = c[k];
    out[to] = to == from ? c[to] : 2.0 * c[to].real();
  }
  return from_spectrum(target, out);
}

bool Field::is_finite() const {
  return std::all_of(values_.begin(), values_.end(), [](double v) { return std::isfinite(v); });
}

double Field::max_abs() const {
  double m = 0.0;
  for (double v : values_) m = std::max(m, std::abs(v));
  return m;
}

void Field::require_same_grid(const Field& other) const {
  solwave::require_same_grid(*this, other);
}

Field& Field::operator+=(const Field& other) {
  require_same_grid(other);
  for (std::size_t j = 0; j < values_.size(); ++j) values_[j] += other.values_[j];
  return *this;
}

Field& Field::operator-=(const Field& other) {
  require_same_grid(other);
  for (std::size_t j = 0; j < values_.size(); ++j) values_[j] -= other.values_[j];
  return *this;
}

Field& Field::operator*=(double c) {
  for (double& v : values_) v *= c;
  return *this;
}

void require_same_grid(const Field& a, const Field& b) {
  if (a.grid_ptr() != b.grid_ptr() && !(a.grid() == b.grid())) {
    throw std::invalid_argument("fields live on different grids");
  }
}

}  // namespace solwave
