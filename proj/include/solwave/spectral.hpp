#pragma once

#include <span>
#include <vector>

#include "solwave/field.hpp"
#include "solwave/symbol.hpp"

namespace solwave {

/// Spectrum multiplied by sym(xi_k). Throws on non-finite samples.
Field apply_multiplier(const Field& u, const Symbol& sym);

/// Spectral derivative; the Nyquist mode is zeroed.
Field derivative(const Field& u);

/// ||Lambda^t u||_{L^2} on the box.
double sobolev_norm(const Field& u, double t);

/// Box L^2 inner product, sum u_j v_j L/N.
double inner(const Field& u, const Field& v);

/// Product computed on a grid padded to 2N and truncated back; exact for
/// band-limited quadratic products.
Field dealiased_product(const Field& u, const Field& v);

/// Operations on half-spectra; used by the solver and integrator kernels.
namespace spectral {

/// L^2(box) inner product through Parseval.
double inner(std::span<const Complex> a, std::span<const Complex> b, double length);

/// sum_k w_k |a_k|^2 with Hermitian multiplicities, times the box length.
double weighted_norm2(std::span<const Complex> a, std::span<const double> weights,
                      double length);

void multiply(std::span<Complex> a, std::span<const double> weights);

/// Multiplies by i xi_k and zeroes the Nyquist entry.
void differentiate(std::span<Complex> a, const Grid& grid);

/// Translates by `shift` (u(x) -> u(x - shift)); the Nyquist entry keeps its
/// real part times cos(xi shift).
void translate(std::span<Complex> a, const Grid& grid, double shift);

/// Scratch-owning helper for dealiased products on a fixed grid size.
class Dealiaser {
 public:
  explicit Dealiaser(int points);

  int points() const { return n_; }

  /// Values of the band-limited interpolant on the 2N grid.
  void pad_to_values(std::span<const Complex> coeffs, std::vector<double>& values) const;
  /// Truncates 2N-grid values back to an N-grid half-spectrum.
  void values_to_truncated(std::span<const double> values, Spectrum& coeffs) const;
  /// Full (untruncated) 2N-grid spectrum of the values.
  Spectrum values_to_full(std::span<const double> values) const;

  Spectrum product(std::span<const Complex> a, std::span<const Complex> b) const;

 private:
  int n_;
  const RealFft& fine_;
  mutable Spectrum buffer_;
};

}  // namespace spectral
}  // namespace solwave
