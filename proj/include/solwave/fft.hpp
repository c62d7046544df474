#pragma once

#include <complex>
#include <span>
#include <vector>

namespace solwave {

using Complex = std::complex<double>;

/// Half-spectrum of a real field: N/2 + 1 coefficients c_k with
/// u_j = sum_k c_k exp(2 pi i k j / N) (Hermitian extension implied).
using Spectrum = std::vector<Complex>;

/// Real-to-complex transform of a fixed length backed by cached FFTW plans.
///
/// Forward is normalized by 1/N so the coefficients are Fourier amplitudes;
/// inverse is the plain synthesis sum. Plans are created once per length and
/// shared; execution is reentrant.
class RealFft {
 public:
  static const RealFft& of(int n);

  int size() const { return n_; }

  void forward(std::span<const double> values, std::span<Complex> coeffs) const;
  void inverse(std::span<const Complex> coeffs, std::span<double> values) const;

  Spectrum forward(std::span<const double> values) const;
  std::vector<double> inverse(std::span<const Complex> coeffs) const;

  RealFft(const RealFft&) = delete;
  RealFft& operator=(const RealFft&) = delete;
  ~RealFft();

 private:
  explicit RealFft(int n);

  int n_;
  void* r2c_;
  void* c2r_;
};

}  // namespace solwave
