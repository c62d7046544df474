#include "solwave/fft.hpp"

#include <fftw3.h>

#include <cstring>
#include <map>
#include <memory>
#include <mutex>
#include <new>
#include <stdexcept>

namespace solwave {

namespace {

std::mutex& planner_mutex() {
  static std::mutex m;
  return m;
}

/// SIMD-aligned per-thread work arrays, grown on demand.
struct AlignedScratch {
  double* real = nullptr;
  fftw_complex* complex = nullptr;
  int capacity = 0;

  void reserve(int n) {
    if (n <= capacity) return;
    release();
    real = fftw_alloc_real(n);
    complex = fftw_alloc_complex(n / 2 + 1);
    if (!real || !complex) throw std::bad_alloc();
    capacity = n;
  }
  void release() {
    fftw_free(real);
    fftw_free(complex);
    real = nullptr;
    complex = nullptr;
    capacity = 0;
  }
  ~AlignedScratch() { release(); }
};

AlignedScratch& scratch_for(int n) {
  thread_local AlignedScratch s;
  s.reserve(n);
  return s;
}

}  // namespace

const RealFft& RealFft::of(int n) {
  static std::map<int, std::unique_ptr<RealFft>> cache;
  std::lock_guard lock(planner_mutex());
  auto it = cache.find(n);
  if (it == cache.end()) {
    it = cache.emplace(n, std::unique_ptr<RealFft>(new RealFft(n))).first;
  }
  return *it->second;
}

RealFft::RealFft(int n) : n_(n) {
  if (n < 2) throw std::invalid_argument("FFT length must be >= 2");
  // FFTW_ESTIMATE keeps plans (and hence results) deterministic across runs.
  // Plans are made on aligned arrays; execution always goes through
  // aligned scratch so SIMD codelets stay valid.
  double* in = fftw_alloc_real(n);
  fftw_complex* out = fftw_alloc_complex(n / 2 + 1);
  r2c_ = fftw_plan_dft_r2c_1d(n, in, out, FFTW_ESTIMATE);
  c2r_ = fftw_plan_dft_c2r_1d(n, out, in, FFTW_ESTIMATE);
  fftw_free(in);
  fftw_free(out);
  if (!r2c_ || !c2r_) throw std::runtime_error("FFTW planning failed");
}

RealFft::~RealFft() {
  std::lock_guard lock(planner_mutex());
  fftw_destroy_plan(static_cast<fftw_plan>(r2c_));
  fftw_destroy_plan(static_cast<fftw_plan>(c2r_));
}

void RealFft::forward(std::span<const double> values, std::span<Complex> coeffs) const {
  if (static_cast<int>(values.size()) != n_ || static_cast<int>(coeffs.size()) != n_ / 2 + 1) {
    throw std::invalid_argument("RealFft::forward: size mismatch");
  }
  AlignedScratch& s = scratch_for(n_);
  std::memcpy(s.real, values.data(), sizeof(double) * n_);
  fftw_execute_dft_r2c(static_cast<fftw_plan>(r2c_), s.real, s.complex);
  const double scale = 1.0 / n_;
  for (int k = 0; k <= n_ / 2; ++k) coeffs[k] = Complex(s.complex[k][0], s.complex[k][1]) * scale;
}

void RealFft::inverse(std::span<const Complex> coeffs, std::span<double> values) const {
  if (static_cast<int>(values.size()) != n_ || static_cast<int>(coeffs.size()) != n_ / 2 + 1) {
    throw std::invalid_argument("RealFft::inverse: size mismatch");
  }
  AlignedScratch& s = scratch_for(n_);
  const int m = n_ / 2 + 1;
  for (int k = 0; k < m; ++k) {
    s.complex[k][0] = coeffs[k].real();
    s.complex[k][1] = coeffs[k].imag();
  }
  s.complex[0][1] = 0.0;
  s.complex[m - 1][1] = 0.0;
  fftw_execute_dft_c2r(static_cast<fftw_plan>(c2r_), s.complex, s.real);
  std::memcpy(values.data(), s.real, sizeof(double) * n_);
}

Spectrum RealFft::forward(std::span<const double> values) const {
  Spectrum out(n_ / 2 + 1);
  forward(values, out);
  return out;
}

std::vector<double> RealFft::inverse(std::span<const Complex> coeffs) const {
  std::vector<double> out(n_);
  inverse(coeffs, out);
  return out;
}

}  // namespace solwave
