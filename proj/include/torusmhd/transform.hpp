#pragma once

#include <complex>
#include <span>

#include "torusmhd/spectral_field.hpp"

namespace torusmhd {

/// FFTW plans for one grid shape. Plans are created with FFTW_ESTIMATE so
/// results are reproducible run to run, and are executed through the
/// new-array interface, which is safe to call from several threads.
class Fft {
 public:
  explicit Fft(const SpectralGrid& grid);
  ~Fft();
  Fft(const Fft&) = delete;
  Fft& operator=(const Fft&) = delete;

  /// In place, unnormalized: X(j) = sum_x x e^{-i j.x}.
  void forward(std::span<std::complex<double>> data) const;
  /// In place, unnormalized: x = sum_j X(j) e^{i j.x}.
  void backward(std::span<std::complex<double>> data) const;

  /// Shared instance for a grid shape; creation is serialized.
  static const Fft& for_grid(const SpectralGrid& grid);

 private:
  std::size_t size_;
  void* forward_plan_;
  void* backward_plan_;
};

/// Physical samples -> coefficients, c(j) = N^{-n} sum_x v(x) e^{-i j.x},
/// the discrete form of (2pi)^{-n} times the integral over the torus.
SpectralVectorField forward_transform(const GridPtr& grid, const PhysicalVectorField& samples);

/// Coefficients -> real physical samples (imaginary round-off is dropped).
PhysicalVectorField inverse_transform(const SpectralVectorField& field);

/// Scalar helpers used by the nonlinear term; `buffer` is overwritten.
void to_physical(const SpectralGrid& grid, std::span<const std::complex<double>> coeffs,
                 std::span<double> out, std::span<std::complex<double>> buffer);
void to_spectral(const SpectralGrid& grid, std::span<const double> samples,
                 std::span<std::complex<double>> out);

}  // namespace torusmhd
