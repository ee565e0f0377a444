#pragma once

#include <array>
#include <complex>
#include <cstddef>
#include <span>
#include <vector>

#include "torusmhd/spectral_grid.hpp"

namespace torusmhd {

using Complex = std::complex<double>;

/// Fourier coefficients of a real vector field with one component per
/// spatial dimension. Coefficients follow v(x) = sum_j c(j) e^{i j.x}, so c(0)
/// is the spatial mean. Storage is component-major, each component a full
/// lattice in the grid's FFT order.
class SpectralVectorField {
 public:
  SpectralVectorField() = default;
  explicit SpectralVectorField(GridPtr grid);

  const SpectralGrid& grid() const { return *grid_; }
  const GridPtr& grid_ptr() const { return grid_; }
  int components() const { return grid_->dimension(); }
  bool empty() const { return !grid_; }

  std::span<Complex> component(int k) {
    return {data_.data() + static_cast<std::size_t>(k) * grid_->size(), grid_->size()};
  }
  std::span<const Complex> component(int k) const {
    return {data_.data() + static_cast<std::size_t>(k) * grid_->size(), grid_->size()};
  }
  std::span<Complex> data() { return data_; }
  std::span<const Complex> data() const { return data_; }

  Complex& at(int k, std::size_t idx) { return data_[k * grid_->size() + idx]; }
  const Complex& at(int k, std::size_t idx) const { return data_[k * grid_->size() + idx]; }

  std::array<Complex, 3> coeff(const Wavevector& j) const;
  /// Sets c(j) and c(-j) = conj(c(j)) together.
  void set_mode(const Wavevector& j, const std::array<Complex, 3>& c);

  void set_zero();

  SpectralVectorField& operator+=(const SpectralVectorField& other);
  SpectralVectorField& operator-=(const SpectralVectorField& other);
  SpectralVectorField& operator*=(double s);

 private:
  GridPtr grid_;
  std::vector<Complex> data_;
};

SpectralVectorField operator+(SpectralVectorField a, const SpectralVectorField& b);
SpectralVectorField operator-(SpectralVectorField a, const SpectralVectorField& b);
SpectralVectorField operator*(double s, SpectralVectorField a);

/// Real samples of a vector field on the N^n physical grid, x_i = 2pi i / N.
/// Component-major, each component row-major with the last axis fastest.
class PhysicalVectorField {
 public:
  PhysicalVectorField() = default;
  PhysicalVectorField(GridPtr grid, int components);

  const SpectralGrid& grid() const { return *grid_; }
  const GridPtr& grid_ptr() const { return grid_; }
  int components() const { return components_; }

  std::span<double> component(int k) {
    return {data_.data() + static_cast<std::size_t>(k) * grid_->size(), grid_->size()};
  }
  std::span<const double> component(int k) const {
    return {data_.data() + static_cast<std::size_t>(k) * grid_->size(), grid_->size()};
  }
  std::span<double> data() { return data_; }
  std::span<const double> data() const { return data_; }

  /// Physical coordinate of sample `idx` along `axis`.
  double coordinate(std::size_t idx, int axis) const;

 private:
  GridPtr grid_;
  int components_ = 0;
  std::vector<double> data_;
};

}  // namespace torusmhd
