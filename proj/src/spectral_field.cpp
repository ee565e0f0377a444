#include "torusmhd/spectral_field.hpp"

#include <algorithm>

#include "torusmhd/errors.hpp"

namespace torusmhd {

SpectralVectorField::SpectralVectorField(GridPtr grid)
    : grid_(std::move(grid)),
      data_(static_cast<std::size_t>(grid_->dimension()) * grid_->size()) {}

std::array<Complex, 3> SpectralVectorField::coeff(const Wavevector& j) const {
  const std::size_t idx = grid_->index(j);
  std::array<Complex, 3> c{};
  for (int k = 0; k < components(); ++k) c[k] = at(k, idx);
  return c;
}

void SpectralVectorField::set_mode(const Wavevector& j, const std::array<Complex, 3>& c) {
  const std::size_t idx = grid_->index(j);
  const std::size_t p = grid_->partner(idx);
  for (int k = 0; k < components(); ++k) {
    at(k, idx) = c[k];
    at(k, p) = std::conj(c[k]);
  }
  if (p == idx) {
    for (int k = 0; k < components(); ++k) at(k, idx) = c[k].real();
  }
}

void SpectralVectorField::set_zero() { std::fill(data_.begin(), data_.end(), Complex{}); }

namespace {
void require_same_grid(const SpectralVectorField& a, const SpectralVectorField& b) {
  if (!(a.grid() == b.grid())) throw DimensionError("fields live on different grids");
}
}  // namespace

SpectralVectorField& SpectralVectorField::operator+=(const SpectralVectorField& other) {
  require_same_grid(*this, other);
  for (std::size_t i = 0; i < data_.size(); ++i) data_[i] += other.data_[i];
  return *this;
}

SpectralVectorField& SpectralVectorField::operator-=(const SpectralVectorField& other) {
  require_same_grid(*this, other);
  for (std::size_t i = 0; i < data_.size(); ++i) data_[i] -= other.data_[i];
  return *this;
}

SpectralVectorField& SpectralVectorField::operator*=(double s) {
  for (auto& c : data_) c *= s;
  return *this;
}

SpectralVectorField operator+(SpectralVectorField a, const SpectralVectorField& b) { return a += b; }
SpectralVectorField operator-(SpectralVectorField a, const SpectralVectorField& b) { return a -= b; }
SpectralVectorField operator*(double s, SpectralVectorField a) { return a *= s; }

PhysicalVectorField::PhysicalVectorField(GridPtr grid, int components)
    : grid_(std::move(grid)),
      components_(components),
      data_(static_cast<std::size_t>(components) * grid_->size()) {}

double PhysicalVectorField::coordinate(std::size_t idx, int axis) const {
  const std::size_t n = static_cast<std::size_t>(grid_->modes_per_axis());
  std::size_t rest = idx;
  for (int a = grid_->dimension() - 1; a > axis; --a) rest /= n;
  return grid_->spacing() * static_cast<double>(rest % n);
}

}  // namespace torusmhd
