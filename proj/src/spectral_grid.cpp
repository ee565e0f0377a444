#include "torusmhd/spectral_grid.hpp"

#include <algorithm>
#include <cstdlib>
#include <numbers>
#include <string>

#include "torusmhd/errors.hpp"

namespace torusmhd {

namespace {

int wrap(int i, int n) { return i < n / 2 ? i : i - n; }
int unwrap(int j, int n) { return j < 0 ? j + n : j; }

}  // namespace

SpectralGrid::SpectralGrid(int dimension, int modes_per_axis)
    : dim_(dimension), n_(modes_per_axis) {
  if (dim_ != 2 && dim_ != 3) {
    throw DimensionError("grid dimension must be 2 or 3, got " + std::to_string(dim_));
  }
  if (n_ < 8 || n_ % 2 != 0) {
    throw DimensionError("modes per axis must be even and >= 8, got " + std::to_string(n_));
  }
  cutoff_ = (n_ - 1) / 3;
  size_ = 1;
  for (int a = 0; a < dim_; ++a) size_ *= static_cast<std::size_t>(n_);

  for (auto& k : k_) k.assign(size_, 0);
  norm2_.resize(size_);
  partner_.resize(size_);
  retained_.resize(size_);

  const std::size_t n = static_cast<std::size_t>(n_);
  for (std::size_t idx = 0; idx < size_; ++idx) {
    std::size_t rest = idx;
    std::array<int, 3> raw{0, 0, 0};
    for (int a = dim_ - 1; a >= 0; --a) {
      raw[a] = static_cast<int>(rest % n);
      rest /= n;
    }
    double s = 0.0;
    bool keep = true;
    std::size_t p = 0;
    for (int a = 0; a < dim_; ++a) {
      const int j = wrap(raw[a], n_);
      k_[a][idx] = j;
      s += static_cast<double>(j) * j;
      keep = keep && 3 * std::abs(j) < n_;
      p = p * n + static_cast<std::size_t>((n_ - raw[a]) % n_);
    }
    norm2_[idx] = s;
    partner_[idx] = p;
    retained_[idx] = keep ? 1 : 0;
  }
}

std::shared_ptr<const SpectralGrid> SpectralGrid::make(int dimension, int modes_per_axis) {
  return std::make_shared<const SpectralGrid>(dimension, modes_per_axis);
}

double SpectralGrid::spacing() const { return 2.0 * std::numbers::pi / n_; }

Wavevector SpectralGrid::wavevector(std::size_t idx) const {
  Wavevector j{0, 0, 0};
  for (int a = 0; a < dim_; ++a) j[a] = k_[a][idx];
  return j;
}

bool SpectralGrid::contains(const Wavevector& j) const {
  for (int a = 0; a < 3; ++a) {
    if (a < dim_) {
      if (j[a] < -n_ / 2 || j[a] >= n_ / 2) return false;
    } else if (j[a] != 0) {
      return false;
    }
  }
  return true;
}

std::size_t SpectralGrid::index(const Wavevector& j) const {
  if (!contains(j)) {
    throw DimensionError("wavevector outside the grid lattice");
  }
  std::size_t idx = 0;
  for (int a = 0; a < dim_; ++a) {
    idx = idx * static_cast<std::size_t>(n_) + static_cast<std::size_t>(unwrap(j[a], n_));
  }
  return idx;
}

std::vector<std::size_t> SpectralGrid::lexicographic_order() const {
  std::vector<std::size_t> order;
  order.reserve(size_);
  const int lo = -n_ / 2;
  const int hi = n_ / 2;
  if (dim_ == 2) {
    for (int a = lo; a < hi; ++a)
      for (int b = lo; b < hi; ++b) order.push_back(index({a, b, 0}));
  } else {
    for (int a = lo; a < hi; ++a)
      for (int b = lo; b < hi; ++b)
        for (int c = lo; c < hi; ++c) order.push_back(index({a, b, c}));
  }
  return order;
}

}  // namespace torusmhd
