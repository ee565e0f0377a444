#pragma once

#include <array>
#include <cstddef>
#include <memory>
#include <span>
#include <vector>

namespace torusmhd {

/// Integer wavevector. Components beyond the grid dimension are zero.
using Wavevector = std::array<int, 3>;

/// Periodic grid on the torus [0, 2pi)^n with N modes per axis.
///
/// Coefficients are stored in FFT order (row-major, last axis fastest, each
/// axis index i holding wavenumber i for i < N/2 and i - N otherwise), so the
/// lattice is { j : -N/2 <= j_i < N/2 }. Per-index tables (wavevector, |j|^2,
/// index of -j, dealias mask) are built once at construction.
class SpectralGrid {
 public:
  SpectralGrid(int dimension, int modes_per_axis);

  static std::shared_ptr<const SpectralGrid> make(int dimension, int modes_per_axis);

  int dimension() const { return dim_; }
  int modes_per_axis() const { return n_; }
  std::size_t size() const { return size_; }

  /// Largest retained |j_i| under the 2/3 rule: the largest K with 3K < N.
  int dealias_cutoff() const { return cutoff_; }

  /// Physical grid spacing 2pi/N.
  double spacing() const;

  Wavevector wavevector(std::size_t idx) const;
  int wavenumber(std::size_t idx, int axis) const { return k_[axis][idx]; }
  std::span<const int> wavenumbers(int axis) const { return k_[axis]; }

  double norm2(std::size_t idx) const { return norm2_[idx]; }
  std::span<const double> norm2() const { return norm2_; }

  /// Index of -j (wavenumbers taken modulo N).
  std::size_t partner(std::size_t idx) const { return partner_[idx]; }

  /// True when every |j_i| survives the 2/3 dealiasing rule.
  bool retained(std::size_t idx) const { return retained_[idx] != 0; }

  bool contains(const Wavevector& j) const;
  std::size_t index(const Wavevector& j) const;

  /// Storage indices sorted by lexicographic order of j (j_1 slowest).
  std::vector<std::size_t> lexicographic_order() const;

  bool operator==(const SpectralGrid& other) const {
    return dim_ == other.dim_ && n_ == other.n_;
  }

 private:
  int dim_;
  int n_;
  int cutoff_;
  std::size_t size_;
  std::array<std::vector<int>, 3> k_;
  std::vector<double> norm2_;
  std::vector<std::size_t> partner_;
  std::vector<unsigned char> retained_;
};

using GridPtr = std::shared_ptr<const SpectralGrid>;

}  // namespace torusmhd
