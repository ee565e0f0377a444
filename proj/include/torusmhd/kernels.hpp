#pragma once

// Per-mode data-parallel kernels. Every kernel exists twice: a plain serial
// loop kept as the reference implementation for tests and benchmarks, and an
// OpenMP version used by the library. The OpenMP reductions sum fixed-size
// blocks in index order, so their results do not depend on the thread count.

#include <complex>
#include <cstddef>
#include <span>

#include "torusmhd/spectral_grid.hpp"

namespace torusmhd::kernels {

using Complex = std::complex<double>;

/// 2x2 complex matrix [[a, b], [c, d]] acting on a (v, b) coefficient pair.
struct PairMatrix {
  Complex a, b, c, d;
};

/// Reduction block length used by the parallel sums.
inline constexpr std::size_t kReductionBlock = 2048;

namespace serial {

void leray_project(const SpectralGrid& grid, std::span<const Complex> in, std::span<Complex> out);
void norm_power(const SpectralGrid& grid, double s, std::span<const Complex> in,
                std::span<Complex> out);
double weighted_norm2(const SpectralGrid& grid, std::span<const Complex> data,
                      std::span<const double> weights);
void propagate_pairs(const SpectralGrid& grid, std::span<const PairMatrix> mats,
                     std::span<Complex> v, std::span<Complex> b);

}  // namespace serial

namespace omp {

void leray_project(const SpectralGrid& grid, std::span<const Complex> in, std::span<Complex> out);
void norm_power(const SpectralGrid& grid, double s, std::span<const Complex> in,
                std::span<Complex> out);
double weighted_norm2(const SpectralGrid& grid, std::span<const Complex> data,
                      std::span<const double> weights);
void propagate_pairs(const SpectralGrid& grid, std::span<const PairMatrix> mats,
                     std::span<Complex> v, std::span<Complex> b);

}  // namespace omp

}  // namespace torusmhd::kernels
