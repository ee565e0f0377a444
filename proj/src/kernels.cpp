#include "torusmhd/kernels.hpp"

#include <algorithm>
#include <cmath>
#include <vector>

namespace torusmhd::kernels {

namespace {

inline void leray_mode(const SpectralGrid& grid, std::size_t idx, std::span<const Complex> in,
                       std::span<Complex> out) {
  const int dim = grid.dimension();
  const std::size_t n = grid.size();
  if (idx == 0) {
    for (int k = 0; k < dim; ++k) out[k * n] = 0.0;
    return;
  }
  Complex dot = 0.0;
  for (int k = 0; k < dim; ++k) dot += static_cast<double>(grid.wavenumber(idx, k)) * in[k * n + idx];
  const Complex f = dot / grid.norm2(idx);
  for (int k = 0; k < dim; ++k) {
    out[k * n + idx] = in[k * n + idx] - static_cast<double>(grid.wavenumber(idx, k)) * f;
  }
}

inline double mode_power(const SpectralGrid& grid, std::size_t idx, double s) {
  if (idx == 0) return s == 0.0 ? 1.0 : 0.0;
  return std::pow(grid.norm2(idx), 0.5 * s);
}

inline double block_sum(const SpectralGrid& grid, std::span<const Complex> data,
                        std::span<const double> weights, std::size_t lo, std::size_t hi) {
  const std::size_t n = grid.size();
  const std::size_t comps = data.size() / n;
  double acc = 0.0;
  for (std::size_t idx = lo; idx < hi; ++idx) {
    double m = 0.0;
    for (std::size_t k = 0; k < comps; ++k) m += std::norm(data[k * n + idx]);
    acc += weights[idx] * m;
  }
  return acc;
}

inline void apply_pair(const PairMatrix& m, Complex& v, Complex& b) {
  const Complex nv = m.a * v + m.b * b;
  const Complex nb = m.c * v + m.d * b;
  v = nv;
  b = nb;
}

}  // namespace

namespace serial {

void leray_project(const SpectralGrid& grid, std::span<const Complex> in, std::span<Complex> out) {
  for (std::size_t idx = 0; idx < grid.size(); ++idx) leray_mode(grid, idx, in, out);
}

void norm_power(const SpectralGrid& grid, double s, std::span<const Complex> in,
                std::span<Complex> out) {
  const std::size_t n = grid.size();
  const std::size_t comps = in.size() / n;
  for (std::size_t idx = 0; idx < n; ++idx) {
    const double w = mode_power(grid, idx, s);
    for (std::size_t k = 0; k < comps; ++k) out[k * n + idx] = w * in[k * n + idx];
  }
}

double weighted_norm2(const SpectralGrid& grid, std::span<const Complex> data,
                      std::span<const double> weights) {
  return block_sum(grid, data, weights, 0, grid.size());
}

void propagate_pairs(const SpectralGrid& grid, std::span<const PairMatrix> mats,
                     std::span<Complex> v, std::span<Complex> b) {
  const std::size_t n = grid.size();
  const std::size_t comps = v.size() / n;
  for (std::size_t idx = 0; idx < n; ++idx) {
    for (std::size_t k = 0; k < comps; ++k) apply_pair(mats[idx], v[k * n + idx], b[k * n + idx]);
  }
}

}  // namespace serial

namespace omp {

void leray_project(const SpectralGrid& grid, std::span<const Complex> in, std::span<Complex> out) {
  const long long n = static_cast<long long>(grid.size());
#pragma omp parallel for schedule(static)
  for (long long idx = 0; idx < n; ++idx) leray_mode(grid, static_cast<std::size_t>(idx), in, out);
}

void norm_power(const SpectralGrid& grid, double s, std::span<const Complex> in,
                std::span<Complex> out) {
  const std::size_t n = grid.size();
  const std::size_t comps = in.size() / n;
  const long long total = static_cast<long long>(n);
#pragma omp parallel for schedule(static)
  for (long long i = 0; i < total; ++i) {
    const std::size_t idx = static_cast<std::size_t>(i);
    const double w = mode_power(grid, idx, s);
    for (std::size_t k = 0; k < comps; ++k) out[k * n + idx] = w * in[k * n + idx];
  }
}

double weighted_norm2(const SpectralGrid& grid, std::span<const Complex> data,
                      std::span<const double> weights) {
  const std::size_t n = grid.size();
  const std::size_t blocks = (n + kReductionBlock - 1) / kReductionBlock;
  std::vector<double> partial(blocks, 0.0);
  const long long nb = static_cast<long long>(blocks);
#pragma omp parallel for schedule(static)
  for (long long blk = 0; blk < nb; ++blk) {
    const std::size_t lo = static_cast<std::size_t>(blk) * kReductionBlock;
    const std::size_t hi = std::min(n, lo + kReductionBlock);
    partial[static_cast<std::size_t>(blk)] = block_sum(grid, data, weights, lo, hi);
  }
  double acc = 0.0;
  for (double p : partial) acc += p;
  return acc;
}

void propagate_pairs(const SpectralGrid& grid, std::span<const PairMatrix> mats,
                     std::span<Complex> v, std::span<Complex> b) {
  const std::size_t n = grid.size();
  const std::size_t comps = v.size() / n;
  const long long total = static_cast<long long>(n);
#pragma omp parallel for schedule(static)
  for (long long i = 0; i < total; ++i) {
    const std::size_t idx = static_cast<std::size_t>(i);
    for (std::size_t k = 0; k < comps; ++k) apply_pair(mats[idx], v[k * n + idx], b[k * n + idx]);
  }
}

}  // namespace omp

}  // namespace torusmhd::kernels
