#include "torusmhd/operators.hpp"

#include <algorithm>
#include <cmath>

#include "torusmhd/errors.hpp"
#include "torusmhd/kernels.hpp"

namespace torusmhd {

namespace {

bool is_integer(double s) { return s >= 0.0 && std::floor(s) == s; }

bool has_mean(const SpectralVectorField& f) {
  for (int k = 0; k < f.components(); ++k) {
    if (f.at(k, 0) != Complex{}) return true;
  }
  return false;
}

}  // namespace

std::vector<double> sobolev_weights(const SpectralGrid& grid, SobolevIndex idx) {
  std::vector<double> w(grid.size());
  const auto k2 = grid.norm2();
  if (idx.homogeneous) {
    for (std::size_t i = 0; i < w.size(); ++i) {
      w[i] = k2[i] == 0.0 ? (idx.s == 0.0 ? 1.0 : 0.0) : std::pow(k2[i], idx.s);
    }
  } else if (is_integer(idx.s)) {
    const int top = static_cast<int>(idx.s);
    for (std::size_t i = 0; i < w.size(); ++i) {
      double acc = 0.0;
      double p = 1.0;
      for (int l = 0; l <= top; ++l) {
        acc += p;
        p *= k2[i];
      }
      w[i] = acc;
    }
  } else {
    for (std::size_t i = 0; i < w.size(); ++i) w[i] = std::pow(1.0 + k2[i], idx.s);
  }
  return w;
}

SpectralVectorField leray_project(const SpectralVectorField& f) {
  SpectralVectorField out(f.grid_ptr());
  kernels::omp::leray_project(f.grid(), f.data(), out.data());
  return out;
}

SpectralVectorField lambda_power(const SpectralVectorField& f, double s) {
  if (s < 0.0 && has_mean(f)) {
    throw PreconditionError("lambda_power with negative order needs a mean-zero field");
  }
  SpectralVectorField out(f.grid_ptr());
  kernels::omp::norm_power(f.grid(), s, f.data(), out.data());
  return out;
}

double sobolev_norm(const SpectralVectorField& f, SobolevIndex idx) {
  if (idx.homogeneous && idx.s < 0.0 && has_mean(f)) {
    throw PreconditionError("negative-order homogeneous norm needs a mean-zero field");
  }
  const auto w = sobolev_weights(f.grid(), idx);
  return std::sqrt(kernels::omp::weighted_norm2(f.grid(), f.data(), w));
}

double sobolev_norm(const SpectralVectorField& v, const SpectralVectorField& b, SobolevIndex idx) {
  const double a = sobolev_norm(v, idx);
  const double c = sobolev_norm(b, idx);
  return std::sqrt(a * a + c * c);
}

SpectralVectorField dealias(const SpectralVectorField& f) {
  SpectralVectorField out = f;
  const auto& g = f.grid();
  for (int k = 0; k < f.components(); ++k) {
    auto c = out.component(k);
    for (std::size_t i = 0; i < g.size(); ++i) {
      if (!g.retained(i)) c[i] = 0.0;
    }
  }
  return out;
}

SpectralVectorField directional_derivative(const SpectralVectorField& f,
                                           const std::array<double, 3>& direction) {
  SpectralVectorField out(f.grid_ptr());
  const auto& g = f.grid();
  for (std::size_t i = 0; i < g.size(); ++i) {
    double theta = 0.0;
    for (int a = 0; a < g.dimension(); ++a) theta += direction[a] * g.wavenumber(i, a);
    for (int k = 0; k < f.components(); ++k) out.at(k, i) = Complex(0.0, theta) * f.at(k, i);
  }
  return out;
}

double divergence_residual(const SpectralVectorField& f) {
  const auto& g = f.grid();
  double num = 0.0;
  double den = 0.0;
  for (std::size_t i = 0; i < g.size(); ++i) {
    Complex dot = 0.0;
    for (int k = 0; k < f.components(); ++k) {
      dot += static_cast<double>(g.wavenumber(i, k)) * f.at(k, i);
      den += std::norm(f.at(k, i));
    }
    if (i != 0) num += std::norm(dot) / g.norm2(i);
  }
  return den == 0.0 ? 0.0 : std::sqrt(num / den);
}

double mean_residual(const SpectralVectorField& f) {
  double m = 0.0;
  for (int k = 0; k < f.components(); ++k) m = std::max(m, std::abs(f.at(k, 0)));
  return m;
}

double hermitian_residual(const SpectralVectorField& f) {
  const auto& g = f.grid();
  double worst = 0.0;
  double scale = 0.0;
  for (int k = 0; k < f.components(); ++k) {
    auto c = f.component(k);
    for (std::size_t i = 0; i < g.size(); ++i) {
      worst = std::max(worst, std::abs(c[i] - std::conj(c[g.partner(i)])));
      scale = std::max(scale, std::abs(c[i]));
    }
  }
  return scale == 0.0 ? 0.0 : worst / scale;
}

void enforce_hermitian(SpectralVectorField& f) {
  const auto& g = f.grid();
  for (int k = 0; k < f.components(); ++k) {
    auto c = f.component(k);
    for (std::size_t i = 0; i < g.size(); ++i) {
      const std::size_t p = g.partner(i);
      if (p < i) continue;
      if (p == i) {
        c[i] = c[i].real();
        continue;
      }
      const Complex avg = 0.5 * (c[i] + std::conj(c[p]));
      c[i] = avg;
      c[p] = std::conj(avg);
    }
  }
}

}  // namespace torusmhd
