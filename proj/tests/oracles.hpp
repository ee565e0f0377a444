#pragma once

// Independent reference computations used only by the tests. None of them
// shares code paths with the library routines they check.

#include <algorithm>
#include <array>
#include <cmath>
#include <complex>
#include <utility>
#include <vector>

#include "torusmhd/spectral_field.hpp"

namespace oracle {

using C = std::complex<double>;
using Mat2 = std::array<C, 4>;  // row-major

inline Mat2 mul(const Mat2& x, const Mat2& y) {
  return {x[0] * y[0] + x[1] * y[2], x[0] * y[1] + x[1] * y[3], x[2] * y[0] + x[3] * y[2],
          x[2] * y[1] + x[3] * y[3]};
}

/// exp(A) by scaling and squaring with a degree-20 Taylor polynomial.
inline Mat2 expm(const Mat2& a) {
  double norm = 0.0;
  for (const C& x : a) norm = std::max(norm, std::abs(x));
  int squarings = norm > 0.25 ? static_cast<int>(std::ceil(std::log2(norm / 0.25))) : 0;
  const double scale = std::ldexp(1.0, -squarings);
  Mat2 x{a[0] * scale, a[1] * scale, a[2] * scale, a[3] * scale};
  Mat2 result{1.0, 0.0, 0.0, 1.0};
  Mat2 term{1.0, 0.0, 0.0, 1.0};
  for (int k = 1; k <= 20; ++k) {
    term = mul(term, x);
    for (C& c : term) c /= static_cast<double>(k);
    for (int i = 0; i < 4; ++i) result[i] += term[i];
  }
  for (int s = 0; s < squarings; ++s) result = mul(result, result);
  return result;
}

/// exp(-Q t) for Q = [[1, -i theta], [-i theta, 0]].
inline Mat2 expm_q(double theta, double t) {
  return expm({-t, C(0.0, theta * t), C(0.0, theta * t), 0.0});
}

/// Classical RK4 for psi' = -Q psi with `steps` uniform steps.
inline std::array<C, 2> integrate_mode(double theta, std::array<C, 2> psi, double t, int steps) {
  const double h = t / steps;
  auto f = [&](const std::array<C, 2>& y) {
    return std::array<C, 2>{-(y[0] - C(0.0, theta) * y[1]), C(0.0, theta) * y[0]};
  };
  for (int n = 0; n < steps; ++n) {
    const auto k1 = f(psi);
    const auto k2 = f({psi[0] + 0.5 * h * k1[0], psi[1] + 0.5 * h * k1[1]});
    const auto k3 = f({psi[0] + 0.5 * h * k2[0], psi[1] + 0.5 * h * k2[1]});
    const auto k4 = f({psi[0] + h * k3[0], psi[1] + h * k3[1]});
    for (int i = 0; i < 2; ++i) psi[i] += h / 6.0 * (k1[i] + 2.0 * k2[i] + 2.0 * k3[i] + k4[i]);
  }
  return psi;
}

/// Minimum of |b.j| |j|^r over every lattice point 0 < |j| <= J (both signs).
struct ScanResult {
  double value;
  std::array<int, 3> j;
};
inline ScanResult exhaustive_minimum(int dim, const std::vector<double>& b, double r, int J) {
  ScanResult best{INFINITY, {0, 0, 0}};
  const int J3 = dim == 3 ? J : 0;
  for (int x = -J; x <= J; ++x)
    for (int y = -J; y <= J; ++y)
      for (int z = -J3; z <= J3; ++z) {
        const int n2 = x * x + y * y + z * z;
        if (n2 == 0 || n2 > J * J) continue;
        double dot = b[0] * x + b[1] * y + (dim == 3 ? b[2] * z : 0.0);
        const double v = std::abs(dot) * std::pow(std::sqrt(double(n2)), r);
        if (v < best.value) best = {v, {x, y, z}};
      }
  return best;
}

/// Continued-fraction convergents p/q of x (x > 0), first `count` of them.
inline std::vector<std::pair<long, long>> convergents(double x, int count) {
  std::vector<std::pair<long, long>> out;
  long p0 = 1, q0 = 0, p1 = static_cast<long>(std::floor(x)), q1 = 1;
  out.emplace_back(p1, q1);
  double frac = x - std::floor(x);
  while (static_cast<int>(out.size()) < count && frac > 1e-15) {
    const double inv = 1.0 / frac;
    const long a = static_cast<long>(std::floor(inv));
    frac = inv - a;
    const long p2 = a * p1 + p0, q2 = a * q1 + q0;
    out.emplace_back(p2, q2);
    p0 = p1, q0 = q1, p1 = p2, q1 = q2;
  }
  return out;
}

/// Direct evaluation of the truncated quadratic terms by summing over all
/// pairs p + q = j of retained modes. Returns (N1 before projection, N2).
inline std::pair<torusmhd::SpectralVectorField, torusmhd::SpectralVectorField> convolution_terms(
    const torusmhd::SpectralVectorField& v, const torusmhd::SpectralVectorField& b) {
  using namespace torusmhd;
  const SpectralGrid& g = v.grid();
  const int dim = g.dimension();
  SpectralVectorField n1(v.grid_ptr()), n2(v.grid_ptr());
  std::vector<std::size_t> kept;
  for (std::size_t i = 0; i < g.size(); ++i)
    if (g.retained(i)) kept.push_back(i);
  for (std::size_t pi : kept) {
    const Wavevector p = g.wavevector(pi);
    for (std::size_t qi : kept) {
      const Wavevector q = g.wavevector(qi);
      const Wavevector j{p[0] + q[0], p[1] + q[1], p[2] + q[2]};
      if (!g.contains(j)) continue;
      const std::size_t ji = g.index(j);
      if (!g.retained(ji)) continue;
      for (int k = 0; k < dim; ++k) {
        C s1 = 0.0, s2 = 0.0;
        for (int l = 0; l < dim; ++l) {
          const C ij(0.0, static_cast<double>(j[l]));
          s1 += ij * (v.at(l, pi) * v.at(k, qi) - b.at(l, pi) * b.at(k, qi));
          s2 += ij * (v.at(l, pi) * b.at(k, qi) - b.at(l, pi) * v.at(k, qi));
        }
        n1.at(k, ji) += s1;
        n2.at(k, ji) += s2;
      }
    }
  }
  return {std::move(n1), std::move(n2)};
}

}  // namespace oracle
