#include "torusmhd/linear_propagator.hpp"

#include <array>
#include <algorithm>
#include <cmath>
#include <numbers>
#include <string>

#include "torusmhd/errors.hpp"

namespace torusmhd {

namespace {

// Taylor series of sinh(sqrt(w)) / sqrt(w) at w = 0, accurate to ~1e-17 for |w| < 1e-3.
double sinhc_series(double w) {
  return 1.0 + w / 6.0 * (1.0 + w / 20.0 * (1.0 + w / 42.0 * (1.0 + w / 72.0)));
}

PairMatrix multiply(const PairMatrix& x, const PairMatrix& y) {
  return {x.a * y.a + x.b * y.c, x.a * y.b + x.b * y.d, x.c * y.a + x.d * y.c,
          x.c * y.b + x.d * y.d};
}

// M^H G M for Hermitian G.
Gramian congruence(const PairMatrix& m, const Gramian& g) {
  // G M columns
  const Complex gm_a = g.a * m.a + g.b * m.c;
  const Complex gm_b = g.a * m.b + g.b * m.d;
  const Complex gm_c = std::conj(g.b) * m.a + g.d * m.c;
  const Complex gm_d = std::conj(g.b) * m.b + g.d * m.d;
  Gramian out;
  out.a = (std::conj(m.a) * gm_a + std::conj(m.c) * gm_c).real();
  out.b = std::conj(m.a) * gm_b + std::conj(m.c) * gm_d;
  out.d = (std::conj(m.b) * gm_b + std::conj(m.d) * gm_d).real();
  return out;
}

Gramian operator+(const Gramian& x, const Gramian& y) {
  return {x.a + y.a, x.b + y.b, x.d + y.d};
}

struct GaussRule {
  static constexpr int kPoints = 8;
  std::array<double, kPoints> nodes{};    // on [0, 1]
  std::array<double, kPoints> weights{};  // summing to 1
};

const GaussRule& gauss_rule() {
  static const GaussRule rule = [] {
    GaussRule g;
    constexpr int n = GaussRule::kPoints;
    for (int i = 0; i < n; ++i) {
      double x = std::cos(std::numbers::pi * (i + 0.75) / (n + 0.5));
      double dp = 0.0;
      for (int it = 0; it < 100; ++it) {
        double p0 = 1.0, p1 = x;
        for (int k = 2; k <= n; ++k) {
          const double p2 = ((2 * k - 1) * x * p1 - (k - 1) * p0) / k;
          p0 = p1;
          p1 = p2;
        }
        dp = n * (x * p1 - p0) / (x * x - 1.0);
        const double dx = p1 / dp;
        x -= dx;
        if (std::abs(dx) < 1e-16) break;
      }
      g.nodes[i] = 0.5 * (1.0 - x);
      g.weights[i] = 1.0 / ((1.0 - x * x) * dp * dp);
    }
    return g;
  }();
  return rule;
}

void require_linear_data(const SpectralVectorField& v0, const SpectralVectorField& h0) {
  if (v0.empty() || h0.empty() || !(v0.grid() == h0.grid()))
    throw DimensionError("evolve_linear: V0 and H0 must share a grid");
  const double scale = std::max({1.0, sobolev_norm(v0, homogeneous(0.0)),
                                 sobolev_norm(h0, homogeneous(0.0))});
  if (mean_residual(v0) > 1e-12 * scale || mean_residual(h0) > 1e-12 * scale)
    throw PreconditionError("evolve_linear: initial data must have zero mean");
  if (divergence_residual(v0) > 1e-10 || divergence_residual(h0) > 1e-10)
    throw PreconditionError("evolve_linear: initial data must be divergence-free");
}

template <bool Parallel>
std::pair<SpectralVectorField, SpectralVectorField> evolve_impl(const SpectralVectorField& v0,
                                                                const SpectralVectorField& h0,
                                                                const BackgroundField& bf,
                                                                double t) {
  if (t < 0.0) throw PreconditionError("evolve_linear: t must be non-negative");
  require_linear_data(v0, h0);
  const SpectralGrid& grid = v0.grid();
  if (bf.dimension != grid.dimension())
    throw DimensionError("evolve_linear: background dimension does not match the grid");

  std::vector<PairMatrix> mats(grid.size());
  const auto size = static_cast<long long>(grid.size());
  auto fill = [&](long long i) {
    const auto idx = static_cast<std::size_t>(i);
    if (grid.norm2(idx) == 0.0) {
      mats[idx] = {1.0, 0.0, 0.0, 1.0};
      return;
    }
    mats[idx] = propagator_matrix(decompose_theta(bf.dot(grid.wavevector(idx))), t);
  };
  if constexpr (Parallel) {
#pragma omp parallel for schedule(static)
    for (long long i = 0; i < size; ++i) fill(i);
  } else {
    for (long long i = 0; i < size; ++i) fill(i);
  }

  SpectralVectorField v = v0;
  SpectralVectorField h = h0;
  for (int k = 0; k < grid.dimension(); ++k) {
    if constexpr (Parallel)
      kernels::omp::propagate_pairs(grid, mats, v.component(k), h.component(k));
    else
      kernels::serial::propagate_pairs(grid, mats, v.component(k), h.component(k));
  }
  return {std::move(v), std::move(h)};
}

}  // namespace

const char* region_name(Region r) {
  switch (r) {
    case Region::S1: return "S1";
    case Region::S2: return "S2";
    case Region::S3: return "S3";
  }
  return "?";
}

Region classify_region(double discriminant) {
  if (discriminant <= 0.0) return Region::S1;
  if (discriminant <= 0.25) return Region::S2;
  return Region::S3;
}

ModeDecomposition decompose_theta(double theta) {
  ModeDecomposition md;
  md.theta = theta;
  md.discriminant = (1.0 - 2.0 * theta) * (1.0 + 2.0 * theta);
  md.region = classify_region(md.discriminant);
  if (md.discriminant >= 0.0) {
    const double root = std::sqrt(md.discriminant);
    md.lambda1 = 0.5 * (1.0 + root);
    // lambda1 * lambda2 = theta^2 avoids cancellation as theta -> 0.
    md.lambda2 = 2.0 * theta * theta / (1.0 + root);
  } else {
    const double half_sigma = 0.5 * std::sqrt(-md.discriminant);
    md.lambda1 = Complex(0.5, half_sigma);
    md.lambda2 = Complex(0.5, -half_sigma);
  }
  return md;
}

ModeDecomposition decompose_mode(const Wavevector& j, const BackgroundField& bf) {
  if (j[0] == 0 && j[1] == 0 && j[2] == 0)
    throw PreconditionError("decompose_mode: j must be nonzero");
  ModeDecomposition md = decompose_theta(bf.dot(j));
  md.j = j;
  return md;
}

double divided_difference(const ModeDecomposition& md, double t) {
  if (t < 0.0) throw PreconditionError("divided_difference: t must be non-negative");
  const double w = 0.25 * md.discriminant * t * t;  // (delta t)^2, delta = (l1 - l2) / 2
  if (md.degenerate() && std::abs(w) < 1e-3) return t * std::exp(-0.5 * t) * sinhc_series(w);
  if (md.discriminant > 0.0) {
    // e^{-l2 t} (1 - e^{-(l1 - l2) t}) / (l1 - l2), free of cancellation and overflow.
    const double gap = std::sqrt(md.discriminant);
    return std::exp(-md.lambda2.real() * t) * -std::expm1(-gap * t) / gap;
  }
  if (md.discriminant < 0.0) {
    const double x = 0.5 * std::sqrt(-md.discriminant) * t;
    const double sinc = std::abs(x) < 1e-4 ? sinhc_series(-x * x) : std::sin(x) / x;
    return t * std::exp(-0.5 * t) * sinc;
  }
  return t * std::exp(-0.5 * t);
}

PairMatrix propagator_matrix(const ModeDecomposition& md, double t) {
  if (t < 0.0) throw PreconditionError("propagator_matrix: t must be non-negative");
  const double g = divided_difference(md, t);
  Complex e1;
  if (md.discriminant >= 0.0) {
    e1 = std::exp(-md.lambda1.real() * t);
  } else {
    const double phase = md.lambda1.imag() * t;
    e1 = std::exp(-0.5 * t) * Complex(std::cos(phase), -std::sin(phase));
  }
  const Complex off(0.0, md.theta * g);
  return {e1 - g * md.lambda2, off, off, e1 + g * md.lambda1};
}

KernelValues kernel_values(const ModeDecomposition& md, double t) {
  KernelValues kv;
  kv.g = std::abs(divided_difference(md, t));
  const double l1 = std::abs(md.lambda1);
  kv.g1 = kv.g * std::hypot(l1, md.theta);
  kv.g2 = kv.g1 * std::abs(md.theta) / l1;
  kv.g3 = std::exp(-md.lambda1.real() * t);
  return kv;
}

std::vector<PairMatrix> propagator_table(const SpectralGrid& grid, const BackgroundField& bf,
                                         double t) {
  std::vector<PairMatrix> mats(grid.size());
  const auto size = static_cast<long long>(grid.size());
#pragma omp parallel for schedule(static)
  for (long long i = 0; i < size; ++i) {
    const auto idx = static_cast<std::size_t>(i);
    mats[idx] = grid.norm2(idx) == 0.0
                    ? PairMatrix{1.0, 0.0, 0.0, 1.0}
                    : propagator_matrix(decompose_theta(bf.dot(grid.wavevector(idx))), t);
  }
  return mats;
}

std::pair<SpectralVectorField, SpectralVectorField> evolve_linear(const SpectralVectorField& v0,
                                                                  const SpectralVectorField& h0,
                                                                  const BackgroundField& bf,
                                                                  double t) {
  return evolve_impl<true>(v0, h0, bf, t);
}

namespace serial {
std::pair<SpectralVectorField, SpectralVectorField> evolve_linear(const SpectralVectorField& v0,
                                                                  const SpectralVectorField& h0,
                                                                  const BackgroundField& bf,
                                                                  double t) {
  return evolve_impl<false>(v0, h0, bf, t);
}
}  // namespace serial

Gramian damping_gramian(const ModeDecomposition& md, double t_lo, double t_hi) {
  if (t_lo < 0.0 || t_hi < t_lo)
    throw PreconditionError("damping_gramian: need 0 <= t_lo <= t_hi");
  const double length = t_hi - t_lo;
  if (length == 0.0) return {};

  // Base panel resolves both the decay (rate <= 1) and the oscillation |l1 - l2|.
  const double rate = std::max(1.0, std::abs(md.lambda1 - md.lambda2));
  int doublings = 0;
  double h = length;
  while (h * rate > 0.5 && doublings < 60) {
    h *= 0.5;
    ++doublings;
  }

  const GaussRule& rule = gauss_rule();
  Gramian g;
  for (int q = 0; q < GaussRule::kPoints; ++q) {
    const PairMatrix m = propagator_matrix(md, h * rule.nodes[q]);
    const double w = h * rule.weights[q];
    g.a += w * std::norm(m.a);
    g.b += w * std::conj(m.a) * m.b;
    g.d += w * std::norm(m.b);
  }
  PairMatrix step = propagator_matrix(md, h);
  for (int k = 0; k < doublings; ++k) {
    g = g + congruence(step, g);
    step = multiply(step, step);
  }
  return t_lo > 0.0 ? congruence(propagator_matrix(md, t_lo), g) : g;
}

double linear_damping_integral(const SpectralVectorField& v0, const SpectralVectorField& h0,
                               const BackgroundField& bf, double t, SobolevIndex idx) {
  if (t < 0.0) throw PreconditionError("linear_damping_integral: t must be non-negative");
  require_linear_data(v0, h0);
  const SpectralGrid& grid = v0.grid();
  const std::vector<double> weights = sobolev_weights(grid, idx);
  std::vector<double> contrib(grid.size(), 0.0);
  const auto size = static_cast<long long>(grid.size());
  const int dim = grid.dimension();
#pragma omp parallel for schedule(static)
  for (long long i = 0; i < size; ++i) {
    const auto m = static_cast<std::size_t>(i);
    if (grid.norm2(m) == 0.0 || weights[m] == 0.0) continue;
    const Gramian g = damping_gramian(decompose_theta(bf.dot(grid.wavevector(m))), 0.0, t);
    double s = 0.0;
    for (int k = 0; k < dim; ++k) {
      const Complex v = v0.at(k, m);
      const Complex b = h0.at(k, m);
      s += g.a * std::norm(v) + 2.0 * (std::conj(v) * g.b * b).real() + g.d * std::norm(b);
    }
    contrib[m] = weights[m] * s;
  }
  double total = 0.0;
  for (double c : contrib) total += c;
  return total;
}

}  // namespace torusmhd
