#include "torusmhd/kernel_verifier.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>

#include "torusmhd/errors.hpp"

namespace torusmhd {

namespace {

constexpr int kReports = 8;

struct Extremum {
  double value = -1.0;
  Wavevector j{0, 0, 0};
  double t = 0.0;
  std::size_t samples = 0;
};

bool lex_less(const Wavevector& x, const Wavevector& y) { return x < y; }

// Larger value wins; ties go to the smaller (j, t).
void absorb(Extremum& into, const Extremum& other) {
  into.samples += other.samples;
  if (other.value < 0.0) return;
  const bool better =
      other.value > into.value ||
      (other.value == into.value &&
       (lex_less(other.j, into.j) || (other.j == into.j && other.t < into.t)));
  if (better) {
    into.value = other.value;
    into.j = other.j;
    into.t = other.t;
  }
}

double ratio(double observed, double envelope) {
  if (envelope > 0.0) return observed / envelope;
  return observed == 0.0 ? 0.0 : std::numeric_limits<double>::infinity();
}

std::vector<Wavevector> half_ball(int dim, int radius) {
  std::vector<Wavevector> out;
  const int r2 = radius * radius;
  const int r3 = dim == 3 ? radius : 0;
  for (int a = -radius; a <= radius; ++a)
    for (int b = -radius; b <= radius; ++b)
      for (int c = -r3; c <= r3; ++c) {
        if (a * a + b * b + c * c > r2 || a * a + b * b + c * c == 0) continue;
        const bool canonical = a > 0 || (a == 0 && (b > 0 || (b == 0 && c > 0)));
        if (canonical) out.push_back({a, b, c});
      }
  return out;
}

// Per wavevector: one Extremum per report slot.
std::array<Extremum, kReports> scan_mode(const Wavevector& j, const BackgroundField& bf,
                                         std::span<const double> grid) {
  std::array<Extremum, kReports> ex;
  const ModeDecomposition md = decompose_mode(j, bf);
  const double jn = std::sqrt(double(j[0]) * j[0] + double(j[1]) * j[1] + double(j[2]) * j[2]);
  const double th2 = md.theta * md.theta;
  const int base = md.region == Region::S1 ? 0 : md.region == Region::S2 ? 2 : 4;
  for (double t : grid) {
    const KernelValues kv = kernel_values(md, t);
    double env1 = 0.0, env2 = 0.0;
    switch (md.region) {
      case Region::S1: env1 = env2 = jn * std::exp(-0.25 * t); break;
      case Region::S2: env1 = env2 = std::exp(-0.125 * t); break;
      case Region::S3:
        env1 = std::exp(-th2 * t);
        env2 = std::abs(md.theta) * env1;
        break;
    }
    const std::array<std::pair<int, double>, 3> obs{{{base, ratio(kv.g1, env1)},
                                                     {base + 1, ratio(kv.g2, env2)},
                                                     {6, ratio(kv.g3, std::exp(-0.5 * t))}}};
    for (const auto& [slot, value] : obs) absorb(ex[slot], Extremum{value, j, t, 1});
    if (md.region == Region::S1)
      absorb(ex[7], Extremum{ratio(kv.g1, jn * t * std::exp(-0.5 * t)), j, t, 1});
  }
  return ex;
}

template <bool Parallel>
std::vector<BoundReport> sweep_impl(const BackgroundField& bf, int lattice_radius,
                                    std::span<const double> time_grid) {
  if (lattice_radius < 1) throw PreconditionError("sweep_bounds: J must be at least 1");
  if (time_grid.empty()) throw PreconditionError("sweep_bounds: time grid is empty");
  for (double t : time_grid)
    if (!(t >= 0.0)) throw PreconditionError("sweep_bounds: times must be non-negative");

  const std::vector<Wavevector> lattice = half_ball(bf.dimension, lattice_radius);
  std::vector<std::array<Extremum, kReports>> per_mode(lattice.size());
  const auto count = static_cast<long long>(lattice.size());
  if constexpr (Parallel) {
#pragma omp parallel for schedule(dynamic, 16)
    for (long long i = 0; i < count; ++i) per_mode[i] = scan_mode(lattice[i], bf, time_grid);
  } else {
    for (long long i = 0; i < count; ++i) per_mode[i] = scan_mode(lattice[i], bf, time_grid);
  }
  std::array<Extremum, kReports> total;
  for (const auto& ex : per_mode)
    for (int k = 0; k < kReports; ++k) absorb(total[k], ex[k]);

  static const std::array<std::array<const char*, 3>, kReports> labels{{
      {"S1", "G1", "|G1| <= C |j| exp(-t/4)"},
      {"S1", "G2", "|G2| <= C |j| exp(-t/4)"},
      {"S2", "G1", "|G1| <= C exp(-t/8)"},
      {"S2", "G2", "|G2| <= C exp(-t/8)"},
      {"S3", "G1", "|G1| <= C exp(-theta^2 t)"},
      {"S3", "G2", "|G2| <= C |theta| exp(-theta^2 t)"},
      {"all", "G3", "|G3| <= C exp(-t/2)"},
      {"S1", "G1", "|G1| <= C |j| t exp(-t/2)"},
  }};
  std::vector<BoundReport> reports;
  for (int k = 0; k < kReports; ++k) {
    BoundReport r;
    r.region = labels[k][0];
    r.kernel = labels[k][1];
    r.bound_form = labels[k][2];
    r.samples = total[k].samples;
    r.empty = total[k].samples == 0;
    r.informational = k == 7;
    if (!r.empty) {
      r.c_empirical = total[k].value;
      r.worst_j = total[k].j;
      r.worst_t = total[k].t;
    }
    reports.push_back(r);
  }
  return reports;
}

}  // namespace

std::vector<double> default_sweep_grid(double t_max) {
  std::vector<double> grid;
  for (int i = 0; i <= 40; ++i) {
    const double t = 0.05 * i;
    if (t <= t_max) grid.push_back(t);
  }
  for (double t = 0.5; t <= t_max * (1.0 + 1e-12); t *= 1.3) grid.push_back(t);
  if (grid.back() < t_max) grid.push_back(t_max);
  std::sort(grid.begin(), grid.end());
  grid.erase(std::unique(grid.begin(), grid.end()), grid.end());
  return grid;
}

std::vector<BoundReport> sweep_bounds(const BackgroundField& bf, int lattice_radius,
                                      std::span<const double> time_grid) {
  return sweep_impl<true>(bf, lattice_radius, time_grid);
}

namespace serial {
std::vector<BoundReport> sweep_bounds(const BackgroundField& bf, int lattice_radius,
                                      std::span<const double> time_grid) {
  return sweep_impl<false>(bf, lattice_radius, time_grid);
}
}  // namespace serial

}  // namespace torusmhd
