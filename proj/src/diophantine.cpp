#include "torusmhd/diophantine.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <limits>
#include <string>
#include <tuple>

#include "torusmhd/errors.hpp"

namespace torusmhd {

namespace {

struct Candidate {
  double value;
  Wavevector j;
};

bool better(const Candidate& a, const Candidate& b) {
  return std::tie(a.value, a.j) < std::tie(b.value, b.j);
}

double magnitude_of(const std::array<double, 3>& b) {
  return std::sqrt(b[0] * b[0] + b[1] * b[1] + b[2] * b[2]);
}

// Visits every canonical lattice point with first component `j1` inside the
// ball of the given radius.
template <class Visit>
void visit_slice(int dimension, int radius, int j1, Visit&& visit) {
  const long r2 = static_cast<long>(radius) * radius;
  const long rem1 = r2 - static_cast<long>(j1) * j1;
  if (rem1 < 0) return;
  const int lim2 = static_cast<int>(std::floor(std::sqrt(static_cast<double>(rem1))));
  for (int j2 = -lim2; j2 <= lim2; ++j2) {
    const long rem2 = rem1 - static_cast<long>(j2) * j2;
    if (rem2 < 0) continue;
    if (dimension == 2) {
      if (j1 == 0 && j2 <= 0) continue;
      visit(Wavevector{j1, j2, 0});
      continue;
    }
    const int lim3 = static_cast<int>(std::floor(std::sqrt(static_cast<double>(rem2))));
    for (int j3 = -lim3; j3 <= lim3; ++j3) {
      if (j1 == 0 && (j2 < 0 || (j2 == 0 && j3 <= 0))) continue;
      visit(Wavevector{j1, j2, j3});
    }
  }
}

struct SliceResult {
  Candidate best{std::numeric_limits<double>::infinity(), {0, 0, 0}};
  bool resonant = false;
  Wavevector resonant_j{0, 0, 0};
};

SliceResult scan_slice(int dimension, const std::array<double, 3>& b, double r, int radius,
                       int j1) {
  SliceResult out;
  const double bmag = magnitude_of(b);
  visit_slice(dimension, radius, j1, [&](const Wavevector& j) {
    const double len = std::sqrt(static_cast<double>(j[0]) * j[0] +
                                 static_cast<double>(j[1]) * j[1] +
                                 static_cast<double>(j[2]) * j[2]);
    const double dot = std::abs(b[0] * j[0] + b[1] * j[1] + b[2] * j[2]);
    if (dot < kResonanceTolerance * bmag * len) {
      if (!out.resonant) {
        out.resonant = true;
        out.resonant_j = j;
      }
      return;
    }
    const Candidate c{dot * std::pow(len, r), j};
    if (better(c, out.best)) out.best = c;
  });
  return out;
}

LatticeMinimum combine(const std::vector<SliceResult>& slices) {
  LatticeMinimum out;
  Candidate best{std::numeric_limits<double>::infinity(), {0, 0, 0}};
  for (const auto& s : slices) {
    if (s.resonant && !out.resonant) {
      out.resonant = true;
      out.resonant_j = s.resonant_j;
    }
    if (better(s.best, best)) best = s.best;
  }
  out.value = best.value;
  out.j = best.j;
  return out;
}

}  // namespace

double BackgroundField::magnitude() const { return magnitude_of(btilde); }

namespace serial {
LatticeMinimum scan_lattice_minimum(int dimension, const std::array<double, 3>& btilde, double r,
                                    int lattice_radius) {
  std::vector<SliceResult> slices;
  for (int j1 = 0; j1 <= lattice_radius; ++j1) {
    slices.push_back(scan_slice(dimension, btilde, r, lattice_radius, j1));
  }
  return combine(slices);
}
}  // namespace serial

namespace omp {
LatticeMinimum scan_lattice_minimum(int dimension, const std::array<double, 3>& btilde, double r,
                                    int lattice_radius) {
  std::vector<SliceResult> slices(static_cast<std::size_t>(lattice_radius) + 1);
#pragma omp parallel for schedule(dynamic)
  for (int j1 = 0; j1 <= lattice_radius; ++j1) {
    slices[static_cast<std::size_t>(j1)] = scan_slice(dimension, btilde, r, lattice_radius, j1);
  }
  return combine(slices);
}
}  // namespace omp

BackgroundField estimate_constant(std::span<const double> btilde, double r, int lattice_radius) {
  if (btilde.size() != 2 && btilde.size() != 3) {
    throw DimensionError("background vector must have 2 or 3 components");
  }
  if (lattice_radius < 1) throw PreconditionError("lattice radius J must be >= 1");
  if (!(r > 0.0)) throw PreconditionError("Diophantine exponent r must be positive");
  BackgroundField bf;
  bf.dimension = static_cast<int>(btilde.size());
  std::copy(btilde.begin(), btilde.end(), bf.btilde.begin());
  bf.r = r;
  bf.lattice_radius = lattice_radius;
  if (bf.magnitude() == 0.0) throw ResonanceError("background vector is zero");
  const auto scan = omp::scan_lattice_minimum(bf.dimension, bf.btilde, r, lattice_radius);
  if (scan.resonant) {
    const auto& j = scan.resonant_j;
    throw ResonanceError("resonant background: b.j = 0 at j = (" + std::to_string(j[0]) + ", " +
                         std::to_string(j[1]) +
                         (bf.dimension == 3 ? ", " + std::to_string(j[2]) : std::string()) + ")");
  }
  bf.c_est = scan.value;
  bf.argmin = scan.j;
  return bf;
}

std::vector<NearResonance> near_resonances(const BackgroundField& bf, std::size_t top_k) {
  std::vector<std::vector<Candidate>> slices(static_cast<std::size_t>(bf.lattice_radius) + 1);
#pragma omp parallel for schedule(dynamic)
  for (int j1 = 0; j1 <= bf.lattice_radius; ++j1) {
    auto& out = slices[static_cast<std::size_t>(j1)];
    visit_slice(bf.dimension, bf.lattice_radius, j1, [&](const Wavevector& j) {
      const double len = std::sqrt(static_cast<double>(j[0]) * j[0] +
                                   static_cast<double>(j[1]) * j[1] +
                                   static_cast<double>(j[2]) * j[2]);
      out.push_back({std::abs(bf.dot(j)) * std::pow(len, bf.r), j});
    });
  }
  std::vector<Candidate> all;
  for (auto& s : slices) all.insert(all.end(), s.begin(), s.end());
  const std::size_t k = std::min(top_k, all.size());
  std::partial_sort(all.begin(), all.begin() + static_cast<std::ptrdiff_t>(k), all.end(), better);
  std::vector<NearResonance> out;
  out.reserve(k);
  for (std::size_t i = 0; i < k; ++i) out.push_back({all[i].j, all[i].value});
  return out;
}

double verify_poincare(const BackgroundField& bf, const SpectralVectorField& g, double s) {
  const auto& grid = g.grid();
  if (grid.dimension() != bf.dimension) throw DimensionError("field and background dimensions differ");
  const double band2 = static_cast<double>(bf.lattice_radius) * bf.lattice_radius;
  double num = 0.0;
  double den = 0.0;
  bool nonzero = false;
  for (std::size_t i = 0; i < grid.size(); ++i) {
    double m = 0.0;
    for (int k = 0; k < g.components(); ++k) m += std::norm(g.at(k, i));
    if (m == 0.0) continue;
    nonzero = true;
    if (i == 0) throw PreconditionError("verify_poincare needs a mean-zero field");
    const double k2 = grid.norm2(i);
    if (k2 > band2) throw PreconditionError("field is not band-limited to |j| <= J");
    const double theta = bf.dot(grid.wavevector(i));
    num += std::pow(k2, s) * m;
    den += theta * theta * std::pow(k2, s + bf.r) * m;
  }
  if (!nonzero) throw PreconditionError("verify_poincare is undefined for the zero field");
  return std::sqrt(num / den);
}

std::vector<double> background_preset(const std::string& name) {
  if (name == "sqrt2") return {1.0, std::numbers::sqrt2};
  if (name == "golden") return {1.0, std::numbers::phi};
  if (name == "sqrt2-sqrt3") return {1.0, std::numbers::sqrt2, std::numbers::sqrt3};
  throw ConfigError("unknown background preset '" + name + "'");
}

}  // namespace torusmhd
