#pragma once

#include <array>
#include <cstddef>
#include <span>
#include <string>
#include <vector>

#include "torusmhd/spectral_field.hpp"

namespace torusmhd {

/// Constant background magnetic field together with the Diophantine pair
/// (c, r) certified on the lattice ball 0 < |j| <= J.
///
/// c_est is the exact minimum of |b.j| |j|^r over that ball, so
/// |b.j| >= c_est / |j|^r holds for every enumerated j by construction.
/// Wavevectors are reported in canonical form (first nonzero component
/// positive); j and -j give the same value.
struct BackgroundField {
  int dimension = 2;
  std::array<double, 3> btilde{0.0, 0.0, 0.0};
  double r = 1.0;
  double c_est = 0.0;
  int lattice_radius = 0;
  Wavevector argmin{0, 0, 0};

  double dot(const Wavevector& j) const {
    double s = 0.0;
    for (int a = 0; a < dimension; ++a) s += btilde[a] * j[a];
    return s;
  }
  double magnitude() const;
  /// r > n - 1, the exponent range the decay theorems are stated for.
  bool theorem_exponent() const { return r > dimension - 1; }
};

/// Relative threshold below which b.j counts as an exact cancellation.
inline constexpr double kResonanceTolerance = 1e-12;

/// Scans 0 < |j| <= J. Throws ResonanceError when some |b.j| falls below
/// kResonanceTolerance * |b| * |j|, PreconditionError for J < 1 or r <= 0.
BackgroundField estimate_constant(std::span<const double> btilde, double r, int lattice_radius);

struct NearResonance {
  Wavevector j;
  double value;  // |b.j| |j|^r
};

/// The top_k canonical lattice points with the smallest |b.j| |j|^r,
/// ascending, ties broken by lexicographic j. Truncated when fewer exist.
std::vector<NearResonance> near_resonances(const BackgroundField& bf, std::size_t top_k);

/// ||g||_{H^s} / ||b.grad g||_{H^{s+r}} (homogeneous norms). g must be
/// a nonzero mean-zero field supported on |j| <= J.
double verify_poincare(const BackgroundField& bf, const SpectralVectorField& g, double s);

/// Named background vectors: "sqrt2" = (1, sqrt 2), "golden" = (1, phi),
/// "sqrt2-sqrt3" = (1, sqrt 2, sqrt 3).
std::vector<double> background_preset(const std::string& name);

/// Lattice-ball minimum scan, exposed so the serial reference and the
/// OpenMP version can be compared directly.
struct LatticeMinimum {
  double value = 0.0;
  Wavevector j{0, 0, 0};
  bool resonant = false;
  Wavevector resonant_j{0, 0, 0};
};

namespace serial {
LatticeMinimum scan_lattice_minimum(int dimension, const std::array<double, 3>& btilde, double r,
                                    int lattice_radius);
}
namespace omp {
LatticeMinimum scan_lattice_minimum(int dimension, const std::array<double, 3>& btilde, double r,
                                    int lattice_radius);
}

}  // namespace torusmhd
