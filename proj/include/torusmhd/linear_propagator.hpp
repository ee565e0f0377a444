#pragma once

#include <complex>
#include <utility>
#include <vector>

#include "torusmhd/diophantine.hpp"
#include "torusmhd/kernels.hpp"
#include "torusmhd/operators.hpp"
#include "torusmhd/spectral_field.hpp"

namespace torusmhd {

using kernels::PairMatrix;

/// Frequency regions by the discriminant d = 1 - 4 theta^2:
/// S1: d <= 0 (complex pair), S2: 0 < d <= 1/4, S3: d > 1/4.
enum class Region { S1, S2, S3 };

const char* region_name(Region r);
Region classify_region(double discriminant);

/// Below this eigenvalue gap the divided difference (e^{-l2 t} - e^{-l1 t})/(l1 - l2)
/// is evaluated from its Taylor series around the double root.
inline constexpr double kDegenerateGap = 1e-8;

/// Per-wavevector eigen data of Q = [[1, -i theta], [-i theta, 0]],
/// theta = b.j. lambda1 takes the + branch of (1 +- sqrt(1 - 4 theta^2)) / 2.
struct ModeDecomposition {
  Wavevector j{0, 0, 0};
  double theta = 0.0;
  std::complex<double> lambda1;
  std::complex<double> lambda2;
  Region region = Region::S3;
  double discriminant = 1.0;

  bool degenerate() const { return std::abs(lambda1 - lambda2) < kDegenerateGap; }
};

/// Throws PreconditionError for j = 0.
ModeDecomposition decompose_mode(const Wavevector& j, const BackgroundField& bf);
/// Same decomposition from theta alone (j left at zero).
ModeDecomposition decompose_theta(double theta);

/// exp(-Q t) in closed form, exp(-l1 t) I - G (Q - l1 I) with
/// G = (e^{-l2 t} - e^{-l1 t}) / (l1 - l2). Throws for t < 0.
PairMatrix propagator_matrix(const ModeDecomposition& md, double t);

/// The divided difference G(t) above. Real for every theta.
double divided_difference(const ModeDecomposition& md, double t);

struct KernelValues {
  double g = 0.0;   // |G|
  double g1 = 0.0;  // |G| sqrt(|l1|^2 + theta^2)
  double g2 = 0.0;  // |G1| |theta / l1|
  double g3 = 0.0;  // |e^{-l1 t}|
};

KernelValues kernel_values(const ModeDecomposition& md, double t);

/// Propagator for every lattice index of the grid (identity at j = 0).
std::vector<PairMatrix> propagator_table(const SpectralGrid& grid, const BackgroundField& bf,
                                         double t);

/// Exact solution of the linearized system after time t, mode by mode and
/// component by component. V0, H0 must be mean-zero and divergence-free.
std::pair<SpectralVectorField, SpectralVectorField> evolve_linear(const SpectralVectorField& v0,
                                                                  const SpectralVectorField& h0,
                                                                  const BackgroundField& bf,
                                                                  double t);

/// Hermitian 2x2 matrix [[a, b], [conj b, d]].
struct Gramian {
  double a = 0.0;
  std::complex<double> b;
  double d = 0.0;
};

/// int_{t_lo}^{t_hi} M(s)^H diag(1, 0) M(s) ds for M(s) = exp(-Q s), so that
/// psi^H G psi is the time integral of |V(s)|^2 for one mode. Evaluated by
/// Gauss-Legendre quadrature on a base panel short enough to resolve the
/// mode's oscillation, then extended by panel doubling.
Gramian damping_gramian(const ModeDecomposition& md, double t_lo, double t_hi);

/// int_0^t ||V(s)||^2 ds in the norm `idx` for the linear evolution of (V0, H0).
double linear_damping_integral(const SpectralVectorField& v0, const SpectralVectorField& h0,
                               const BackgroundField& bf, double t, SobolevIndex idx);

namespace serial {
/// Reference implementation of evolve_linear (plain loops, no OpenMP).
std::pair<SpectralVectorField, SpectralVectorField> evolve_linear(const SpectralVectorField& v0,
                                                                  const SpectralVectorField& h0,
                                                                  const BackgroundField& bf,
                                                                  double t);
}  // namespace serial

}  // namespace torusmhd
