#pragma once

#include <array>
#include <vector>

#include "torusmhd/spectral_field.hpp"

namespace torusmhd {

/// Order of a Sobolev norm. Homogeneous norms weight mode j by |j|^{2s}.
/// Inhomogeneous norms use sum_{l=0..s} |j|^{2l} for integer s and
/// (1 + |j|^2)^s otherwise.
struct SobolevIndex {
  double s = 0.0;
  bool homogeneous = true;
};

inline SobolevIndex homogeneous(double s) { return {s, true}; }
inline SobolevIndex inhomogeneous(double s) { return {s, false}; }

/// Squared per-mode weights of the norm selected by `idx`.
std::vector<double> sobolev_weights(const SpectralGrid& grid, SobolevIndex idx);

/// (I - j j^T / |j|^2) applied mode by mode; the zero mode is set to zero.
SpectralVectorField leray_project(const SpectralVectorField& f);

/// Multiplies c(j) by |j|^s. Negative s requires a zero mean.
SpectralVectorField lambda_power(const SpectralVectorField& f, double s);

/// sqrt(sum_j w(j) |c(j)|^2) without the (2pi)^n Plancherel factor.
double sobolev_norm(const SpectralVectorField& f, SobolevIndex idx);

/// Norm of the pair (v, b): sqrt(|v|^2 + |b|^2).
double sobolev_norm(const SpectralVectorField& v, const SpectralVectorField& b, SobolevIndex idx);

/// Zeroes every mode with some |j_i| above the 2/3 cutoff.
SpectralVectorField dealias(const SpectralVectorField& f);

/// b.grad as a Fourier multiplier, i (b.j) c(j).
SpectralVectorField directional_derivative(const SpectralVectorField& f,
                                           const std::array<double, 3>& direction);

/// sqrt(sum |j.c|^2/|j|^2) / sqrt(sum |c|^2); zero for the zero field.
double divergence_residual(const SpectralVectorField& f);
/// max_k |c_k(0)|.
double mean_residual(const SpectralVectorField& f);
/// max_j |c(j) - conj(c(-j))| / max_j |c(j)|; zero for the zero field.
double hermitian_residual(const SpectralVectorField& f);

/// Replaces c(j), c(-j) by their Hermitian average so that the field is
/// exactly the transform of a real field.
void enforce_hermitian(SpectralVectorField& f);

}  // namespace torusmhd
