#pragma once

#include <cstdint>
#include <utility>

#include "torusmhd/diophantine.hpp"
#include "torusmhd/spectral_field.hpp"

namespace torusmhd {

/// Random real solenoidal pair (v0, b0) with zero mean and
/// |c(j)| ~ |j|^{-spectrum_slope} on the ball 0 < |j| <= K (K the dealiasing
/// cutoff), scaled so that ||v0||_{H^m} + ||b0||_{H^m} = epsilon.
/// Modes are drawn in lexicographic order from a seeded mt19937_64, so a
/// fixed seed gives bit-identical fields. Throws PreconditionError for
/// epsilon <= 0 or m < 0, DimensionError if bf and grid disagree.
std::pair<SpectralVectorField, SpectralVectorField> make_initial_data(const GridPtr& grid,
                                                                      const BackgroundField& bf,
                                                                      int m, double epsilon,
                                                                      double spectrum_slope,
                                                                      std::uint64_t seed);

/// Random field with the same spectrum shape, Leray-projected, unnormalized.
SpectralVectorField random_solenoidal_field(const GridPtr& grid, double spectrum_slope,
                                            int radius, std::uint64_t seed);

}  // namespace torusmhd
