#include "torusmhd/initial_data.hpp"

#include <cmath>
#include <random>

#include "torusmhd/errors.hpp"
#include "torusmhd/operators.hpp"

namespace torusmhd {

namespace {

bool canonical(const Wavevector& j) {
  return j[0] > 0 || (j[0] == 0 && (j[1] > 0 || (j[1] == 0 && j[2] > 0)));
}

void fill_random(SpectralVectorField& f, double slope, int radius, std::mt19937_64& rng) {
  const SpectralGrid& g = f.grid();
  std::normal_distribution<double> normal(0.0, 1.0);
  const double r2 = double(radius) * radius;
  for (std::size_t idx : g.lexicographic_order()) {
    const Wavevector j = g.wavevector(idx);
    const double n2 = g.norm2(idx);
    if (!canonical(j) || n2 > r2 || !g.retained(idx) || g.partner(idx) == idx) continue;
    const double amp = std::pow(n2, -0.5 * slope);
    std::array<Complex, 3> c{};
    for (int k = 0; k < g.dimension(); ++k) {
      const double re = normal(rng);
      const double im = normal(rng);
      c[k] = amp * Complex(re, im);
    }
    f.set_mode(j, c);
  }
}

}  // namespace

SpectralVectorField random_solenoidal_field(const GridPtr& grid, double spectrum_slope,
                                            int radius, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  SpectralVectorField f(grid);
  fill_random(f, spectrum_slope, radius, rng);
  return leray_project(f);
}

std::pair<SpectralVectorField, SpectralVectorField> make_initial_data(const GridPtr& grid,
                                                                      const BackgroundField& bf,
                                                                      int m, double epsilon,
                                                                      double spectrum_slope,
                                                                      std::uint64_t seed) {
  if (!(epsilon > 0.0)) throw PreconditionError("make_initial_data: epsilon must be positive");
  if (m < 0) throw PreconditionError("make_initial_data: m must be non-negative");
  if (bf.dimension != grid->dimension())
    throw DimensionError("make_initial_data: background dimension does not match the grid");

  std::mt19937_64 rng(seed);
  SpectralVectorField v(grid);
  SpectralVectorField b(grid);
  const int radius = grid->dealias_cutoff();
  fill_random(v, spectrum_slope, radius, rng);
  fill_random(b, spectrum_slope, radius, rng);
  v = leray_project(v);
  b = leray_project(b);

  const SobolevIndex hm = inhomogeneous(m);
  const double total = sobolev_norm(v, hm) + sobolev_norm(b, hm);
  if (total == 0.0) throw PreconditionError("make_initial_data: lattice ball is empty");
  v *= epsilon / total;
  b *= epsilon / total;
  return {std::move(v), std::move(b)};
}

}  // namespace torusmhd
