#pragma once

#include <cstddef>
#include <span>
#include <string>
#include <vector>

#include "torusmhd/diophantine.hpp"
#include "torusmhd/linear_propagator.hpp"

namespace torusmhd {

/// Tightest constant C with observed <= C * envelope over every sampled
/// (j, t) in one frequency region. `empty` marks a region without lattice
/// points; `informational` marks reports that carry no pass/fail contract.
struct BoundReport {
  std::string region;  // "S1", "S2", "S3" or "all"
  std::string kernel;  // "G1", "G2" or "G3"
  std::string bound_form;
  double c_empirical = 0.0;
  Wavevector worst_j{0, 0, 0};
  double worst_t = 0.0;
  std::size_t samples = 0;
  bool empty = false;
  bool informational = false;
};

/// Linear grid on [0, 2] with step 0.05 merged with 0.5 * 1.3^k up to t_max.
std::vector<double> default_sweep_grid(double t_max = 100.0);

/// Sweeps 0 < |j| <= J (one representative per +-j pair) against the regional
/// envelopes. Returns, in order: S1/G1, S1/G2, S2/G1, S2/G2, S3/G1, S3/G2,
/// all/G3, then the informational S1/G1 report against |j| t e^{-t/2}.
/// Throws PreconditionError for J < 1 or a bad time grid.
std::vector<BoundReport> sweep_bounds(const BackgroundField& bf, int lattice_radius,
                                      std::span<const double> time_grid);

namespace serial {
std::vector<BoundReport> sweep_bounds(const BackgroundField& bf, int lattice_radius,
                                      std::span<const double> time_grid);
}

}  // namespace torusmhd
