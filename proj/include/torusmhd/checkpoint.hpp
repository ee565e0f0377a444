#pragma once

#include <filesystem>

#include "torusmhd/nonlinear_solver.hpp"

namespace torusmhd {

/// Binary state checkpoint, all numbers little-endian:
///
///   char[8]  "TMHDCKPT"
///   u32      format version (1)
///   u32      dimension n
///   u32      modes per axis N
///   u32      reserved (0)
///   f64      t
///   i64      step count
///   f64[3]   background vector b~ (unused entries zero)
///   f64      Diophantine exponent r
///   then for v and b, for each component k < n, for each wavevector j in
///   lexicographic order (j_1 slowest, each j_i from -N/2 to N/2 - 1):
///   f64 re, f64 im.
///
/// Reading restores the background vector and r. The lattice estimate is
/// left unset.
void write_checkpoint(const SimulationState& state, const std::filesystem::path& path);
SimulationState read_checkpoint(const std::filesystem::path& path);

/// Human-readable dump: one line "field,k,j1,j2,j3,re,im" per coefficient.
void write_checkpoint_csv(const SimulationState& state, const std::filesystem::path& path);

}  // namespace torusmhd
