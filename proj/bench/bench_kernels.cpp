// Serial reference versus OpenMP kernels. Thread count follows OMP_NUM_THREADS.

#include <benchmark/benchmark.h>

#include <vector>

#include "torusmhd/diophantine.hpp"
#include "torusmhd/initial_data.hpp"
#include "torusmhd/kernel_verifier.hpp"
#include "torusmhd/kernels.hpp"
#include "torusmhd/linear_propagator.hpp"
#include "torusmhd/operators.hpp"

using namespace torusmhd;

namespace {

const BackgroundField& background() {
  static const BackgroundField bf = estimate_constant(background_preset("sqrt2"), 1.01, 32);
  return bf;
}

SpectralVectorField field(int n) {
  return random_solenoidal_field(SpectralGrid::make(2, n), 2.0, (n - 1) / 3, 7);
}

template <bool Parallel>
void BM_leray(benchmark::State& st) {
  const auto f = field(static_cast<int>(st.range(0)));
  SpectralVectorField out(f.grid_ptr());
  for (auto _ : st) {
    if (Parallel)
      kernels::omp::leray_project(f.grid(), f.data(), out.data());
    else
      kernels::serial::leray_project(f.grid(), f.data(), out.data());
    benchmark::DoNotOptimize(out.data().data());
  }
}

template <bool Parallel>
void BM_weighted_norm(benchmark::State& st) {
  const auto f = field(static_cast<int>(st.range(0)));
  const auto w = sobolev_weights(f.grid(), inhomogeneous(4));
  for (auto _ : st) {
    const double r = Parallel ? kernels::omp::weighted_norm2(f.grid(), f.data(), w)
                              : kernels::serial::weighted_norm2(f.grid(), f.data(), w);
    benchmark::DoNotOptimize(r);
  }
}

template <bool Parallel>
void BM_evolve_linear(benchmark::State& st) {
  const auto v = field(static_cast<int>(st.range(0)));
  const auto b = 0.5 * v;
  for (auto _ : st) {
    auto r = Parallel ? evolve_linear(v, b, background(), 3.0)
                      : serial::evolve_linear(v, b, background(), 3.0);
    benchmark::DoNotOptimize(r.first.data().data());
  }
}

template <bool Parallel>
void BM_sweep_bounds(benchmark::State& st) {
  const int J = static_cast<int>(st.range(0));
  const auto grid = default_sweep_grid(100.0);
  for (auto _ : st) {
    auto r = Parallel ? sweep_bounds(background(), J, grid)
                      : serial::sweep_bounds(background(), J, grid);
    benchmark::DoNotOptimize(r.data());
  }
}

template <bool Parallel>
void BM_lattice_scan(benchmark::State& st) {
  const int J = static_cast<int>(st.range(0));
  const auto& b = background().btilde;
  for (auto _ : st) {
    auto r = Parallel ? omp::scan_lattice_minimum(2, b, 1.0, J)
                      : serial::scan_lattice_minimum(2, b, 1.0, J);
    benchmark::DoNotOptimize(r.value);
  }
}

}  // namespace

BENCHMARK(BM_leray<false>)->Name("leray/serial")->Arg(128)->Arg(512);
BENCHMARK(BM_leray<true>)->Name("leray/omp")->Arg(128)->Arg(512);
BENCHMARK(BM_weighted_norm<false>)->Name("weighted_norm/serial")->Arg(128)->Arg(512);
BENCHMARK(BM_weighted_norm<true>)->Name("weighted_norm/omp")->Arg(128)->Arg(512);
BENCHMARK(BM_evolve_linear<false>)->Name("evolve_linear/serial")->Arg(128)->Arg(256);
BENCHMARK(BM_evolve_linear<true>)->Name("evolve_linear/omp")->Arg(128)->Arg(256);
BENCHMARK(BM_sweep_bounds<false>)->Name("sweep_bounds/serial")->Arg(16)->Arg(32);
BENCHMARK(BM_sweep_bounds<true>)->Name("sweep_bounds/omp")->Arg(16)->Arg(32);
BENCHMARK(BM_lattice_scan<false>)->Name("lattice_scan/serial")->Arg(512)->Arg(2048);
BENCHMARK(BM_lattice_scan<true>)->Name("lattice_scan/omp")->Arg(512)->Arg(2048);

BENCHMARK_MAIN();
