#include "torusmhd/transform.hpp"

#include <fftw3.h>

#include <map>
#include <memory>
#include <mutex>
#include <utility>
#include <vector>

#include "torusmhd/errors.hpp"

namespace torusmhd {

namespace {

std::mutex& planner_mutex() {
  static std::mutex m;
  return m;
}

fftw_complex* as_fftw(std::complex<double>* p) { return reinterpret_cast<fftw_complex*>(p); }

}  // namespace

Fft::Fft(const SpectralGrid& grid) : size_(grid.size()) {
  std::vector<int> dims(static_cast<std::size_t>(grid.dimension()), grid.modes_per_axis());
  std::vector<std::complex<double>> scratch(size_);
  const unsigned flags = FFTW_ESTIMATE | FFTW_UNALIGNED;
  std::lock_guard lock(planner_mutex());
  forward_plan_ = fftw_plan_dft(grid.dimension(), dims.data(), as_fftw(scratch.data()),
                                as_fftw(scratch.data()), FFTW_FORWARD, flags);
  backward_plan_ = fftw_plan_dft(grid.dimension(), dims.data(), as_fftw(scratch.data()),
                                 as_fftw(scratch.data()), FFTW_BACKWARD, flags);
  if (!forward_plan_ || !backward_plan_) throw Error("FFTW planning failed");
}

Fft::~Fft() {
  std::lock_guard lock(planner_mutex());
  fftw_destroy_plan(static_cast<fftw_plan>(forward_plan_));
  fftw_destroy_plan(static_cast<fftw_plan>(backward_plan_));
}

void Fft::forward(std::span<std::complex<double>> data) const {
  if (data.size() != size_) throw DimensionError("FFT buffer size mismatch");
  fftw_execute_dft(static_cast<fftw_plan>(forward_plan_), as_fftw(data.data()),
                   as_fftw(data.data()));
}

void Fft::backward(std::span<std::complex<double>> data) const {
  if (data.size() != size_) throw DimensionError("FFT buffer size mismatch");
  fftw_execute_dft(static_cast<fftw_plan>(backward_plan_), as_fftw(data.data()),
                   as_fftw(data.data()));
}

const Fft& Fft::for_grid(const SpectralGrid& grid) {
  static std::mutex cache_mutex;
  static std::map<std::pair<int, int>, std::unique_ptr<Fft>> cache;
  std::lock_guard lock(cache_mutex);
  auto& slot = cache[{grid.dimension(), grid.modes_per_axis()}];
  if (!slot) slot = std::make_unique<Fft>(grid);
  return *slot;
}

void to_physical(const SpectralGrid& grid, std::span<const std::complex<double>> coeffs,
                 std::span<double> out, std::span<std::complex<double>> buffer) {
  std::copy(coeffs.begin(), coeffs.end(), buffer.begin());
  Fft::for_grid(grid).backward(buffer);
  for (std::size_t i = 0; i < out.size(); ++i) out[i] = buffer[i].real();
}

void to_spectral(const SpectralGrid& grid, std::span<const double> samples,
                 std::span<std::complex<double>> out) {
  for (std::size_t i = 0; i < samples.size(); ++i) out[i] = samples[i];
  Fft::for_grid(grid).forward(out);
  const double scale = 1.0 / static_cast<double>(grid.size());
  for (auto& c : out) c *= scale;
}

SpectralVectorField forward_transform(const GridPtr& grid, const PhysicalVectorField& samples) {
  if (!(samples.grid() == *grid) || samples.components() != grid->dimension() ||
      samples.data().size() != grid->size() * static_cast<std::size_t>(grid->dimension())) {
    throw DimensionError("physical samples do not match the grid shape");
  }
  SpectralVectorField out(grid);
  for (int k = 0; k < grid->dimension(); ++k) {
    to_spectral(*grid, samples.component(k), out.component(k));
  }
  return out;
}

PhysicalVectorField inverse_transform(const SpectralVectorField& field) {
  PhysicalVectorField out(field.grid_ptr(), field.components());
  std::vector<std::complex<double>> buffer(field.grid().size());
  for (int k = 0; k < field.components(); ++k) {
    to_physical(field.grid(), field.component(k), out.component(k), buffer);
  }
  return out;
}

}  // namespace torusmhd
