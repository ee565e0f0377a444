#include "torusmhd/checkpoint.hpp"

#include <array>
#include <bit>
#include <cstdint>
#include <cstdio>
#include <cstring>
#include <fstream>
#include <iterator>
#include <string>
#include <vector>

#include "torusmhd/errors.hpp"

namespace torusmhd {

namespace {

constexpr char kMagic[8] = {'T', 'M', 'H', 'D', 'C', 'K', 'P', 'T'};
constexpr std::uint32_t kVersion = 1;

class Writer {
 public:
  void u32(std::uint32_t x) { put(x, 4); }
  void u64(std::uint64_t x) { put(x, 8); }
  void f64(double x) { u64(std::bit_cast<std::uint64_t>(x)); }
  void raw(const char* p, std::size_t n) { bytes.insert(bytes.end(), p, p + n); }
  std::vector<char> bytes;

 private:
  void put(std::uint64_t x, int n) {
    for (int i = 0; i < n; ++i) bytes.push_back(static_cast<char>((x >> (8 * i)) & 0xff));
  }
};

class Reader {
 public:
  explicit Reader(std::vector<char> data) : bytes_(std::move(data)) {}
  std::uint32_t u32() { return static_cast<std::uint32_t>(get(4)); }
  std::uint64_t u64() { return get(8); }
  double f64() { return std::bit_cast<double>(u64()); }
  void raw(char* p, std::size_t n) {
    need(n);
    std::memcpy(p, bytes_.data() + pos_, n);
    pos_ += n;
  }
  bool at_end() const { return pos_ == bytes_.size(); }

 private:
  void need(std::size_t n) const {
    if (pos_ + n > bytes_.size()) throw IoError("checkpoint is truncated");
  }
  std::uint64_t get(int n) {
    need(n);
    std::uint64_t x = 0;
    for (int i = 0; i < n; ++i)
      x |= std::uint64_t(static_cast<unsigned char>(bytes_[pos_ + i])) << (8 * i);
    pos_ += n;
    return x;
  }
  std::vector<char> bytes_;
  std::size_t pos_ = 0;
};

void check_state(const SimulationState& s) {
  if (s.v.empty() || s.b.empty() || !(s.v.grid() == s.b.grid()))
    throw DimensionError("checkpoint: v and b must share a grid");
}

}  // namespace

void write_checkpoint(const SimulationState& state, const std::filesystem::path& path) {
  check_state(state);
  const SpectralGrid& g = state.v.grid();
  Writer w;
  w.raw(kMagic, sizeof kMagic);
  w.u32(kVersion);
  w.u32(static_cast<std::uint32_t>(g.dimension()));
  w.u32(static_cast<std::uint32_t>(g.modes_per_axis()));
  w.u32(0);
  w.f64(state.t);
  w.u64(static_cast<std::uint64_t>(state.step_count));
  for (double x : state.bf.btilde) w.f64(x);
  w.f64(state.bf.r);
  const auto order = g.lexicographic_order();
  for (const SpectralVectorField* f : {&state.v, &state.b})
    for (int k = 0; k < g.dimension(); ++k)
      for (std::size_t idx : order) {
        w.f64(f->at(k, idx).real());
        w.f64(f->at(k, idx).imag());
      }
  std::ofstream out(path, std::ios::binary);
  if (!out) throw IoError("cannot open '" + path.string() + "' for writing");
  out.write(w.bytes.data(), static_cast<std::streamsize>(w.bytes.size()));
  if (!out) throw IoError("write to '" + path.string() + "' failed");
}

SimulationState read_checkpoint(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open '" + path.string() + "'");
  Reader r(std::vector<char>(std::istreambuf_iterator<char>(in), {}));
  char magic[8];
  r.raw(magic, sizeof magic);
  if (std::memcmp(magic, kMagic, sizeof magic) != 0) throw IoError("not a checkpoint file");
  if (r.u32() != kVersion) throw IoError("unsupported checkpoint version");
  const int dim = static_cast<int>(r.u32());
  const int n = static_cast<int>(r.u32());
  r.u32();
  GridPtr grid;
  try {
    grid = SpectralGrid::make(dim, n);
  } catch (const DimensionError& e) {
    throw IoError(std::string("checkpoint header: ") + e.what());
  }
  SimulationState s;
  s.t = r.f64();
  s.step_count = static_cast<std::int64_t>(r.u64());
  s.bf.dimension = dim;
  for (double& x : s.bf.btilde) x = r.f64();
  s.bf.r = r.f64();
  s.v = SpectralVectorField(grid);
  s.b = SpectralVectorField(grid);
  const auto order = grid->lexicographic_order();
  for (SpectralVectorField* f : {&s.v, &s.b})
    for (int k = 0; k < dim; ++k)
      for (std::size_t idx : order) {
        const double re = r.f64();
        const double im = r.f64();
        f->at(k, idx) = Complex(re, im);
      }
  if (!r.at_end()) throw IoError("checkpoint has trailing bytes");
  return s;
}

void write_checkpoint_csv(const SimulationState& state, const std::filesystem::path& path) {
  check_state(state);
  const SpectralGrid& g = state.v.grid();
  std::ofstream out(path);
  if (!out) throw IoError("cannot open '" + path.string() + "' for writing");
  out << "field,k,j1,j2,j3,re,im\n";
  char buf[128];
  const auto order = g.lexicographic_order();
  for (int f = 0; f < 2; ++f) {
    const SpectralVectorField& field = f == 0 ? state.v : state.b;
    for (int k = 0; k < g.dimension(); ++k)
      for (std::size_t idx : order) {
        const Wavevector j = g.wavevector(idx);
        const Complex c = field.at(k, idx);
        std::snprintf(buf, sizeof buf, "%s,%d,%d,%d,%d,%.17g,%.17g\n", f == 0 ? "v" : "b", k, j[0],
                      j[1], j[2], c.real(), c.imag());
        out << buf;
      }
  }
  if (!out) throw IoError("write to '" + path.string() + "' failed");
}

}  // namespace torusmhd
