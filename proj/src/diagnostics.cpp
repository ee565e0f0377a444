#include "torusmhd/diagnostics.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <limits>
#include <sstream>

#include "torusmhd/errors.hpp"

namespace torusmhd {

namespace {

std::string format_number(double x) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  return buf;
}

const std::vector<std::string>& fixed_columns() {
  static const std::vector<std::string> cols{
      "cumulative_damping", "energy_functional", "energy_functional_alt",
      "div_residual",       "mean_residual",     "hermitian_residual"};
  return cols;
}

double* fixed_slot(ObservationRow& row, std::size_t k) {
  switch (k) {
    case 0: return &row.cumulative_damping;
    case 1: return &row.energy_functional;
    case 2: return &row.energy_functional_alt;
    case 3: return &row.div_residual;
    case 4: return &row.mean_residual;
    default: return &row.hermitian_residual;
  }
}

// sum_j w(j) |theta(j)|^2 / |j|^2 |b(j)|^2, the squared H^m norm of Lambda^{-1}(b~.grad b).
double directional_norm2(const SimulationState& s, int m) {
  const SpectralGrid& g = s.b.grid();
  const std::vector<double> w = sobolev_weights(g, inhomogeneous(m));
  double total = 0.0;
  for (std::size_t i = 0; i < g.size(); ++i) {
    if (g.norm2(i) == 0.0) continue;
    const double th = s.bf.dot(g.wavevector(i));
    double amp = 0.0;
    for (int k = 0; k < g.dimension(); ++k) amp += std::norm(s.b.at(k, i));
    total += w[i] * th * th / g.norm2(i) * amp;
  }
  return total;
}

}  // namespace

std::string norm_key(const std::string& field, SobolevIndex idx) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%g", idx.s);
  return field + (idx.homogeneous ? ".Hdot" : ".H") + buf;
}

double default_modified_energy_constant(const BackgroundField& bf) {
  const double b = bf.magnitude();
  return 1.0 + 0.5 * b + 0.5 * b * b;
}

double modified_energy_cross_term(const SimulationState& state, int s) {
  if (s < 0) throw PreconditionError("modified energy: s must be a non-negative integer");
  const SpectralGrid& g = state.v.grid();
  double total = 0.0;
  for (std::size_t i = 0; i < g.size(); ++i) {
    const double n2 = g.norm2(i);
    if (n2 == 0.0) continue;
    double weight = 0.0, p = 1.0 / n2;
    for (int l = 0; l <= s; ++l, p *= n2) weight += p;
    Complex dot = 0.0;
    for (int k = 0; k < g.dimension(); ++k) dot += state.b.at(k, i) * std::conj(state.v.at(k, i));
    total += weight * (Complex(0.0, state.bf.dot(g.wavevector(i))) * dot).real();
  }
  return total;
}

double modified_energy(const SimulationState& state, int s, double a) {
  const double n = sobolev_norm(state.v, state.b, inhomogeneous(s));
  return a * n * n - modified_energy_cross_term(state, s);
}

ObservationRow observe(const SimulationState& state, const ObservationSpec& spec) {
  ObservationRow row;
  row.t = state.t;
  for (const auto& [field, idx] : spec.norms) {
    double value = 0.0;
    if (field == "v") value = sobolev_norm(state.v, idx);
    else if (field == "b") value = sobolev_norm(state.b, idx);
    else if (field == "vb") value = sobolev_norm(state.v, state.b, idx);
    else throw PreconditionError("observe: unknown field '" + field + "'");
    row.norms[norm_key(field, idx)] = value;
  }
  for (int s : spec.q_levels) row.q_s[s] = modified_energy(state, s, spec.a);
  row.div_residual = std::max(divergence_residual(state.v), divergence_residual(state.b));
  row.mean_residual = std::max(mean_residual(state.v), mean_residual(state.b));
  row.hermitian_residual = std::max(hermitian_residual(state.v), hermitian_residual(state.b));
  return row;
}

void EnergyFunctional::record(const SimulationState& state, double cumulative_damping) {
  const double hm = sobolev_norm(state.v, state.b, inhomogeneous(m_));
  const double f = directional_norm2(state, m_);
  const double nb = sobolev_norm(state.b, inhomogeneous(m_ - 1.0 - r_));
  const double f_alt = nb * nb;
  if (started_) {
    const double dt = state.t - last_t_;
    integral_ += 0.5 * dt * (f + last_f_);
    integral_alt_ += 0.5 * dt * (f_alt + last_f_alt_);
  }
  started_ = true;
  last_t_ = state.t;
  last_f_ = f;
  last_f_alt_ = f_alt;
  sup_ = std::max(sup_, hm * hm);
  damping_ = cumulative_damping;
}

double trapezoid(std::span<const double> t, std::span<const double> f) {
  if (t.size() != f.size()) throw DimensionError("trapezoid: size mismatch");
  double total = 0.0;
  for (std::size_t i = 1; i < t.size(); ++i) total += 0.5 * (t[i] - t[i - 1]) * (f[i] + f[i - 1]);
  return total;
}

DecayFit fit_decay(std::span<const double> t, std::span<const double> norm, double t_lo,
                   double t_hi, double theorem_exponent) {
  if (t.size() != norm.size()) throw DimensionError("fit_decay: size mismatch");
  DecayFit fit;
  fit.t_lo = t_lo;
  fit.t_hi = t_hi;
  fit.theorem_exponent = theorem_exponent;

  std::vector<double> x, y;
  std::size_t in_window = 0;
  for (std::size_t i = 0; i < t.size(); ++i) {
    if (t[i] < t_lo || t[i] > t_hi) continue;
    ++in_window;
    if (fit.window_truncated) continue;
    if (!(norm[i] >= kNormFloor)) {
      fit.window_truncated = true;
      continue;
    }
    x.push_back(std::log1p(t[i]));
    y.push_back(std::log(norm[i]));
    fit.fitted_C = std::max(fit.fitted_C, norm[i] * std::pow(1.0 + t[i], theorem_exponent));
  }
  if (in_window < kMinFitSamples)
    throw PreconditionError("fit_decay: fewer than " + std::to_string(kMinFitSamples) +
                            " samples in the window");
  fit.samples = x.size();
  if (x.size() < 2) {
    fit.fitted_exponent = -std::numeric_limits<double>::infinity();
    fit.curve_slope = -std::numeric_limits<double>::infinity();
    fit.bound_satisfied = true;
    return fit;
  }
  const double n = static_cast<double>(x.size());
  double mx = 0.0, my = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    mx += x[i];
    my += y[i];
  }
  mx /= n;
  my /= n;
  double sxy = 0.0, sxx = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    sxy += (x[i] - mx) * (y[i] - my);
    sxx += (x[i] - mx) * (x[i] - mx);
  }
  fit.fitted_exponent = sxy / sxx;
  fit.curve_slope = fit.fitted_exponent + theorem_exponent;
  fit.bound_satisfied = fit.curve_slope <= kDecaySlopeTolerance;
  return fit;
}

DecayFit fit_decay(std::span<const ObservationRow> rows, const std::string& key, double t_lo,
                   double t_hi, double theorem_exponent) {
  std::vector<double> t, norm;
  for (const auto& row : rows) {
    const auto it = row.norms.find(key);
    if (it == row.norms.end()) throw PreconditionError("fit_decay: no series named '" + key + "'");
    t.push_back(row.t);
    norm.push_back(it->second);
  }
  DecayFit fit = fit_decay(t, norm, t_lo, t_hi, theorem_exponent);
  fit.key = key;
  return fit;
}

std::string to_csv(std::span<const ObservationRow> rows) {
  std::vector<std::string> norm_keys;
  std::vector<int> q_keys;
  if (!rows.empty()) {
    for (const auto& [k, v] : rows.front().norms) norm_keys.push_back(k);
    for (const auto& [k, v] : rows.front().q_s) q_keys.push_back(k);
  }
  std::string out = "t";
  for (const auto& k : norm_keys) out += "," + k;
  for (int q : q_keys) out += ",Q" + std::to_string(q);
  for (const auto& c : fixed_columns()) out += "," + c;
  out += "\n";
  for (const auto& row : rows) {
    if (row.norms.size() != norm_keys.size() || row.q_s.size() != q_keys.size())
      throw PreconditionError("to_csv: rows do not share their columns");
    out += format_number(row.t);
    for (const auto& k : norm_keys) {
      const auto it = row.norms.find(k);
      if (it == row.norms.end()) throw PreconditionError("to_csv: rows do not share their columns");
      out += "," + format_number(it->second);
    }
    for (int q : q_keys) {
      const auto it = row.q_s.find(q);
      if (it == row.q_s.end()) throw PreconditionError("to_csv: rows do not share their columns");
      out += "," + format_number(it->second);
    }
    ObservationRow copy = row;
    for (std::size_t k = 0; k < fixed_columns().size(); ++k)
      out += "," + format_number(*fixed_slot(copy, k));
    out += "\n";
  }
  return out;
}

void emit_csv(std::span<const ObservationRow> rows, const std::filesystem::path& path) {
  const std::string text = to_csv(rows);
  std::ofstream f(path, std::ios::binary);
  if (!f) throw IoError("cannot open '" + path.string() + "' for writing");
  f << text;
  if (!f) throw IoError("write to '" + path.string() + "' failed");
}

std::vector<ObservationRow> parse_csv(const std::string& text) {
  std::istringstream in(text);
  std::string line;
  if (!std::getline(in, line)) throw IoError("parse_csv: missing header");
  std::vector<std::string> header;
  {
    std::istringstream hs(line);
    std::string cell;
    while (std::getline(hs, cell, ',')) header.push_back(cell);
  }
  if (header.empty() || header.front() != "t") throw IoError("parse_csv: header must start with t");

  std::vector<ObservationRow> rows;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    ObservationRow row;
    std::istringstream ls(line);
    std::string cell;
    std::size_t col = 0;
    while (std::getline(ls, cell, ',')) {
      if (col >= header.size()) throw IoError("parse_csv: too many cells");
      char* end = nullptr;
      const double value = std::strtod(cell.c_str(), &end);
      if (end == cell.c_str()) throw IoError("parse_csv: bad number '" + cell + "'");
      const std::string& name = header[col++];
      const auto fixed = std::find(fixed_columns().begin(), fixed_columns().end(), name);
      if (name == "t") row.t = value;
      else if (fixed != fixed_columns().end())
        *fixed_slot(row, static_cast<std::size_t>(fixed - fixed_columns().begin())) = value;
      else if (name.size() > 1 && name[0] == 'Q') row.q_s[std::stoi(name.substr(1))] = value;
      else row.norms[name] = value;
    }
    if (col != header.size()) throw IoError("parse_csv: row has " + std::to_string(col) +
                                            " cells, header has " + std::to_string(header.size()));
    rows.push_back(std::move(row));
  }
  return rows;
}

}  // namespace torusmhd
