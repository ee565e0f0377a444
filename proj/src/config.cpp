#include "torusmhd/config.hpp"

#include <charconv>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <map>
#include <sstream>

#include "torusmhd/diophantine.hpp"
#include "torusmhd/errors.hpp"

namespace torusmhd {

namespace {

std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string::npos) return "";
  const auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

std::string fmt(double x) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  return buf;
}

std::string fmt_list(const std::vector<double>& xs) {
  std::string out;
  for (std::size_t i = 0; i < xs.size(); ++i) out += (i ? ", " : "") + fmt(xs[i]);
  return out;
}

double to_double(const std::string& key, const std::string& value) {
  const std::string v = trim(value);
  double x = 0.0;
  const auto [ptr, ec] = std::from_chars(v.data(), v.data() + v.size(), x);
  if (ec != std::errc() || ptr != v.data() + v.size() || v.empty())
    throw ConfigError("key '" + key + "': expected a number, got '" + value + "'");
  return x;
}

template <typename Int>
Int to_int(const std::string& key, const std::string& value) {
  const std::string v = trim(value);
  Int x = 0;
  const auto [ptr, ec] = std::from_chars(v.data(), v.data() + v.size(), x);
  if (ec != std::errc() || ptr != v.data() + v.size() || v.empty())
    throw ConfigError("key '" + key + "': expected an integer, got '" + value + "'");
  return x;
}

std::vector<double> to_list(const std::string& key, const std::string& value) {
  std::vector<double> out;
  std::istringstream in(value);
  std::string cell;
  while (std::getline(in, cell, ',')) out.push_back(to_double(key, cell));
  if (out.empty()) throw ConfigError("key '" + key + "': expected a comma-separated list");
  return out;
}

std::optional<double> to_optional(const std::string& key, const std::string& value) {
  if (trim(value) == "auto") return std::nullopt;
  return to_double(key, value);
}

std::string optional_text(const std::optional<double>& x) { return x ? fmt(*x) : "auto"; }

const std::map<std::string, KeyValues>& presets() {
  static const std::map<std::string, KeyValues> table{
      {"2d-default",
       {{"experiment", "nonlinear"}, {"dimension", "2"}, {"N", "64"}, {"btilde", "sqrt2"},
        {"r", "1.01"}, {"J", "32"}, {"m", "4"}, {"s_list", "0, 1, 2"}, {"epsilon", "1e-3"},
        {"dt", "0.01"}, {"t_end", "100"}, {"t0", "0.5"}, {"rho", "1.3"}}},
      {"3d-smoke",
       {{"experiment", "nonlinear"}, {"dimension", "3"}, {"N", "32"}, {"btilde", "sqrt2-sqrt3"},
        {"r", "2.01"}, {"J", "16"}, {"m", "4"}, {"s_list", "0, 1"}, {"epsilon", "1e-3"},
        {"dt", "0.01"}, {"t_end", "1"}, {"t0", "0.1"}, {"rho", "1.5"}}},
      {"accept-kernel-bounds",
       {{"experiment", "kernel-sweep"}, {"dimension", "2"}, {"btilde", "sqrt2"}, {"r", "1.01"},
        {"J", "32"}, {"sweep_t_max", "100"}}},
      {"accept-linear-energy",
       {{"experiment", "linear-decay"}, {"dimension", "2"}, {"N", "64"}, {"btilde", "sqrt2"},
        {"r", "1.01"}, {"J", "32"}, {"m", "4"}, {"s_list", "0, 1, 2"}, {"epsilon", "1e-3"},
        {"t_end", "50"}, {"t0", "0.5"}, {"rho", "1.2742749857031335"}}},
      {"accept-linear-rates",
       {{"experiment", "linear-decay"}, {"dimension", "2"}, {"N", "64"}, {"btilde", "sqrt2"},
        {"r", "1.01"}, {"J", "32"}, {"m", "4"}, {"s_list", "0"}, {"epsilon", "1e-3"},
        {"t_end", "200"}, {"t0", "0.5"}, {"rho", "1.1"}, {"fit_lo", "50"}, {"fit_hi", "200"}}},
      {"accept-nonlinear",
       {{"experiment", "nonlinear"}, {"dimension", "2"}, {"N", "64"}, {"btilde", "sqrt2"},
        {"r", "1.01"}, {"J", "32"}, {"m", "6"}, {"s_list", "0"}, {"epsilon", "1e-3"},
        {"dt", "0.01"}, {"t_end", "100"}, {"t0", "0.5"}, {"rho", "1.1"}, {"fit_lo", "25"},
        {"fit_hi", "100"}}},
      {"accept-diophantine",
       {{"experiment", "diophantine-estimate"}, {"dimension", "2"}, {"btilde", "golden"},
        {"r", "1"}, {"J", "512"}, {"top_k", "5"}}},
  };
  return table;
}

}  // namespace

const char* experiment_name(Experiment e) {
  switch (e) {
    case Experiment::LinearDecay: return "linear-decay";
    case Experiment::Nonlinear: return "nonlinear";
    case Experiment::KernelSweep: return "kernel-sweep";
    case Experiment::DiophantineEstimate: return "diophantine-estimate";
  }
  return "?";
}

Experiment parse_experiment(const std::string& name) {
  for (Experiment e : {Experiment::LinearDecay, Experiment::Nonlinear, Experiment::KernelSweep,
                       Experiment::DiophantineEstimate})
    if (name == experiment_name(e)) return e;
  throw ConfigError("key 'experiment': unknown experiment '" + name + "'");
}

KeyValues parse_key_values(const std::string& text) {
  KeyValues out;
  std::istringstream in(text);
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (const auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
    line = trim(line);
    if (line.empty()) continue;
    const auto eq = line.find('=');
    if (eq == std::string::npos)
      throw ConfigError("line " + std::to_string(lineno) + ": expected 'key = value'");
    const std::string key = trim(line.substr(0, eq));
    if (key.empty()) throw ConfigError("line " + std::to_string(lineno) + ": empty key");
    out.emplace_back(key, trim(line.substr(eq + 1)));
  }
  return out;
}

std::vector<std::string> preset_names() {
  std::vector<std::string> names;
  for (const auto& [name, values] : presets()) names.push_back(name);
  return names;
}

KeyValues preset_values(const std::string& name) {
  const auto it = presets().find(name);
  if (it == presets().end()) throw ConfigError("key 'preset': unknown preset '" + name + "'");
  return it->second;
}

void apply_values(ExperimentConfig& cfg, const KeyValues& values) {
  for (const auto& [key, value] : values) {
    if (key == "experiment") cfg.experiment = parse_experiment(trim(value));
    else if (key == "dimension") cfg.dimension = to_int<int>(key, value);
    else if (key == "N") cfg.N = to_int<int>(key, value);
    else if (key == "btilde") {
      const std::string v = trim(value);
      if (!v.empty() && std::isalpha(static_cast<unsigned char>(v[0]))) {
        try {
          cfg.btilde = background_preset(v);
        } catch (const Error&) {
          throw ConfigError("key 'btilde': unknown background '" + v + "'");
        }
      } else {
        cfg.btilde = to_list(key, value);
      }
    } else if (key == "r") cfg.r = to_double(key, value);
    else if (key == "J") cfg.J = to_int<int>(key, value);
    else if (key == "m") cfg.m = to_int<int>(key, value);
    else if (key == "s_list") cfg.s_list = to_list(key, value);
    else if (key == "epsilon") cfg.epsilon = to_double(key, value);
    else if (key == "spectrum_slope") cfg.spectrum_slope = to_optional(key, value);
    else if (key == "seed") cfg.seed = to_int<std::uint64_t>(key, value);
    else if (key == "dt") cfg.dt = to_double(key, value);
    else if (key == "cfl") cfg.cfl = to_double(key, value);
    else if (key == "t_end") cfg.t_end = to_double(key, value);
    else if (key == "t0") cfg.t0 = to_double(key, value);
    else if (key == "rho") cfg.rho = to_double(key, value);
    else if (key == "fit_lo") cfg.fit_lo = to_optional(key, value);
    else if (key == "fit_hi") cfg.fit_hi = to_optional(key, value);
    else if (key == "a") cfg.a = to_optional(key, value);
    else if (key == "sweep_t_max") cfg.sweep_t_max = to_double(key, value);
    else if (key == "top_k") cfg.top_k = to_int<int>(key, value);
    else if (key == "output_dir") cfg.output_dir = trim(value);
    else if (key == "preset") cfg.preset = trim(value);
    else throw ConfigError("unknown key '" + key + "'");
  }
}

ExperimentConfig parse_config(const std::optional<std::filesystem::path>& file,
                              const KeyValues& flags, const std::string& preset_override) {
  KeyValues from_file;
  if (file) {
    std::ifstream in(*file);
    if (!in) throw IoError("cannot open config file '" + file->string() + "'");
    std::stringstream ss;
    ss << in.rdbuf();
    from_file = parse_key_values(ss.str());
  }
  std::string preset = preset_override;
  if (preset.empty()) {
    for (const auto& [k, v] : from_file)
      if (k == "preset") preset = v;
    for (const auto& [k, v] : flags)
      if (k == "preset") preset = v;
  }
  ExperimentConfig cfg;
  if (!preset.empty()) {
    apply_values(cfg, preset_values(preset));
    cfg.preset = preset;
  }
  apply_values(cfg, from_file);
  apply_values(cfg, flags);
  cfg.preset = preset;
  validate(cfg);
  return cfg;
}

void validate(const ExperimentConfig& c) {
  auto fail = [](const std::string& key, const std::string& why) {
    throw ConfigError("key '" + key + "': " + why);
  };
  if (c.dimension != 2 && c.dimension != 3) fail("dimension", "must be 2 or 3");
  if (c.N < 8 || c.N % 2 != 0) fail("N", "must be an even integer >= 8");
  if (static_cast<int>(c.btilde.size()) != c.dimension)
    fail("btilde", "needs exactly one entry per dimension");
  for (double x : c.btilde)
    if (!std::isfinite(x)) fail("btilde", "entries must be finite");
  if (!(c.r > 0.0) || !std::isfinite(c.r)) fail("r", "must be positive");
  if (c.J < 1 || c.J > 4096) fail("J", "must lie in [1, 4096]");
  if (c.m < 0 || c.m > 32) fail("m", "must lie in [0, 32]");
  if (c.s_list.empty()) fail("s_list", "must not be empty");
  for (double s : c.s_list)
    if (!(s >= 0.0 && s <= c.m)) fail("s_list", "entries must lie in [0, m]");
  if (!(c.epsilon > 0.0) || !std::isfinite(c.epsilon)) fail("epsilon", "must be positive");
  if (c.spectrum_slope && !std::isfinite(*c.spectrum_slope)) fail("spectrum_slope", "must be finite");
  if (!(c.dt > 0.0)) fail("dt", "must be positive");
  if (!(c.cfl > 0.0 && c.cfl <= 1.0)) fail("cfl", "must lie in (0, 1]");
  if (!(c.t_end > 0.0) || !std::isfinite(c.t_end)) fail("t_end", "must be positive");
  if (!(c.t0 > 0.0)) fail("t0", "must be positive");
  if (!(c.rho > 1.0)) fail("rho", "must exceed 1");
  if (!(c.effective_fit_lo() >= 0.0 && c.effective_fit_lo() < c.effective_fit_hi()))
    fail("fit_lo", "fit window must satisfy 0 <= fit_lo < fit_hi");
  if (c.a && !(*c.a > 0.0)) fail("a", "must be positive");
  if (!(c.sweep_t_max > 0.0)) fail("sweep_t_max", "must be positive");
  if (c.top_k < 1) fail("top_k", "must be at least 1");
  if (c.output_dir.empty()) fail("output_dir", "must not be empty");
  try {
    estimate_constant(c.btilde, c.r, c.J);
  } catch (const ResonanceError& e) {
    fail("btilde", e.what());
  }
}

std::string write_config(const ExperimentConfig& c) {
  std::string out;
  auto line = [&](const std::string& k, const std::string& v) { out += k + " = " + v + "\n"; };
  if (!c.preset.empty()) line("preset", c.preset);
  line("experiment", experiment_name(c.experiment));
  line("dimension", std::to_string(c.dimension));
  line("N", std::to_string(c.N));
  line("btilde", fmt_list(c.btilde));
  line("r", fmt(c.r));
  line("J", std::to_string(c.J));
  line("m", std::to_string(c.m));
  line("s_list", fmt_list(c.s_list));
  line("epsilon", fmt(c.epsilon));
  line("spectrum_slope", optional_text(c.spectrum_slope));
  line("seed", std::to_string(c.seed));
  line("dt", fmt(c.dt));
  line("cfl", fmt(c.cfl));
  line("t_end", fmt(c.t_end));
  line("t0", fmt(c.t0));
  line("rho", fmt(c.rho));
  line("fit_lo", optional_text(c.fit_lo));
  line("fit_hi", optional_text(c.fit_hi));
  line("a", optional_text(c.a));
  line("sweep_t_max", fmt(c.sweep_t_max));
  line("top_k", std::to_string(c.top_k));
  line("output_dir", c.output_dir);
  return out;
}

std::vector<double> observation_times(const ExperimentConfig& c) {
  std::vector<double> times{0.0};
  for (int k = 0;; ++k) {
    const double t = c.t0 * std::pow(c.rho, k);
    if (t >= c.t_end * (1.0 - 1e-9)) break;
    times.push_back(t);
  }
  times.push_back(c.t_end);
  return times;
}

}  // namespace torusmhd
