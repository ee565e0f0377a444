#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <utility>
#include <vector>

namespace torusmhd {

enum class Experiment { LinearDecay, Nonlinear, KernelSweep, DiophantineEstimate };

const char* experiment_name(Experiment e);
/// Throws ConfigError for an unknown name.
Experiment parse_experiment(const std::string& name);

/// Every knob of the four experiment families. Optional fields are derived
/// when unset: spectrum_slope = m + 1, a = 1 + |b|/2 + |b|^2/2,
/// fit window = [t_end / 4, t_end].
struct ExperimentConfig {
  Experiment experiment = Experiment::Nonlinear;
  int dimension = 2;
  int N = 64;
  std::vector<double> btilde{1.0, 1.4142135623730951};
  double r = 1.01;
  int J = 32;
  int m = 4;
  std::vector<double> s_list{0.0, 1.0, 2.0};
  double epsilon = 1e-3;
  std::optional<double> spectrum_slope;
  std::uint64_t seed = 1;
  double dt = 0.01;
  double cfl = 0.5;
  double t_end = 100.0;
  double t0 = 0.5;
  double rho = 1.3;
  std::optional<double> fit_lo;
  std::optional<double> fit_hi;
  std::optional<double> a;
  double sweep_t_max = 100.0;
  int top_k = 5;
  std::string output_dir = "out";
  std::string preset;

  double effective_slope() const { return spectrum_slope.value_or(m + 1.0); }
  double effective_fit_lo() const { return fit_lo.value_or(0.25 * t_end); }
  double effective_fit_hi() const { return fit_hi.value_or(t_end); }
};

using KeyValues = std::vector<std::pair<std::string, std::string>>;

/// Parses "key = value" lines; '#' starts a comment, blank lines are
/// skipped. Throws ConfigError naming the line for malformed input.
KeyValues parse_key_values(const std::string& text);

/// Names of the shipped presets.
std::vector<std::string> preset_names();
/// Key-value overrides of a preset. Throws ConfigError for unknown names.
KeyValues preset_values(const std::string& name);

/// Applies overrides in order. Unknown keys and unparsable values throw
/// ConfigError naming the key.
void apply_values(ExperimentConfig& cfg, const KeyValues& values);

/// Defaults, then the preset (from `preset_override` if nonempty, else the
/// file's `preset` key), then the file, then `flags`. Validates the result.
ExperimentConfig parse_config(const std::optional<std::filesystem::path>& file,
                              const KeyValues& flags, const std::string& preset_override = "");

/// Range checks plus the resonance check of b~ on 0 < |j| <= J.
/// Throws ConfigError.
void validate(const ExperimentConfig& cfg);

/// Config file text that parses back to an identical config.
std::string write_config(const ExperimentConfig& cfg);

/// Observation times t0 rho^k (k >= 0) below t_end, bracketed by 0 and t_end.
std::vector<double> observation_times(const ExperimentConfig& cfg);

}  // namespace torusmhd
