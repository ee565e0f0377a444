#pragma once

#include <filesystem>
#include <map>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "torusmhd/nonlinear_solver.hpp"
#include "torusmhd/operators.hpp"

namespace torusmhd {

/// Column name of a norm series: "<field>.H<s>" or "<field>.Hdot<s>", where
/// field is "v", "b" or "vb" (the pair).
std::string norm_key(const std::string& field, SobolevIndex idx);

struct ObservationRow {
  double t = 0.0;
  std::map<std::string, double> norms;
  std::map<int, double> q_s;
  double cumulative_damping = 0.0;  // int_0^t ||v||_{H^m}^2
  double energy_functional = 0.0;      // E_m^2 with the |b~.grad b|_{H^{m-1}} term
  double energy_functional_alt = 0.0;  // E_m^2 with |b|_{H^{m-1-r}} instead
  double div_residual = 0.0;
  double mean_residual = 0.0;
  double hermitian_residual = 0.0;
};

/// 1 + |b~|/2 + |b~|^2/2.
double default_modified_energy_constant(const BackgroundField& bf);

/// sum_{l=0..s} Re sum_{j != 0} |j|^{2l-2} (i b~.j) b(j).conj(v(j)).
double modified_energy_cross_term(const SimulationState& state, int s);

/// Q_s = a ||(v, b)||_{H^s}^2 minus the cross term. Throws for s < 0.
double modified_energy(const SimulationState& state, int s, double a);

/// Which norms and Q_s levels an observation records.
struct ObservationSpec {
  std::vector<std::pair<std::string, SobolevIndex>> norms;
  std::vector<int> q_levels;
  double a = 0.0;
};

/// Norms and residuals of one state. Energy functional columns and
/// cumulative_damping are left for the caller.
ObservationRow observe(const SimulationState& state, const ObservationSpec& spec);

/// Running E_m^2 = sup ||(v,b)||_{H^m}^2 + int ||v||_{H^m}^2 + int X, with X
/// either ||Lambda^{-1}(b~.grad b)||_{H^m}^2 or ||b||_{H^{m-1-r}}^2. The last
/// integral uses the trapezoid rule over the recorded states.
class EnergyFunctional {
 public:
  EnergyFunctional(int m, double r) : m_(m), r_(r) {}
  void record(const SimulationState& state, double cumulative_damping);
  double value() const { return sup_ + damping_ + integral_; }
  double alternate() const { return sup_ + damping_ + integral_alt_; }

 private:
  int m_;
  double r_;
  bool started_ = false;
  double last_t_ = 0.0, last_f_ = 0.0, last_f_alt_ = 0.0;
  double sup_ = 0.0, damping_ = 0.0, integral_ = 0.0, integral_alt_ = 0.0;
};

struct DecayFit {
  std::string key;
  double t_lo = 0.0, t_hi = 0.0;
  double fitted_exponent = 0.0;  // slope of log(norm) against log(1 + t)
  double fitted_C = 0.0;         // window max of norm (1 + t)^theorem_exponent
  double theorem_exponent = 0.0;
  double curve_slope = 0.0;      // fitted_exponent + theorem_exponent
  bool bound_satisfied = false;  // curve_slope <= kDecaySlopeTolerance
  bool window_truncated = false; // samples below kNormFloor were dropped
  std::size_t samples = 0;
};

inline constexpr double kDecaySlopeTolerance = 0.05;
inline constexpr double kNormFloor = 1e-14;
inline constexpr std::size_t kMinFitSamples = 8;

/// Fits a decay law on [t_lo, t_hi]. The window must hold at least
/// kMinFitSamples samples (PreconditionError otherwise). Samples from the
/// first one below kNormFloor on are dropped; if fewer than two remain the
/// series fell to the floor faster than any power and the bound holds.
DecayFit fit_decay(std::span<const double> t, std::span<const double> norm, double t_lo,
                   double t_hi, double theorem_exponent);
DecayFit fit_decay(std::span<const ObservationRow> rows, const std::string& key, double t_lo,
                   double t_hi, double theorem_exponent);

/// Trapezoid rule for samples f(t_i).
double trapezoid(std::span<const double> t, std::span<const double> f);

/// CSV text: t, norm columns (sorted), Q<s> columns, then the fixed columns.
/// Values use 17 significant digits. Rows must share their keys.
std::string to_csv(std::span<const ObservationRow> rows);
void emit_csv(std::span<const ObservationRow> rows, const std::filesystem::path& path);
std::vector<ObservationRow> parse_csv(const std::string& text);

}  // namespace torusmhd
