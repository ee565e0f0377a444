#pragma once

#include <cstdint>
#include <functional>
#include <map>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "torusmhd/diophantine.hpp"
#include "torusmhd/linear_propagator.hpp"
#include "torusmhd/spectral_field.hpp"

namespace torusmhd {

/// The perturbation (v, b) around (0, b~) together with its time.
struct SimulationState {
  SpectralVectorField v;
  SpectralVectorField b;
  double t = 0.0;
  std::int64_t step_count = 0;
  BackgroundField bf;
};

enum class Scheme { IfRk4 };

struct IntegratorConfig {
  double dt = 0.01;
  Scheme scheme = Scheme::IfRk4;
  double cfl_safety = 0.5;
  double t_end = 1.0;
  bool dealias = true;
  /// Shrink dt below the CFL limit each step; when false a violation throws.
  bool adaptive = true;
  double blowup_factor = 1e6;
};

/// N1 = P(v.grad v - b.grad b) and N2 = v.grad b - b.grad v, formed from
/// (optionally dealiased) inputs as divergences of the flux tensors
/// v (x) v - b (x) b and v (x) b - b (x) v, then truncated to the dealiased
/// band. Throws BlowUpError on non-finite samples.
std::pair<SpectralVectorField, SpectralVectorField> nonlinear_rhs(const SimulationState& state,
                                                                  bool dealias = true);

/// cfl_safety * (2pi/N) / max(|v|_inf, |b|_inf, |b~|).
double cfl_limit(const SimulationState& state, const IntegratorConfig& cfg);

/// One integrating-factor RK4 step of length cfg.dt.
SimulationState step(const SimulationState& state, const IntegratorConfig& cfg);

/// Stateful IF-RK4 stepper. The nonlinear term at the current state is reused
/// as the next first stage. Propagator tables are cached per step size.
/// int ||v||^2 dt is accumulated in L^2 and H^m by Gauss-Legendre quadrature
/// on a cubic Hermite interpolant taken in the frame of the linear flow.
class Integrator {
 public:
  Integrator(SimulationState initial, IntegratorConfig cfg, int m = 0);

  const SimulationState& state() const { return state_; }
  const IntegratorConfig& config() const { return cfg_; }

  /// Advances by exactly h (no CFL check). Throws BlowUpError; the state is
  /// left at the last completed step.
  void advance(double h);
  /// Advances to t_target and sets the time to it exactly.
  void advance_to(double t_target);

  double dissipation_l2() const { return dissipation_l2_; }
  double dissipation_hm() const { return dissipation_hm_; }
  /// max(|v|_inf, |b|_inf) at the current state.
  double max_speed() const { return max_speed_; }
  double cfl_limit() const;

 private:
  struct StepTables {
    std::vector<PairMatrix> full;
    std::vector<PairMatrix> half;
    std::vector<std::vector<PairMatrix>> node_fwd;  // M(tau_q)
    std::vector<std::vector<PairMatrix>> node_bwd;  // M(h - tau_q)^{-1}
  };
  const StepTables& tables(double h);
  void evaluate(const SpectralVectorField& v, const SpectralVectorField& b,
                SpectralVectorField& n1, SpectralVectorField& n2, double* max_speed = nullptr);

  SimulationState state_;
  IntegratorConfig cfg_;
  std::vector<double> hm_weights_;
  std::map<double, StepTables> cache_;
  SpectralVectorField k1v_, k1b_;
  double max_speed_ = 0.0;
  double initial_norm2_ = 0.0;
  double dissipation_l2_ = 0.0;
  double dissipation_hm_ = 0.0;
  std::vector<std::complex<double>> buffer_;
  std::vector<double> physical_;
};

/// Read-only view handed to observers.
struct Snapshot {
  const SimulationState& state;
  double dissipation_l2;  // int_0^t ||v||_{L^2}^2
  double dissipation_hm;  // int_0^t ||v||_{H^m}^2
};

using Observer = std::function<void(const Snapshot&)>;

struct RunRecord {
  SimulationState final_state;
  bool aborted = false;
  std::string abort_reason;
  std::int64_t steps = 0;
  double dissipation_l2 = 0.0;
  double dissipation_hm = 0.0;
  double initial_norm = 0.0;  // L^2 norm of (v0, b0)
  double min_dt = 0.0;
  double max_dt = 0.0;
};

/// Integrates to cfg.t_end, landing exactly on every observation time in
/// [t0, t_end] and calling the observer there. Steps never exceed cfg.dt,
/// the CFL limit (when adaptive) or the distance to the next observation.
/// A blow-up ends the run with aborted = true and the last valid state.
RunRecord run(const SimulationState& initial, const IntegratorConfig& cfg,
              std::span<const double> observation_times, const Observer& observer = {},
              int m = 0);

}  // namespace torusmhd
