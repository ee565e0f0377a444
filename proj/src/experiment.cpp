#include "torusmhd/experiment.hpp"

#include <omp.h>

#include <chrono>
#include <cmath>
#include <fstream>
#include <limits>

#include "torusmhd/checkpoint.hpp"
#include "torusmhd/diophantine.hpp"
#include "torusmhd/errors.hpp"
#include "torusmhd/initial_data.hpp"
#include "torusmhd/linear_propagator.hpp"
#include "torusmhd/nonlinear_solver.hpp"
#include "torusmhd/version.hpp"

namespace torusmhd {

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

json wavevector_json(const Wavevector& j, int dim) {
  json out = json::array();
  for (int a = 0; a < dim; ++a) out.push_back(j[a]);
  return out;
}

void write_text(const fs::path& path, const std::string& text) {
  std::ofstream f(path, std::ios::binary);
  if (!f) throw IoError("cannot open '" + path.string() + "' for writing");
  f << text;
  if (!f) throw IoError("write to '" + path.string() + "' failed");
}

json background_json(const BackgroundField& bf) {
  return {{"btilde", std::vector<double>(bf.btilde.begin(), bf.btilde.begin() + bf.dimension)},
          {"r", bf.r},
          {"J", bf.lattice_radius},
          {"c_est", bf.c_est},
          {"argmin_j", wavevector_json(bf.argmin, bf.dimension)},
          {"theorem_exponent_range", bf.theorem_exponent()}};
}

// A window too sparse to fit is reported rather than failing the run.
json try_fit(std::span<const ObservationRow> rows, const std::string& key, double lo, double hi,
             double rate) {
  try {
    return to_json(fit_decay(rows, key, lo, hi, rate));
  } catch (const PreconditionError& e) {
    return {{"key", key}, {"window", {lo, hi}}, {"theorem_exponent", rate}, {"skipped", e.what()}};
  }
}

struct Context {
  const ExperimentConfig& cfg;
  fs::path dir;
  std::vector<fs::path> artifacts;
  ExitCode code = ExitCode::Ok;
  std::string message;
};

json run_diophantine(Context& ctx) {
  const ExperimentConfig& c = ctx.cfg;
  const BackgroundField bf = estimate_constant(c.btilde, c.r, c.J);
  json near = json::array();
  for (const auto& nr : near_resonances(bf, static_cast<std::size_t>(c.top_k)))
    near.push_back({{"j", wavevector_json(nr.j, bf.dimension)}, {"value", nr.value}});
  json out = background_json(bf);
  out["near_resonances"] = near;
  return out;
}

json run_kernel_sweep(Context& ctx) {
  const ExperimentConfig& c = ctx.cfg;
  const BackgroundField bf = estimate_constant(c.btilde, c.r, c.J);
  const std::vector<double> grid = default_sweep_grid(c.sweep_t_max);
  const auto reports = sweep_bounds(bf, c.J, grid);
  json list = json::array();
  bool finite = true, g3_ok = true;
  for (const auto& r : reports) {
    list.push_back(to_json(r));
    if (!r.informational && !std::isfinite(r.c_empirical)) finite = false;
    if (r.kernel == "G3" && r.c_empirical > 1.0 + 1e-12) g3_ok = false;
  }
  return {{"background", background_json(bf)},
          {"time_samples", grid.size()},
          {"reports", list},
          {"all_constants_finite", finite},
          {"g3_constant_at_most_one", g3_ok}};
}

json run_linear(Context& ctx) {
  const ExperimentConfig& c = ctx.cfg;
  const BackgroundField bf = estimate_constant(c.btilde, c.r, c.J);
  const GridPtr grid = SpectralGrid::make(c.dimension, c.N);
  const auto [v0, h0] = make_initial_data(grid, bf, c.m, c.epsilon, c.effective_slope(), c.seed);

  ObservationSpec spec;
  for (double s : c.s_list)
    for (const char* f : {"v", "b", "vb"}) spec.norms.emplace_back(f, homogeneous(s));
  spec.a = c.a.value_or(default_modified_energy_constant(bf));

  const std::vector<double> times = observation_times(c);
  std::vector<ObservationRow> rows;
  EnergyFunctional em(c.m, c.r);
  std::vector<double> initial(c.s_list.size());
  for (std::size_t k = 0; k < c.s_list.size(); ++k) {
    const double n = sobolev_norm(v0, h0, homogeneous(c.s_list[k]));
    initial[k] = n * n;
  }
  std::vector<double> worst_abs(c.s_list.size(), 0.0);
  std::vector<bool> monotone(c.s_list.size(), true);

  for (double t : times) {
    const auto [v, h] = evolve_linear(v0, h0, bf, t);
    SimulationState st{v, h, t, 0, bf};
    ObservationRow row = observe(st, spec);
    row.cumulative_damping = linear_damping_integral(v0, h0, bf, t, inhomogeneous(c.m));
    em.record(st, row.cumulative_damping);
    row.energy_functional = em.value();
    row.energy_functional_alt = em.alternate();
    for (std::size_t k = 0; k < c.s_list.size(); ++k) {
      const SobolevIndex idx = homogeneous(c.s_list[k]);
      const double n = row.norms.at(norm_key("vb", idx));
      const double resid =
          n * n + 2.0 * linear_damping_integral(v0, h0, bf, t, idx) - initial[k];
      worst_abs[k] = std::max(worst_abs[k], std::abs(resid));
      if (!rows.empty() && n > rows.back().norms.at(norm_key("vb", idx)) * (1.0 + 1e-12))
        monotone[k] = false;
    }
    rows.push_back(std::move(row));
  }

  const fs::path csv = ctx.dir / "linear-decay.csv";
  emit_csv(rows, csv);
  ctx.artifacts.push_back(csv);

  json energy = json::array(), fits = json::array();
  for (std::size_t k = 0; k < c.s_list.size(); ++k) {
    const double s = c.s_list[k];
    energy.push_back({{"s", s},
                      {"initial", initial[k]},
                      {"max_abs_residual", worst_abs[k]},
                      {"max_rel_residual", initial[k] > 0 ? worst_abs[k] / initial[k] : 0.0},
                      {"norm_nonincreasing", bool(monotone[k])}});
    const double rate = (c.m - s) / (2.0 * c.r);
    const double lo = c.effective_fit_lo(), hi = c.effective_fit_hi();
    fits.push_back(try_fit(rows, norm_key("b", homogeneous(s)), lo, hi, rate));
    fits.push_back(try_fit(rows, norm_key("v", homogeneous(s)), lo, hi, 0.5 + rate));
  }
  return {{"background", background_json(bf)},
          {"observations", rows.size()},
          {"energy_identity", energy},
          {"decay_fits", fits},
          {"energy_functional", rows.back().energy_functional},
          {"energy_functional_alt", rows.back().energy_functional_alt}};
}

json run_nonlinear(Context& ctx) {
  const ExperimentConfig& c = ctx.cfg;
  const BackgroundField bf = estimate_constant(c.btilde, c.r, c.J);
  const GridPtr grid = SpectralGrid::make(c.dimension, c.N);
  auto [v0, b0] = make_initial_data(grid, bf, c.m, c.epsilon, c.effective_slope(), c.seed);
  const SimulationState initial{v0, b0, 0.0, 0, bf};

  ObservationSpec spec;
  for (int l = 0; l <= c.m; ++l) {
    spec.norms.emplace_back("vb", inhomogeneous(l));
    spec.q_levels.push_back(l);
  }
  for (double s : c.s_list) spec.norms.emplace_back("vb", inhomogeneous(s));
  spec.norms.emplace_back("v", inhomogeneous(0));
  spec.norms.emplace_back("b", inhomogeneous(0));
  spec.norms.emplace_back("v", inhomogeneous(c.m));
  spec.a = c.a.value_or(default_modified_energy_constant(bf));

  std::vector<double> times = observation_times(c);
  times.push_back(0.1 * c.t_end);

  IntegratorConfig ic;
  ic.dt = c.dt;
  ic.cfl_safety = c.cfl;
  ic.t_end = c.t_end;

  std::vector<ObservationRow> rows;
  EnergyFunctional em(c.m, c.r);
  double damping_at_tenth = 0.0;
  const double upper = spec.a + 0.5 * bf.magnitude();
  bool envelope_ok = true;
  double envelope_low = std::numeric_limits<double>::infinity();
  double envelope_high = 0.0;
  auto observer = [&](const Snapshot& snap) {
    ObservationRow row = observe(snap.state, spec);
    row.cumulative_damping = snap.dissipation_hm;
    em.record(snap.state, snap.dissipation_hm);
    row.energy_functional = em.value();
    row.energy_functional_alt = em.alternate();
    for (const auto& [l, q] : row.q_s) {
      const double n = row.norms.at(norm_key("vb", inhomogeneous(l)));
      const double n2 = n * n;
      if (n2 == 0.0) continue;
      envelope_low = std::min(envelope_low, q / n2);
      envelope_high = std::max(envelope_high, q / n2);
      if (q < 0.5 * n2 || q > upper * n2) envelope_ok = false;
    }
    if (std::abs(snap.state.t - 0.1 * c.t_end) <= 1e-12 * c.t_end)
      damping_at_tenth = snap.dissipation_hm;
    rows.push_back(std::move(row));
  };
  const RunRecord rec = run(initial, ic, times, observer, c.m);

  const fs::path csv = ctx.dir / "nonlinear.csv";
  emit_csv(rows, csv);
  ctx.artifacts.push_back(csv);
  const fs::path ckpt = ctx.dir / "final_state.ckpt";
  write_checkpoint(rec.final_state, ckpt);
  ctx.artifacts.push_back(ckpt);

  const double e0 = std::pow(sobolev_norm(v0, b0, homogeneous(0.0)), 2);
  const double et = std::pow(sobolev_norm(rec.final_state.v, rec.final_state.b, homogeneous(0.0)), 2);
  const double law = et + 2.0 * rec.dissipation_l2 - e0;

  double sup_hm = 0.0, div = 0.0, mean = 0.0, herm = 0.0;
  const std::string hm_key = norm_key("vb", inhomogeneous(c.m));
  for (const auto& row : rows) {
    sup_hm = std::max(sup_hm, row.norms.at(hm_key));
    div = std::max(div, row.div_residual);
    mean = std::max(mean, row.mean_residual);
    herm = std::max(herm, row.hermitian_residual);
  }

  json fits = json::array();
  if (!rec.aborted) {
    for (double s : c.s_list) {
      const double rate = (c.m - s) / (2.0 * (1.0 + c.r));
      fits.push_back(try_fit(rows, norm_key("vb", inhomogeneous(s)), c.effective_fit_lo(),
                             c.effective_fit_hi(), rate));
    }
  }
  if (rec.aborted) {
    ctx.code = ExitCode::BlowUp;
    ctx.message = rec.abort_reason;
  }
  const double total = rec.dissipation_hm;
  return {{"background", background_json(bf)},
          {"aborted", rec.aborted},
          {"abort_reason", rec.abort_reason},
          {"final_time", rec.final_state.t},
          {"steps", rec.steps},
          {"min_dt", rec.min_dt},
          {"max_dt", rec.max_dt},
          {"epsilon", c.epsilon},
          {"sup_norm_hm", sup_hm},
          {"sup_norm_hm_over_epsilon", sup_hm / c.epsilon},
          {"damping_integral_hm", total},
          {"damping_integral_hm_at_tenth", damping_at_tenth},
          {"last_decade_fraction", total > 0 ? (total - damping_at_tenth) / total : 0.0},
          {"energy_law",
           {{"initial", e0},
            {"final", et},
            {"dissipation", rec.dissipation_l2},
            {"residual", law},
            {"residual_over_epsilon2", law / (c.epsilon * c.epsilon)}}},
          {"max_div_residual", div},
          {"max_mean_residual", mean},
          {"max_hermitian_residual", herm},
          {"q_envelope",
           {{"a", spec.a},
            {"lower", 0.5},
            {"upper", upper},
            {"min_ratio", rows.empty() ? 0.0 : envelope_low},
            {"max_ratio", envelope_high},
            {"holds", envelope_ok}}},
          {"decay_fits", fits},
          {"energy_functional", rows.empty() ? 0.0 : rows.back().energy_functional},
          {"energy_functional_alt", rows.empty() ? 0.0 : rows.back().energy_functional_alt}};
}

}  // namespace

json to_json(const DecayFit& f) {
  return {{"key", f.key},
          {"window", {f.t_lo, f.t_hi}},
          {"fitted_exponent", f.fitted_exponent},
          {"fitted_C", f.fitted_C},
          {"theorem_exponent", f.theorem_exponent},
          {"curve_slope", f.curve_slope},
          {"bound_satisfied", f.bound_satisfied},
          {"window_truncated", f.window_truncated},
          {"samples", f.samples}};
}

json to_json(const BoundReport& r) {
  return {{"region", r.region},
          {"kernel", r.kernel},
          {"bound_form", r.bound_form},
          {"C_empirical", r.c_empirical},
          {"worst_j", {r.worst_j[0], r.worst_j[1], r.worst_j[2]}},
          {"worst_t", r.worst_t},
          {"samples", r.samples},
          {"empty", r.empty},
          {"informational", r.informational}};
}

ExperimentOutcome run_experiment(const ExperimentConfig& cfg) {
  ExperimentOutcome out;
  const auto start = std::chrono::steady_clock::now();
  Context ctx{cfg, fs::path(cfg.output_dir), {}, ExitCode::Ok, ""};
  try {
    validate(cfg);
    std::error_code ec;
    fs::create_directories(ctx.dir, ec);
    if (ec) throw IoError("cannot create '" + ctx.dir.string() + "': " + ec.message());
    write_text(ctx.dir / "config.txt", write_config(cfg));
    ctx.artifacts.push_back(ctx.dir / "config.txt");
    switch (cfg.experiment) {
      case Experiment::LinearDecay: out.summary = run_linear(ctx); break;
      case Experiment::Nonlinear: out.summary = run_nonlinear(ctx); break;
      case Experiment::KernelSweep: out.summary = run_kernel_sweep(ctx); break;
      case Experiment::DiophantineEstimate: out.summary = run_diophantine(ctx); break;
    }
    write_text(ctx.dir / "summary.json", out.summary.dump(2) + "\n");
    ctx.artifacts.push_back(ctx.dir / "summary.json");
    out.code = ctx.code;
    out.message = ctx.message;
  } catch (const ConfigError& e) {
    out.code = ExitCode::Validation, out.message = e.what();
  } catch (const PreconditionError& e) {
    out.code = ExitCode::Validation, out.message = e.what();
  } catch (const ResonanceError& e) {
    out.code = ExitCode::Validation, out.message = e.what();
  } catch (const DimensionError& e) {
    out.code = ExitCode::Validation, out.message = e.what();
  } catch (const BlowUpError& e) {
    out.code = ExitCode::BlowUp, out.message = e.what();
  } catch (const IoError& e) {
    out.code = ExitCode::Io, out.message = e.what();
  } catch (const fs::filesystem_error& e) {
    out.code = ExitCode::Io, out.message = e.what();
  } catch (const std::exception& e) {
    out.code = ExitCode::Failure, out.message = e.what();
  }
  const double wall = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();

  json config_echo = json::object();
  for (const auto& [k, v] : parse_key_values(write_config(cfg))) config_echo[k] = v;
  json manifest = {{"experiment", experiment_name(cfg.experiment)},
                   {"preset", cfg.preset},
                   {"config", config_echo},
                   {"version", kVersion},
                   {"threads", omp_get_max_threads()},
                   {"wall_time_seconds", wall},
                   {"exit_code", static_cast<int>(out.code)},
                   {"message", out.message}};
  json list = json::array();
  for (const auto& p : ctx.artifacts) list.push_back(p.filename().string());
  manifest["artifacts"] = list;
  if (out.code != ExitCode::Io && out.code != ExitCode::Validation) {
    try {
      write_text(ctx.dir / "manifest.json", manifest.dump(2) + "\n");
      ctx.artifacts.push_back(ctx.dir / "manifest.json");
    } catch (const IoError& e) {
      out.code = ExitCode::Io;
      out.message = e.what();
    }
  }
  out.artifacts = ctx.artifacts;
  return out;
}

}  // namespace torusmhd
