#include "torusmhd/nonlinear_solver.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>

#include "torusmhd/errors.hpp"
#include "torusmhd/kernels.hpp"
#include "torusmhd/operators.hpp"
#include "torusmhd/transform.hpp"

namespace torusmhd {

namespace {

// 5-point Gauss-Legendre rule on [0, 1].
constexpr std::array<double, 5> kNodes{0.5 - 0.5 * 0.9061798459386640, 0.5 - 0.5 * 0.5384693101056831,
                                       0.5, 0.5 + 0.5 * 0.5384693101056831,
                                       0.5 + 0.5 * 0.9061798459386640};
constexpr std::array<double, 5> kWeights{0.5 * 0.2369268850561891, 0.5 * 0.4786286704993665,
                                         0.5 * 0.5688888888888889, 0.5 * 0.4786286704993665,
                                         0.5 * 0.2369268850561891};

struct Workspace {
  std::vector<Complex>& buffer;
  std::vector<double>& physical;
};

// Writes N1, N2 (without sign change) and max(|v|_inf, |b|_inf).
void compute_nonlinear(const SpectralVectorField& v, const SpectralVectorField& b, bool dealias,
                       Workspace ws, SpectralVectorField& n1, SpectralVectorField& n2,
                       double& max_speed) {
  const SpectralGrid& g = v.grid();
  const int dim = g.dimension();
  const std::size_t size = g.size();
  ws.buffer.resize(size);
  ws.physical.resize((2 * dim + 1) * size);
  auto phys = [&](int slot) { return std::span<double>(ws.physical.data() + slot * size, size); };
  const Fft& fft = Fft::for_grid(g);

  bool finite = true;
  double speed = 0.0;
  for (int f = 0; f < 2; ++f) {
    const SpectralVectorField& src = f == 0 ? v : b;
    for (int k = 0; k < dim; ++k) {
      const auto c = src.component(k);
      for (std::size_t i = 0; i < size; ++i)
        ws.buffer[i] = (!dealias || g.retained(i)) ? c[i] : Complex(0.0);
      fft.backward(ws.buffer);
      auto out = phys(f * dim + k);
      for (std::size_t i = 0; i < size; ++i) {
        const double x = ws.buffer[i].real();
        out[i] = x;
        if (!std::isfinite(x)) finite = false;
        speed = std::max(speed, std::abs(x));
      }
    }
  }
  if (!finite) throw BlowUpError("nonlinear term: non-finite field samples");
  max_speed = speed;

  n1 = SpectralVectorField(v.grid_ptr());
  n2 = SpectralVectorField(v.grid_ptr());
  auto prod = phys(2 * dim);
  const double scale = 1.0 / static_cast<double>(size);

  // Adds i j_axis * F to `target` for the flux transformed into ws.buffer.
  auto accumulate = [&](SpectralVectorField& target, int comp, int axis, double sign) {
    auto t = target.component(comp);
    const auto kx = g.wavenumbers(axis);
    for (std::size_t i = 0; i < size; ++i)
      t[i] += Complex(0.0, sign * kx[i] * scale) * ws.buffer[i];
  };
  auto transform_product = [&] {
    for (std::size_t i = 0; i < size; ++i) ws.buffer[i] = prod[i];
    fft.forward(ws.buffer);
  };

  for (int l = 0; l < dim; ++l) {
    const auto vl = phys(l);
    const auto bl = phys(dim + l);
    for (int k = l; k < dim; ++k) {
      const auto vk = phys(k);
      const auto bk = phys(dim + k);
      for (std::size_t i = 0; i < size; ++i) prod[i] = vl[i] * vk[i] - bl[i] * bk[i];
      transform_product();
      accumulate(n1, k, l, 1.0);
      if (k != l) {
        accumulate(n1, l, k, 1.0);
        for (std::size_t i = 0; i < size; ++i) prod[i] = vl[i] * bk[i] - bl[i] * vk[i];
        transform_product();
        accumulate(n2, k, l, 1.0);
        accumulate(n2, l, k, -1.0);
      }
    }
  }
  if (dealias) {
    n1 = torusmhd::dealias(n1);
    n2 = torusmhd::dealias(n2);
  }
  n1 = leray_project(n1);
}

void apply(const std::vector<PairMatrix>& mats, SpectralVectorField& v, SpectralVectorField& b) {
  for (int k = 0; k < v.components(); ++k)
    kernels::omp::propagate_pairs(v.grid(), mats, v.component(k), b.component(k));
}

PairMatrix inverse(const PairMatrix& m) {
  const Complex det = m.a * m.d - m.b * m.c;
  return {m.d / det, -m.b / det, -m.c / det, m.a / det};
}

double pair_norm2(const SpectralVectorField& v, const SpectralVectorField& b) {
  const double n = sobolev_norm(v, b, homogeneous(0.0));
  return n * n;
}

}  // namespace

std::pair<SpectralVectorField, SpectralVectorField> nonlinear_rhs(const SimulationState& state,
                                                                  bool dealias) {
  if (state.v.empty() || state.b.empty() || !(state.v.grid() == state.b.grid()))
    throw DimensionError("nonlinear_rhs: v and b must share a grid");
  std::vector<Complex> buffer;
  std::vector<double> physical;
  SpectralVectorField n1, n2;
  double speed = 0.0;
  compute_nonlinear(state.v, state.b, dealias, {buffer, physical}, n1, n2, speed);
  return {std::move(n1), std::move(n2)};
}

Integrator::Integrator(SimulationState initial, IntegratorConfig cfg, int m)
    : state_(std::move(initial)), cfg_(cfg) {
  if (state_.v.empty() || state_.b.empty() || !(state_.v.grid() == state_.b.grid()))
    throw DimensionError("Integrator: v and b must share a grid");
  if (state_.bf.dimension != state_.v.grid().dimension())
    throw DimensionError("Integrator: background dimension does not match the grid");
  if (!(cfg_.dt > 0.0)) throw PreconditionError("Integrator: dt must be positive");
  if (!(cfg_.cfl_safety > 0.0 && cfg_.cfl_safety <= 1.0))
    throw PreconditionError("Integrator: cfl_safety must lie in (0, 1]");
  if (m < 0) throw PreconditionError("Integrator: m must be non-negative");
  hm_weights_ = sobolev_weights(state_.v.grid(), inhomogeneous(m));
  initial_norm2_ = pair_norm2(state_.v, state_.b);
  evaluate(state_.v, state_.b, k1v_, k1b_, &max_speed_);
}

double Integrator::cfl_limit() const {
  const double speed = std::max(max_speed_, state_.bf.magnitude());
  if (speed == 0.0) return std::numeric_limits<double>::infinity();
  return cfg_.cfl_safety * state_.v.grid().spacing() / speed;
}

void Integrator::evaluate(const SpectralVectorField& v, const SpectralVectorField& b,
                          SpectralVectorField& n1, SpectralVectorField& n2, double* max_speed) {
  double speed = 0.0;
  compute_nonlinear(v, b, cfg_.dealias, {buffer_, physical_}, n1, n2, speed);
  n1 *= -1.0;
  n2 *= -1.0;
  if (max_speed) *max_speed = speed;
}

const Integrator::StepTables& Integrator::tables(double h) {
  if (auto it = cache_.find(h); it != cache_.end()) return it->second;
  if (cache_.size() >= 6) std::erase_if(cache_, [&](const auto& e) { return e.first != cfg_.dt; });

  const SpectralGrid& g = state_.v.grid();
  StepTables tab;
  tab.full = propagator_table(g, state_.bf, h);
  tab.half = propagator_table(g, state_.bf, 0.5 * h);
  tab.node_fwd.resize(kNodes.size());
  tab.node_bwd.resize(kNodes.size());
  for (std::size_t q = 0; q < kNodes.size(); ++q) {
    tab.node_fwd[q] = propagator_table(g, state_.bf, kNodes[q] * h);
    tab.node_bwd[q] = propagator_table(g, state_.bf, (1.0 - kNodes[q]) * h);
    for (auto& mat : tab.node_bwd[q]) mat = inverse(mat);
  }
  return cache_.emplace(h, std::move(tab)).first->second;
}

void Integrator::advance(double h) {
  if (!(h > 0.0)) throw PreconditionError("Integrator::advance: step must be positive");
  const StepTables& tab = tables(h);
  const SpectralVectorField& v0 = state_.v;
  const SpectralVectorField& b0 = state_.b;

  // a = L_{h/2}(psi + h/2 k1)
  SpectralVectorField av = v0 + (0.5 * h) * k1v_;
  SpectralVectorField ab = b0 + (0.5 * h) * k1b_;
  apply(tab.half, av, ab);
  SpectralVectorField k2v, k2b;
  evaluate(av, ab, k2v, k2b);

  // b = L_{h/2} psi + h/2 k2
  SpectralVectorField lhv = v0, lhb = b0;
  apply(tab.half, lhv, lhb);
  SpectralVectorField bv = lhv + (0.5 * h) * k2v;
  SpectralVectorField bb = lhb + (0.5 * h) * k2b;
  SpectralVectorField k3v, k3b;
  evaluate(bv, bb, k3v, k3b);

  // c = L_h psi + h L_{h/2} k3
  SpectralVectorField lfv = v0, lfb = b0;
  apply(tab.full, lfv, lfb);
  SpectralVectorField t3v = k3v, t3b = k3b;
  apply(tab.half, t3v, t3b);
  SpectralVectorField cv = lfv + h * t3v;
  SpectralVectorField cb = lfb + h * t3b;
  SpectralVectorField k4v, k4b;
  evaluate(cv, cb, k4v, k4b);

  // psi' = L_h psi + h/6 (L_h k1 + 2 L_{h/2}(k2 + k3) + k4)
  SpectralVectorField s1v = k1v_, s1b = k1b_;
  apply(tab.full, s1v, s1b);
  SpectralVectorField s23v = k2v + k3v, s23b = k2b + k3b;
  apply(tab.half, s23v, s23b);
  SpectralVectorField nv = lfv + (h / 6.0) * (s1v + 2.0 * s23v + k4v);
  SpectralVectorField nb = lfb + (h / 6.0) * (s1b + 2.0 * s23b + k4b);
  enforce_hermitian(nv);
  enforce_hermitian(nb);

  const double norm2 = pair_norm2(nv, nb);
  if (!std::isfinite(norm2))
    throw BlowUpError("step: non-finite state at t = " + std::to_string(state_.t + h));
  const double limit = cfg_.blowup_factor * cfg_.blowup_factor * initial_norm2_;
  if (initial_norm2_ > 0.0 && norm2 > limit)
    throw BlowUpError("step: norm exceeded " + std::to_string(cfg_.blowup_factor) +
                      " times its initial value at t = " + std::to_string(state_.t + h));

  SpectralVectorField nk1v, nk1b;
  double speed = 0.0;
  evaluate(nv, nb, nk1v, nk1b, &speed);

  // Dissipation over the step from the Hermite interpolant in the moving frame.
  const SpectralGrid& g = v0.grid();
  const int dim = g.dimension();
  double sum_l2 = 0.0, sum_hm = 0.0;
  for (std::size_t q = 0; q < kNodes.size(); ++q) {
    const double s = kNodes[q];
    const double h00 = (2.0 * s - 3.0) * s * s + 1.0;
    const double h10 = ((s - 2.0) * s + 1.0) * s * h;
    const double h01 = (3.0 - 2.0 * s) * s * s;
    const double h11 = (s - 1.0) * s * s * h;
    const auto& fwd = tab.node_fwd[q];
    const auto& bwd = tab.node_bwd[q];
    double node_l2 = 0.0, node_hm = 0.0;
    for (int k = 0; k < dim; ++k) {
      const auto pv = v0.component(k), pb = b0.component(k);
      const auto qv = k1v_.component(k), qb = k1b_.component(k);
      const auto rv = nv.component(k), rb = nb.component(k);
      const auto sv = nk1v.component(k), sb = nk1b.component(k);
      for (std::size_t i = 0; i < g.size(); ++i) {
        const Complex xv = h00 * pv[i] + h10 * qv[i];
        const Complex xb = h00 * pb[i] + h10 * qb[i];
        const Complex yv = h01 * rv[i] + h11 * sv[i];
        const Complex yb = h01 * rb[i] + h11 * sb[i];
        const Complex val = fwd[i].a * xv + fwd[i].b * xb + bwd[i].a * yv + bwd[i].b * yb;
        const double a2 = std::norm(val);
        node_l2 += a2;
        node_hm += hm_weights_[i] * a2;
      }
    }
    sum_l2 += kWeights[q] * node_l2;
    sum_hm += kWeights[q] * node_hm;
  }

  state_.v = std::move(nv);
  state_.b = std::move(nb);
  state_.t += h;
  ++state_.step_count;
  k1v_ = std::move(nk1v);
  k1b_ = std::move(nk1b);
  max_speed_ = speed;
  dissipation_l2_ += h * sum_l2;
  dissipation_hm_ += h * sum_hm;
}

void Integrator::advance_to(double t_target) {
  advance(t_target - state_.t);
  state_.t = t_target;
}

double cfl_limit(const SimulationState& state, const IntegratorConfig& cfg) {
  const PhysicalVectorField pv = inverse_transform(state.v);
  const PhysicalVectorField pb = inverse_transform(state.b);
  double speed = state.bf.magnitude();
  for (double x : pv.data()) speed = std::max(speed, std::abs(x));
  for (double x : pb.data()) speed = std::max(speed, std::abs(x));
  if (speed == 0.0) return std::numeric_limits<double>::infinity();
  return cfg.cfl_safety * state.v.grid().spacing() / speed;
}

SimulationState step(const SimulationState& state, const IntegratorConfig& cfg) {
  Integrator it(state, cfg);
  if (cfg.dt > it.cfl_limit() && !cfg.adaptive)
    throw PreconditionError("step: dt violates the CFL limit");
  it.advance(std::min(cfg.dt, cfg.adaptive ? it.cfl_limit() : cfg.dt));
  return it.state();
}

RunRecord run(const SimulationState& initial, const IntegratorConfig& cfg,
              std::span<const double> observation_times, const Observer& observer, int m) {
  if (cfg.t_end < initial.t) throw PreconditionError("run: t_end precedes the initial time");
  std::vector<double> times;
  for (double t : observation_times)
    if (t >= initial.t && t <= cfg.t_end) times.push_back(t);
  std::sort(times.begin(), times.end());
  times.erase(std::unique(times.begin(), times.end()), times.end());

  Integrator it(initial, cfg, m);
  RunRecord rec;
  rec.initial_norm = std::sqrt(pair_norm2(initial.v, initial.b));
  rec.min_dt = std::numeric_limits<double>::infinity();

  auto notify = [&](std::size_t& next) {
    while (next < times.size() && times[next] <= it.state().t) {
      if (observer) observer(Snapshot{it.state(), it.dissipation_l2(), it.dissipation_hm()});
      ++next;
    }
  };

  std::size_t next = 0;
  notify(next);
  while (it.state().t < cfg.t_end) {
    const double target = next < times.size() ? std::min(times[next], cfg.t_end) : cfg.t_end;
    const double cfl = it.cfl_limit();
    if (!cfg.adaptive && cfg.dt > cfl) {
      rec.aborted = true;
      rec.abort_reason = "dt exceeds the CFL limit at t = " + std::to_string(it.state().t);
      break;
    }
    const double h = cfg.adaptive ? std::min(cfg.dt, cfl) : cfg.dt;
    const double remaining = target - it.state().t;
    try {
      if (remaining <= h * (1.0 + 1e-9)) {
        rec.min_dt = std::min(rec.min_dt, remaining);
        rec.max_dt = std::max(rec.max_dt, remaining);
        it.advance_to(target);
      } else {
        // Split the remaining distance evenly rather than leaving a sliver.
        const double pieces = std::ceil(remaining / h);
        const double hs = pieces <= 2.0 ? remaining / pieces : h;
        rec.min_dt = std::min(rec.min_dt, hs);
        rec.max_dt = std::max(rec.max_dt, hs);
        it.advance(hs);
      }
    } catch (const BlowUpError& e) {
      rec.aborted = true;
      rec.abort_reason = e.what();
      break;
    }
    notify(next);
  }
  rec.final_state = it.state();
  rec.steps = it.state().step_count - initial.step_count;
  rec.dissipation_l2 = it.dissipation_l2();
  rec.dissipation_hm = it.dissipation_hm();
  if (!std::isfinite(rec.min_dt)) rec.min_dt = 0.0;
  return rec;
}

}  // namespace torusmhd
