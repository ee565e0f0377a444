#include <cmath>
#include <filesystem>
#include <fstream>
#include <limits>

#include "doctest.h"
#include "oracles.hpp"
#include "test_util.hpp"
#include "torusmhd/checkpoint.hpp"
#include "torusmhd/errors.hpp"
#include "torusmhd/initial_data.hpp"
#include "torusmhd/nonlinear_solver.hpp"

using namespace torusmhd;
using testutil::rel_diff;

namespace {

BackgroundField background(int dim) {
  return dim == 2 ? estimate_constant(background_preset("sqrt2"), 1.01, 32)
                  : estimate_constant(background_preset("sqrt2-sqrt3"), 2.01, 16);
}

SimulationState initial_state(int dim, int n, double eps, std::uint64_t seed, int m = 4) {
  const auto bf = background(dim);
  auto [v, b] = make_initial_data(SpectralGrid::make(dim, n), bf, m, eps, m + 1.0, seed);
  return {std::move(v), std::move(b), 0.0, 0, bf};
}

double energy(const SimulationState& s) {
  return std::pow(sobolev_norm(s.v, s.b, homogeneous(0.0)), 2);
}

std::filesystem::path temp_path(const std::string& name) {
  return std::filesystem::temp_directory_path() / ("torusmhd_test_" + name);
}

}  // namespace

TEST_CASE("nonlinear term of zero fields is zero") {
  const auto g = SpectralGrid::make(2, 16);
  SimulationState s{SpectralVectorField(g), SpectralVectorField(g), 0.0, 0, background(2)};
  const auto [n1, n2] = nonlinear_rhs(s);
  CHECK(sobolev_norm(n1, homogeneous(0.0)) == 0.0);
  CHECK(sobolev_norm(n2, homogeneous(0.0)) == 0.0);
}

TEST_CASE("nonlinear term vanishes exactly for v = b") {
  for (int dim : {2, 3}) {
    auto s = initial_state(dim, 16, 0.3, 5);
    s.b = s.v;
    const auto [n1, n2] = nonlinear_rhs(s);
    CHECK(sobolev_norm(n1, homogeneous(0.0)) == 0.0);
    CHECK(sobolev_norm(n2, homogeneous(0.0)) == 0.0);
  }
}

TEST_CASE("nonlinear term matches the direct convolution") {
  for (int dim : {2, 3}) {
    for (std::uint64_t seed : {1u, 2u}) {
      const auto g = SpectralGrid::make(dim, 16);
      const auto v = testutil::random_solenoidal(g, seed, 5);
      const auto b = testutil::random_solenoidal(g, seed + 100, 5);
      SimulationState s{v, b, 0.0, 0, background(dim)};
      const auto [n1, n2] = nonlinear_rhs(s);
      auto [c1, c2] = oracle::convolution_terms(v, b);
      c1 = leray_project(c1);
      CHECK(rel_diff(n1, c1) < 1e-11);
      CHECK(rel_diff(n2, c2) < 1e-11);
      CHECK(divergence_residual(n1) < 1e-13);
      CHECK(divergence_residual(n2) < 1e-13);
      CHECK(mean_residual(n1) == 0.0);
      CHECK(mean_residual(n2) == 0.0);
    }
  }
}

TEST_CASE("non-finite fields raise a blow-up error") {
  auto s = initial_state(2, 16, 1e-3, 4);
  s.v.at(0, s.v.grid().index({1, 1, 0})) = Complex(std::numeric_limits<double>::quiet_NaN(), 0.0);
  CHECK_THROWS_AS(nonlinear_rhs(s), BlowUpError);
}

TEST_CASE("one step in the linear limit reproduces the exact propagator") {
  const auto s = initial_state(2, 32, 1e-14, 6);
  IntegratorConfig cfg;
  cfg.dt = 0.01;
  const auto next = step(s, cfg);
  const auto [v, b] = evolve_linear(s.v, s.b, s.bf, 0.01);
  CHECK(rel_diff(next.v, v) < 1e-12);
  CHECK(rel_diff(next.b, b) < 1e-12);
  CHECK(next.t == doctest::Approx(0.01));
  CHECK(next.step_count == 1);
}

TEST_CASE("structural invariants hold along a run") {
  const auto s = initial_state(2, 32, 1e-2, 7);
  IntegratorConfig cfg;
  cfg.dt = 0.02;
  cfg.t_end = 2.0;
  const std::vector<double> times{0.0, 0.5, 1.0, 1.5, 2.0};
  std::vector<double> seen;
  const auto rec = run(s, cfg, times, [&](const Snapshot& snap) {
    seen.push_back(snap.state.t);
    CHECK(mean_residual(snap.state.v) == 0.0);
    CHECK(mean_residual(snap.state.b) == 0.0);
    CHECK(divergence_residual(snap.state.v) < 1e-12);
    CHECK(divergence_residual(snap.state.b) < 1e-12);
    CHECK(hermitian_residual(snap.state.v) < 1e-13);
    CHECK(hermitian_residual(snap.state.b) < 1e-13);
  });
  CHECK_FALSE(rec.aborted);
  CHECK(seen == times);
  CHECK(rec.final_state.t == 2.0);
}

TEST_CASE("discrete L2 energy law") {
  const auto s = initial_state(2, 32, 1e-3, 8);
  IntegratorConfig cfg;
  cfg.dt = 0.01;
  cfg.t_end = 10.0;
  const std::vector<double> times{10.0};
  const auto rec = run(s, cfg, times);
  const double residual = energy(rec.final_state) + 2.0 * rec.dissipation_l2 - energy(s);
  CHECK(std::abs(residual) < 1e-8 * 1e-6);
}

TEST_CASE("fourth-order convergence under dt halving") {
  const auto s = initial_state(2, 16, 0.2, 9);
  auto solve = [&](double dt) {
    IntegratorConfig cfg;
    cfg.dt = dt;
    cfg.t_end = 1.0;
    const std::vector<double> times{1.0};
    return run(s, cfg, times).final_state;
  };
  const auto ref = solve(0.0025);
  double prev = 0.0;
  for (double dt : {0.04, 0.02, 0.01}) {
    const auto st = solve(dt);
    auto dv = st.v - ref.v;
    auto db = st.b - ref.b;
    const double err = sobolev_norm(dv, db, homogeneous(0.0));
    if (prev > 0.0) CHECK(std::log2(prev / err) > 3.7);
    prev = err;
  }
}

TEST_CASE("reflection symmetry b -> -b, b~ -> -b~") {
  const auto s = initial_state(2, 32, 0.05, 10);
  SimulationState mirrored = s;
  mirrored.b *= -1.0;
  for (double& x : mirrored.bf.btilde) x = -x;
  IntegratorConfig cfg;
  cfg.dt = 0.02;
  cfg.t_end = 1.0;
  const std::vector<double> times{1.0};
  const auto a = run(s, cfg, times).final_state;
  const auto b = run(mirrored, cfg, times).final_state;
  CHECK(rel_diff(b.v, a.v) < 1e-14);
  CHECK(rel_diff(-1.0 * b.b, a.b) < 1e-14);
}

TEST_CASE("zero initial data stays zero") {
  const auto g = SpectralGrid::make(2, 16);
  SimulationState s{SpectralVectorField(g), SpectralVectorField(g), 0.0, 0, background(2)};
  IntegratorConfig cfg;
  cfg.t_end = 0.5;
  const std::vector<double> times{0.5};
  const auto rec = run(s, cfg, times);
  CHECK_FALSE(rec.aborted);
  CHECK(sobolev_norm(rec.final_state.v, rec.final_state.b, homogeneous(0.0)) == 0.0);
  CHECK(rec.dissipation_l2 == 0.0);
}

TEST_CASE("a blow-up ends the run with the last valid state") {
  const auto s = initial_state(2, 16, 1e-3, 11);
  IntegratorConfig cfg;
  cfg.t_end = 1.0;
  cfg.blowup_factor = 0.5;  // any step trips the threshold
  const std::vector<double> times{1.0};
  const auto rec = run(s, cfg, times);
  CHECK(rec.aborted);
  CHECK_FALSE(rec.abort_reason.empty());
  CHECK(rec.final_state.t == 0.0);
  CHECK(rel_diff(rec.final_state.v, s.v) == 0.0);
}

TEST_CASE("CFL limit") {
  const auto s = initial_state(2, 32, 1e-3, 12);
  IntegratorConfig cfg;
  const double limit = cfl_limit(s, cfg);
  CHECK(limit == doctest::Approx(0.5 * (2.0 * M_PI / 32.0) / s.bf.magnitude()).epsilon(1e-12));
  cfg.dt = 2.0 * limit;
  cfg.adaptive = false;
  CHECK_THROWS_AS(step(s, cfg), PreconditionError);
  cfg.adaptive = true;
  CHECK(step(s, cfg).t == doctest::Approx(limit).epsilon(1e-12));
}

TEST_CASE("checkpoint round trip is bit exact") {
  for (int dim : {2, 3}) {
    auto s = initial_state(dim, 16, 1e-3, 13);
    s.t = 3.25;
    s.step_count = 325;
    const auto path = temp_path("ckpt_" + std::to_string(dim));
    write_checkpoint(s, path);
    const auto back = read_checkpoint(path);
    CHECK(back.t == s.t);
    CHECK(back.step_count == s.step_count);
    CHECK(back.bf.btilde == s.bf.btilde);
    CHECK(back.bf.r == s.bf.r);
    CHECK(back.v.grid().dimension() == dim);
    CHECK(back.v.grid().modes_per_axis() == 16);
    CHECK(rel_diff(back.v, s.v) == 0.0);
    CHECK(rel_diff(back.b, s.b) == 0.0);
    const auto size = std::filesystem::file_size(path);
    CHECK(size == 8 + 4 * 4 + 8 + 8 + 24 + 8 + 2 * dim * s.v.grid().size() * 16);
    std::filesystem::remove(path);
  }
}

TEST_CASE("corrupt checkpoints are rejected") {
  const auto s = initial_state(2, 16, 1e-3, 14);
  const auto path = temp_path("ckpt_bad");
  write_checkpoint(s, path);
  std::filesystem::resize_file(path, std::filesystem::file_size(path) - 8);
  CHECK_THROWS_AS(read_checkpoint(path), IoError);
  {
    std::ofstream f(path, std::ios::binary);
    f << "NOTACKPT and some more bytes";
  }
  CHECK_THROWS_AS(read_checkpoint(path), IoError);
  std::filesystem::remove(path);
  CHECK_THROWS_AS(read_checkpoint(path), IoError);
}

TEST_CASE("initial data") {
  const auto bf = background(2);
  const auto g = SpectralGrid::make(2, 64);
  const auto [v, b] = make_initial_data(g, bf, 6, 1e-3, 7.0, 42);
  CHECK(divergence_residual(v) < 1e-13);
  CHECK(divergence_residual(b) < 1e-13);
  CHECK(mean_residual(v) == 0.0);
  CHECK(mean_residual(b) == 0.0);
  CHECK(hermitian_residual(v) == 0.0);
  const double total = sobolev_norm(v, inhomogeneous(6)) + sobolev_norm(b, inhomogeneous(6));
  CHECK(std::abs(total - 1e-3) < 1e-12 * 1e-3);

  const auto [v2, b2] = make_initial_data(g, bf, 6, 1e-3, 7.0, 42);
  CHECK(std::equal(v.data().begin(), v.data().end(), v2.data().begin()));
  CHECK(std::equal(b.data().begin(), b.data().end(), b2.data().begin()));
  const auto [v3, b3] = make_initial_data(g, bf, 6, 1e-3, 7.0, 43);
  CHECK(rel_diff(v3, v) > 0.1);

  // Support is the dealiased ball.
  for (std::size_t i = 0; i < g->size(); ++i)
    if (g->norm2(i) > 21.0 * 21.0) CHECK(std::abs(v.at(0, i)) == 0.0);

  CHECK_THROWS_AS(make_initial_data(g, bf, 6, 0.0, 7.0, 1), PreconditionError);
}

// Share of ||.||_{H^m}^2 carried by |j| > K/2, pooled over seeds, against the
// expected share sum w |j|^{-2 slope} over the same shells.
TEST_CASE("initial data spectrum is dominated by low modes") {
  const auto bf = background(2);
  const auto g = SpectralGrid::make(2, 64);
  const double k2 = std::pow(g->dealias_cutoff(), 2);
  for (int m : {4, 6}) {
    const auto w = sobolev_weights(*g, inhomogeneous(m));
    double tot = 0.0, tail = 0.0;
    for (std::uint64_t seed = 1; seed <= 40; ++seed) {
      const auto [v, b] = make_initial_data(g, bf, m, 1e-3, m + 1.0, seed);
      for (std::size_t i = 0; i < g->size(); ++i) {
        double e = 0.0;
        for (int k = 0; k < 2; ++k) e += std::norm(v.at(k, i)) + std::norm(b.at(k, i));
        tot += w[i] * e;
        if (g->norm2(i) > 0.25 * k2) tail += w[i] * e;
      }
    }
    double otot = 0.0, otail = 0.0;
    for (std::size_t i = 1; i < g->size(); ++i) {
      if (g->norm2(i) > k2) continue;
      const double e = w[i] * std::pow(g->norm2(i), -(m + 1.0));
      otot += e;
      if (g->norm2(i) > 0.25 * k2) otail += e;
    }
    const double share = tail / tot, expected = otail / otot;
    CAPTURE(m);
    CAPTURE(share);
    CAPTURE(expected);
    CHECK(std::abs(share - expected) < 0.15 * expected);
    CHECK(share < 0.5);
    if (m == 6) CHECK(share < 0.10);
  }
}
