#include <algorithm>
#include <cmath>
#include <numbers>

#include "doctest.h"
#include "oracles.hpp"
#include "test_util.hpp"
#include "torusmhd/diophantine.hpp"
#include "torusmhd/errors.hpp"

using namespace torusmhd;

namespace {

Wavevector canonical(Wavevector j) {
  const bool positive = j[0] > 0 || (j[0] == 0 && (j[1] > 0 || (j[1] == 0 && j[2] > 0)));
  if (!positive)
    for (int& x : j) x = -x;
  return j;
}

SpectralVectorField single_mode(const GridPtr& g, const Wavevector& j) {
  SpectralVectorField f(g);
  f.set_mode(j, {Complex(0.4, -0.3), Complex(-0.1, 0.7), Complex(0.2, 0.2)});
  return f;
}

}  // namespace

TEST_CASE("estimate_constant matches an exhaustive scan") {
  const auto b = background_preset("sqrt2");
  const auto bf = estimate_constant(b, 1.0, 64);
  const auto ref = oracle::exhaustive_minimum(2, b, 1.0, 64);
  CHECK(bf.c_est > 0.0);
  CHECK(bf.c_est == doctest::Approx(ref.value).epsilon(1e-14));
  CHECK(bf.argmin == canonical(ref.j));
  CHECK(bf.lattice_radius == 64);
  CHECK(bf.c_est == doctest::Approx(std::numbers::sqrt2 * (std::numbers::sqrt2 - 1.0)).epsilon(1e-14));
}

TEST_CASE("estimate_constant in three dimensions matches an exhaustive scan") {
  const auto b = background_preset("sqrt2-sqrt3");
  const auto bf = estimate_constant(b, 2.01, 12);
  const auto ref = oracle::exhaustive_minimum(3, b, 2.01, 12);
  CHECK(bf.c_est == doctest::Approx(ref.value).epsilon(1e-13));
  CHECK(bf.argmin == canonical(ref.j));
}

TEST_CASE("rational backgrounds are resonant") {
  CHECK_THROWS_AS(estimate_constant(std::vector<double>{1.0, 1.0}, 1.0, 2), ResonanceError);
  CHECK_THROWS_AS(estimate_constant(std::vector<double>{1.0, 0.0}, 1.5, 4), ResonanceError);
  CHECK_THROWS_AS(estimate_constant(std::vector<double>{2.0, 3.0}, 1.0, 8), ResonanceError);
}

TEST_CASE("invalid arguments") {
  const auto b = background_preset("sqrt2");
  CHECK_THROWS_AS(estimate_constant(b, 1.0, 0), PreconditionError);
  CHECK_THROWS_AS(estimate_constant(b, 0.0, 8), PreconditionError);
  CHECK_THROWS_AS(estimate_constant(std::vector<double>{1.0}, 1.0, 8), DimensionError);
}

TEST_CASE("golden-ratio constant stabilizes as J grows") {
  const auto b = background_preset("golden");
  const double c64 = estimate_constant(b, 1.0, 64).c_est;
  for (int J : {128, 256, 512}) {
    const double c = estimate_constant(b, 1.0, J).c_est;
    CHECK(c <= c64);
    CHECK(c > 0.95 * c64);
  }
}

TEST_CASE("c_est is monotone in J and homogeneous in b") {
  const auto b = background_preset("sqrt2");
  double prev = INFINITY;
  for (int J = 1; J <= 64; J *= 2) {
    const double c = estimate_constant(b, 1.2, J).c_est;
    CHECK(c <= prev);
    prev = c;
  }
  const double alpha = 3.7;
  const std::vector<double> scaled{alpha * b[0], alpha * b[1]};
  CHECK(estimate_constant(scaled, 1.2, 40).c_est ==
        doctest::Approx(alpha * estimate_constant(b, 1.2, 40).c_est).epsilon(1e-13));
}

TEST_CASE("near_resonances") {
  const auto bf = estimate_constant(background_preset("sqrt2"), 1.0, 64);
  const auto top1 = near_resonances(bf, 1);
  REQUIRE(top1.size() == 1);
  CHECK(top1[0].j == bf.argmin);
  CHECK(top1[0].value == bf.c_est);

  // The best approximations of sqrt 2 are its continued-fraction convergents.
  const auto conv = oracle::convergents(std::numbers::sqrt2, 8);
  const auto top3 = near_resonances(bf, 3);
  REQUIRE(top3.size() == 3);
  for (const auto& nr : top3) {
    const long p = std::abs(nr.j[0]), q = std::abs(nr.j[1]);
    CHECK(std::find(conv.begin(), conv.end(), std::make_pair(p, q)) != conv.end());
  }
  for (std::size_t i = 1; i < top3.size(); ++i) CHECK(top3[i - 1].value <= top3[i].value);

  const auto bf2 = estimate_constant(background_preset("sqrt2"), 1.0, 128);
  const auto top5a = near_resonances(bf, 5);
  const auto top5b = near_resonances(bf2, 5);
  for (std::size_t i = 0; i < 5; ++i) CHECK(top5b[i].value <= top5a[i].value);

  const auto small = estimate_constant(background_preset("sqrt2"), 1.0, 1);
  CHECK(near_resonances(small, 100).size() == 2);  // (0,1) and (1,0)
}

TEST_CASE("verify_poincare is saturated by the argmin mode") {
  const auto bf = estimate_constant(background_preset("golden"), 1.0, 20);
  const auto g = SpectralGrid::make(2, 2 * bf.lattice_radius + 2);
  const auto f = single_mode(g, bf.argmin);
  CHECK(verify_poincare(bf, f, 0.0) == doctest::Approx(1.0 / bf.c_est).epsilon(1e-13));
  CHECK(verify_poincare(bf, f, 1.5) == doctest::Approx(1.0 / bf.c_est).epsilon(1e-13));
}

TEST_CASE("verify_poincare bound on random band-limited fields") {
  const auto bf = estimate_constant(background_preset("sqrt2"), 1.0, 16);
  const auto g = SpectralGrid::make(2, 34);
  std::mt19937_64 rng(99);
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  for (int trial = 0; trial < 100; ++trial) {
    SpectralVectorField f(g);
    for (std::size_t i = 0; i < g->size(); ++i) {
      const Wavevector j = g->wavevector(i);
      if (g->norm2(i) == 0.0 || g->norm2(i) > 256.0 || j != canonical(j)) continue;
      if (u(rng) < 0.5) continue;
      f.set_mode(j, {Complex(u(rng), u(rng)), Complex(u(rng), u(rng)), 0.0});
    }
    CHECK(verify_poincare(bf, f, 0.5 * trial / 100.0) <= 1.0 / bf.c_est + 1e-12);
  }
}

TEST_CASE("verify_poincare preconditions") {
  const auto bf = estimate_constant(background_preset("sqrt2"), 1.0, 8);
  const auto g = SpectralGrid::make(2, 32);
  CHECK_THROWS_AS(verify_poincare(bf, SpectralVectorField(g), 0.0), PreconditionError);
  SpectralVectorField mean(g);
  mean.set_mode({0, 0, 0}, {1.0, 0.0, 0.0});
  mean.set_mode({1, 0, 0}, {1.0, 0.0, 0.0});
  CHECK_THROWS_AS(verify_poincare(bf, mean, 0.0), PreconditionError);
  CHECK_THROWS_AS(verify_poincare(bf, single_mode(g, {9, 2, 0}), 0.0), PreconditionError);
}

TEST_CASE("serial and OpenMP lattice scans agree") {
  const std::array<double, 3> b{1.0, std::numbers::sqrt2, std::numbers::sqrt3};
  for (int dim : {2, 3}) {
    const auto s = serial::scan_lattice_minimum(dim, b, 1.5, dim == 2 ? 80 : 14);
    const auto o = omp::scan_lattice_minimum(dim, b, 1.5, dim == 2 ? 80 : 14);
    CHECK(s.value == o.value);
    CHECK(s.j == o.j);
    CHECK(s.resonant == o.resonant);
  }
}
