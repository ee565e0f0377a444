#include <cmath>
#include <numbers>

#include "doctest.h"
#include "oracles.hpp"
#include "test_util.hpp"
#include "torusmhd/errors.hpp"
#include "torusmhd/kernels.hpp"
#include "torusmhd/operators.hpp"
#include "torusmhd/spectral_grid.hpp"
#include "torusmhd/transform.hpp"

using namespace torusmhd;
using testutil::random_field;
using testutil::rel_diff;

TEST_CASE("grid lattice holds N^n wavevectors with zero exactly once") {
  for (int dim : {2, 3}) {
    const auto g = SpectralGrid::make(dim, 8);
    CHECK(g->size() == static_cast<std::size_t>(std::pow(8, dim)));
    int zeros = 0;
    for (std::size_t i = 0; i < g->size(); ++i) {
      if (g->norm2(i) == 0.0) ++zeros;
      CHECK(g->index(g->wavevector(i)) == i);
      const Wavevector j = g->wavevector(i);
      for (int a = 0; a < dim; ++a) CHECK((j[a] >= -4 && j[a] < 4));
    }
    CHECK(zeros == 1);
  }
}

TEST_CASE("grid rejects unsupported shapes") {
  CHECK_THROWS_AS(SpectralGrid(1, 16), DimensionError);
  CHECK_THROWS_AS(SpectralGrid(4, 16), DimensionError);
  CHECK_THROWS_AS(SpectralGrid(2, 6), DimensionError);
  CHECK_THROWS_AS(SpectralGrid(2, 15), DimensionError);
}

TEST_CASE("dealias cutoff keeps 3K < N") {
  CHECK(SpectralGrid(2, 64).dealias_cutoff() == 21);
  CHECK(SpectralGrid(2, 48).dealias_cutoff() == 15);
  CHECK(SpectralGrid(2, 16).dealias_cutoff() == 5);
}

TEST_CASE("forward transform of a constant field is its mean") {
  const auto g = SpectralGrid::make(2, 16);
  PhysicalVectorField p(g, 2);
  for (double& x : p.component(0)) x = 3.5;
  for (double& x : p.component(1)) x = -1.25;
  const auto f = forward_transform(g, p);
  CHECK(f.coeff({0, 0, 0})[0].real() == doctest::Approx(3.5).epsilon(1e-15));
  CHECK(f.coeff({0, 0, 0})[1].real() == doctest::Approx(-1.25).epsilon(1e-15));
  double rest = 0.0;
  for (std::size_t i = 1; i < g->size(); ++i)
    rest = std::max({rest, std::abs(f.at(0, i)), std::abs(f.at(1, i))});
  CHECK(rest < 1e-15);
}

TEST_CASE("forward transform of sin x1") {
  const auto g = SpectralGrid::make(2, 16);
  PhysicalVectorField p(g, 2);
  for (std::size_t i = 0; i < g->size(); ++i) p.component(0)[i] = std::sin(p.coordinate(i, 0));
  const auto f = forward_transform(g, p);
  CHECK(std::abs(f.coeff({1, 0, 0})[0] - Complex(0.0, -0.5)) < 1e-15);
  CHECK(std::abs(f.coeff({-1, 0, 0})[0] - Complex(0.0, 0.5)) < 1e-15);
  double rest = 0.0;
  for (std::size_t i = 0; i < g->size(); ++i) {
    const Wavevector j = g->wavevector(i);
    if (std::abs(j[0]) == 1 && j[1] == 0) continue;
    rest = std::max({rest, std::abs(f.at(0, i)), std::abs(f.at(1, i))});
  }
  CHECK(rest < 1e-15);
}

TEST_CASE("transform round trip is the identity") {
  for (int dim : {2, 3})
    for (int n : {8, 16, 32}) {
      if (dim == 3 && n == 32) continue;
      const auto g = SpectralGrid::make(dim, n);
      PhysicalVectorField p(g, dim);
      std::mt19937_64 rng(n * 10 + dim);
      std::uniform_real_distribution<double> u(-1.0, 1.0);
      for (double& x : p.data()) x = u(rng);
      const auto back = inverse_transform(forward_transform(g, p));
      double err = 0.0, scale = 0.0;
      for (std::size_t i = 0; i < p.data().size(); ++i) {
        err = std::max(err, std::abs(back.data()[i] - p.data()[i]));
        scale = std::max(scale, std::abs(p.data()[i]));
      }
      CHECK(err / scale < 1e-12);
    }
}

TEST_CASE("transform rejects a shape mismatch") {
  const auto g = SpectralGrid::make(2, 16);
  const auto other = SpectralGrid::make(2, 32);
  PhysicalVectorField p(other, 2);
  CHECK_THROWS_AS(forward_transform(g, p), DimensionError);
}

TEST_CASE("Leray projection annihilates gradients") {
  const auto g = SpectralGrid::make(2, 16);
  const auto scalar = random_field(g, 7, 5);
  SpectralVectorField grad(g);
  for (std::size_t i = 0; i < g->size(); ++i)
    for (int k = 0; k < 2; ++k)
      grad.at(k, i) = Complex(0.0, g->wavenumber(i, k)) * scalar.at(0, i);
  const auto p = leray_project(grad);
  double m = 0.0;
  for (const Complex& c : p.data()) m = std::max(m, std::abs(c));
  CHECK(m < 1e-13);
}

TEST_CASE("Leray projection by hand and its fixed points") {
  const auto g = SpectralGrid::make(2, 16);
  SpectralVectorField f(g);
  f.set_mode({1, 0, 0}, {1.0, 1.0, 0.0});
  const auto p = leray_project(f);
  CHECK(std::abs(p.coeff({1, 0, 0})[0]) < 1e-16);
  CHECK(std::abs(p.coeff({1, 0, 0})[1] - Complex(1.0)) < 1e-16);

  const auto sol = testutil::random_solenoidal(g, 3, 5);
  CHECK(rel_diff(leray_project(sol), sol) < 1e-15);
  const auto rnd = random_field(g, 4, 7);
  const auto once = leray_project(rnd);
  CHECK(rel_diff(leray_project(once), once) < 1e-13);
  CHECK(divergence_residual(once) < 1e-13);
  CHECK(mean_residual(once) == 0.0);
}

TEST_CASE("lambda_power scales by |j|^s") {
  const auto g = SpectralGrid::make(2, 16);
  SpectralVectorField f(g);
  f.set_mode({1, 1, 0}, {Complex(0.3, -0.2), Complex(-0.3, 0.2), 0.0});
  const auto l2 = lambda_power(f, 2.0);
  CHECK(std::abs(l2.coeff({1, 1, 0})[0] - 2.0 * f.coeff({1, 1, 0})[0]) < 1e-15);
  CHECK(rel_diff(lambda_power(f, 0.0), f) == 0.0);

  const auto r = random_field(g, 11, 7);
  for (double s : {-2.0, -1.0, 0.5, 1.0, 3.0}) {
    const auto ls = lambda_power(r, s);
    CHECK(mean_residual(ls) == 0.0);
    CHECK(rel_diff(lambda_power(ls, -s), r) < 1e-12);
  }
}

TEST_CASE("lambda_power with negative order needs a zero mean") {
  const auto g = SpectralGrid::make(2, 16);
  SpectralVectorField f(g);
  f.set_mode({0, 0, 0}, {1.0, 0.0, 0.0});
  CHECK_THROWS_AS(lambda_power(f, -1.0), PreconditionError);
  CHECK_NOTHROW(lambda_power(f, 1.0));
}

TEST_CASE("Sobolev norms") {
  const auto g = SpectralGrid::make(2, 16);
  CHECK(sobolev_norm(SpectralVectorField(g), homogeneous(2.0)) == 0.0);

  SpectralVectorField one(g);
  one.set_mode({1, 0, 0}, {0.0, 1.0, 0.0});
  for (double s : {-1.0, 0.0, 1.5, 4.0})
    CHECK(sobolev_norm(one, homogeneous(s)) == doctest::Approx(std::sqrt(2.0)).epsilon(1e-15));

  const auto f = random_field(g, 5, 5);
  // inhomogeneous integer order is the sum of homogeneous orders 0..s
  for (int s : {1, 2, 3}) {
    double sum = 0.0;
    for (int l = 0; l <= s; ++l) sum += std::pow(sobolev_norm(f, homogeneous(l)), 2);
    CHECK(std::pow(sobolev_norm(f, inhomogeneous(s)), 2) == doctest::Approx(sum).epsilon(1e-13));
  }
}

TEST_CASE("H^2 seminorm equals the L2 norm of the Laplacian in physical space") {
  const auto g = SpectralGrid::make(2, 32);
  const auto f = random_field(g, 9, 10);
  // Laplacian by finite products in physical space of the second derivatives.
  SpectralVectorField dxx(g), dyy(g);
  for (std::size_t i = 0; i < g->size(); ++i)
    for (int k = 0; k < 2; ++k) {
      dxx.at(k, i) = -double(g->wavenumber(i, 0) * g->wavenumber(i, 0)) * f.at(k, i);
      dyy.at(k, i) = -double(g->wavenumber(i, 1) * g->wavenumber(i, 1)) * f.at(k, i);
    }
  const auto pxx = inverse_transform(dxx);
  const auto pyy = inverse_transform(dyy);
  double sum = 0.0;
  for (std::size_t i = 0; i < pxx.data().size(); ++i) {
    const double lap = pxx.data()[i] + pyy.data()[i];
    sum += lap * lap;
  }
  const double physical = std::sqrt(sum / static_cast<double>(g->size()));
  CHECK(sobolev_norm(f, homogeneous(2.0)) == doctest::Approx(physical).epsilon(1e-12));
}

TEST_CASE("Parseval for the L2 norm") {
  const auto g = SpectralGrid::make(3, 16);
  const auto f = random_field(g, 13, 5);
  const auto p = inverse_transform(f);
  double sum = 0.0;
  for (double x : p.data()) sum += x * x;
  CHECK(sobolev_norm(f, homogeneous(0.0)) ==
        doctest::Approx(std::sqrt(sum / static_cast<double>(g->size()))).epsilon(1e-12));
}

TEST_CASE("dealias keeps band-limited fields and removes the rest") {
  const auto g = SpectralGrid::make(2, 16);
  const auto low = random_field(g, 1, g->dealias_cutoff());
  CHECK(rel_diff(dealias(low), low) == 0.0);
  SpectralVectorField high(g);
  high.set_mode({7, 2, 0}, {1.0, 2.0, 0.0});
  high.set_mode({1, 6, 0}, {1.0, 0.5, 0.0});
  CHECK(sobolev_norm(dealias(high), homogeneous(0.0)) == 0.0);
}

TEST_CASE("dealiased product equals the truncated direct convolution") {
  const auto g = SpectralGrid::make(2, 16);
  const auto a = dealias(random_field(g, 21, 8));
  const auto b = dealias(random_field(g, 22, 8));
  const auto pa = inverse_transform(a);
  const auto pb = inverse_transform(b);
  PhysicalVectorField prod(g, 2);
  for (std::size_t i = 0; i < g->size(); ++i) {
    prod.component(0)[i] = pa.component(0)[i] * pb.component(0)[i];
    prod.component(1)[i] = pa.component(1)[i] * pb.component(0)[i];
  }
  const auto spectral = dealias(forward_transform(g, prod));

  SpectralVectorField direct(g);
  for (std::size_t p = 0; p < g->size(); ++p)
    for (std::size_t q = 0; q < g->size(); ++q) {
      const Wavevector jp = g->wavevector(p), jq = g->wavevector(q);
      const Wavevector j{jp[0] + jq[0], jp[1] + jq[1], 0};
      if (!g->contains(j) || !g->retained(g->index(j))) continue;
      direct.at(0, g->index(j)) += a.at(0, p) * b.at(0, q);
      direct.at(1, g->index(j)) += a.at(1, p) * b.at(0, q);
    }
  CHECK(rel_diff(spectral, direct) < 1e-13);
}

TEST_CASE("Hermitian residual and its repair") {
  const auto g = SpectralGrid::make(2, 16);
  auto f = random_field(g, 2, 6);
  CHECK(hermitian_residual(f) == 0.0);
  f.at(0, g->index({2, 3, 0})) += Complex(1e-3, 0.0);
  CHECK(hermitian_residual(f) > 0.0);
  enforce_hermitian(f);
  CHECK(hermitian_residual(f) == 0.0);
}

TEST_CASE("directional derivative is i(b.j) times the coefficient") {
  const auto g = SpectralGrid::make(2, 16);
  SpectralVectorField f(g);
  f.set_mode({2, -1, 0}, {Complex(1.0, 0.5), Complex(0.5, 1.0), 0.0});
  const auto d = directional_derivative(f, {1.0, std::numbers::sqrt2, 0.0});
  const double theta = 2.0 - std::numbers::sqrt2;
  CHECK(std::abs(d.coeff({2, -1, 0})[0] - Complex(0.0, theta) * Complex(1.0, 0.5)) < 1e-15);
}

TEST_CASE("serial and OpenMP kernels agree") {
  const auto g = SpectralGrid::make(3, 16);
  const auto f = random_field(g, 31, 7);
  const auto h = random_field(g, 32, 7);
  std::vector<Complex> a(f.data().size()), b(f.data().size());
  kernels::serial::leray_project(*g, f.data(), a);
  kernels::omp::leray_project(*g, f.data(), b);
  CHECK(a == b);
  kernels::serial::norm_power(*g, 1.5, f.component(0), std::span(a).first(g->size()));
  kernels::omp::norm_power(*g, 1.5, f.component(0), std::span(b).first(g->size()));
  CHECK(a == b);

  const auto w = sobolev_weights(*g, inhomogeneous(3));
  const double ws = kernels::serial::weighted_norm2(*g, f.component(1), w);
  const double wo = kernels::omp::weighted_norm2(*g, f.component(1), w);
  CHECK(wo == doctest::Approx(ws).epsilon(1e-14));

  std::vector<kernels::PairMatrix> mats(g->size(), {Complex(0.5, 0.1), Complex(0.0, 0.2),
                                                    Complex(0.0, 0.2), Complex(0.9, -0.1)});
  std::vector<Complex> v1(f.component(0).begin(), f.component(0).end()), b1(h.component(0).begin(),
                                                                             h.component(0).end());
  auto v2 = v1;
  auto b2 = b1;
  kernels::serial::propagate_pairs(*g, mats, v1, b1);
  kernels::omp::propagate_pairs(*g, mats, v2, b2);
  CHECK(v1 == v2);
  CHECK(b1 == b2);
}
