#include "doctest.h"

#include <cmath>
#include <random>
#include <sstream>
#include <stdexcept>
#include <vector>

#include "polystar/cli.hpp"
#include "polystar/lane_emden.hpp"
#include "polystar/radial.hpp"
#include "oracles.hpp"

using namespace polystar;

namespace {

constexpr double pi = 3.14159265358979323846;

// Uniform ball of value rho0 on [0, R]; optionally embedded in a larger grid
// with a sharp edge (node at R + 1e-10) so the exterior is visible.
radial::RadialDensity uniform_ball(double rho0, double R, std::size_t n_inside,
                                   double r_far = 0.0, std::size_t n_outside = 0) {
  std::vector<double> nodes, values;
  for (std::size_t i = 0; i < n_inside; ++i) {
    nodes.push_back(R * static_cast<double>(i) / static_cast<double>(n_inside - 1));
    values.push_back(rho0);
  }
  nodes.back() = R;
  if (r_far > R && n_outside > 0) {
    nodes.push_back(R + 1e-10);
    values.push_back(0.0);
    for (std::size_t i = 1; i <= n_outside; ++i) {
      nodes.push_back(R + 1e-10 +
                      (r_far - R - 1e-10) * static_cast<double>(i) / static_cast<double>(n_outside));
      values.push_back(0.0);
    }
  }
  return radial::RadialDensity(radial::RadialGrid(std::move(nodes)), std::move(values));
}

radial::RadialDensity exp_profile(double scale, double r_max, std::size_t n) {
  radial::RadialGrid grid = radial::RadialGrid::uniform(r_max, n);
  std::vector<double> values(grid.size());
  for (std::size_t i = 0; i < grid.size(); ++i)
    values[i] = std::exp(-grid.nodes()[i] / scale);
  return radial::RadialDensity(std::move(grid), std::move(values));
}

}  // namespace

TEST_SUITE("radial") {

TEST_CASE("grid validation") {
  CHECK_THROWS_AS((radial::RadialGrid({0.0, 1.0, 2.0})), std::domain_error);  // too few
  std::vector<double> bad_first(20);
  for (std::size_t i = 0; i < bad_first.size(); ++i) bad_first[i] = 0.5 + static_cast<double>(i);
  CHECK_THROWS_AS((radial::RadialGrid(bad_first)), std::domain_error);
  std::vector<double> non_monotone(20, 0.0);
  for (std::size_t i = 0; i < 20; ++i) non_monotone[i] = static_cast<double>(i % 10);
  CHECK_THROWS_AS((radial::RadialGrid(non_monotone)), std::domain_error);
  CHECK_NOTHROW(radial::RadialGrid::uniform(1.0, 16));
  CHECK_THROWS_AS(radial::RadialGrid::uniform(1.0, 8), std::domain_error);
}

TEST_CASE("density validation and interpolation") {
  radial::RadialGrid grid = radial::RadialGrid::uniform(2.0, 32);
  std::vector<double> neg(32, 1.0);
  neg[7] = -1e-9;
  CHECK_THROWS_AS(radial::RadialDensity(grid, neg), std::domain_error);

  radial::RadialDensity rho(grid, std::vector<double>(32, 3.0));
  CHECK(rho(0.5) == doctest::Approx(3.0));
  CHECK(rho(2.0) == doctest::Approx(3.0));
  CHECK(rho(2.5) == 0.0);  // zero beyond the support
}

TEST_CASE("mass of a uniform ball") {
  const double rho0 = 2.5, R = 1.3;
  const auto ball = uniform_ball(rho0, R, 200001);
  CHECK(radial::mass(ball) ==
        doctest::Approx(4.0 / 3.0 * pi * R * R * R * rho0).epsilon(1e-10));

  const radial::RadialDensity zero(radial::RadialGrid::uniform(1.0, 64),
                                   std::vector<double>(64, 0.0));
  CHECK(radial::mass(zero) == 0.0);
}

TEST_CASE("newton potential of a uniform ball") {
  const double rho0 = 0.7, R = 1.0;
  const auto ball = uniform_ball(rho0, R, 20001, 3.0, 4000);
  const double M = radial::mass(ball);
  const auto phi = radial::newton_potential(ball);
  CHECK(phi[0] == doctest::Approx(1.5 * M / R).epsilon(1e-8));
  // Outside the support the potential is M / r.
  const auto& nodes = ball.grid.nodes();
  for (std::size_t i = 0; i < nodes.size(); i += 997) {
    if (nodes[i] < 1.2) continue;
    CHECK(phi[i] == doctest::Approx(M / nodes[i]).epsilon(1e-8));
  }
}

TEST_CASE("newton potential of a narrow bump vs the midpoint oracle") {
  const double width = 0.05;
  radial::RadialGrid grid = radial::RadialGrid::uniform(2.0, 40001);
  std::vector<double> values(grid.size());
  auto bump = [&](double r) { return std::exp(-(r / width) * (r / width)); };
  for (std::size_t i = 0; i < grid.size(); ++i) values[i] = bump(grid.nodes()[i]);
  radial::RadialDensity rho(std::move(grid), std::move(values));
  const double M = radial::mass(rho);
  const auto phi = radial::newton_potential(rho);

  // Far field: phi -> M / r at r = 20 widths.
  const std::size_t i_far = 20000;  // r = 1.0
  CHECK(rho.grid.nodes()[i_far] == doctest::Approx(20.0 * width));
  CHECK(phi[i_far] == doctest::Approx(M / rho.grid.nodes()[i_far]).epsilon(1e-4));

  // Against the independent midpoint-rule oracle at a few radii.
  for (double r : {0.02, 0.10, 0.75}) {
    const double ref = oracles::potential_midpoint(bump, r, 2.0, 2000000);
    const auto& nodes = rho.grid.nodes();
    const auto it = std::lower_bound(nodes.begin(), nodes.end(), r);
    const std::size_t idx = static_cast<std::size_t>(it - nodes.begin());
    CHECK(phi[idx] == doctest::Approx(ref).epsilon(1e-6));
  }
}

TEST_CASE("coulomb direct term") {
  const double rho0 = 3.0 / (4.0 * pi), R = 1.0;  // unit mass
  const auto ball = uniform_ball(rho0, R, 8193);
  const double M = radial::mass(ball);
  CHECK(radial::coulomb_direct(ball, ball) ==
        doctest::Approx(1.2 * M * M / R).epsilon(1e-6));

  // Bilinearity: D(2 rho, rho) = 2 D(rho, rho).
  std::vector<double> doubled(ball.values);
  for (double& v : doubled) v *= 2.0;
  const radial::RadialDensity ball2(ball.grid, doubled);
  CHECK(radial::coulomb_direct(ball2, ball) ==
        doctest::Approx(2.0 * radial::coulomb_direct(ball, ball)).epsilon(1e-12));

  // Symmetry across different grids.
  const auto expo = exp_profile(0.7, 6.0, 2048);
  const double d12 = radial::coulomb_direct(ball, expo);
  const double d21 = radial::coulomb_direct(expo, ball);
  CHECK(d12 == doctest::Approx(d21).epsilon(1e-12));
  CHECK(d12 > 0.0);
}

TEST_CASE("lr_norm") {
  const double rho0 = 1.7, R = 1.1;
  const auto ball = uniform_ball(rho0, R, 20001);
  const double volume = 4.0 / 3.0 * pi * R * R * R;
  for (double p : {1.0, 4.0 / 3.0, 2.0})
    CHECK(radial::lr_norm(ball, p) ==
          doctest::Approx(rho0 * std::pow(volume, 1.0 / p)).epsilon(1e-8));
  CHECK(radial::lr_norm(ball, 1.0) == doctest::Approx(radial::mass(ball)).epsilon(1e-14));
  CHECK_THROWS_AS(radial::lr_norm(ball, 0.9), std::domain_error);
}

TEST_CASE("lr_distance") {
  const auto a = exp_profile(0.5, 6.0, 1024);
  const auto b = exp_profile(1.0, 6.0, 1500);
  const auto c = uniform_ball(0.3, 2.0, 600);
  CHECK(radial::lr_distance(a, a, 4.0 / 3.0) == 0.0);
  CHECK(radial::lr_distance(a, a, 1.0) == 0.0);

  // Triangle inequality on mixed-grid triples.
  for (double p : {1.0, 4.0 / 3.0, 2.0}) {
    const double ab = radial::lr_distance(a, b, p);
    const double bc = radial::lr_distance(b, c, p);
    const double ac = radial::lr_distance(a, c, p);
    CHECK(ac <= ab + bc + 1e-12);
  }

  // L^1 distance between unit-mass balls of radii 1 and 2: the exact value is
  // 7/4, and the module must match a fine-grid direct integration.
  const auto b1 = uniform_ball(3.0 / (4.0 * pi), 1.0, 40001, 2.5, 2000);
  const auto b2 = uniform_ball(3.0 / (32.0 * pi), 2.0, 40001, 2.5, 2000);
  const double d = radial::lr_distance(b1, b2, 1.0);
  double fine = 0.0;  // direct midpoint integration of |rho1 - rho2|
  const std::size_t n = 1000000;
  for (std::size_t i = 0; i < n; ++i) {
    const double r = (static_cast<double>(i) + 0.5) * 2.5 / static_cast<double>(n);
    const double f1 = r <= 1.0 ? 3.0 / (4.0 * pi) : 0.0;
    const double f2 = r <= 2.0 ? 3.0 / (32.0 * pi) : 0.0;
    fine += std::abs(f1 - f2) * r * r;
  }
  fine *= 4.0 * pi * 2.5 / static_cast<double>(n);
  CHECK(d == doctest::Approx(fine).epsilon(1e-6));
  CHECK(d == doctest::Approx(1.75).epsilon(1e-4));
}

TEST_CASE("rescale") {
  const auto rho = exp_profile(0.8, 8.0, 2048);
  const auto same = radial::rescale(rho, 1.0);
  CHECK(same.grid.nodes() == rho.grid.nodes());
  CHECK(same.values == rho.values);

  for (double s : {0.1, 10.0}) {
    const auto scaled = radial::rescale(rho, s);
    CHECK(radial::mass(scaled) == doctest::Approx(radial::mass(rho)).epsilon(1e-12));
    const double n43 = std::pow(radial::lr_norm(rho, 4.0 / 3.0), 4.0 / 3.0);
    const double n43s = std::pow(radial::lr_norm(scaled, 4.0 / 3.0), 4.0 / 3.0);
    CHECK(n43s == doctest::Approx(s * n43).epsilon(1e-10));
  }
  CHECK_THROWS_AS(radial::rescale(rho, 0.0), std::domain_error);
  CHECK_THROWS_AS(radial::rescale(rho, -2.0), std::domain_error);
}

TEST_CASE("hls deficit") {
  const auto& profile = lane_emden::universal_profile();
  const eos::ParticleParams p{2, 1.0};
  const double tc = lane_emden::tau_c(profile, p.q);

  const auto ball = uniform_ball(3.0 / (4.0 * pi), 1.0, 4096);
  const double d = radial::hls_deficit(ball, p, tc);
  CHECK(d > 0.0);

  // Both terms scale linearly under mass-preserving dilation.
  for (double s : {0.25, 4.0})
    CHECK(radial::hls_deficit(radial::rescale(ball, s), p, tc) ==
          doctest::Approx(s * d).epsilon(1e-8));

  const radial::RadialDensity zero(radial::RadialGrid::uniform(1.0, 64),
                                   std::vector<double>(64, 0.0));
  CHECK_THROWS_AS(radial::hls_deficit(zero, p, tc), std::domain_error);
}

TEST_CASE("hls deficit is non-negative on 100 random densities") {
  const auto& profile = lane_emden::universal_profile();
  const eos::ParticleParams p{2, 1.0};
  const double tc = lane_emden::tau_c(profile, p.q);
  std::mt19937_64 rng(42);
  double min_deficit = 1e300;
  for (int i = 0; i < 100; ++i) {
    const auto rho = cli::random_density(rng);
    min_deficit = std::min(min_deficit, radial::hls_deficit(rho, p, tc));
  }
  CHECK(min_deficit >= -1e-6);
}

TEST_CASE("quadrature is second order on generic smooth data") {
  auto value_at = [](std::size_t n) {
    const auto rho = exp_profile(1.0, 3.0, n);
    return radial::mass(rho);
  };
  const double ref = value_at(131072);
  const double e1 = std::abs(value_at(512) - ref);
  const double e2 = std::abs(value_at(1024) - ref);
  CHECK(e1 / e2 == doctest::Approx(4.0).epsilon(0.15));

  auto direct_at = [](std::size_t n) {
    const auto rho = exp_profile(1.0, 3.0, n);
    return radial::coulomb_direct(rho, rho);
  };
  const double dref = direct_at(131072);
  const double de1 = std::abs(direct_at(512) - dref);
  const double de2 = std::abs(direct_at(1024) - dref);
  CHECK(de1 / de2 == doctest::Approx(4.0).epsilon(0.15));
}

TEST_CASE("two-column round trip") {
  const auto rho = exp_profile(0.6, 4.0, 128);
  std::stringstream ss;
  radial::write_two_column(ss, rho);
  const auto back = radial::read_two_column(ss);
  REQUIRE(back.grid.size() == rho.grid.size());
  for (std::size_t i = 0; i < rho.grid.size(); ++i) {
    CHECK(back.grid.nodes()[i] == rho.grid.nodes()[i]);
    CHECK(back.values[i] == rho.values[i]);
  }
}

}  // TEST_SUITE
