#include "doctest.h"

#include <cmath>
#include <stdexcept>
#include <vector>

#include "polystar/collapse.hpp"
#include "polystar/lane_emden.hpp"
#include "polystar/radial.hpp"

using namespace polystar;

namespace {

const eos::ParticleParams kP{2, 1.0};

double tau_crit() { return lane_emden::tau_c(lane_emden::universal_profile(), kP.q); }

}  // namespace

TEST_SUITE("collapse") {

TEST_CASE("fit recovers exact synthetic data") {
  std::vector<collapse::CollapseRecord> records;
  const double c0 = 1.17, c1 = -0.31;
  for (double eps : {0.04, 0.01, 0.0025, 0.0004}) {
    collapse::CollapseRecord r;
    r.eps = eps;
    r.ratio = c0 + c1 * std::sqrt(eps);
    r.ok = true;
    records.push_back(r);
  }
  const auto fit = collapse::fit_two_lambda(records);
  CHECK(fit.intercept == doctest::Approx(c0).epsilon(1e-10));
  CHECK(fit.slope == doctest::Approx(c1).epsilon(1e-10));
  CHECK(fit.r_squared == doctest::Approx(1.0).epsilon(1e-12));
}

TEST_CASE("fit needs at least three successful records") {
  std::vector<collapse::CollapseRecord> records(5);
  records[0].ok = records[1].ok = true;  // only two ok
  for (auto& r : records) r.eps = 0.01;
  CHECK_THROWS_AS(collapse::fit_two_lambda(records), std::domain_error);
}

TEST_CASE("profile distance vanishes on the exact target") {
  const auto& prof = lane_emden::universal_profile();
  const double tc = tau_crit();
  const double tau = 0.99 * tc;
  const double s = std::sqrt(tc - tau);
  const double lambda = lane_emden::lambda_const(prof, kP);

  // Model density whose s-rescaling is exactly Lambda^3 Q(Lambda x).
  const auto target = radial::rescale(prof.Q, lambda);
  chandra::StellarModel model{tau,
                              kP,
                              0.0,
                              0.0,
                              0.0,
                              1.0,
                              radial::rescale(target, 1.0 / s),
                              chandra::EnergyBreakdown{},
                              0.0};
  const auto [d1, d43] = collapse::profile_distance(model, prof);
  CHECK(d1 < 1e-10);
  CHECK(d43 < 1e-10);
}

TEST_CASE("sweep validation") {
  CHECK_THROWS_AS(collapse::sweep({}, kP), std::domain_error);
  CHECK_THROWS_AS(collapse::sweep({tau_crit() * 1.01}, kP), std::domain_error);
  CHECK_THROWS_AS(collapse::sweep({-0.5}, kP), std::domain_error);
}

TEST_CASE("short sweep toward the critical coupling") {
  const double tc = tau_crit();
  const auto& prof = lane_emden::universal_profile();
  const double two_lambda = 2.0 * lane_emden::lambda_const(prof, kP);

  std::vector<double> taus;
  for (double f : {1e-1, 1e-2, 1e-3}) taus.push_back(tc - f * tc);
  const auto records = collapse::sweep(taus, kP, 2);
  REQUIRE(records.size() == 3);
  for (const auto& r : records) {
    REQUIRE(r.ok);
    CHECK(r.eps > 0.0);
    CHECK(r.ratio > 0.5 * two_lambda);
    CHECK(r.ratio < 2.0 * two_lambda);
    CHECK(r.kinetic_scaled < 5.0);
    CHECK(r.d1 >= 0.0);
    CHECK(r.d43 >= 0.0);
  }
  // Ordered by eps descending; deviation from 2 Lambda and both profile
  // distances shrink along the sweep.
  for (std::size_t i = 0; i + 1 < records.size(); ++i) {
    CHECK(records[i].eps > records[i + 1].eps);
    CHECK(std::abs(records[i + 1].ratio - two_lambda) <
          std::abs(records[i].ratio - two_lambda) + 1e-3);
    CHECK(records[i + 1].d1 < records[i].d1 + 1e-3);
    CHECK(records[i + 1].d43 < records[i].d43 + 1e-3);
  }
}

TEST_CASE("rescaled profiles conserve mass") {
  const double tc = tau_crit();
  const double tau = 0.99 * tc;
  const auto model = chandra::solve_minimizer(tau, kP, 1e-9);
  CHECK(std::abs(model.mass - 1.0) <= 1e-8);
  const auto rescaled = radial::rescale(model.rho, std::sqrt(tc - tau));
  CHECK(radial::mass(rescaled) == doctest::Approx(model.mass).epsilon(1e-12));
}

TEST_CASE("per-coupling failures are recorded, not fatal") {
  // tau far below any solvable configuration at the default r_max: the star
  // is too diffuse, the solver errors out, and the sweep keeps going.
  const double tc = tau_crit();
  const auto records = collapse::sweep({1e-6, 0.5 * tc}, kP);
  REQUIRE(records.size() == 2);
  CHECK_FALSE(records[0].ok);  // eps largest -> the failing tau sorts first
  CHECK(!records[0].error.empty());
  CHECK(records[1].ok);
}

}  // TEST_SUITE
