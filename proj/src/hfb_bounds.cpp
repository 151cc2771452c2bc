#include "polystar/hfb_bounds.hpp"

#include <cmath>
#include <limits>
#include <numbers>
#include <stdexcept>

#include "polystar/chandra.hpp"
#include "polystar/errors.hpp"
#include "polystar/lane_emden.hpp"

namespace polystar::hfb {

namespace {

constexpr double pi = std::numbers::pi;

Sandwich regime(double n_particles, double beta, const eos::ParticleParams& p) {
  p.validate();
  if (p.m == 0.0) throw std::domain_error("hfb: m = 0 is not admitted");
  if (!(n_particles >= 1.0)) throw std::domain_error("hfb: N must be >= 1");
  if (!(beta > 0.0)) throw std::domain_error("hfb: beta must be positive");

  const auto& profile = lane_emden::universal_profile();
  const double tc = lane_emden::tau_c(profile, p.q);

  Sandwich s;
  s.n_particles = n_particles;
  s.beta = beta;
  s.beta_warning = !(beta < 1.0 / 9.0);
  s.tau_n = tc - std::pow(n_particles, -beta);
  if (!(s.tau_n > 0.0))
    throw std::domain_error("hfb: tau_N = tau_c - N^{-beta} is not positive");
  s.kappa = s.tau_n * std::pow(n_particles, -2.0 / 3.0);
  s.eps_ly = 1.7 * std::cbrt(static_cast<double>(p.q)) * std::pow(s.kappa, 2.0 / 3.0) *
             std::cbrt(n_particles);
  s.n_hfb_estimate = std::pow(tc / s.kappa, 1.5);
  s.reference = 2.0 * lane_emden::lambda_const(profile, p) * std::sqrt(tc - s.tau_n);

  const double margin = 1.0 - s.kappa * pi / 4.0 - s.eps_ly;
  if (!(margin > 0.0)) {
    s.valid = false;
    s.violated = "kappa_pi_over_4_plus_eps_ly_not_below_1";
    s.kappa_prime = std::numeric_limits<double>::infinity();
    s.tau_prime = std::numeric_limits<double>::infinity();
    return s;
  }
  s.kappa_prime = s.kappa / margin;
  s.tau_prime = s.kappa_prime * std::pow(n_particles, 2.0 / 3.0);
  if (!(s.tau_prime < tc)) {
    s.valid = false;
    s.violated = "tau_prime_not_below_tau_c";
    return s;
  }
  s.valid = true;
  return s;
}

}  // namespace

double lower_bound(double n_particles, double beta, const eos::ParticleParams& p) {
  Sandwich s = regime(n_particles, beta, p);
  if (!s.valid)
    throw invalid_regime_error("hfb::lower_bound: validity condition violated: " + s.violated,
                               s.violated);
  const chandra::StellarModel model = chandra::solve_minimizer(s.tau_prime, p);
  return model.energy.total - 2.0 * s.eps_ly * p.m;
}

double upper_bound(double n_particles, double beta, const eos::ParticleParams& p) {
  Sandwich s = regime(n_particles, beta, p);
  const chandra::StellarModel model = chandra::solve_minimizer(s.tau_n, p);
  return model.energy.total + s.kappa * pi / 4.0 * model.energy.kinetic;
}

Sandwich sandwich(double n_particles, double beta, const eos::ParticleParams& p) {
  Sandwich s = regime(n_particles, beta, p);
  const chandra::StellarModel at_tau_n = chandra::solve_minimizer(s.tau_n, p);
  s.upper = at_tau_n.energy.total + s.kappa * pi / 4.0 * at_tau_n.energy.kinetic;
  if (s.valid) {
    const chandra::StellarModel at_tau_prime = chandra::solve_minimizer(s.tau_prime, p);
    s.lower = at_tau_prime.energy.total - 2.0 * s.eps_ly * p.m;
  } else {
    s.lower = std::numeric_limits<double>::quiet_NaN();
  }
  return s;
}

}  // namespace polystar::hfb
