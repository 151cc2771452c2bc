#ifndef POLYSTAR_HFB_BOUNDS_HPP
#define POLYSTAR_HFB_BOUNDS_HPP

#include <string>

#include "polystar/eos.hpp"

namespace polystar::hfb {

/// Two-sided bracket on the quasi-free ground-state energy per particle at
/// coupling tau_N = tau_c - N^{-beta}, together with every intermediate
/// parameter. The lower bound is conditional: it requires
/// 1 - kappa pi/4 - eps_ly > 0 and tau_prime < tau_c; outside that regime the
/// sandwich is marked invalid and `violated` names the failed condition.
struct Sandwich {
  double n_particles = 0.0;
  double beta = 0.0;
  double tau_n = 0.0;
  double kappa = 0.0;        // tau_N N^{-2/3}
  double eps_ly = 0.0;       // 1.7 q^{1/3} kappa^{2/3} N^{1/3}
  double kappa_prime = 0.0;  // kappa (1 - kappa pi/4 - eps_ly)^{-1}
  double tau_prime = 0.0;    // kappa_prime N^{2/3}
  double lower = 0.0;        // E_Ch(tau_prime) - 2 eps_ly m   (valid only)
  double upper = 0.0;        // E_Ch(tau_N) + (kappa pi/4) int j_m(rho_Ch)
  double reference = 0.0;    // 2 Lambda (tau_c - tau_N)^{1/2}
  bool valid = false;        // lower-bound validity conditions hold
  bool beta_warning = false; // beta outside (0, 1/9)
  std::string violated;      // failed condition name when !valid
  double n_hfb_estimate = 0.0;  // (tau_c/kappa)^{3/2}, reported as metadata
};

/// Conditional lower bound on E(N)/N. Throws invalid_regime_error naming the
/// violated condition when N is too small for the given beta.
double lower_bound(double n_particles, double beta, const eos::ParticleParams& p);

/// Trial-state upper bound on E(N)/N; always available for tau_N in (0, tau_c).
double upper_bound(double n_particles, double beta, const eos::ParticleParams& p);

/// Both bounds plus the collapse-law reference. Marks the regime instead of
/// throwing: when invalid, `lower` is NaN and `violated` is set.
Sandwich sandwich(double n_particles, double beta, const eos::ParticleParams& p);

}  // namespace polystar::hfb

#endif  // POLYSTAR_HFB_BOUNDS_HPP
