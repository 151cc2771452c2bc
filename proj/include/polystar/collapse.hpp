#ifndef POLYSTAR_COLLAPSE_HPP
#define POLYSTAR_COLLAPSE_HPP

#include <string>
#include <utility>
#include <vector>

#include "polystar/chandra.hpp"
#include "polystar/eos.hpp"
#include "polystar/lane_emden.hpp"

namespace polystar::collapse {

/// One point of a near-critical sweep. ratio = E / sqrt(eps) converges to
/// twice the collapse amplitude as eps -> 0; d1 and d43 measure the distance
/// of the rescaled density to the universal profile.
struct CollapseRecord {
  double tau = 0.0;
  double eps = 0.0;             // tau_c - tau
  double E = 0.0;               // minimizer energy
  double ratio = 0.0;           // E / eps^{1/2}
  double kinetic_scaled = 0.0;  // kinetic * eps^{1/2}
  double d1 = 0.0;              // L^1 profile distance
  double d43 = 0.0;             // L^{4/3} profile distance
  bool ok = false;
  std::string error;            // solver diagnostic when !ok
};

struct FitResult {
  double intercept = 0.0;  // estimate of 2 Lambda
  double slope = 0.0;
  double r_squared = 0.0;
};

/// Solves the minimizer at every coupling in tau_list (each in (0, tau_c)),
/// in parallel when jobs > 1. Per-coupling solver failures are recorded and
/// the sweep continues. Records are ordered by eps descending.
std::vector<CollapseRecord> sweep(const std::vector<double>& tau_list,
                                  const eos::ParticleParams& p, unsigned jobs = 1,
                                  double mass_tol = 1e-9);

/// L^1 and L^{4/3} distances between the rescaled minimizer density
/// s^3 rho(s x), s = sqrt(tau_c - tau), and the blow-up target
/// Lambda^3 Q(Lambda x).
std::pair<double, double> profile_distance(const chandra::StellarModel& model,
                                           const lane_emden::LaneEmdenProfile& profile);

/// Least-squares line ratio = intercept + slope * eps^{1/2} through the
/// successful records; the intercept extrapolates the collapse constant.
/// Throws std::domain_error with fewer than 3 successful records.
FitResult fit_two_lambda(const std::vector<CollapseRecord>& records);

}  // namespace polystar::collapse

#endif  // POLYSTAR_COLLAPSE_HPP
