#ifndef POLYSTAR_LANE_EMDEN_HPP
#define POLYSTAR_LANE_EMDEN_HPP

#include <cstddef>
#include <vector>

#include "polystar/eos.hpp"
#include "polystar/ode.hpp"
#include "polystar/radial.hpp"

namespace polystar::lane_emden {

/// Dimensionless solution of theta'' + (2/xi) theta' + theta^3 = 0 with
/// theta(0) = 1, theta'(0) = 0, integrated to its first zero xi1.
struct LaneEmdenRaw {
  std::vector<double> xi;           // accepted mesh
  std::vector<double> theta;
  std::vector<double> theta_prime;
  double xi1 = 0.0;                 // first zero of theta
  double mu3 = 0.0;                 // -xi1^2 theta'(xi1)
  ode::Trajectory trajectory;

  /// Dense evaluation; series seed below the start point, 0 beyond xi1.
  double theta_at(double x) const;
  double theta_prime_at(double x) const;
};

/// Normalized blow-up profile Q(r) = A theta(omega r)^3 on [0, 3/2] together
/// with the universal constants it determines. The three normalizations
/// (unit mass, sigma_f * I_43 = 1, D(Q,Q)/2 = 1) all follow from the choice
/// omega = 2 xi1 / 3, A = omega^3 / (4 pi mu3), sigma_f = 3 pi A^{2/3}/omega^2.
struct LaneEmdenProfile {
  radial::RadialDensity Q;
  double amplitude = 0.0;      // A = Q(0)
  double omega = 0.0;          // inverse length scale
  double sigma_f = 0.0;
  double xi1 = 0.0;
  double mu3 = 0.0;
  double support_radius = 0.0; // = 3/2
  double I_43 = 0.0;           // int Q^{4/3}
  double I_23 = 0.0;           // int Q^{2/3}
  double DQQ = 0.0;            // D(Q, Q)
};

/// Integrates the Lane-Emden equation of order 3 to its first zero; tol
/// bounds the event-location error in xi. Throws solver_error if no zero is
/// bracketed before xi = 20 (cannot happen for this index).
LaneEmdenRaw solve_lane_emden(double tol = 1e-10);

/// Builds the normalized profile and its constants from a raw solution,
/// resampled on a uniform grid of grid_nodes points over [0, 3/2]. Throws
/// std::domain_error if the raw data is inconsistent (theta not decreasing).
LaneEmdenProfile build_profile(const LaneEmdenRaw& raw, std::size_t grid_nodes = 2048);

/// Critical coupling tau_c(q) = k_cl(q) / sigma_f.
double tau_c(const LaneEmdenProfile& profile, int q);

/// Collapse amplitude Lambda = (3/4) m sqrt(I_23 / k_cl(q)).
double lambda_const(const LaneEmdenProfile& profile, const eos::ParticleParams& p);

/// Shared profile at default resolution, solved once per process.
const LaneEmdenProfile& universal_profile();

}  // namespace polystar::lane_emden

#endif  // POLYSTAR_LANE_EMDEN_HPP
