#ifndef POLYSTAR_CHANDRA_HPP
#define POLYSTAR_CHANDRA_HPP

#include <cstddef>

#include "polystar/eos.hpp"
#include "polystar/ode.hpp"
#include "polystar/radial.hpp"

namespace polystar::chandra {

struct EnergyBreakdown {
  double kinetic = 0.0;  // 4pi int j_m(rho) r^2 dr
  double direct = 0.0;   // (tau/2) D(rho, rho)
  double total = 0.0;    // kinetic - direct
};

/// One outward integration of the hydrostatic structure equation
///   u'' + (2/r) u' = -4 pi tau rho(u),  rho(u) = (q/6pi^2)(u^2 - m^2)^{3/2}_+
/// from u(0) = u_c to the surface u(R) = m. Mass, kinetic energy and half the
/// direct energy are accumulated as extra components of the same integration.
struct StructureResult {
  bool surface_found = false;
  double tau = 0.0;
  double u_c = 0.0;
  double surface_radius = 0.0;
  double surface_slope = 0.0;   // u'(R)
  double mass = 0.0;            // -R^2 u'(R) / tau
  double kinetic = 0.0;
  double direct_half = 0.0;     // (1/2) D(rho, rho)
  ode::Trajectory trajectory;   // state (u, u', M, K, W, S)
};

/// Solved unit-mass minimizer at coupling tau.
struct StellarModel {
  double tau = 0.0;
  eos::ParticleParams params;
  double u_c = 0.0;             // central value of tau Phi - mu
  double mu = 0.0;              // chemical potential, tau M / R - m
  double surface_radius = 0.0;
  double mass = 0.0;            // quadrature mass of rho (== 1 within tol)
  radial::RadialDensity rho;
  EnergyBreakdown energy;
  double el_residual = 0.0;     // sup |sqrt(eta^2+m^2) - [tau Phi - mu]_+|
};

/// Shoots once from central value u_c > m. m = 0 is admitted here for the
/// massless consistency check (the surface is then the zero of u). Throws
/// std::domain_error for u_c <= m; a star still unbounded at r_max is
/// reported with surface_found = false.
StructureResult integrate_structure(double tau, double u_c, const eos::ParticleParams& p,
                                    double r_max = 50.0);

/// Solves the unit-mass problem at 0 < tau < tau_c(q) by geometric bracket
/// expansion and bisection on u_c until |mass - 1| < mass_tol. Mass is
/// assumed monotone in u_c; a coarse scan verifies this each run and falls
/// back to scan-and-refine when it fails. Near the critical coupling
/// (tau_c - tau < 1e-3 tau_c) the integration runs in rescaled variables to
/// keep the surface radius O(1). Throws std::domain_error for tau >= tau_c
/// ("supercritical coupling") and solver_error when no bracket exists at the
/// working resolution.
StellarModel solve_minimizer(double tau, const eos::ParticleParams& p,
                             double mass_tol = 1e-8, std::size_t grid_nodes = 2048);

/// Energy functional of an arbitrary density at coupling tau, evaluated by
/// radial quadrature.
EnergyBreakdown energy(const radial::RadialDensity& rho, double tau,
                       const eos::ParticleParams& p);

}  // namespace polystar::chandra

#endif  // POLYSTAR_CHANDRA_HPP
