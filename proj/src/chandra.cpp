#include "polystar/chandra.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "polystar/errors.hpp"
#include "polystar/lane_emden.hpp"

namespace polystar::chandra {

namespace {

constexpr double pi = std::numbers::pi;
constexpr double r_seed = 1e-9;

// State layout: y = (u, u', M, K, W, S) with
//   M(r) = 4pi int rho s^2 ds        enclosed mass
//   K(r) = 4pi int j_m(rho) s^2 ds   kinetic energy
//   W(r) = int M M' / s ds           half the direct energy at the surface
//   S(r) = 4pi int rho s ds          outer-potential accumulator
ode::Rhs make_rhs(double tau, const eos::ParticleParams& p) {
  return [tau, p](double r, const std::vector<double>& y, std::vector<double>& dy) {
    const double u = y[0];
    const double d = u * u - p.m * p.m;
    double rho = 0.0, jm = 0.0;
    if (d > 0.0) {
      const double eta = std::sqrt(d);
      rho = p.q / (6.0 * pi * pi) * eta * eta * eta;
      jm = eos::j_m(rho, p);
    }
    dy[0] = y[1];
    dy[1] = -2.0 * y[1] / r - 4.0 * pi * tau * rho;
    dy[2] = 4.0 * pi * rho * r * r;
    dy[3] = 4.0 * pi * jm * r * r;
    dy[4] = 4.0 * pi * y[2] * rho * r;
    dy[5] = 4.0 * pi * rho * r;
  };
}

struct Shot {
  StructureResult structure;
  double total_outer = 0.0;  // S at the surface
};

Shot shoot(double tau, double u_c, const eos::ParticleParams& p, double r_max) {
  const double g0 = [&] {
    const double d = u_c * u_c - p.m * p.m;
    return d > 0.0 ? p.q / (6.0 * pi * pi) * std::pow(d, 1.5) : 0.0;
  }();
  // Taylor seed at r_seed removes the 2u'/r singularity at the origin.
  std::vector<double> y0 = {u_c - (2.0 * pi / 3.0) * tau * g0 * r_seed * r_seed,
                            -(4.0 * pi / 3.0) * tau * g0 * r_seed,
                            0.0,
                            0.0,
                            0.0,
                            0.0};
  ode::Options opt;
  opt.rtol = 1e-12;
  opt.atol = 1e-14;
  opt.initial_step = 1e-6;

  const double m_surface = p.m;
  auto run = ode::integrate(
      make_rhs(tau, p), r_seed, std::move(y0), r_max,
      [m_surface](double, const std::vector<double>& y) { return y[0] - m_surface; }, opt);

  Shot shot;
  shot.structure.tau = tau;
  shot.structure.u_c = u_c;
  if (!run.event_found) {
    shot.structure.surface_found = false;
    shot.structure.trajectory = std::move(run.trajectory);
    return shot;
  }
  const double R = run.t_event;
  const auto& ye = run.y_event;
  shot.structure.surface_found = true;
  shot.structure.surface_radius = R;
  shot.structure.surface_slope = ye[1];
  shot.structure.mass = -R * R * ye[1] / tau;
  shot.structure.kinetic = ye[3];
  shot.structure.direct_half = ye[4];
  shot.structure.trajectory = std::move(run.trajectory);
  shot.total_outer = ye[5];
  return shot;
}

// Mass of the star shot at u_c; runaway integration reads as "too diffuse",
// i.e. mass below target.
double mass_of(double tau, double u_c, const eos::ParticleParams& p, double r_max,
               bool* runaway = nullptr) {
  Shot s = shoot(tau, u_c, p, r_max);
  if (runaway) *runaway = !s.structure.surface_found;
  return s.structure.surface_found ? s.structure.mass : 0.0;
}

// Euler-Lagrange residual sup_{rho>0} |sqrt(eta^2+m^2) - [tau Phi - mu]_+| on
// a dense sample of the solved star, with Phi recomputed from rho by
// quadrature.
double el_residual_of(const Shot& shot, double tau, const eos::ParticleParams& p, double mu,
                      std::size_t n_nodes) {
  const double R = shot.structure.surface_radius;
  radial::RadialGrid grid = radial::RadialGrid::uniform(R, n_nodes);
  std::vector<double> rho(n_nodes), u_val(n_nodes);
  for (std::size_t i = 0; i < n_nodes; ++i) {
    const double u = shot.structure.trajectory.at(grid.nodes()[i])[0];
    const double d = u * u - p.m * p.m;
    u_val[i] = u;
    rho[i] = d > 0.0 ? p.q / (6.0 * pi * pi) * std::pow(d, 1.5) : 0.0;
  }
  radial::RadialDensity density(std::move(grid), std::move(rho));
  const std::vector<double> phi = radial::newton_potential(density);
  double sup = 0.0;
  for (std::size_t i = 0; i < n_nodes; ++i) {
    if (!(density.values[i] > 0.0)) continue;
    const double lhs = std::hypot(eos::eta_of_rho(density.values[i], p), p.m);
    const double rhs = std::max(tau * phi[i] - mu, 0.0);
    sup = std::max(sup, std::abs(lhs - rhs));
  }
  return sup;
}

}  // namespace

StructureResult integrate_structure(double tau, double u_c, const eos::ParticleParams& p,
                                    double r_max) {
  p.validate();
  if (!(tau > 0.0)) throw std::domain_error("integrate_structure: tau must be positive");
  if (!(u_c > p.m)) throw std::domain_error("integrate_structure: u_c must exceed m");
  if (!(r_max > 0.0)) throw std::domain_error("integrate_structure: r_max must be positive");
  return shoot(tau, u_c, p, r_max).structure;
}

StellarModel solve_minimizer(double tau, const eos::ParticleParams& p, double mass_tol,
                             std::size_t grid_nodes) {
  p.validate();
  if (p.m == 0.0) throw std::domain_error("solve_minimizer: m = 0 is not admitted");
  if (!(mass_tol > 0.0)) throw std::domain_error("solve_minimizer: mass_tol must be positive");
  const double tc = lane_emden::tau_c(lane_emden::universal_profile(), p.q);
  if (!(tau > 0.0)) throw std::domain_error("solve_minimizer: tau must be positive");
  if (tau >= tc) throw std::domain_error("supercritical coupling: tau >= tau_c");

  // Near the critical coupling the star collapses like sqrt(tau_c - tau);
  // solving with the rescaled mass s*m keeps the surface radius O(1) and maps
  // back exactly (energies scale by 1/s, radii by s).
  const double eps = tc - tau;
  const bool rescaled = eps < 1e-3 * tc;
  const double s = rescaled ? std::sqrt(eps) : 1.0;
  const eos::ParticleParams ps{p.q, s * p.m};
  const double r_max = 50.0;

  // Geometric bracket expansion: runaway integrations count as underweight.
  double hi = 2.0 * ps.m;
  double lo = ps.m;
  bool saw_surface = false;
  bool bracketed = false;
  for (int i = 0; i < 90; ++i) {
    bool runaway = false;
    const double mass_hi = mass_of(tau, hi, ps, r_max, &runaway);
    saw_surface = saw_surface || !runaway;
    if (mass_hi > 1.0) {
      bracketed = true;
      break;
    }
    lo = hi;
    hi *= 2.0;
  }
  if (!bracketed) {
    throw solver_error(saw_surface
                           ? "solve_minimizer: mass ceiling below 1 at this resolution "
                             "(tau too close to tau_c for the r-grid)"
                           : "solve_minimizer: no surface before r_max (star too diffuse)");
  }

  // Coarse monotonicity scan over the bracket; bisection assumes mass grows
  // with u_c.
  {
    bool monotone = true;
    std::vector<std::pair<double, double>> scan;
    const int n_scan = 8;
    for (int i = 0; i <= n_scan; ++i) {
      const double f = static_cast<double>(i) / n_scan;
      const double uc = lo * std::pow(hi / lo, f);
      if (!(uc > ps.m)) continue;
      scan.emplace_back(uc, mass_of(tau, uc, ps, r_max));
    }
    for (std::size_t i = 0; i + 1 < scan.size(); ++i)
      if (scan[i + 1].second < scan[i].second - 1e-6) monotone = false;
    if (!monotone) {
      // Fall back to the first crossing interval found by the scan.
      for (std::size_t i = 0; i + 1 < scan.size(); ++i)
        if (scan[i].second < 1.0 && scan[i + 1].second >= 1.0) {
          lo = scan[i].first;
          hi = scan[i + 1].first;
          break;
        }
    }
  }

  Shot best;
  double best_gap = std::numeric_limits<double>::infinity();
  double mid = 0.5 * (lo + hi);
  for (int i = 0; i < 300; ++i) {
    mid = 0.5 * (lo + hi);
    Shot shot = shoot(tau, mid, ps, r_max);
    const double mass_mid = shot.structure.surface_found ? shot.structure.mass : 0.0;
    const double gap = std::abs(mass_mid - 1.0);
    if (shot.structure.surface_found && gap < best_gap) {
      best = std::move(shot);
      best_gap = gap;
    }
    if (gap < mass_tol && best_gap < mass_tol) break;
    if (mass_mid > 1.0)
      hi = mid;
    else
      lo = mid;
    if (hi - lo <= 4.0 * std::numeric_limits<double>::epsilon() * hi) break;
  }
  if (!(best_gap < std::max(mass_tol, 1e-7)))
    throw solver_error("solve_minimizer: bisection stalled, |mass - 1| = " +
                       std::to_string(best_gap));

  // Map the solution back to physical units (identity when not rescaled).
  const double R = s * best.structure.surface_radius;
  const double mass_solved = best.structure.mass;
  const double mu = tau * mass_solved / R - p.m;

  radial::RadialGrid grid = radial::RadialGrid::uniform(R, grid_nodes);
  std::vector<double> rho(grid.size());
  const double s3 = s * s * s;
  for (std::size_t i = 0; i < grid.size(); ++i) {
    const double u = best.structure.trajectory.at(grid.nodes()[i] / s)[0];
    const double d = u * u - ps.m * ps.m;
    rho[i] = d > 0.0 ? ps.q / (6.0 * pi * pi) * std::pow(d, 1.5) / s3 : 0.0;
  }
  rho.back() = 0.0;

  StellarModel model{tau,
                     p,
                     best.structure.u_c / s,
                     mu,
                     R,
                     0.0,
                     radial::RadialDensity(std::move(grid), std::move(rho)),
                     EnergyBreakdown{},
                     0.0};
  model.mass = radial::mass(model.rho);
  model.energy.kinetic = best.structure.kinetic / s;
  model.energy.direct = tau * best.structure.direct_half / s;
  model.energy.total = model.energy.kinetic - model.energy.direct;

  // Residual is evaluated in solver units (where quadrature is best
  // conditioned), then converted: both sides of the equation scale as 1/s.
  const double mu_solver = tau * mass_solved / best.structure.surface_radius - ps.m;
  const std::size_t n_el = std::max<std::size_t>(grid_nodes, 16384);
  model.el_residual = el_residual_of(best, tau, ps, mu_solver, n_el) / s;
  return model;
}

EnergyBreakdown energy(const radial::RadialDensity& rho, double tau,
                       const eos::ParticleParams& p) {
  p.validate();
  const auto& r = rho.grid.nodes();
  double acc = 0.0;
  std::vector<double> f(r.size());
  for (std::size_t i = 0; i < r.size(); ++i)
    f[i] = eos::j_m(rho.values[i], p) * r[i] * r[i];
  for (std::size_t i = 0; i + 1 < r.size(); ++i)
    acc += 0.5 * (r[i + 1] - r[i]) * (f[i] + f[i + 1]);
  EnergyBreakdown e;
  e.kinetic = 4.0 * pi * acc;
  e.direct = 0.5 * tau * radial::coulomb_direct(rho, rho);
  e.total = e.kinetic - e.direct;
  return e;
}

}  // namespace polystar::chandra
