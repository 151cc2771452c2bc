#include "polystar/lane_emden.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <stdexcept>

#include "polystar/errors.hpp"

namespace polystar::lane_emden {

namespace {

constexpr double pi = std::numbers::pi;
constexpr double xi_start = 1e-6;
constexpr double xi_limit = 20.0;

// Series about the regular origin for index 3: theta = 1 - xi^2/6 + xi^4/40
// - 19 xi^6/5040 + ...
double theta_series(double x) {
  const double x2 = x * x;
  return 1.0 + x2 * (-1.0 / 6.0 + x2 * (1.0 / 40.0 - x2 * (19.0 / 5040.0)));
}

double theta_prime_series(double x) {
  const double x2 = x * x;
  return x * (-1.0 / 3.0 + x2 * (1.0 / 10.0 - x2 * (19.0 / 840.0)));
}

// 4 pi int rho^p r^2 dr (trapezoid), for the moment integrals with p < 1
// that lr_norm does not admit.
double power_moment(const radial::RadialDensity& rho, double p) {
  const auto& r = rho.grid.nodes();
  double acc = 0.0;
  auto f = [&](std::size_t i) { return std::pow(rho.values[i], p) * r[i] * r[i]; };
  for (std::size_t i = 0; i + 1 < r.size(); ++i)
    acc += 0.5 * (r[i + 1] - r[i]) * (f(i) + f(i + 1));
  return 4.0 * pi * acc;
}

void rhs(double x, const std::vector<double>& y, std::vector<double>& dy) {
  const double th = std::max(y[0], 0.0);
  dy[0] = y[1];
  dy[1] = -th * th * th - 2.0 * y[1] / x;
}

}  // namespace

double LaneEmdenRaw::theta_at(double x) const {
  if (x < xi_start) return theta_series(x);
  if (x >= xi1) return 0.0;
  return trajectory.at(x)[0];
}

double LaneEmdenRaw::theta_prime_at(double x) const {
  if (x < xi_start) return theta_prime_series(x);
  if (x >= xi1) return trajectory.knots().back().y[1];
  return trajectory.at(x)[1];
}

LaneEmdenRaw solve_lane_emden(double tol) {
  if (!(tol > 0.0)) throw std::domain_error("solve_lane_emden: tol must be positive");

  ode::Options opt;
  opt.rtol = std::min(tol, 1e-12);
  opt.atol = 1e-14;
  opt.initial_step = 1e-4;

  std::vector<double> y0 = {theta_series(xi_start), theta_prime_series(xi_start)};
  auto run = ode::integrate(rhs, xi_start, std::move(y0), xi_limit,
                            [](double, const std::vector<double>& y) { return y[0]; }, opt);
  if (!run.event_found)
    throw solver_error("solve_lane_emden: no zero of theta before xi = 20");

  LaneEmdenRaw raw;
  raw.xi1 = run.t_event;
  raw.mu3 = -run.t_event * run.t_event * run.y_event[1];
  raw.trajectory = std::move(run.trajectory);
  const auto& knots = raw.trajectory.knots();
  raw.xi.reserve(knots.size());
  raw.theta.reserve(knots.size());
  raw.theta_prime.reserve(knots.size());
  for (const auto& k : knots) {
    raw.xi.push_back(k.t);
    raw.theta.push_back(k.y[0]);
    raw.theta_prime.push_back(k.y[1]);
  }
  return raw;
}

LaneEmdenProfile build_profile(const LaneEmdenRaw& raw, std::size_t grid_nodes) {
  if (raw.xi1 <= 0.0 || raw.mu3 <= 0.0 || raw.xi.empty())
    throw std::domain_error("build_profile: raw solution is empty or degenerate");
  for (std::size_t i = 0; i + 1 < raw.theta.size(); ++i)
    if (raw.theta[i + 1] >= raw.theta[i] + 1e-12)
      throw std::domain_error("build_profile: theta is not decreasing");

  const double omega = 2.0 * raw.xi1 / 3.0;
  const double amplitude = omega * omega * omega / (4.0 * pi * raw.mu3);
  const double sigma_f = 3.0 * pi * std::pow(amplitude, 2.0 / 3.0) / (omega * omega);
  const double support = raw.xi1 / omega;  // == 3/2 by the choice of omega

  radial::RadialGrid grid = radial::RadialGrid::uniform(support, grid_nodes);
  std::vector<double> values(grid.size());
  for (std::size_t i = 0; i < grid.size(); ++i) {
    const double th = std::max(raw.theta_at(omega * grid.nodes()[i]), 0.0);
    values[i] = amplitude * th * th * th;
  }
  values.back() = 0.0;

  LaneEmdenProfile profile{radial::RadialDensity(std::move(grid), std::move(values)),
                           amplitude,
                           omega,
                           sigma_f,
                           raw.xi1,
                           raw.mu3,
                           support,
                           0.0,
                           0.0,
                           0.0};
  profile.I_43 = power_moment(profile.Q, 4.0 / 3.0);
  profile.I_23 = power_moment(profile.Q, 2.0 / 3.0);
  profile.DQQ = radial::coulomb_direct(profile.Q, profile.Q);
  return profile;
}

double tau_c(const LaneEmdenProfile& profile, int q) {
  return eos::k_cl(q) / profile.sigma_f;
}

double lambda_const(const LaneEmdenProfile& profile, const eos::ParticleParams& p) {
  p.validate();
  return 0.75 * p.m * std::sqrt(profile.I_23 / eos::k_cl(p.q));
}

const LaneEmdenProfile& universal_profile() {
  static const LaneEmdenProfile profile = build_profile(solve_lane_emden());
  return profile;
}

}  // namespace polystar::lane_emden
