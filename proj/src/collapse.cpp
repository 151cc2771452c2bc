#include "polystar/collapse.hpp"

#include <algorithm>
#include <cmath>
#include <future>
#include <stdexcept>

namespace polystar::collapse {

namespace {

CollapseRecord solve_one(double tau, double tau_crit, const eos::ParticleParams& p,
                         const lane_emden::LaneEmdenProfile& profile, double mass_tol) {
  CollapseRecord rec;
  rec.tau = tau;
  rec.eps = tau_crit - tau;
  try {
    chandra::StellarModel model = chandra::solve_minimizer(tau, p, mass_tol);
    const double sqrt_eps = std::sqrt(rec.eps);
    rec.E = model.energy.total;
    rec.ratio = model.energy.total / sqrt_eps;
    rec.kinetic_scaled = model.energy.kinetic * sqrt_eps;
    const auto [d1, d43] = profile_distance(model, profile);
    rec.d1 = d1;
    rec.d43 = d43;
    rec.ok = true;
  } catch (const std::exception& e) {
    rec.ok = false;
    rec.error = e.what();
  }
  return rec;
}

}  // namespace

std::vector<CollapseRecord> sweep(const std::vector<double>& tau_list,
                                  const eos::ParticleParams& p, unsigned jobs,
                                  double mass_tol) {
  p.validate();
  if (tau_list.empty()) throw std::domain_error("sweep: tau list must be non-empty");
  const auto& profile = lane_emden::universal_profile();
  const double tc = lane_emden::tau_c(profile, p.q);
  for (double tau : tau_list)
    if (!(tau > 0.0) || !(tau < tc))
      throw std::domain_error("sweep: every tau must lie in (0, tau_c)");

  std::vector<CollapseRecord> records(tau_list.size());
  if (jobs <= 1 || tau_list.size() <= 1) {
    for (std::size_t i = 0; i < tau_list.size(); ++i)
      records[i] = solve_one(tau_list[i], tc, p, profile, mass_tol);
  } else {
    for (std::size_t start = 0; start < tau_list.size(); start += jobs) {
      const std::size_t stop = std::min(tau_list.size(), start + jobs);
      std::vector<std::future<CollapseRecord>> futures;
      futures.reserve(stop - start);
      for (std::size_t i = start; i < stop; ++i)
        futures.push_back(std::async(std::launch::async, solve_one, tau_list[i], tc, p,
                                     std::cref(profile), mass_tol));
      for (std::size_t i = start; i < stop; ++i) records[i] = futures[i - start].get();
    }
  }
  // Order is deterministic regardless of execution order.
  std::stable_sort(records.begin(), records.end(),
                   [](const CollapseRecord& a, const CollapseRecord& b) { return a.eps > b.eps; });
  return records;
}

std::pair<double, double> profile_distance(const chandra::StellarModel& model,
                                           const lane_emden::LaneEmdenProfile& profile) {
  const double tc = lane_emden::tau_c(profile, model.params.q);
  const double eps = tc - model.tau;
  if (!(eps > 0.0)) throw std::domain_error("profile_distance: model must be subcritical");
  const double s = std::sqrt(eps);
  const double lambda = lane_emden::lambda_const(profile, model.params);
  const radial::RadialDensity rescaled = radial::rescale(model.rho, s);
  const radial::RadialDensity target = radial::rescale(profile.Q, lambda);
  return {radial::lr_distance(rescaled, target, 1.0),
          radial::lr_distance(rescaled, target, 4.0 / 3.0)};
}

FitResult fit_two_lambda(const std::vector<CollapseRecord>& records) {
  std::vector<double> x, y;
  for (const auto& r : records) {
    if (!r.ok) continue;
    x.push_back(std::sqrt(r.eps));
    y.push_back(r.ratio);
  }
  if (x.size() < 3)
    throw std::domain_error("fit_two_lambda: need at least 3 successful records");

  const double n = static_cast<double>(x.size());
  double sx = 0.0, sy = 0.0, sxx = 0.0, sxy = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    sx += x[i];
    sy += y[i];
    sxx += x[i] * x[i];
    sxy += x[i] * y[i];
  }
  const double det = n * sxx - sx * sx;
  if (det == 0.0) throw std::domain_error("fit_two_lambda: degenerate abscissae");
  FitResult fit;
  fit.slope = (n * sxy - sx * sy) / det;
  fit.intercept = (sy * sxx - sx * sxy) / det;

  double ss_res = 0.0, ss_tot = 0.0;
  const double mean_y = sy / n;
  for (std::size_t i = 0; i < x.size(); ++i) {
    const double pred = fit.intercept + fit.slope * x[i];
    ss_res += (y[i] - pred) * (y[i] - pred);
    ss_tot += (y[i] - mean_y) * (y[i] - mean_y);
  }
  fit.r_squared = ss_tot > 0.0 ? 1.0 - ss_res / ss_tot : 1.0;
  return fit;
}

}  // namespace polystar::collapse
