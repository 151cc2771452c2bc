#include "polystar/ode.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <utility>

#include "polystar/errors.hpp"

namespace polystar::ode {

namespace {

// Dormand-Prince 5(4) tableau (FSAL: k7 at the step end doubles as the next
// step's k1).
constexpr double c2 = 1.0 / 5.0, c3 = 3.0 / 10.0, c4 = 4.0 / 5.0, c5 = 8.0 / 9.0;
constexpr double a21 = 1.0 / 5.0;
constexpr double a31 = 3.0 / 40.0, a32 = 9.0 / 40.0;
constexpr double a41 = 44.0 / 45.0, a42 = -56.0 / 15.0, a43 = 32.0 / 9.0;
constexpr double a51 = 19372.0 / 6561.0, a52 = -25360.0 / 2187.0, a53 = 64448.0 / 6561.0,
                 a54 = -212.0 / 729.0;
constexpr double a61 = 9017.0 / 3168.0, a62 = -355.0 / 33.0, a63 = 46732.0 / 5247.0,
                 a64 = 49.0 / 176.0, a65 = -5103.0 / 18656.0;
constexpr double b1 = 35.0 / 384.0, b3 = 500.0 / 1113.0, b4 = 125.0 / 192.0,
                 b5 = -2187.0 / 6784.0, b6 = 11.0 / 84.0;
// Difference between the 5th-order solution and the embedded 4th-order one.
constexpr double e1 = 71.0 / 57600.0, e3 = -71.0 / 16695.0, e4 = 71.0 / 1920.0,
                 e5 = -17253.0 / 339200.0, e6 = 22.0 / 525.0, e7 = -1.0 / 40.0;

struct Workspace {
  std::vector<double> k2, k3, k4, k5, k6, ytmp;
  void resize(std::size_t n) {
    k2.resize(n);
    k3.resize(n);
    k4.resize(n);
    k5.resize(n);
    k6.resize(n);
    ytmp.resize(n);
  }
};

// One Dormand-Prince step of size h from (t, y, f = rhs(t,y)). Fills y1 and
// f1 = rhs(t+h, y1) and returns the scaled error norm of the embedded pair.
double dp_step(const Rhs& rhs, double t, const std::vector<double>& y,
               const std::vector<double>& f, double h, const Options& opt, Workspace& w,
               std::vector<double>& y1, std::vector<double>& f1) {
  const std::size_t n = y.size();
  w.resize(n);
  y1.resize(n);
  f1.resize(n);

  for (std::size_t i = 0; i < n; ++i) w.ytmp[i] = y[i] + h * a21 * f[i];
  rhs(t + c2 * h, w.ytmp, w.k2);
  for (std::size_t i = 0; i < n; ++i) w.ytmp[i] = y[i] + h * (a31 * f[i] + a32 * w.k2[i]);
  rhs(t + c3 * h, w.ytmp, w.k3);
  for (std::size_t i = 0; i < n; ++i)
    w.ytmp[i] = y[i] + h * (a41 * f[i] + a42 * w.k2[i] + a43 * w.k3[i]);
  rhs(t + c4 * h, w.ytmp, w.k4);
  for (std::size_t i = 0; i < n; ++i)
    w.ytmp[i] = y[i] + h * (a51 * f[i] + a52 * w.k2[i] + a53 * w.k3[i] + a54 * w.k4[i]);
  rhs(t + c5 * h, w.ytmp, w.k5);
  for (std::size_t i = 0; i < n; ++i)
    w.ytmp[i] = y[i] + h * (a61 * f[i] + a62 * w.k2[i] + a63 * w.k3[i] + a64 * w.k4[i] +
                            a65 * w.k5[i]);
  rhs(t + h, w.ytmp, w.k6);
  for (std::size_t i = 0; i < n; ++i)
    y1[i] = y[i] +
            h * (b1 * f[i] + b3 * w.k3[i] + b4 * w.k4[i] + b5 * w.k5[i] + b6 * w.k6[i]);
  rhs(t + h, y1, f1);

  double err = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    const double ei = h * (e1 * f[i] + e3 * w.k3[i] + e4 * w.k4[i] + e5 * w.k5[i] +
                           e6 * w.k6[i] + e7 * f1[i]);
    const double sk = opt.atol + opt.rtol * std::max(std::abs(y[i]), std::abs(y1[i]));
    err += (ei / sk) * (ei / sk);
  }
  return std::sqrt(err / static_cast<double>(n));
}

}  // namespace

Trajectory::Trajectory(Rhs rhs, std::vector<Knot> knots)
    : rhs_(std::move(rhs)), knots_(std::move(knots)) {}

std::vector<double> Trajectory::at(double t) const {
  if (knots_.empty()) throw std::logic_error("Trajectory::at on empty trajectory");
  if (t <= knots_.front().t) return knots_.front().y;
  if (t >= knots_.back().t) return knots_.back().y;
  auto it = std::upper_bound(knots_.begin(), knots_.end(), t,
                             [](double v, const Knot& k) { return v < k.t; });
  const Knot& k0 = *std::prev(it);
  if (t == k0.t) return k0.y;
  // Truncated re-step: h never exceeds the accepted step, so the local error
  // stays within the run's tolerance.
  Options opt;
  Workspace w;
  std::vector<double> y1, f1;
  dp_step(rhs_, k0.t, k0.y, k0.f, t - k0.t, opt, w, y1, f1);
  return y1;
}

IntegrationResult integrate(const Rhs& rhs, double t0, std::vector<double> y0, double t_max,
                            const Event& event, const Options& opt) {
  if (!(t_max > t0)) throw std::domain_error("ode::integrate: t_max must exceed t0");
  const std::size_t n = y0.size();

  std::vector<Knot> knots;
  knots.reserve(1024);
  std::vector<double> f0(n);
  rhs(t0, y0, f0);
  knots.push_back({t0, y0, f0});

  double g_prev = 0.0;
  if (event) {
    g_prev = event(t0, y0);
    if (!(g_prev > 0.0))
      throw std::domain_error("ode::integrate: event functional must start positive");
  }

  IntegrationResult res;
  Workspace w;
  std::vector<double> y1, f1;
  double t = t0;
  double h = std::min(opt.initial_step, t_max - t0);
  std::vector<double> y = std::move(y0);
  std::vector<double> f = f0;

  for (std::size_t step = 0; step < opt.max_steps; ++step) {
    if (t >= t_max) break;
    h = std::min(h, t_max - t);
    const double err = dp_step(rhs, t, y, f, h, opt, w, y1, f1);
    if (std::isfinite(err) && err <= 1.0) {
      const double t1 = t + h;
      knots.push_back({t1, y1, f1});
      ++res.steps_accepted;

      if (event) {
        const double g1 = event(t1, y1);
        if (g1 <= 0.0) {
          // Bracketed crossing inside (t, t1]; bisect with truncated re-steps
          // from the step start.
          double lo = 0.0, hi = h;  // offsets from t; g(lo) > 0 >= g(hi)
          std::vector<double> ylo = y, yhi = y1;
          for (int it = 0; it < 200 && (hi - lo) > 1e-14 * std::max(1.0, std::abs(t) + hi);
               ++it) {
            const double mid = 0.5 * (lo + hi);
            std::vector<double> ym, fm;
            dp_step(rhs, t, y, f, mid, opt, w, ym, fm);
            if (event(t + mid, ym) > 0.0) {
              lo = mid;
              ylo = std::move(ym);
            } else {
              hi = mid;
              yhi = std::move(ym);
            }
          }
          res.event_found = true;
          res.t_event = t + hi;
          res.y_event = yhi;
          res.t_final = res.t_event;
          res.y_final = std::move(yhi);
          // Truncate the mesh at the event.
          std::vector<double> fe(n);
          rhs(res.t_event, res.y_final, fe);
          knots.back() = {res.t_event, res.y_final, fe};
          res.trajectory = Trajectory(rhs, std::move(knots));
          return res;
        }
        g_prev = g1;
      }

      t = t1;
      y.swap(y1);
      f.swap(f1);
      const double factor =
          (err > 0.0) ? std::clamp(0.9 * std::pow(err, -0.2), 0.2, 5.0) : 5.0;
      h *= factor;
    } else {
      const double factor =
          std::isfinite(err) ? std::max(0.2, 0.9 * std::pow(err, -0.2)) : 0.2;
      h *= factor;
      if (h < opt.min_step)
        throw solver_error("ode::integrate: step size underflow at t = " + std::to_string(t));
    }
  }

  if (t < t_max)
    throw solver_error("ode::integrate: step budget exhausted at t = " + std::to_string(t));

  res.t_final = t;
  res.y_final = std::move(y);
  res.trajectory = Trajectory(rhs, std::move(knots));
  return res;
}

}  // namespace polystar::ode
