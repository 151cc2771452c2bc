#ifndef POLYSTAR_ODE_HPP
#define POLYSTAR_ODE_HPP

#include <cstddef>
#include <functional>
#include <vector>

namespace polystar::ode {

/// Right-hand side of y' = f(t, y); writes the derivative into dydt, which is
/// pre-sized to y.size().
using Rhs =
    std::function<void(double t, const std::vector<double>& y, std::vector<double>& dydt)>;

/// Scalar event functional g(t, y). Integration stops at the first downward
/// zero crossing of g along the solution.
using Event = std::function<double(double t, const std::vector<double>& y)>;

struct Options {
  double rtol = 1e-12;
  double atol = 1e-14;
  double initial_step = 1e-4;
  double min_step = 1e-15;
  std::size_t max_steps = 2'000'000;
};

/// Accepted integration knot: state and derivative at one mesh time.
struct Knot {
  double t;
  std::vector<double> y;
  std::vector<double> f;
};

/// Accepted mesh of an adaptive Dormand-Prince 5(4) run. Dense evaluation at
/// an interior time re-takes a single truncated step from the preceding knot,
/// so interpolation accuracy matches integration accuracy.
class Trajectory {
 public:
  Trajectory() = default;
  Trajectory(Rhs rhs, std::vector<Knot> knots);

  const std::vector<Knot>& knots() const { return knots_; }
  bool empty() const { return knots_.empty(); }
  double front_time() const { return knots_.front().t; }
  double back_time() const { return knots_.back().t; }

  /// State at time t, clamped to [front_time, back_time].
  std::vector<double> at(double t) const;

 private:
  Rhs rhs_;
  std::vector<Knot> knots_;
};

struct IntegrationResult {
  Trajectory trajectory;
  bool event_found = false;
  double t_event = 0.0;
  std::vector<double> y_event;
  double t_final = 0.0;          // last accepted time (== t_event when found)
  std::vector<double> y_final;
  std::size_t steps_accepted = 0;
};

/// Integrates y' = rhs(t, y) from (t0, y0) until t_max or until the event
/// crosses zero from above, whichever comes first. The event location is
/// refined by bisection with truncated re-steps to ~1e-13 relative in t.
/// Requires event(t0, y0) > 0 when an event is supplied. Throws solver_error
/// if the step size underflows or the step budget is exhausted.
IntegrationResult integrate(const Rhs& rhs, double t0, std::vector<double> y0, double t_max,
                            const Event& event = nullptr, const Options& opt = {});

}  // namespace polystar::ode

#endif  // POLYSTAR_ODE_HPP
