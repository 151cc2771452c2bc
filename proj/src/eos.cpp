#include "polystar/eos.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>

namespace polystar::eos {

namespace {

constexpr double pi = std::numbers::pi;

// Direct evaluation of the closed forms below this value of t = eta/m loses
// all significant digits to cancellation; switch to the Taylor series.
constexpr double series_threshold = 1e-3;

// F(t) = t(2t^2+1)sqrt(t^2+1) - asinh(t)
//      = (8/3)t^3 + (4/5)t^5 - (1/7)t^7 + (1/18)t^9 - (5/176)t^11 + O(t^13)
double f_kernel(double t) {
  const double t2 = t * t;
  if (t < series_threshold) {
    return t2 * t *
           (8.0 / 3.0 +
            t2 * (4.0 / 5.0 +
                  t2 * (-1.0 / 7.0 + t2 * (1.0 / 18.0 + t2 * (-5.0 / 176.0)))));
  }
  return t * (2.0 * t2 + 1.0) * std::sqrt(t2 + 1.0) - std::asinh(t);
}

// G(t) = t sqrt(1+t^2) - asinh(t)
//      = (2/3)t^3 - (1/5)t^5 + (3/28)t^7 - (5/72)t^9 + (35/704)t^11 + O(t^13)
double g_kernel(double t) {
  const double t2 = t * t;
  if (t < series_threshold) {
    return t2 * t *
           (2.0 / 3.0 +
            t2 * (-1.0 / 5.0 +
                  t2 * (3.0 / 28.0 + t2 * (-5.0 / 72.0 + t2 * (35.0 / 704.0)))));
  }
  return t * std::sqrt(t2 + 1.0) - std::asinh(t);
}

void check_density(double rho) {
  if (rho < 0.0 || !std::isfinite(rho))
    throw std::domain_error("eos: density must be finite and non-negative");
}

}  // namespace

void ParticleParams::validate() const {
  if (q < 1) throw std::domain_error("eos: multiplicity q must be >= 1");
  if (m < 0.0 || !std::isfinite(m))
    throw std::domain_error("eos: mass m must be finite and non-negative");
}

double k_cl(int q) {
  if (q < 1) throw std::domain_error("k_cl: multiplicity q must be >= 1");
  return 0.75 * std::cbrt(6.0 * pi * pi / static_cast<double>(q));
}

double eta_of_rho(double rho, const ParticleParams& p) {
  p.validate();
  check_density(rho);
  return std::cbrt(6.0 * pi * pi * rho / static_cast<double>(p.q));
}

double j_m(double rho, const ParticleParams& p) {
  p.validate();
  check_density(rho);
  if (rho == 0.0) return 0.0;
  const double eta = eta_of_rho(rho, p);
  if (p.m == 0.0) {
    // (q/8pi^2) eta^4 == k_cl(q) rho^{4/3}
    return p.q / (8.0 * pi * pi) * eta * eta * eta * eta;
  }
  const double m2 = p.m * p.m;
  return p.q * m2 * m2 / (16.0 * pi * pi) * f_kernel(eta / p.m);
}

double j_m_prime(double rho, const ParticleParams& p) {
  p.validate();
  check_density(rho);
  const double eta = eta_of_rho(rho, p);
  return std::hypot(eta, p.m);
}

double j_tilde_m(double rho, const ParticleParams& p) {
  p.validate();
  check_density(rho);
  if (rho == 0.0) return 0.0;
  const double eta = eta_of_rho(rho, p);
  if (p.m == 0.0) return p.q / (4.0 * pi * pi) * eta * eta;
  return p.q * p.m * p.m / (4.0 * pi * pi) * g_kernel(eta / p.m);
}

}  // namespace polystar::eos
