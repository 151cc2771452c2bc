#include "polystar/radial.hpp"

#include <algorithm>
#include <cmath>
#include <istream>
#include <numbers>
#include <ostream>
#include <stdexcept>
#include <utility>

namespace polystar::radial {

namespace {

constexpr double pi = std::numbers::pi;

// Composite trapezoid of node samples f over the grid nodes.
double trapezoid(const std::vector<double>& r, const std::vector<double>& f) {
  double acc = 0.0;
  for (std::size_t i = 0; i + 1 < r.size(); ++i)
    acc += 0.5 * (r[i + 1] - r[i]) * (f[i] + f[i + 1]);
  return acc;
}

// Sorted union of two node sets (exact duplicates collapsed).
std::vector<double> union_nodes(const std::vector<double>& a, const std::vector<double>& b) {
  std::vector<double> u;
  u.reserve(a.size() + b.size());
  std::merge(a.begin(), a.end(), b.begin(), b.end(), std::back_inserter(u));
  u.erase(std::unique(u.begin(), u.end()), u.end());
  return u;
}

std::vector<double> sample_on(const RadialDensity& rho, const std::vector<double>& nodes) {
  std::vector<double> v(nodes.size());
  for (std::size_t i = 0; i < nodes.size(); ++i) v[i] = rho(nodes[i]);
  return v;
}

// Potential at each node of (nodes, values) via exact cumulative trapezoids.
std::vector<double> potential_impl(const std::vector<double>& r,
                                   const std::vector<double>& rho) {
  const std::size_t n = r.size();
  std::vector<double> inner(n, 0.0);  // int_0^{r_i} s^2 rho ds
  for (std::size_t i = 0; i + 1 < n; ++i)
    inner[i + 1] =
        inner[i] + 0.5 * (r[i + 1] - r[i]) * (rho[i] * r[i] * r[i] + rho[i + 1] * r[i + 1] * r[i + 1]);
  std::vector<double> outer(n, 0.0);  // int_{r_i}^{r_max} s rho ds
  for (std::size_t i = n - 1; i-- > 0;)
    outer[i] = outer[i + 1] + 0.5 * (r[i + 1] - r[i]) * (rho[i] * r[i] + rho[i + 1] * r[i + 1]);
  std::vector<double> phi(n);
  phi[0] = 4.0 * pi * outer[0];
  for (std::size_t i = 1; i < n; ++i) phi[i] = 4.0 * pi * (inner[i] / r[i] + outer[i]);
  return phi;
}

void check_exponent(double r_exp) {
  if (!(r_exp >= 1.0)) throw std::domain_error("radial: L^r exponent must be >= 1");
}

}  // namespace

RadialGrid::RadialGrid(std::vector<double> nodes) : nodes_(std::move(nodes)) {
  if (nodes_.size() < 16) throw std::domain_error("RadialGrid: need at least 16 nodes");
  if (nodes_.front() != 0.0) throw std::domain_error("RadialGrid: first node must be 0");
  for (std::size_t i = 0; i + 1 < nodes_.size(); ++i)
    if (!(nodes_[i] < nodes_[i + 1]) || !std::isfinite(nodes_[i + 1]))
      throw std::domain_error("RadialGrid: nodes must be finite and strictly increasing");
}

RadialGrid RadialGrid::uniform(double r_max, std::size_t n) {
  if (!(r_max > 0.0)) throw std::domain_error("RadialGrid::uniform: r_max must be > 0");
  if (n < 16) throw std::domain_error("RadialGrid::uniform: need at least 16 nodes");
  std::vector<double> nodes(n);
  for (std::size_t i = 0; i < n; ++i)
    nodes[i] = r_max * static_cast<double>(i) / static_cast<double>(n - 1);
  nodes.back() = r_max;
  return RadialGrid(std::move(nodes));
}

RadialDensity::RadialDensity(RadialGrid g, std::vector<double> v)
    : grid(std::move(g)), values(std::move(v)) {
  if (values.size() != grid.size())
    throw std::domain_error("RadialDensity: values/grid size mismatch");
  for (double x : values)
    if (x < 0.0 || !std::isfinite(x))
      throw std::domain_error("RadialDensity: values must be finite and non-negative");
}

double RadialDensity::operator()(double r) const {
  const auto& nodes = grid.nodes();
  if (r < 0.0) throw std::domain_error("RadialDensity: negative radius");
  if (r >= nodes.back()) return r == nodes.back() ? values.back() : 0.0;
  auto it = std::upper_bound(nodes.begin(), nodes.end(), r);
  const std::size_t j = static_cast<std::size_t>(it - nodes.begin());
  if (j == 0) return values.front();
  const double w = (r - nodes[j - 1]) / (nodes[j] - nodes[j - 1]);
  return values[j - 1] + w * (values[j] - values[j - 1]);
}

double mass(const RadialDensity& rho) {
  const auto& r = rho.grid.nodes();
  std::vector<double> f(r.size());
  for (std::size_t i = 0; i < r.size(); ++i) f[i] = rho.values[i] * r[i] * r[i];
  return 4.0 * pi * trapezoid(r, f);
}

std::vector<double> newton_potential(const RadialDensity& rho) {
  return potential_impl(rho.grid.nodes(), rho.values);
}

double coulomb_direct(const RadialDensity& rho1, const RadialDensity& rho2) {
  const bool same_grid = rho1.grid.nodes() == rho2.grid.nodes();
  const std::vector<double>& r =
      same_grid ? rho1.grid.nodes() : union_nodes(rho1.grid.nodes(), rho2.grid.nodes());
  const std::vector<double> v1 = same_grid ? rho1.values : sample_on(rho1, r);
  const std::vector<double> v2 = same_grid ? rho2.values : sample_on(rho2, r);
  const std::vector<double> phi1 = potential_impl(r, v1);
  std::vector<double> f(r.size());
  for (std::size_t i = 0; i < r.size(); ++i) f[i] = phi1[i] * v2[i] * r[i] * r[i];
  return 4.0 * pi * trapezoid(r, f);
}

double lr_norm(const RadialDensity& rho, double r_exp) {
  check_exponent(r_exp);
  const auto& r = rho.grid.nodes();
  std::vector<double> f(r.size());
  for (std::size_t i = 0; i < r.size(); ++i)
    f[i] = std::pow(rho.values[i], r_exp) * r[i] * r[i];
  return std::pow(4.0 * pi * trapezoid(r, f), 1.0 / r_exp);
}

double lr_distance(const RadialDensity& rho1, const RadialDensity& rho2, double r_exp) {
  check_exponent(r_exp);
  const std::vector<double> r = union_nodes(rho1.grid.nodes(), rho2.grid.nodes());
  std::vector<double> f(r.size());
  for (std::size_t i = 0; i < r.size(); ++i)
    f[i] = std::pow(std::abs(rho1(r[i]) - rho2(r[i])), r_exp) * r[i] * r[i];
  return std::pow(4.0 * pi * trapezoid(r, f), 1.0 / r_exp);
}

RadialDensity rescale(const RadialDensity& rho, double s) {
  if (!(s > 0.0) || !std::isfinite(s))
    throw std::domain_error("rescale: scale must be positive and finite");
  const auto& r = rho.grid.nodes();
  std::vector<double> nodes(r.size()), values(r.size());
  const double s3 = s * s * s;
  for (std::size_t i = 0; i < r.size(); ++i) {
    nodes[i] = r[i] / s;
    values[i] = s3 * rho.values[i];
  }
  return RadialDensity(RadialGrid(std::move(nodes)), std::move(values));
}

double hls_deficit(const RadialDensity& rho, const eos::ParticleParams& p, double tau_c) {
  p.validate();
  if (!(tau_c > 0.0)) throw std::domain_error("hls_deficit: tau_c must be positive");
  const double m1 = mass(rho);
  if (!(m1 > 0.0)) throw std::domain_error("hls_deficit: density has zero mass");
  const double n43 = std::pow(lr_norm(rho, 4.0 / 3.0), 4.0 / 3.0);
  return eos::k_cl(p.q) * n43 * std::pow(m1, 2.0 / 3.0) -
         0.5 * tau_c * coulomb_direct(rho, rho);
}

void write_two_column(std::ostream& out, const RadialDensity& rho) {
  const auto& r = rho.grid.nodes();
  out.precision(17);
  for (std::size_t i = 0; i < r.size(); ++i) out << r[i] << ' ' << rho.values[i] << '\n';
}

RadialDensity read_two_column(std::istream& in) {
  std::vector<double> r, v;
  double a, b;
  while (in >> a >> b) {
    r.push_back(a);
    v.push_back(b);
  }
  return RadialDensity(RadialGrid(std::move(r)), std::move(v));
}

}  // namespace polystar::radial
