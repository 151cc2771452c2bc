#ifndef POLYSTAR_RADIAL_HPP
#define POLYSTAR_RADIAL_HPP

#include <cstddef>
#include <iosfwd>
#include <vector>

#include "polystar/eos.hpp"

namespace polystar::radial {

/// Strictly increasing radii r_0 = 0 < r_1 < ... < r_n, at least 16 nodes.
class RadialGrid {
 public:
  explicit RadialGrid(std::vector<double> nodes);

  /// Uniform grid on [0, r_max] with n nodes (default resolution 2048).
  static RadialGrid uniform(double r_max, std::size_t n = 2048);

  const std::vector<double>& nodes() const { return nodes_; }
  std::size_t size() const { return nodes_.size(); }
  double r_max() const { return nodes_.back(); }

 private:
  std::vector<double> nodes_;
};

/// Non-negative radial profile sampled on a grid; identically zero beyond the
/// last node (compact-support convention). Integrals use the composite
/// trapezoid rule on r^2-weighted integrands.
struct RadialDensity {
  RadialDensity(RadialGrid grid, std::vector<double> values);

  RadialGrid grid;
  std::vector<double> values;

  /// Linear interpolation between nodes, zero beyond the support.
  double operator()(double r) const;
};

/// 4 pi int rho(r) r^2 dr over the support.
double mass(const RadialDensity& rho);

/// Newton potential Phi = |.|^{-1} * rho evaluated at the grid nodes:
/// Phi(r) = (4pi/r) int_0^r s^2 rho ds + 4pi int_r^{r_max} s rho ds.
std::vector<double> newton_potential(const RadialDensity& rho);

/// Direct interaction D(rho1, rho2) = iint rho1(x) rho2(y)/|x-y| dx dy.
/// Cross-grid inputs are interpolated onto the sorted union of nodes, which
/// keeps the discrete form symmetric and bilinear.
double coulomb_direct(const RadialDensity& rho1, const RadialDensity& rho2);

/// L^r norm (4pi int rho^r_exp r^2 dr)^{1/r_exp}, r_exp >= 1.
double lr_norm(const RadialDensity& rho, double r_exp);

/// L^r norm of |rho1 - rho2| on the union grid.
double lr_distance(const RadialDensity& rho1, const RadialDensity& rho2, double r_exp);

/// Mass-preserving dilation r -> s^3 rho(s r) on the grid {r_i / s}, s > 0.
RadialDensity rescale(const RadialDensity& rho, double s);

/// Sharp-inequality deficit
///   k_cl(q) ||rho||_{4/3}^{4/3} ||rho||_1^{2/3} - (tau_c/2) D(rho, rho),
/// non-negative for every admissible density. tau_c is the critical coupling
/// for the same q (see lane_emden). Requires mass(rho) > 0.
double hls_deficit(const RadialDensity& rho, const eos::ParticleParams& p, double tau_c);

/// Two-column text serialization (radius value per line, full precision).
void write_two_column(std::ostream& out, const RadialDensity& rho);
RadialDensity read_two_column(std::istream& in);

}  // namespace polystar::radial

#endif  // POLYSTAR_RADIAL_HPP
