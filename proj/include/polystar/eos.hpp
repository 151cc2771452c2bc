#ifndef POLYSTAR_EOS_HPP
#define POLYSTAR_EOS_HPP

namespace polystar::eos {

/// Matter content of the star: spin multiplicity q and particle mass m
/// (natural units, hbar = c = 1). q >= 1 integral; m >= 0, where m = 0 is
/// admitted only for massless-limit checks -- solvers that need m > 0 reject
/// it themselves.
struct ParticleParams {
  int q = 2;
  double m = 1.0;

  /// Throws std::domain_error if q < 1 or m < 0.
  void validate() const;
};

/// Kinetic constant of the degenerate gas, (3/4)(6 pi^2 / q)^{1/3}.
double k_cl(int q);

/// Fermi momentum eta = (6 pi^2 rho / q)^{1/3} at number density rho >= 0.
double eta_of_rho(double rho, const ParticleParams& p);

/// Kinetic energy density of the free relativistic Fermi gas at density rho.
/// Massless branch returns k_cl(q) rho^{4/3}; for eta/m below 1e-3 a Taylor
/// series replaces the closed form, which cancels catastrophically there.
double j_m(double rho, const ParticleParams& p);

/// d j_m / d rho = sqrt(eta(rho)^2 + m^2). Massless branch returns eta(rho).
double j_m_prime(double rho, const ParticleParams& p);

/// Inverse-dispersion companion density
/// (q/4pi^2)[eta sqrt(eta^2+m^2) - m^2 asinh(eta/m)]; same small-eta series
/// treatment as j_m. Massless branch returns (q/4pi^2) eta^2.
double j_tilde_m(double rho, const ParticleParams& p);

}  // namespace polystar::eos

#endif  // POLYSTAR_EOS_HPP
