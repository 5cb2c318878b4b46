#pragma once

#include <cstddef>
#include <utility>
#include <vector>

#include "bosegas/units.hpp"

namespace bosegas {

/// One Bogolubov mode in the normalized form
///   A (1 + beta^2) = nu + w,   2 A beta = w,   nu = p^2/2, w = rho/p^2.
struct BogolubovMode {
  double p = 0.0;
  double nu = 0.0;
  double w = 0.0;
  double A = 0.0;
  double beta = 0.0;
  double residual = 0.0;  ///< largest relative residual of the two equations
};

/// Root with 0 < beta < 1, evaluated without cancellation:
/// beta = w / (nu + w + sqrt(nu (nu + 2 w))), A = w / (2 beta).
BogolubovMode bogolubov_coefficients(double p, double rho);

struct QuadratureSpec {
  double q_max = 100.0;  ///< cut of the scaled momentum q = p / rho^{1/4}
  std::size_t panels = 0;  ///< 0: adaptive; otherwise fixed G7K15 panels on [0, q_max]
  double rel_tol = 1e-13;
  double abs_tol = 1e-15;
};

struct JelliumResult {
  double rho = 0.0;
  double r_s = 0.0;
  double e_per_particle = 0.0;  ///< hbar = m = e = 1
  double e_per_volume = 0.0;
  double coefficient_rs = 0.0;  ///< e_per_particle = -coefficient_rs * r_s^{-3/4}
  double C_F = 0.0;             ///< 2 int A beta^2 d^3q / (2 pi)^3 in the normalized form
  double quadrature_error = 0.0;
  double tail = 0.0;            ///< analytic contribution of q > q_max to C_F
};

/// The dimensionless constant C_F of the normalized form and its error estimate.
std::pair<double, double> foldy_constant(const QuadratureSpec& quad = {});

/// Bogolubov correlation energy of charged bosons in a neutralizing background.
JelliumResult foldy_energy(double rho, const QuadratureSpec& quad = {},
                           const Units& units = Units::charged());

struct PairingKernel {
  double beta = 0.0;
  double collapse_residual = 0.0;  ///< max |beta(p, rho) - beta(s p, s^4 rho)| over s in {2, 10}
};

/// f(p) = beta_p, with the collapse onto G(p^4 / rho) checked.
PairingKernel pairing_kernel(double rho, double p);

/// G(t) = beta at p^4 / rho = t.
double pairing_G(double t);

/// (t, G(t)) on a geometric grid.
std::vector<std::pair<double, double>> tabulate_G(double t_lo, double t_hi, std::size_t count);

struct LogLogFit {
  double slope = 0.0;
  double intercept = 0.0;
  double max_residual = 0.0;
};

/// Least-squares line through (ln x, ln |y|).
LogLogFit fit_loglog(const std::vector<double>& x, const std::vector<double>& y);

struct ExponentComparison {
  double per_particle_slope = 0.0;  ///< 1/4 for the Bogolubov law
  double per_volume_slope = 0.0;    ///< 5/4
  double reference_slope = 1.0 / 3.0;  ///< classical infinite-mass law, for reference
  LogLogFit fit;
  std::vector<JelliumResult> points;
};

/// Slope of |e(rho)| against rho. Needs >= 4 densities spanning >= 3 decades.
ExponentComparison infinite_mass_comparison(const std::vector<double>& rho,
                                            const QuadratureSpec& quad = {});

struct TwoComponentRow {
  double N = 0.0;
  double L_opt = 0.0;
  double E_min = 0.0;
  double L_numeric = 0.0;
  double E_numeric = 0.0;
};

struct TwoComponentFit {
  double energy_slope = 0.0;  ///< 7/5
  double length_slope = 0.0;  ///< -1/5
  std::vector<TwoComponentRow> rows;
};

/// Minimizes E(L) = c_kin N L^-2 - c_foldy N (N L^-3)^{1/4} for every N.
TwoComponentFit two_component_scaling(const std::vector<double>& N_list, double c_kin,
                                      double c_foldy);

}  // namespace bosegas
