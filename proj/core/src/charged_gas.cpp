#include "bosegas/charged_gas.hpp"

#include <algorithm>
#include <boost/math/tools/minima.hpp>
#include <cmath>
#include <numbers>

#include "bosegas/errors.hpp"
#include "bosegas/quadrature.hpp"

namespace bosegas {
namespace {

constexpr double kPi = std::numbers::pi;

double beta_of(double nu, double w) { return w / (nu + w + std::sqrt(nu * (nu + 2.0 * w))); }

/// 4 pi q^2 A beta^2 at rho = 1.
double integrand(double q) {
  if (q == 0.0) return 2.0 * kPi;
  const double q2 = q * q;
  const double nu = 0.5 * q2;
  const double w = 1.0 / q2;
  const double s = nu + w + std::sqrt(nu * (nu + 2.0 * w));
  const double beta = w / s;
  const double A = 0.5 * s;
  return 4.0 * kPi * q2 * A * beta * beta;
}

/// int_{q}^{inf} of the integrand from its expansion 2 pi q^-4 - 4 pi q^-8 + ...
double tail_integral(double q) {
  return 2.0 * kPi / (3.0 * q * q * q) - 4.0 * kPi / (7.0 * std::pow(q, 7));
}

}  // namespace

BogolubovMode bogolubov_coefficients(double p, double rho) {
  if (!(p > 0.0) || !std::isfinite(p)) throw DomainError("bogolubov_coefficients: need p > 0 (p = 0 is excluded)");
  if (!(rho > 0.0) || !std::isfinite(rho)) throw DomainError("bogolubov_coefficients: need rho > 0");
  BogolubovMode m;
  m.p = p;
  m.nu = 0.5 * p * p;
  m.w = rho / (p * p);
  const double s = m.nu + m.w + std::sqrt(m.nu * (m.nu + 2.0 * m.w));
  m.beta = m.w / s;
  m.A = 0.5 * s;
  const double r1 = std::abs(m.A * (1.0 + m.beta * m.beta) - (m.nu + m.w)) / (m.nu + m.w);
  const double r2 = std::abs(2.0 * m.A * m.beta - m.w) / m.w;
  m.residual = std::max(r1, r2);
  if (!(m.residual < 1e-12))
    throw ConvergenceError("bogolubov_coefficients: defining equations not satisfied");
  return m;
}

std::pair<double, double> foldy_constant(const QuadratureSpec& quad) {
  if (!(quad.q_max > 1.0)) throw DomainError("foldy_energy: need q_max > 1");
  QuadResult r;
  if (quad.panels == 0) {
    QuadOptions o;
    o.rel_tol = quad.rel_tol;
    o.abs_tol = quad.abs_tol;
    const double breaks[] = {1.0, 10.0};
    r = integrate(integrand, 0.0, quad.q_max,
                  std::span<const double>(breaks, quad.q_max > 10.0 ? 2 : 1), o);
    if (!r.converged) throw ConvergenceError("foldy_energy: quadrature did not converge");
  } else {
    r = integrate_fixed(integrand, 0.0, quad.q_max, quad.panels);
  }
  const double tail = tail_integral(quad.q_max);
  // the next term of the expansion is O(q^-12); bound its integral by the
  // mismatch between the integrand and the two known terms at q_max
  const double q = quad.q_max;
  const double mismatch = std::abs(integrand(q) - (2.0 * kPi * std::pow(q, -4) - 4.0 * kPi * std::pow(q, -8)));
  const double tail_error = mismatch * q / 11.0;
  const double norm = 2.0 / std::pow(2.0 * kPi, 3);
  const double C = norm * (r.value + tail);
  const double err = norm * (r.error + tail_error);
  if (quad.panels == 0 && err > std::max(quad.abs_tol, 10.0 * quad.rel_tol * C))
    throw ConvergenceError("foldy_energy: quadrature error estimate above tolerance");
  return {C, err};
}

JelliumResult foldy_energy(double rho, const QuadratureSpec& quad, const Units& units) {
  units.require(Convention::charged, "foldy_energy");
  if (!(rho > 0.0) || !std::isfinite(rho)) throw DomainError("foldy_energy: need rho > 0");
  const auto [C, err] = foldy_constant(quad);
  JelliumResult out;
  out.rho = rho;
  out.r_s = wigner_seitz_radius(rho);
  out.C_F = C;
  out.tail = 2.0 / std::pow(2.0 * kPi, 3) * tail_integral(quad.q_max);
  // hbar = m = e = 1 is the normalized form at density 4 pi rho, halved
  const double rho_n = kBogolubovDensityScale * rho;
  out.e_per_volume = -kBogolubovEnergyScale * C * std::pow(rho_n, 1.25);
  out.e_per_particle = out.e_per_volume / rho;
  out.coefficient_rs = -out.e_per_particle * std::pow(out.r_s, 0.75);
  out.quadrature_error = kBogolubovEnergyScale * err * std::pow(rho_n, 1.25) / rho;
  return out;
}

PairingKernel pairing_kernel(double rho, double p) {
  const BogolubovMode m = bogolubov_coefficients(p, rho);
  PairingKernel k;
  k.beta = m.beta;
  for (double s : {2.0, 10.0}) {
    const BogolubovMode ms = bogolubov_coefficients(s * p, s * s * s * s * rho);
    k.collapse_residual = std::max(k.collapse_residual, std::abs(ms.beta - m.beta));
  }
  return k;
}

double pairing_G(double t) {
  if (!(t > 0.0)) throw DomainError("pairing_G: need p^4 / rho > 0");
  // p = t^{1/4}, rho = 1: nu = sqrt(t)/2, w = 1/sqrt(t)
  const double r = std::sqrt(t);
  return beta_of(0.5 * r, 1.0 / r);
}

std::vector<std::pair<double, double>> tabulate_G(double t_lo, double t_hi, std::size_t count) {
  if (!(t_lo > 0.0) || !(t_hi > t_lo) || count < 2)
    throw DomainError("tabulate_G: need 0 < t_lo < t_hi and count >= 2");
  std::vector<std::pair<double, double>> out;
  const double step = std::log(t_hi / t_lo) / static_cast<double>(count - 1);
  for (std::size_t i = 0; i < count; ++i) {
    const double t = i + 1 == count ? t_hi : t_lo * std::exp(step * static_cast<double>(i));
    out.emplace_back(t, pairing_G(t));
  }
  return out;
}

LogLogFit fit_loglog(const std::vector<double>& x, const std::vector<double>& y) {
  if (x.size() != y.size() || x.size() < 2) throw DomainError("fit_loglog: need >= 2 matching points");
  const double n = static_cast<double>(x.size());
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    if (!(x[i] > 0.0) || y[i] == 0.0) throw DomainError("fit_loglog: need x > 0 and y != 0");
    const double lx = std::log(x[i]), ly = std::log(std::abs(y[i]));
    sx += lx;
    sy += ly;
    sxx += lx * lx;
    sxy += lx * ly;
  }
  LogLogFit f;
  const double den = n * sxx - sx * sx;
  if (!(den > 0.0)) throw DomainError("fit_loglog: x values must not all coincide");
  f.slope = (n * sxy - sx * sy) / den;
  f.intercept = (sy - f.slope * sx) / n;
  for (std::size_t i = 0; i < x.size(); ++i)
    f.max_residual = std::max(f.max_residual, std::abs(std::log(std::abs(y[i])) -
                                                       (f.intercept + f.slope * std::log(x[i]))));
  return f;
}

ExponentComparison infinite_mass_comparison(const std::vector<double>& rho, const QuadratureSpec& quad) {
  if (rho.size() < 4) throw DomainError("infinite_mass_comparison: need at least 4 densities");
  const auto [lo, hi] = std::minmax_element(rho.begin(), rho.end());
  if (!(*lo > 0.0) || !(*hi >= *lo * (1e3 - 1e-9)))
    throw DomainError("infinite_mass_comparison: densities must span at least 3 decades");
  ExponentComparison c;
  std::vector<double> e;
  for (double r : rho) {
    c.points.push_back(foldy_energy(r, quad));
    e.push_back(c.points.back().e_per_particle);
  }
  c.fit = fit_loglog(rho, e);
  c.per_particle_slope = c.fit.slope;
  c.per_volume_slope = c.fit.slope + 1.0;
  return c;
}

TwoComponentFit two_component_scaling(const std::vector<double>& N_list, double c_kin, double c_foldy) {
  if (!(c_kin > 0.0) || !(c_foldy > 0.0)) throw DomainError("two_component_scaling: constants must be > 0");
  if (N_list.size() < 2) throw DomainError("two_component_scaling: need at least 2 values of N");
  const auto [lo, hi] = std::minmax_element(N_list.begin(), N_list.end());
  if (!(*lo > 0.0) || !(*hi >= *lo * (1e3 - 1e-9)))
    throw DomainError("two_component_scaling: N must span at least 3 decades");
  TwoComponentFit fit;
  std::vector<double> Ns, Es, Ls;
  for (double N : N_list) {
    TwoComponentRow row;
    row.N = N;
    auto energy = [&](double L) {
      return c_kin * N / (L * L) - c_foldy * N * std::pow(N / (L * L * L), 0.25);
    };
    row.L_opt = std::pow(8.0 * c_kin / (3.0 * c_foldy), 0.8) * std::pow(N, -0.2);
    row.E_min = energy(row.L_opt);
    // numeric cross-check in ln L around the closed form
    const double c = std::log(row.L_opt);
    const auto [x, f] = boost::math::tools::brent_find_minima(
        [&](double lnL) { return energy(std::exp(lnL)); }, c - 3.0, c + 3.0, 52);
    row.L_numeric = std::exp(x);
    row.E_numeric = f;
    Ns.push_back(N);
    Es.push_back(row.E_min);
    Ls.push_back(row.L_opt);
    fit.rows.push_back(row);
  }
  fit.energy_slope = fit_loglog(Ns, Es).slope;
  fit.length_slope = fit_loglog(Ns, Ls).slope;
  return fit;
}

}  // namespace bosegas
