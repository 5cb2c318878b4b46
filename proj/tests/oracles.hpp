// Independent reference values used by the unit and acceptance tests.
#pragma once

#include <boost/math/quadrature/exp_sinh.hpp>
#include <boost/multiprecision/cpp_bin_float.hpp>
#include <cmath>
#include <cstdint>
#include <numbers>

namespace oracle {

using big = boost::multiprecision::cpp_bin_float_50;

// Square well of height h and range R0 under -2 mu u'' + v u = 0.
inline double kappa(double h, double mu) { return std::sqrt(h / (2.0 * mu)); }

inline double square_well_a_3d(double h, double R0, double mu = 1.0) {
  const double x = kappa(h, mu) * R0;
  return R0 * (1.0 - std::tanh(x) / x);
}

// u0 with u0'(0) = 1.
inline double square_well_u_3d(double r, double h, double R0, double mu = 1.0) {
  const double k = kappa(h, mu);
  if (r < R0) return std::sinh(k * r) / k;
  return std::sinh(k * R0) / k + std::cosh(k * R0) * (r - R0);
}

// psi = I0(kr) inside; outside psi = I0(kR0) + kR0 I1(kR0) ln(r/R0) = c ln(r/a).
inline double square_well_a_2d(double h, double R0, double mu = 1.0) {
  const double x = kappa(h, mu) * R0;
  return R0 * std::exp(-std::cyl_bessel_i(0.0, x) / (x * std::cyl_bessel_i(1.0, x)));
}

// K(n, l) with the gap eps/l^2, evaluated with 50 significant digits.
// Returns 0 when the last denominator is not positive or a factor is negative.
inline double temple_K(double n_, double ell_, double R_, double R0_, double eps_, double a_) {
  const big n(n_), ell(ell_), R(R_), R0(R0_), eps(eps_), a(a_);
  const big pi = boost::math::constants::pi<big>();
  const big rho = n / (ell * ell * ell);
  const big D = R * R * R - R0 * R0 * R0;
  const big denom = eps / (ell * ell) - 4 * a * n * (n - 1) / (ell * ell * ell);
  if (denom <= 0) return 0.0;
  const big f1 = 1 - eps;
  const big f2 = pow(1 - 2 * R / ell, 3);
  const big f3 = 1 / (1 + 4 * pi / 3 * rho * (1 - 1 / n) * D);
  const big f4 = 1 - 3 / pi * a * n / (D * denom);
  if (f1 < 0 || f2 < 0 || f4 < 0) return 0.0;
  return static_cast<double>(f1 * f2 * f3 * f4);
}

inline double upper_bound_ratio(double Y_) {
  const big y = boost::multiprecision::cbrt(big(Y_));
  return static_cast<double>((1 - y + y * y - y * y * y / 2) / pow(1 - y, 8));
}

// Bogolubov beta from (1 + b^2)/(2 b) = (nu + w)/w, nu = p^2/2, w = rho/p^2,
// taking the root in (0, 1). 50 digits absorb the cancellation at large p.
inline big beta(double p_, double rho_) {
  const big p(p_), rho(rho_);
  const big nu = p * p / 2;
  const big w = rho / (p * p);
  const big r = (nu + w) / w;
  return r - sqrt(r * r - 1);
}

// C = 2 int A beta^2 d^3q / (2 pi)^3 at rho = 1 with 2 A beta = w.
inline double foldy_constant() {
  // q^2 A beta^2 = beta / 2 because q^2 w = 1; beta -> 1 as q -> 0
  auto f = [](double q) {
    if (q * q < 1e-300) return 0.5;
    return static_cast<double>(beta(q, 1.0) / 2);
  };
  boost::math::quadrature::exp_sinh<double> integrator;
  const double I = integrator.integrate(f, 0.0, std::numeric_limits<double>::infinity());
  return I / (std::numbers::pi * std::numbers::pi);
}

// Textbook Bogolubov energy per particle of jellium (hbar = m = e = 1):
// (1/2 rho) int d^3k/(2 pi)^3 [E_k - k^2/2 - 4 pi rho/k^2], E_k = sqrt(k^4/4 + 4 pi rho),
// with k^2 times the bracket rewritten as -c^2 / (E + x)^2, x = k^2/2, c = 4 pi rho.
inline double jellium_energy(double rho) {
  const double c = 4.0 * std::numbers::pi * rho;
  auto f = [c](double k) {
    const double x = 0.5 * k * k;
    const double E = std::sqrt(x * x + c);
    return -c * c / ((E + x) * (E + x));
  };
  boost::math::quadrature::exp_sinh<double> integrator;
  const double I = integrator.integrate(f, 0.0, std::numeric_limits<double>::infinity());
  return I / (2.0 * std::numbers::pi * std::numbers::pi) / (2.0 * rho);
}

// Minimizer of c_kin N L^-2 - c_foldy N^{5/4} L^{-3/4}.
inline double two_component_L(double N, double c_kin, double c_foldy) {
  return std::pow(8.0 * c_kin / (3.0 * c_foldy), 0.8) * std::pow(N, -0.2);
}

// Small deterministic generator for property tests.
class SplitMix {
 public:
  explicit SplitMix(std::uint64_t seed) : state_(seed) {}
  std::uint64_t next() {
    std::uint64_t z = (state_ += 0x9e3779b97f4a7c15ULL);
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
  }
  double uniform() { return static_cast<double>(next() >> 11) * 0x1.0p-53; }
  double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }
  double log_uniform(double lo, double hi) {
    return std::exp(uniform(std::log(lo), std::log(hi)));
  }
  std::size_t index(std::size_t lo, std::size_t hi) {
    return lo + static_cast<std::size_t>(next() % (hi - lo + 1));
  }

 private:
  std::uint64_t state_;
};

}  // namespace oracle
