#pragma once

#include <array>
#include <cstddef>
#include <cstdint>
#include <map>
#include <numeric>
#include <span>
#include <string>
#include <vector>

#include "bosegas/units.hpp"

namespace bosegas {

// ---------------------------------------------------------------------------
// Gas parameter and cell geometry
// ---------------------------------------------------------------------------

struct GasParameter {
  double rho = 0.0;
  double a = 0.0;
  double Y = 0.0;  ///< 4 pi rho a^3 / 3 in 3D, rho a^2 in 2D
  int dimension = 3;

  static GasParameter from_density(double rho, double a, int dimension = 3);
  static GasParameter from_Y(double Y, double a, int dimension = 3);
};

/// Which value of the lowest nonzero Neumann eigenvalue of the kinetic term
/// Temple's inequality uses: eps*pi*mu/l^2, or the cube's true
/// eps*pi^2*mu/l^2.
enum class GapConvention { pi, pi_squared };

struct CellParameters {
  double epsilon = 0.0;  ///< kinetic energy share kept for the Temple step
  double R = 0.0;        ///< outer radius of the soft potential U_R
  double R0 = 0.0;       ///< range of v
  double ell = 0.0;      ///< cell side
  double n = 0.0;        ///< particles per cell entering K (p = ceil(4 rho l^3))
  std::array<double, 3> constants{1.0, 1.0, 1.0};  ///< (c_eps, c_ell, c_R)

  /// Throws DomainError naming the first violated inequality among
  /// 0 < eps < 1, R > R0, l > 2R, n >= 2.
  void validate() const;
  /// a < R < rho^{-1/3} < l < (rho a)^{-1/2}, strict.
  bool length_ordering_holds(double rho, double a) const;
};

// ---------------------------------------------------------------------------
// Exponents of the ansatz eps ~ Y^alpha, a/l ~ Y^beta, (R^3 - R0^3)/l^3 ~ Y^gamma
// ---------------------------------------------------------------------------

/// Exact rational number with a positive denominator, always reduced.
struct Rational {
  std::int64_t num = 0;
  std::int64_t den = 1;

  constexpr Rational() = default;
  constexpr Rational(std::int64_t n, std::int64_t d = 1) : num(n), den(d) {
    if (den < 0) {
      num = -num;
      den = -den;
    }
    const std::int64_t g = std::gcd(num < 0 ? -num : num, den);
    if (g > 1) {
      num /= g;
      den /= g;
    }
  }
  constexpr double value() const { return static_cast<double>(num) / static_cast<double>(den); }
  friend constexpr Rational operator+(Rational x, Rational y) {
    return Rational(x.num * y.den + y.num * x.den, x.den * y.den);
  }
  friend constexpr Rational operator-(Rational x, Rational y) {
    return Rational(x.num * y.den - y.num * x.den, x.den * y.den);
  }
  friend constexpr Rational operator*(Rational x, Rational y) {
    return Rational(x.num * y.num, x.den * y.den);
  }
  friend constexpr bool operator==(Rational x, Rational y) {
    return x.num == y.num && x.den == y.den;
  }
  friend constexpr bool operator<(Rational x, Rational y) {
    return x.num * y.den < y.num * x.den;
  }
  std::string str() const;
  static Rational parse(const std::string& text);
};

struct Exponents {
  Rational alpha{1, 17};
  Rational beta{6, 17};
  Rational gamma{3, 17};

  static constexpr Exponents standard() { return {}; }
};

/// The five conditions the exponents must meet, with the rates they control.
struct ExponentCheck {
  Rational temple_denominator;  ///< 2 - alpha - 5 beta  (> 0)
  Rational epsilon_rate;        ///< alpha               (> 0)
  Rational pair_count_rate;     ///< 3 beta - 1          (> 0)
  Rational density_rate;        ///< 1 - 3 beta + gamma  (> 0)
  Rational temple_rate;         ///< 1 - alpha - 2 beta - gamma (> 0)
  std::array<bool, 5> passed{};
  bool all_passed = false;
  /// The slowest of the four error rates: the exponent of Y in the error.
  Rational error_exponent;
  std::vector<std::string> failures;
};

ExponentCheck check_exponents(const Exponents& e);

// ---------------------------------------------------------------------------
// Upper bounds
// ---------------------------------------------------------------------------

/// Thermodynamic upper bound on e0 / (4 pi mu rho a):
/// (1 - Y^{1/3} + Y^{2/3} - Y/2) / (1 - Y^{1/3})^8, for 0 <= Y < 1.
double upper_bound_ratio(double Y);

/// The rational function of x = a/b in the finite-box bound: general form
/// (1 - x + x^2 + x^3/2)/(1 - x)^8, or (1 - x^2 + x^3/2)/(1 - x)^4 for
/// finite range.
double upper_bound_shape(double x, bool finite_range);

struct FiniteBoxUpper {
  double energy_per_particle = 0.0;
  double ratio = 0.0;  ///< energy / (4 pi mu rho1 a), boundary term excluded
  double rho1 = 0.0;   ///< (N - 1) / L^3
  double b = 0.0;      ///< (4 pi rho1 / 3)^{-1/3}
  double boundary_term = 0.0;
};

struct FiniteBoxUpperInput {
  std::size_t N = 2;
  double L = 1.0;
  double a = 0.0;
  bool finite_range = false;
  double R0 = 0.0;
  /// Dirichlet walls add dirichlet_constant / L^2 per particle. The constant
  /// is not known; 0 means periodic.
  double dirichlet_constant = 0.0;
};

FiniteBoxUpper upper_bound_finite_box(const FiniteBoxUpperInput& in, const Units& units);

struct DysonBounds {
  double lower = 0.0;
  double upper = 0.0;
};

/// Dyson's 1957 hard-sphere bounds on e0 / (4 pi mu rho a).
DysonBounds dyson_bounds_hard_sphere(double Y);

/// Lower bound A/R^3 - B/(rho R^6) on inf W_R at fixed R. A and B are user
/// inputs; no values are assumed.
double soft_potential_infimum_bound(double A, double B, double R, double rho);

// ---------------------------------------------------------------------------
// Lower bound pipeline
// ---------------------------------------------------------------------------

struct FirstOrderBounds {
  double lower = 0.0;  ///< bound on <W_R>_0 / n from below
  double upper = 0.0;  ///< 4 pi rho (1 - 1/n)
  double geometry_factor = 0.0;
  double density_factor = 0.0;
};

/// Two-sided bounds on <W_R>_0 / n in a cell of side l with rho = n / l^3.
FirstOrderBounds first_order_expectation(double n, double ell, double R, double R0);

struct TempleK {
  double value = 0.0;  ///< K, or 0 when invalid
  bool valid = false;
  double one_minus_epsilon = 0.0;
  double geometry = 0.0;            ///< (1 - 2R/l)^3
  double density = 0.0;            ///< (1 + 4pi/3 rho (1 - 1/n)(R^3 - R0^3))^{-1}
  double temple = 0.0;             ///< 1 - c a n / ((R^3 - R0^3)(gap - 4 a n(n-1)/l^3))
  double temple_denominator = 0.0;  ///< gap/(pi mu) - 4 a n (n-1)/l^3
};

/// K(n, l) of the Temple lower bound E0(n, l) >= 4 pi mu a n(n-1) K / l^3.
/// Returns valid = false and value 0 when the Temple denominator is <= 0 or
/// any factor is negative (the trivial bound).
TempleK temple_K(double n, double ell, double R, double R0, double epsilon, double a,
                 const Units& units = Units::dilute(), GapConvention gap = GapConvention::pi);

/// Extended-precision variant used for tiny Y.
TempleK temple_K_extended(double n, double ell, double R, double R0, double epsilon, double a,
                          GapConvention gap = GapConvention::pi);

enum class OccupancyMode { brute_force, analytic };

struct OccupancyOptions {
  std::size_t denominator = 16;  ///< weights c_n are multiples of 1/denominator
  std::size_t n_max = 50;
};

/// Minimum of sum_{n<p} c_n n(n-1) + 1/2 sum_{n>=p} c_n n (p-1) subject to
/// sum c_n = 1, sum c_n n = k. Analytic mode returns the convexity bound
/// min_{1<=t<=k} t(t-1) + (k - t)(p - 1)/2; brute force enumerates every
/// distribution with weights on the 1/denominator lattice and n <= n_max.
double cell_occupancy_minimize(double k, std::size_t p, OccupancyMode mode,
                               const OccupancyOptions& opts = {});

struct SuperadditivityReport {
  bool passed = true;
  std::size_t worst_n = 0;
  std::size_t worst_m = 0;  ///< second index of the worst pair (or p for the ratio test)
  double worst_violation = 0.0;  ///< most negative slack found (0 when passed)
  bool worst_is_ratio_test = false;
};

/// Checks E(n + m) >= E(n) + E(m) for all table pairs and E(n) >= n/(2p) E(p)
/// for n >= p.
SuperadditivityReport superadditivity_check(const std::map<std::size_t, double>& energies,
                                            double rel_tol = 1e-12);

struct BoundFactors {
  double pair_count = 0.0;  ///< 1 - 1/(rho l^3)
  double one_minus_epsilon = 0.0;
  double geometry = 0.0;
  double density = 0.0;
  double temple = 0.0;
};

struct BoundReport {
  double Y = 0.0;
  double upper = 0.0;  ///< upper_bound_ratio(Y)
  double lower = 0.0;  ///< certified lower ratio e0 / (4 pi mu rho a)
  CellParameters params;
  BoundFactors factors;
  double k = 0.0;       ///< rho l^3
  std::size_t p = 0;    ///< ceil(4 k)
  bool valid = false;
  bool extended_precision = false;
};

/// Cell parameters from the ansatz eps = c_eps Y^alpha, a/l = c_ell Y^beta,
/// (R^3 - R0^3)/l^3 = c_R Y^gamma.
CellParameters ansatz_parameters(const GasParameter& gas, double R0,
                                 const std::array<double, 3>& constants,
                                 const Exponents& exponents = Exponents::standard());

/// Certified lower ratio (1 - 1/(rho l^3)) K(p, l) with p = ceil(4 rho l^3).
/// Uses extended precision when Y <= 1e-16 or when `extended` is set.
BoundReport lower_bound_ratio(const GasParameter& gas, const CellParameters& params,
                              GapConvention gap = GapConvention::pi, bool extended = false);

/// Finite box version: additionally checks that N particles in a box of side
/// L are admissible (L >= l, i.e. L/a >= Y^{-beta}/c_ell) and that rho = N/L^3.
BoundReport lower_bound_finite_box(std::size_t N, double L, const GasParameter& gas,
                                   const CellParameters& params, const Units& units,
                                   GapConvention gap = GapConvention::pi);

struct OptimizerResult {
  double C = 0.0;  ///< sup over the grid of (1 - lower(Y)) / Y^{error exponent}
  std::array<double, 3> constants{};
  ExponentCheck exponents;
  bool converged = false;
  std::size_t evaluations = 0;
  std::vector<double> per_Y_constant;  ///< (1 - lower(Y)) / Y^{rate} at the optimum
};

struct OptimizerOptions {
  double R0_over_a = 1.0;
  GapConvention gap = GapConvention::pi;
  std::size_t scan_points = 15;       ///< per axis of the log-space grid
  double log_lo = -4.0;               ///< natural-log bounds of the scan
  double log_hi = 3.0;
  double step_tol = 1e-7;             ///< final log-step of coordinate descent
  std::size_t max_sweeps = 2000;
};

/// Chooses (c_eps, c_ell, c_R) minimizing sup_Y (1 - lower(Y)) / Y^{rate}:
/// log-space grid scan, then coordinate descent with step halving.
OptimizerResult optimize_error_constant(std::span<const double> Y_grid,
                                        const Exponents& exponents = Exponents::standard(),
                                        const OptimizerOptions& opts = {});

/// sup over the grid of (1 - lower(Y)) / Y^{rate} at fixed constants.
double error_constant(std::span<const double> Y_grid, const std::array<double, 3>& constants,
                      const Exponents& exponents = Exponents::standard(),
                      const OptimizerOptions& opts = {});

// ---------------------------------------------------------------------------
// Expansions
// ---------------------------------------------------------------------------

struct LhyTerms {
  double value = 0.0;
  double sqrt_coefficient = 0.0;  ///< 128 / (15 sqrt(pi))
  double log_coefficient = 0.0;   ///< 8 (4 pi / 3 - sqrt(3))
};

/// 1 + c1 x^{1/2} + c2 x ln x for e0 / (4 pi mu rho a), x = rho a^3.
LhyTerms lhy_expansion(double x);

struct Schick2D {
  double energy_per_particle = 0.0;  ///< 4 pi mu rho / |ln(rho a^2)|
  double log_factor = 0.0;           ///< |ln(rho a^2)|
  double upper_relative_error = 0.0; ///< |ln(rho a^2)|^{-1}
  double other_relative_error = 0.0; ///< |ln(rho a^2)|^{-1/5}
};

Schick2D schick_2d(double rho, double a, const Units& units = Units::dilute());

/// What the N(N-1)/2 pair rule would predict in 2D: 4 pi mu rho / ln(L^2/a^2).
double pairwise_rule_2d(double rho, double a, double L, const Units& units = Units::dilute());

}  // namespace bosegas
