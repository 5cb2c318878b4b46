#include "bosegas/dilute_bounds.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <limits>
#include <numbers>
#include <sstream>

#include "bosegas/errors.hpp"

namespace bosegas {
namespace {

constexpr double kPi = std::numbers::pi;

void require_Y(double Y, const char* who) {
  if (!(Y >= 0.0)) throw DomainError(std::string(who) + ": Y must be >= 0");
  if (!(Y < 1.0)) throw DomainError(std::string(who) + ": formula requires Y < 1");
}

}  // namespace

// ---------------------------------------------------------------------------

GasParameter GasParameter::from_density(double rho, double a, int dimension) {
  if (!(rho >= 0.0) || !(a >= 0.0)) throw DomainError("GasParameter: rho and a must be >= 0");
  if (dimension != 2 && dimension != 3) throw DomainError("GasParameter: dimension must be 2 or 3");
  const double Y = dimension == 3 ? 4.0 * kPi * rho * a * a * a / 3.0 : rho * a * a;
  return GasParameter{rho, a, Y, dimension};
}

GasParameter GasParameter::from_Y(double Y, double a, int dimension) {
  if (!(Y >= 0.0) || !(a > 0.0)) throw DomainError("GasParameter: need Y >= 0 and a > 0");
  if (dimension != 2 && dimension != 3) throw DomainError("GasParameter: dimension must be 2 or 3");
  const double rho = dimension == 3 ? 3.0 * Y / (4.0 * kPi * a * a * a) : Y / (a * a);
  return GasParameter{rho, a, Y, dimension};
}

void CellParameters::validate() const {
  if (!(epsilon > 0.0 && epsilon < 1.0)) throw DomainError("cell parameters: need 0 < epsilon < 1");
  if (!(R > R0)) throw DomainError("cell parameters: need R > R0");
  if (!(ell > 2.0 * R)) throw DomainError("cell parameters: need ell > 2R");
  if (!(n >= 2.0)) throw DomainError("cell parameters: need n >= 2");
}

bool CellParameters::length_ordering_holds(double rho, double a) const {
  const double mean_spacing = std::cbrt(1.0 / rho);
  const double healing = 1.0 / std::sqrt(rho * a);
  return a < R && R < mean_spacing && mean_spacing < ell && ell < healing;
}

// ---------------------------------------------------------------------------

std::string Rational::str() const {
  std::ostringstream os;
  os << num;
  if (den != 1) os << "/" << den;
  return os.str();
}

Rational Rational::parse(const std::string& text) {
  auto parse_int = [&](std::string_view s) {
    std::int64_t v = 0;
    while (!s.empty() && s.front() == ' ') s.remove_prefix(1);
    while (!s.empty() && s.back() == ' ') s.remove_suffix(1);
    const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
    if (ec != std::errc() || ptr != s.data() + s.size())
      throw DomainError("Rational: cannot parse '" + text + "'");
    return v;
  };
  const auto slash = text.find('/');
  if (slash == std::string::npos) return Rational(parse_int(text));
  const std::int64_t d = parse_int(std::string_view(text).substr(slash + 1));
  if (d == 0) throw DomainError("Rational: zero denominator in '" + text + "'");
  return Rational(parse_int(std::string_view(text).substr(0, slash)), d);
}

ExponentCheck check_exponents(const Exponents& e) {
  ExponentCheck c;
  const Rational one(1), two(2), three(3), five(5), zero(0);
  c.temple_denominator = two - e.alpha - five * e.beta;
  c.epsilon_rate = e.alpha;
  c.pair_count_rate = three * e.beta - one;
  c.density_rate = one - three * e.beta + e.gamma;
  c.temple_rate = one - e.alpha - two * e.beta - e.gamma;
  const std::array<std::pair<Rational, const char*>, 5> conds{{
      {c.temple_denominator, "alpha + 5 beta < 2 (Temple denominator positive)"},
      {c.epsilon_rate, "alpha > 0 (epsilon -> 0)"},
      {c.pair_count_rate, "3 beta - 1 > 0 (many particles per cell)"},
      {c.density_rate, "1 - 3 beta + gamma > 0 (density factor -> 1)"},
      {c.temple_rate, "1 - alpha - 2 beta - gamma > 0 (Temple correction -> 0)"},
  }};
  c.all_passed = true;
  for (std::size_t i = 0; i < conds.size(); ++i) {
    c.passed[i] = zero < conds[i].first;
    if (!c.passed[i]) {
      c.all_passed = false;
      c.failures.emplace_back(conds[i].second);
    }
  }
  // 2R/l ~ Y^{gamma/3} enters through the geometry factor
  c.error_exponent = std::min({c.epsilon_rate, c.pair_count_rate, c.density_rate, c.temple_rate,
                               e.gamma * Rational(1, 3)});
  return c;
}

// ---------------------------------------------------------------------------

double upper_bound_ratio(double Y) {
  require_Y(Y, "upper_bound_ratio");
  const double y = std::cbrt(Y);
  const double num = 1.0 - y + y * y - 0.5 * Y;
  return num / std::pow(1.0 - y, 8);
}

double upper_bound_shape(double x, bool finite_range) {
  if (!(x >= 0.0 && x < 1.0)) throw DomainError("upper_bound_shape: need 0 <= a/b < 1");
  if (finite_range) return (1.0 - x * x + 0.5 * x * x * x) / std::pow(1.0 - x, 4);
  return (1.0 - x + x * x + 0.5 * x * x * x) / std::pow(1.0 - x, 8);
}

FiniteBoxUpper upper_bound_finite_box(const FiniteBoxUpperInput& in, const Units& units) {
  units.require(Convention::dilute, "upper_bound_finite_box");
  if (in.N < 2) throw DomainError("upper_bound_finite_box: need N >= 2");
  if (!(in.L > 0.0) || !(in.a >= 0.0)) throw DomainError("upper_bound_finite_box: need L > 0, a >= 0");
  FiniteBoxUpper out;
  out.rho1 = static_cast<double>(in.N - 1) / (in.L * in.L * in.L);
  out.b = std::cbrt(3.0 / (4.0 * kPi * out.rho1));
  if (!(out.b > in.a)) throw DomainError("upper_bound_finite_box: bound requires b > a");
  if (in.finite_range && !(out.b > in.R0))
    throw DomainError("upper_bound_finite_box: finite-range form requires b > R0");
  out.ratio = upper_bound_shape(in.a / out.b, in.finite_range);
  out.boundary_term = in.dirichlet_constant / (in.L * in.L);
  out.energy_per_particle =
      4.0 * kPi * units.mu * out.rho1 * in.a * out.ratio + out.boundary_term;
  return out;
}

DysonBounds dyson_bounds_hard_sphere(double Y) {
  require_Y(Y, "dyson_bounds_hard_sphere");
  const double y = std::cbrt(Y);
  return DysonBounds{1.0 / (10.0 * std::numbers::sqrt2), (1.0 + 2.0 * y) / ((1.0 - y) * (1.0 - y))};
}

double soft_potential_infimum_bound(double A, double B, double R, double rho) {
  if (!(R > 0.0) || !(rho > 0.0)) throw DomainError("soft_potential_infimum_bound: need R, rho > 0");
  return A / (R * R * R) - B / (rho * R * R * R * R * R * R);
}

// ---------------------------------------------------------------------------

FirstOrderBounds first_order_expectation(double n, double ell, double R, double R0) {
  if (!(n >= 1.0)) throw DomainError("first_order_expectation: need n >= 1");
  if (!(R >= R0) || !(R0 >= 0.0)) throw DomainError("first_order_expectation: need R >= R0 >= 0");
  if (!(2.0 * R < ell)) throw DomainError("first_order_expectation: need 2R < ell");
  const double rho = n / (ell * ell * ell);
  const double pairs = 1.0 - 1.0 / n;
  FirstOrderBounds out;
  out.upper = 4.0 * kPi * rho * pairs;
  out.geometry_factor = std::pow(1.0 - 2.0 * R / ell, 3);
  out.density_factor = 1.0 / (1.0 + 4.0 * kPi * rho * pairs * (R * R * R - R0 * R0 * R0) / 3.0);
  out.lower = out.upper * out.geometry_factor * out.density_factor;
  return out;
}

namespace {

template <class Real>
TempleK temple_K_impl(Real n, Real ell, Real R, Real R0, Real eps, Real a, GapConvention gap) {
  const Real pi = std::numbers::pi_v<Real>;
  TempleK k;
  const Real D = R * R * R - R0 * R0 * R0;
  const Real ell3 = ell * ell * ell;
  const Real rho = n / ell3;
  const Real one(1);
  const Real one_minus_eps = one - eps;
  const Real g = one - Real(2) * R / ell;
  const Real geometry = g * g * g;
  const Real density = one / (one + Real(4) * pi / Real(3) * rho * (one - one / n) * D);
  const Real gap_term = gap == GapConvention::pi ? eps / (ell * ell) : pi * eps / (ell * ell);
  const Real denom = gap_term - Real(4) * a * n * (n - one) / ell3;
  k.one_minus_epsilon = static_cast<double>(one_minus_eps);
  k.geometry = static_cast<double>(geometry);
  k.density = static_cast<double>(density);
  k.temple_denominator = static_cast<double>(denom);
  if (!(denom > Real(0)) || !(D > Real(0))) {
    k.temple = 0.0;
    k.valid = false;
    k.value = 0.0;
    return k;
  }
  const Real temple = one - Real(3) / pi * a * n / (D * denom);
  k.temple = static_cast<double>(temple);
  const bool nonneg = one_minus_eps >= Real(0) && g >= Real(0) && temple >= Real(0);
  k.valid = nonneg;
  k.value = nonneg ? static_cast<double>(one_minus_eps * geometry * density * temple) : 0.0;
  return k;
}

}  // namespace

TempleK temple_K(double n, double ell, double R, double R0, double epsilon, double a,
                 const Units& units, GapConvention gap) {
  units.require(Convention::dilute, "temple_K");
  if (!(n > 0.0) || !(ell > 0.0) || !(epsilon > 0.0) || !(a > 0.0) || !(R0 >= 0.0))
    throw DomainError("temple_K: parameters must be positive");
  if (!(R > R0)) throw DomainError("temple_K: need R > R0");
  return temple_K_impl<double>(n, ell, R, R0, epsilon, a, gap);
}

TempleK temple_K_extended(double n, double ell, double R, double R0, double epsilon, double a,
                          GapConvention gap) {
  if (!(n > 0.0) || !(ell > 0.0) || !(epsilon > 0.0) || !(a > 0.0) || !(R0 >= 0.0))
    throw DomainError("temple_K: parameters must be positive");
  if (!(R > R0)) throw DomainError("temple_K: need R > R0");
  using L = long double;
  return temple_K_impl<L>(n, ell, R, R0, epsilon, a, gap);
}

// ---------------------------------------------------------------------------

namespace {

struct Enumerator {
  std::size_t p;
  std::size_t n_max;
  double best = std::numeric_limits<double>::infinity();

  double cost(std::size_t n) const {
    const double x = static_cast<double>(n);
    return n < p ? x * (x - 1.0) : 0.5 * x * static_cast<double>(p - 1);
  }

  // `count` cells left to fill with values >= lo summing to `sum`
  void run(std::size_t count, std::size_t sum, std::size_t lo, double acc) {
    if (acc >= best) return;
    if (count == 0) {
      if (sum == 0) best = acc;
      return;
    }
    for (std::size_t n = lo; n <= n_max; ++n) {
      if (n * count > sum) break;
      if (sum - n > (count - 1) * n_max) continue;
      run(count - 1, sum - n, n, acc + cost(n));
    }
  }
};

}  // namespace

double cell_occupancy_minimize(double k, std::size_t p, OccupancyMode mode,
                               const OccupancyOptions& opts) {
  if (!(k >= 1.0)) throw DomainError("cell_occupancy_minimize: need k >= 1");
  if (p < 2) throw DomainError("cell_occupancy_minimize: need p >= 2");
  const double pm1 = static_cast<double>(p - 1);
  if (mode == OccupancyMode::analytic) {
    // t(t-1) + (k-t)(p-1)/2 is convex in t with vertex at (p+1)/4
    const double t = std::clamp((static_cast<double>(p) + 1.0) / 4.0, 1.0, k);
    return t * (t - 1.0) + 0.5 * (k - t) * pm1;
  }
  if (k > static_cast<double>(opts.n_max))
    throw DomainError("cell_occupancy_minimize: infeasible constraints (k > n_max)");
  const double D = static_cast<double>(opts.denominator);
  const double total = k * D;
  const double rounded = std::round(total);
  if (std::abs(total - rounded) > 1e-9)
    throw DomainError("cell_occupancy_minimize: k * denominator must be an integer");
  Enumerator e{p, opts.n_max};
  e.run(opts.denominator, static_cast<std::size_t>(rounded), 0, 0.0);
  if (!std::isfinite(e.best)) throw DomainError("cell_occupancy_minimize: infeasible constraints");
  return e.best / D;
}

SuperadditivityReport superadditivity_check(const std::map<std::size_t, double>& energies,
                                            double rel_tol) {
  SuperadditivityReport rep;
  auto consider = [&](double slack, double scale, std::size_t n, std::size_t m, bool ratio) {
    if (slack < -rel_tol * std::max(scale, 1e-300) && slack < rep.worst_violation) {
      rep.passed = false;
      rep.worst_violation = slack;
      rep.worst_n = n;
      rep.worst_m = m;
      rep.worst_is_ratio_test = ratio;
    }
  };
  for (const auto& [n, en] : energies) {
    for (const auto& [m, em] : energies) {
      if (m < n) continue;
      const auto it = energies.find(n + m);
      if (it == energies.end()) continue;
      consider(it->second - en - em, std::abs(it->second) + std::abs(en) + std::abs(em), n, m,
               false);
    }
  }
  for (const auto& [p, ep] : energies) {
    if (p == 0) continue;
    for (auto it = energies.lower_bound(p); it != energies.end(); ++it) {
      const double bound = static_cast<double>(it->first) / (2.0 * static_cast<double>(p)) * ep;
      consider(it->second - bound, std::abs(it->second) + std::abs(bound), it->first, p, true);
    }
  }
  return rep;
}

// ---------------------------------------------------------------------------

CellParameters ansatz_parameters(const GasParameter& gas, double R0,
                                 const std::array<double, 3>& c, const Exponents& ex) {
  if (gas.dimension != 3) throw DomainError("ansatz_parameters: lower bound pipeline is 3D");
  if (!(gas.Y > 0.0) || !(gas.a > 0.0)) throw DomainError("ansatz_parameters: need Y > 0, a > 0");
  for (double x : c)
    if (!(x > 0.0)) throw DomainError("ansatz_parameters: proportionality constants must be > 0");
  CellParameters cp;
  cp.constants = c;
  cp.R0 = R0;
  cp.epsilon = c[0] * std::pow(gas.Y, ex.alpha.value());
  cp.ell = gas.a / (c[1] * std::pow(gas.Y, ex.beta.value()));
  const double D = c[2] * std::pow(gas.Y, ex.gamma.value()) * cp.ell * cp.ell * cp.ell;
  cp.R = std::cbrt(D + R0 * R0 * R0);
  cp.n = std::ceil(4.0 * gas.rho * cp.ell * cp.ell * cp.ell);
  return cp;
}

BoundReport lower_bound_ratio(const GasParameter& gas, const CellParameters& params,
                              GapConvention gap, bool extended) {
  if (gas.dimension != 3) throw DomainError("lower_bound_ratio: lower bound pipeline is 3D");
  BoundReport rep;
  rep.Y = gas.Y;
  rep.params = params;
  rep.upper = gas.Y < 1.0 ? upper_bound_ratio(gas.Y) : std::numeric_limits<double>::infinity();
  rep.extended_precision = extended || gas.Y <= 1e-16;

  const double ell3 = params.ell * params.ell * params.ell;
  rep.k = gas.rho * ell3;
  rep.p = static_cast<std::size_t>(std::ceil(4.0 * rep.k));
  rep.params.n = static_cast<double>(rep.p);
  rep.factors.pair_count = 1.0 - 1.0 / rep.k;

  // geometric admissibility: trivial bound, not an error
  if (!(params.epsilon > 0.0 && params.epsilon < 1.0) || !(params.R > params.R0) ||
      !(params.ell > 2.0 * params.R) || rep.p < 2 || !(rep.k > 1.0)) {
    rep.valid = false;
    rep.lower = 0.0;
    return rep;
  }

  const double n = static_cast<double>(rep.p);
  const TempleK K = rep.extended_precision
                        ? temple_K_extended(n, params.ell, params.R, params.R0, params.epsilon,
                                            gas.a, gap)
                        : temple_K(n, params.ell, params.R, params.R0, params.epsilon, gas.a,
                                   Units::dilute(), gap);
  rep.factors.one_minus_epsilon = K.one_minus_epsilon;
  rep.factors.geometry = K.geometry;
  rep.factors.density = K.density;
  rep.factors.temple = K.temple;
  rep.valid = K.valid;
  if (!K.valid) {
    rep.lower = 0.0;
    return rep;
  }
  if (rep.extended_precision) {
    using L = long double;
    const L pair = L(1) - L(1) / (static_cast<L>(gas.rho) * static_cast<L>(params.ell) *
                                  static_cast<L>(params.ell) * static_cast<L>(params.ell));
    rep.lower = static_cast<double>(pair * static_cast<L>(K.value));
  } else {
    rep.lower = rep.factors.pair_count * K.value;
  }
  return rep;
}

BoundReport lower_bound_finite_box(std::size_t N, double L, const GasParameter& gas,
                                   const CellParameters& params, const Units& units,
                                   GapConvention gap) {
  units.require(Convention::dilute, "lower_bound_finite_box");
  if (!(gas.Y < 1.0)) throw DomainError("lower_bound_finite_box: need Y < 1");
  if (!(L > 0.0) || N == 0) throw DomainError("lower_bound_finite_box: need N >= 1, L > 0");
  const double rho = static_cast<double>(N) / (L * L * L);
  if (std::abs(rho - gas.rho) > 1e-9 * gas.rho)
    throw DomainError("lower_bound_finite_box: rho must equal N / L^3");
  if (!(params.epsilon > 0.0 && params.epsilon < 1.0))
    throw DomainError("lower_bound_finite_box: inadmissible geometry: need 0 < epsilon < 1");
  if (!(params.R > params.R0))
    throw DomainError("lower_bound_finite_box: inadmissible geometry: need R > R0");
  if (!(params.ell > 2.0 * params.R))
    throw DomainError("lower_bound_finite_box: inadmissible geometry: need ell > 2R");
  if (!(L >= params.ell))
    throw DomainError("lower_bound_finite_box: inadmissible geometry: need L >= ell "
                      "(L/a below the admissibility threshold)");
  return lower_bound_ratio(gas, params, gap);
}

// ---------------------------------------------------------------------------

OptimizerResult optimize_error_constant(std::span<const double> Y_grid, const Exponents& ex,
                                        const OptimizerOptions& opts) {
  OptimizerResult res;
  res.exponents = check_exponents(ex);
  if (!res.exponents.all_passed) {
    std::string msg = "optimize_error_constant: exponents inadmissible:";
    for (const auto& f : res.exponents.failures) msg += " [" + f + "]";
    throw DomainError(msg);
  }
  if (Y_grid.empty()) throw DomainError("optimize_error_constant: empty Y grid");
  for (double Y : Y_grid)
    if (!(Y > 0.0 && Y < 1.0)) throw DomainError("optimize_error_constant: Y must lie in (0, 1)");
  const double rate = res.exponents.error_exponent.value();
  const double a = 1.0;

  std::vector<GasParameter> gases;
  for (double Y : Y_grid) gases.push_back(GasParameter::from_Y(Y, a));

  auto objective = [&](const std::array<double, 3>& logc) {
    ++res.evaluations;
    const std::array<double, 3> c{std::exp(logc[0]), std::exp(logc[1]), std::exp(logc[2])};
    double worst = 0.0;
    for (const auto& g : gases) {
      const CellParameters cp = ansatz_parameters(g, opts.R0_over_a * a, c, ex);
      const BoundReport r = lower_bound_ratio(g, cp, opts.gap);
      worst = std::max(worst, (1.0 - r.lower) / std::pow(g.Y, rate));
    }
    return worst;
  };

  // coarse scan
  std::array<double, 3> best_x{};
  double best = std::numeric_limits<double>::infinity();
  const std::size_t m = std::max<std::size_t>(opts.scan_points, 2);
  for (std::size_t i = 0; i < m; ++i)
    for (std::size_t j = 0; j < m; ++j)
      for (std::size_t l = 0; l < m; ++l) {
        auto at = [&](std::size_t q) {
          return opts.log_lo + (opts.log_hi - opts.log_lo) * static_cast<double>(q) /
                                   static_cast<double>(m - 1);
        };
        const std::array<double, 3> x{at(i), at(j), at(l)};
        const double f = objective(x);
        if (f < best) {
          best = f;
          best_x = x;
        }
      }

  // coordinate descent in log space with step halving
  double step = (opts.log_hi - opts.log_lo) / static_cast<double>(m - 1);
  std::size_t sweeps = 0;
  while (step > opts.step_tol && sweeps < opts.max_sweeps) {
    ++sweeps;
    bool improved = false;
    for (std::size_t axis = 0; axis < 3; ++axis) {
      for (double dir : {+1.0, -1.0}) {
        std::array<double, 3> x = best_x;
        x[axis] += dir * step;
        const double f = objective(x);
        if (f < best) {
          best = f;
          best_x = x;
          improved = true;
          break;
        }
      }
    }
    if (!improved) step *= 0.5;
  }
  res.converged = step <= opts.step_tol;
  res.C = best;
  res.constants = {std::exp(best_x[0]), std::exp(best_x[1]), std::exp(best_x[2])};
  for (const auto& g : gases) {
    const CellParameters cp = ansatz_parameters(g, opts.R0_over_a * a, res.constants, ex);
    const BoundReport r = lower_bound_ratio(g, cp, opts.gap);
    res.per_Y_constant.push_back((1.0 - r.lower) / std::pow(g.Y, rate));
  }
  return res;
}

double error_constant(std::span<const double> Y_grid, const std::array<double, 3>& c,
                      const Exponents& ex, const OptimizerOptions& opts) {
  const ExponentCheck chk = check_exponents(ex);
  if (!chk.all_passed) throw DomainError("error_constant: exponents inadmissible");
  if (Y_grid.empty()) throw DomainError("error_constant: empty Y grid");
  const double rate = chk.error_exponent.value();
  double worst = 0.0;
  for (double Y : Y_grid) {
    if (!(Y > 0.0 && Y < 1.0)) throw DomainError("error_constant: Y must lie in (0, 1)");
    const GasParameter g = GasParameter::from_Y(Y, 1.0);
    const BoundReport r = lower_bound_ratio(g, ansatz_parameters(g, opts.R0_over_a, c, ex), opts.gap);
    worst = std::max(worst, (1.0 - r.lower) / std::pow(Y, rate));
  }
  return worst;
}

// ---------------------------------------------------------------------------

LhyTerms lhy_expansion(double x) {
  if (!(x >= 0.0)) throw DomainError("lhy_expansion: need rho a^3 >= 0");
  if (!(x < 1.0)) throw DomainError("lhy_expansion: need rho a^3 < 1");
  LhyTerms t;
  t.sqrt_coefficient = 128.0 / (15.0 * std::sqrt(kPi));
  t.log_coefficient = 8.0 * (4.0 * kPi / 3.0 - std::sqrt(3.0));
  const double xlogx = x > 0.0 ? x * std::log(x) : 0.0;
  t.value = 1.0 + t.sqrt_coefficient * std::sqrt(x) + t.log_coefficient * xlogx;
  return t;
}

Schick2D schick_2d(double rho, double a, const Units& units) {
  units.require(Convention::dilute, "schick_2d");
  if (!(rho > 0.0) || !(a > 0.0)) throw DomainError("schick_2d: need rho > 0 and a > 0");
  const double x = rho * a * a;
  if (!(x < 1.0)) throw DomainError("schick_2d: need rho a^2 < 1");
  Schick2D s;
  s.log_factor = std::abs(std::log(x));
  s.energy_per_particle = 4.0 * kPi * units.mu * rho / s.log_factor;
  s.upper_relative_error = 1.0 / s.log_factor;
  s.other_relative_error = std::pow(s.log_factor, -0.2);
  return s;
}

double pairwise_rule_2d(double rho, double a, double L, const Units& units) {
  units.require(Convention::dilute, "pairwise_rule_2d");
  if (!(L > a) || !(a > 0.0) || !(rho > 0.0)) throw DomainError("pairwise_rule_2d: need L > a > 0");
  return 4.0 * kPi * units.mu * rho / std::log(L * L / (a * a));
}

}  // namespace bosegas
