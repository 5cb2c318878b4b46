#include "bosegas/scattering.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <random>
#include <string>

#include "bosegas/quadrature.hpp"

namespace bosegas {
namespace {

constexpr double kPi = std::numbers::pi;
constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

struct State {
  double w;   // deviation of u0 (3D) or psi (2D) from the free solution
  double dw;  // its derivative
  double q;   // accumulated quadratic form (3D identity check)
};

/// Free solution through the start condition: s0 (r - core) in 3D, 1 or
/// ln(r / core) in 2D. Integrating only the deviation keeps the digits of a
/// weak potential's small scattering length.
struct Reference {
  int dim = 3;
  double slope = 1.0;
  double core = 0.0;
  double y(double r) const {
    if (dim == 3) return slope * (r - core);
    return core > 0.0 ? std::log(r / core) : 1.0;
  }
  double dy(double r) const {
    if (dim == 3) return slope;
    return core > 0.0 ? 1.0 / r : 0.0;
  }
};

/// Right-hand side of the first-order system. `v` is already evaluated.
State derivative(double r, const State& s, double v, const Reference& ref, double mu) {
  State d{};
  d.w = s.dw;
  const double y = ref.y(r) + s.w;
  if (ref.dim == 3) {
    d.dw = v * y / (2.0 * mu);
    const double t = (r > 0.0) ? ref.dy(r) + s.dw - y / r : 0.0;
    d.q = 4.0 * kPi * (2.0 * mu * t * t + v * y * y);
  } else {
    // psi'' + psi'/r = v psi / (2 mu); at the origin psi'' = v psi / (4 mu)
    d.dw = (r > 0.0) ? v * y / (2.0 * mu) - s.dw / r : v * y / (4.0 * mu);
    d.q = 0.0;
  }
  return d;
}

struct Profile {
  std::vector<double> r, y, dy, w, q;
};

Profile integrate(const PairPotential& pot, double mu, const std::vector<double>& nodes,
                  std::size_t substeps, const Reference& ref) {
  Profile out;
  out.r = nodes;
  out.y.resize(nodes.size());
  out.dy.resize(nodes.size());
  out.w.resize(nodes.size());
  out.q.resize(nodes.size());
  State s{0.0, 0.0, 0.0};
  auto store = [&](std::size_t i) {
    out.w[i] = s.w;
    out.y[i] = ref.y(nodes[i]) + s.w;
    out.dy[i] = ref.dy(nodes[i]) + s.dw;
    out.q[i] = s.q;
  };
  store(0);
  for (std::size_t i = 0; i + 1 < nodes.size(); ++i) {
    const double lo = nodes[i];
    const double hi = nodes[i + 1];
    // v is evaluated strictly inside [lo, hi) so a jump at hi is seen from the left
    const double v_hi = pot(std::nextafter(hi, lo));
    auto v_at = [&](double r) { return r >= hi ? v_hi : pot(r); };
    const double h = (hi - lo) / static_cast<double>(substeps);
    for (std::size_t j = 0; j < substeps; ++j) {
      const double r0 = lo + h * static_cast<double>(j);
      const double rm = r0 + 0.5 * h;
      const double r1 = (j + 1 == substeps) ? hi : r0 + h;
      const double vm = v_at(rm);
      const State k1 = derivative(r0, s, v_at(r0), ref, mu);
      const State s2{s.w + 0.5 * h * k1.w, s.dw + 0.5 * h * k1.dw, s.q + 0.5 * h * k1.q};
      const State k2 = derivative(rm, s2, vm, ref, mu);
      const State s3{s.w + 0.5 * h * k2.w, s.dw + 0.5 * h * k2.dw, s.q + 0.5 * h * k2.q};
      const State k3 = derivative(rm, s3, vm, ref, mu);
      const State s4{s.w + h * k3.w, s.dw + h * k3.dw, s.q + h * k3.q};
      const State k4 = derivative(r1, s4, v_at(r1), ref, mu);
      s.w += h / 6.0 * (k1.w + 2.0 * k2.w + 2.0 * k3.w + k4.w);
      s.dw += h / 6.0 * (k1.dw + 2.0 * k2.dw + 2.0 * k3.dw + k4.dw);
      s.q += h / 6.0 * (k1.q + 2.0 * k2.q + 2.0 * k3.q + k4.q);
    }
    store(i + 1);
  }
  return out;
}

std::vector<double> build_grid(double r_start, double r_max, std::size_t n_points,
                               const std::vector<double>& breaks) {
  std::vector<double> nodes(n_points);
  for (std::size_t i = 0; i < n_points; ++i)
    nodes[i] = r_start + (r_max - r_start) * static_cast<double>(i) /
                             static_cast<double>(n_points - 1);
  nodes.back() = r_max;
  for (double b : breaks)
    if (b > r_start && b < r_max) nodes.push_back(b);
  std::sort(nodes.begin(), nodes.end());
  const double eps = 1e-12 * r_max;
  std::vector<double> unique;
  unique.reserve(nodes.size());
  for (double x : nodes) {
    if (!unique.empty() && x - unique.back() < eps) {
      // keep a breakpoint exactly rather than the nearby uniform node
      if (std::find(breaks.begin(), breaks.end(), x) != breaks.end()) unique.back() = x;
      continue;
    }
    unique.push_back(x);
  }
  unique.front() = r_start;
  unique.back() = r_max;
  return unique;
}

/// First-order shift of a from a power tail A r^{-(3+eps)} beyond r, for
/// u0 ~ (s - a): (1 / 2 mu) int_r^inf v(s) (s - a)^2 ds.
double tail_shift(double A, double eps, double mu, double r, double a) {
  if (A == 0.0) return 0.0;
  const double t0 = std::pow(r, -eps) / eps;
  const double t1 = 2.0 * a * std::pow(r, -(1.0 + eps)) / (1.0 + eps);
  const double t2 = a * a * std::pow(r, -(2.0 + eps)) / (2.0 + eps);
  return A * (t0 - t1 + t2) / (2.0 * mu);
}

std::size_t window_start(const ScatteringSolution& s, double fraction) {
  const double r0 = s.r.front();
  const double cut = s.r.back() - fraction * (s.r.back() - r0);
  return static_cast<std::size_t>(std::lower_bound(s.r.begin(), s.r.end(), cut) - s.r.begin());
}

/// Least-squares fit y = alpha x + beta; returns {alpha, beta, rms misfit}.
std::array<double, 3> linear_fit(const std::vector<double>& x, const std::vector<double>& y) {
  const double n = static_cast<double>(x.size());
  double mx = 0.0, my = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    mx += x[i];
    my += y[i];
  }
  mx /= n;
  my /= n;
  double sxx = 0.0, sxy = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    sxx += (x[i] - mx) * (x[i] - mx);
    sxy += (x[i] - mx) * (y[i] - my);
  }
  const double alpha = sxy / sxx;
  const double beta = my - alpha * mx;
  double ss = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    const double e = y[i] - (alpha * x[i] + beta);
    ss += e * e;
  }
  return {alpha, beta, std::sqrt(ss / n)};
}

}  // namespace

LengthFit scattering_length_3d(const ScatteringSolution& s, double potential_range,
                               double window_fraction) {
  if (s.dimension != 3) throw DomainError("scattering_length_3d: solution is not 3D");
  const std::size_t i0 = window_start(s, window_fraction);
  if (s.r.size() - i0 < 3) throw DomainError("scattering_length_3d: fit window has < 3 points");
  LengthFit fit;
  fit.window_lo = s.r[i0];
  fit.window_hi = s.r.back();
  const bool tail = s.tail_amplitude > 0.0;
  if (!tail && fit.window_lo < potential_range)
    throw DomainError("scattering_length_3d: fit window lies inside the potential range");

  if (tail) {
    // local estimate r - u/u' corrected by the tail beyond r, averaged
    double sum = 0.0, sum2 = 0.0;
    std::size_t n = 0;
    for (std::size_t i = i0; i < s.r.size(); ++i) {
      if (s.du[i] == 0.0) throw DomainError("scattering_length_3d: u0' vanishes in the fit window");
      const double local = s.r[i] - s.u[i] / s.du[i];
      const double a_i = local + tail_shift(s.tail_amplitude, s.tail_epsilon, s.mu, s.r[i], local);
      sum += a_i;
      sum2 += a_i * a_i;
      ++n;
    }
    const double mean = sum / static_cast<double>(n);
    const double var = std::max(0.0, sum2 / static_cast<double>(n) - mean * mean);
    fit.a = mean;
    fit.residual = mean != 0.0 ? std::sqrt(var) / std::abs(mean) : std::sqrt(var);
    fit.slope = s.du.back();
    return fit;
  }

  std::vector<double> x(s.r.begin() + static_cast<std::ptrdiff_t>(i0), s.r.end());
  const bool split = s.deviation.size() == s.u.size();
  const auto& fitted = split ? s.deviation : s.u;
  std::vector<double> y(fitted.begin() + static_cast<std::ptrdiff_t>(i0), fitted.end());
  auto [alpha, beta, rms] = linear_fit(x, y);
  if (split) {
    // u0 = s0 (r - core) + deviation
    alpha += s.start_slope;
    beta -= s.start_slope * s.r.front();
  }
  if (!(std::abs(alpha) > 0.0) || !std::isfinite(alpha))
    throw DomainError("scattering_length_3d: u0' vanishes in the fit window");
  fit.slope = alpha;
  fit.a = -beta / alpha;
  double scale = 0.0;
  for (std::size_t i = i0; i < s.u.size(); ++i) scale = std::max(scale, std::abs(s.u[i]));
  fit.residual = scale > 0.0 ? rms / scale : 0.0;
  return fit;
}

LengthFit scattering_length_2d(const ScatteringSolution& s, double potential_range,
                               double window_fraction) {
  if (s.dimension != 2) throw DomainError("scattering_length_2d: solution is not 2D");
  const std::size_t i0 = window_start(s, window_fraction);
  if (s.r.size() - i0 < 3) throw DomainError("scattering_length_2d: fit window has < 3 points");
  LengthFit fit;
  fit.window_lo = s.r[i0];
  fit.window_hi = s.r.back();
  if (fit.window_lo < potential_range)
    throw DomainError("scattering_length_2d: fit window lies inside the potential range");
  const bool split = s.deviation.size() == s.u.size();
  const auto& fitted = split ? s.deviation : s.u;
  std::vector<double> x, y(fitted.begin() + static_cast<std::ptrdiff_t>(i0), fitted.end());
  for (std::size_t i = i0; i < s.r.size(); ++i) x.push_back(std::log(s.r[i]));
  auto [alpha, beta, rms] = linear_fit(x, y);
  if (split) {
    // psi = ln(r / core) + deviation, or 1 + deviation without a core
    const double core = s.r.front();
    if (core > 0.0) {
      alpha += 1.0;
      beta -= std::log(core);
    } else {
      beta += 1.0;
    }
  }
  double scale = 0.0;
  for (std::size_t i = i0; i < s.u.size(); ++i) scale = std::max(scale, std::abs(s.u[i]));
  if (!(std::abs(alpha) > 1e-13 * scale))
    throw NoLogarithmError("scattering_length_2d: psi is constant, no logarithm to fit");
  fit.slope = alpha;
  fit.a = std::exp(-beta / alpha);
  fit.residual = scale > 0.0 ? rms / scale : 0.0;
  return fit;
}

ScatteringSolution solve_zero_energy(const PairPotential& p, const Units& units, double r_max,
                                     std::size_t n_points, int dimension,
                                     const ScatteringOptions& opts) {
  units.require(Convention::dilute, "solve_zero_energy");
  if (dimension != 2 && dimension != 3)
    throw DomainError("solve_zero_energy: dimension must be 2 or 3");
  if (n_points < 100) throw DomainError("solve_zero_energy: n_points must be >= 100");
  if (!std::isfinite(r_max) || !(r_max > 0.0))
    throw DomainError("solve_zero_energy: r_max must be positive and finite");

  const auto* tail = std::get_if<PowerTail>(&p.kind());
  const double range = p.range();
  const double core = p.core_radius();
  if (tail != nullptr && tail->amplitude > 0.0) {
    if (dimension == 2)
      throw DomainError("solve_zero_energy: 2D extraction needs a finite-range potential");
    if (!(r_max > 2.0 * tail->range))
      throw DomainError("solve_zero_energy: r_max must exceed twice the tail start radius");
  } else if (!(r_max * (1.0 - opts.window_fraction) >= range)) {
    throw DomainError("solve_zero_energy: r_max does not exceed the potential range "
                      "(the fit window must lie outside it)");
  }
  if (core > 0.0 && !(r_max > 3.0 * core))
    throw DomainError("solve_zero_energy: r_max must exceed three core radii");
  for (double b : p.breakpoints())
    if (!std::isfinite(p(b)) && b >= core)
      throw DomainError("solve_zero_energy: non-finite potential sample");

  ScatteringSolution sol;
  sol.dimension = dimension;
  sol.mu = units.mu;
  if (tail != nullptr) {
    sol.tail_amplitude = tail->amplitude;
    sol.tail_epsilon = tail->epsilon;
  }

  const double r_start = core;
  // u = 0 at the core edge with unit slope (unit log-slope in 2D)
  const Reference ref{dimension, 1.0, core};
  sol.start_slope = ref.dy(core > 0.0 ? core : 1.0);
  const std::vector<double> nodes = build_grid(r_start, r_max, n_points, p.breakpoints());

  auto extract = [&](const ScatteringSolution& s) -> LengthFit {
    return dimension == 3 ? scattering_length_3d(s, range, opts.window_fraction)
                          : scattering_length_2d(s, range, opts.window_fraction);
  };

  double previous_a = kNaN;
  double previous_end = kNaN;
  for (std::size_t m = 1;; m *= 2) {
    Profile prof = integrate(p, units.mu, nodes, m, ref);
    sol.r = std::move(prof.r);
    sol.u = std::move(prof.y);
    sol.deviation = std::move(prof.w);
    sol.du = std::move(prof.dy);
    sol.substeps = m;
    for (double v : sol.u)
      if (!std::isfinite(v)) throw DomainError("solve_zero_energy: solution overflowed");

    bool has_length = true;
    LengthFit fit;
    try {
      fit = extract(sol);
    } catch (const NoLogarithmError&) {
      has_length = false;
    }

    bool done = false;
    if (has_length) {
      sol.a = fit.a;
      sol.residual = fit.residual;
      sol.asymptotic_slope = fit.slope;
      sol.window_lo = fit.window_lo;
      sol.window_hi = fit.window_hi;
      done = std::isfinite(previous_a) &&
             std::abs(fit.a - previous_a) <= opts.refine_tol * std::abs(fit.a) + 1e-15 * r_max;
      previous_a = fit.a;
    } else {
      sol.a = kNaN;
      sol.residual = 0.0;
      sol.asymptotic_slope = 0.0;
      const double end = sol.u.back();
      done = std::isfinite(previous_end) &&
             std::abs(end - previous_end) <= opts.refine_tol * std::abs(end);
      previous_end = end;
    }
    if (done) break;
    if (m >= opts.max_substeps) {
      sol.refined = false;
      break;
    }
  }

  if (sol.tail_amplitude > 0.0 && std::isfinite(sol.a)) {
    sol.tail_correction =
        tail_shift(sol.tail_amplitude, sol.tail_epsilon, units.mu, r_max, sol.a);
    const double scale = std::max(std::abs(sol.a), 1e-300);
    sol.tail_cutoff = std::pow(sol.tail_amplitude / (2.0 * units.mu * sol.tail_epsilon * 1e-10 * scale),
                               1.0 / sol.tail_epsilon);
  }
  return sol;
}

double scattering_length(const PairPotential& p, const Units& units, int dimension) {
  double r_max = 0.0;
  if (p.has_finite_range()) {
    r_max = std::max(4.0 * p.range(), 1.0);
  } else {
    const auto& t = std::get<PowerTail>(p.kind());
    r_max = 50.0 * t.range;
  }
  const ScatteringSolution s = solve_zero_energy(p, units, r_max, 2000, dimension);
  if (!std::isfinite(s.a)) {
    if (dimension == 2) throw NoLogarithmError("scattering_length: psi is constant (v = 0)");
    return 0.0;
  }
  return s.a;
}

double born_approximation(const PairPotential& p, const Units& units) {
  units.require(Convention::dilute, "born_approximation");
  if (p.has_hard_core())
    throw DomainError("born_approximation: integral of a hard core diverges");
  if (p.is_zero()) return 0.0;
  if (const auto* s = std::get_if<SquareWell>(&p.kind()))
    return s->height * 4.0 * kPi / 3.0 * s->range * s->range * s->range;
  if (const auto* t = std::get_if<PowerTail>(&p.kind())) {
    const double inner = t->height * 4.0 * kPi / 3.0 * t->range * t->range * t->range;
    return inner + 4.0 * kPi * t->amplitude * std::pow(t->range, -t->epsilon) / t->epsilon;
  }
  const auto& tab = std::get<Tabulated>(p.kind());
  const auto res = integrate([&](double r) { return 4.0 * kPi * p(r) * r * r; }, 0.0,
                             tab.r.back(), tab.r, QuadOptions{1e-300, 1e-13, 20000});
  if (!res.converged) throw ConvergenceError("born_approximation: quadrature did not converge");
  return res.value;
}

IdentityCheck energy_identity_check(const PairPotential& p, const Units& units, double R,
                                    std::size_t n_points) {
  units.require(Convention::dilute, "energy_identity_check");
  if (!(R > p.range())) throw DomainError("energy_identity_check: need R > range of v");
  if (n_points < 100) throw DomainError("energy_identity_check: n_points must be >= 100");
  IdentityCheck out;

  double a = 0.0;
  const bool finite = p.has_finite_range();
  if (!finite) a = scattering_length(p, units, 3);

  const double core = p.core_radius();
  const Reference ref{3, 1.0, core};
  const std::vector<double> nodes = build_grid(core, R, n_points, p.breakpoints());

  double previous = kNaN;
  Profile prof;
  for (std::size_t m = 1; m <= 4096; m *= 2) {
    prof = integrate(p, units.mu, nodes, m, ref);
    const double q = prof.q.back() / (prof.dy.back() * prof.dy.back());
    if (std::isfinite(previous) && std::abs(q - previous) <= 1e-12 * std::abs(q) + 1e-300) break;
    previous = q;
  }
  const double slope = prof.dy.back();
  const double uR = prof.y.back() / slope;  // normalized so that u0 ~ r - a
  // u0 is exactly linear beyond the range; a = R - u0(R)/u0'(R) without cancellation
  if (finite) a = (R * (slope - 1.0) + core - prof.w.back()) / slope;
  out.a = a;
  out.boundary_ratio = uR / R;
  if (std::abs(a) <= 1e-14 * R) {
    out.degenerate = true;
    out.ratio = kNaN;
    return out;
  }
  const double q = prof.q.back() / (slope * slope);
  out.ratio = q / (8.0 * kPi * units.mu * a);
  if (!std::isfinite(out.ratio)) throw ConvergenceError("energy_identity_check: quadrature failed");
  return out;
}

// ---------------------------------------------------------------------------

namespace {

double measure(double r, int dim) { return dim == 3 ? 4.0 * kPi * r * r : 2.0 * kPi * r; }

/// int U(r) w(r) dr with w = r^2 (3D) or ln(r/a) r (2D): the normalization.
double u_normalization(const FunctionU& f, int dim, double a) {
  auto weight = [&](double r) { return dim == 3 ? r * r : std::log(r / a) * r; };
  const auto res = integrate([&](double r) { return f.u(r) * weight(r); }, f.r_in, f.r_out,
                             QuadOptions{1e-300, 1e-13, 20000});
  return res.value;
}

}  // namespace

DysonMargin verify_dyson_lemma(const PairPotential& p, double a, const SoftPotential& U,
                               const RadialProfile& psi, double R1, int dim,
                               const Units& units) {
  units.require(Convention::dilute, "verify_dyson_lemma");
  if (dim != 2 && dim != 3) throw DomainError("verify_dyson_lemma: dimension must be 2 or 3");
  if (!p.has_finite_range()) throw DomainError("verify_dyson_lemma: v must have finite range");
  if (!(R1 > 0.0)) throw DomainError("verify_dyson_lemma: R1 must be positive");
  if (!(a > 0.0)) throw DomainError("verify_dyson_lemma: scattering length must be positive");
  const double R0 = p.range();
  const double mu = units.mu;
  const double core = p.core_radius();
  const QuadOptions qo{1e-300, 1e-13, 40000};

  DysonMargin out;
  out.a = a;

  // psi must vanish inside a hard core, otherwise the left side is infinite
  if (core > 0.0) {
    for (int k = 0; k <= 8; ++k) {
      const double r = core * k / 8.0;
      if (std::abs(psi.value(r)) > 1e-12) {
        out.lhs = kInfinity;
        out.margin = kInfinity;
        return out;
      }
    }
  }

  std::vector<double> breaks = p.breakpoints();
  std::visit(
      [&](const auto& u) {
        using T = std::decay_t<decltype(u)>;
        if constexpr (std::is_same_v<T, ShellU>) {
          breaks.push_back(u.r_in);
          breaks.push_back(u.r_out);
        } else if constexpr (std::is_same_v<T, DeltaU>) {
          breaks.push_back(u.radius);
        } else if constexpr (std::is_same_v<T, FunctionU>) {
          breaks.push_back(u.r_in);
          breaks.push_back(u.r_out);
        }
      },
      U);

  auto lhs_integrand = [&](double r) {
    const double d = psi.derivative(r);
    const double v = p(r);
    const double f = psi.value(r);
    const double pot = (v == kInfinity) ? 0.0 : 0.5 * v * f * f;
    return (mu * d * d + pot) * measure(r, dim);
  };
  const auto lhs = integrate(lhs_integrand, core, R1, breaks, qo);
  if (!lhs.converged) throw ConvergenceError("verify_dyson_lemma: LHS quadrature did not converge");
  out.lhs = lhs.value;

  const double prefactor = dim == 3 ? mu * a : mu;
  out.rhs = std::visit(
      [&](const auto& u) -> double {
        using T = std::decay_t<decltype(u)>;
        if constexpr (std::is_same_v<T, ZeroU>) {
          return 0.0;
        } else if constexpr (std::is_same_v<T, ShellU>) {
          if (!(u.weight >= 0.0 && u.weight <= 1.0))
            throw DomainError("verify_dyson_lemma: U weight must lie in [0, 1]");
          if (u.r_in < R0 * (1.0 - 1e-14) || !(u.r_out > u.r_in))
            throw DomainError("verify_dyson_lemma: U must vanish for r < R0");
          if (dim == 2 && u.r_in < a)
            throw DomainError("verify_dyson_lemma: 2D U must be supported where ln(r/a) >= 0");
          double height = 0.0;
          if (dim == 3) {
            height = 3.0 / (u.r_out * u.r_out * u.r_out - u.r_in * u.r_in * u.r_in);
          } else {
            const double ra = u.r_in, rb = u.r_out;
            // int ln(r/a) r dr = r^2/2 ln(r/a) - r^2/4
            const double norm = (rb * rb * 0.5 * std::log(rb / a) - rb * rb * 0.25) -
                                (ra * ra * 0.5 * std::log(ra / a) - ra * ra * 0.25);
            height = 1.0 / norm;
          }
          height *= u.weight;
          const double hi = std::min(u.r_out, R1);
          if (hi <= u.r_in) return 0.0;
          const auto res = integrate(
              [&](double r) {
                const double f = psi.value(r);
                return height * f * f * measure(r, dim);
              },
              u.r_in, hi, qo);
          return prefactor * res.value;
        } else if constexpr (std::is_same_v<T, DeltaU>) {
          if (!(u.weight >= 0.0 && u.weight <= 1.0))
            throw DomainError("verify_dyson_lemma: U weight must lie in [0, 1]");
          if (u.radius < R0 * (1.0 - 1e-14))
            throw DomainError("verify_dyson_lemma: U must vanish for r < R0");
          if (dim == 2 && !(u.radius > a))
            throw DomainError("verify_dyson_lemma: 2D delta U needs R > a");
          if (u.radius > R1) return 0.0;
          const double f = psi.value(u.radius);
          if (dim == 3) return prefactor * u.weight * 4.0 * kPi * f * f;
          return prefactor * u.weight * 2.0 * kPi * f * f / std::log(u.radius / a);
        } else {
          if (u.r_in < R0 * (1.0 - 1e-14))
            throw DomainError("verify_dyson_lemma: U must vanish for r < R0");
          if (dim == 2 && u.r_in < a)
            throw DomainError("verify_dyson_lemma: 2D U must be supported where ln(r/a) >= 0");
          for (int k = 0; k <= 64; ++k) {
            const double r = u.r_in + (u.r_out - u.r_in) * k / 64.0;
            if (u.u(r) < 0.0) throw DomainError("verify_dyson_lemma: U must be nonnegative");
          }
          if (u_normalization(u, dim, a) > 1.0 + 1e-10)
            throw DomainError("verify_dyson_lemma: U violates its normalization (> 1)");
          const double hi = std::min(u.r_out, R1);
          if (hi <= u.r_in) return 0.0;
          const auto res = integrate(
              [&](double r) {
                const double f = psi.value(r);
                return u.u(r) * f * f * measure(r, dim);
              },
              u.r_in, hi, qo);
          return prefactor * res.value;
        }
      },
      U);
  if (!std::isfinite(out.lhs) || !std::isfinite(out.rhs))
    throw DomainError("verify_dyson_lemma: psi is not finite");
  out.margin = out.lhs - out.rhs;
  return out;
}

DysonMargin verify_dyson_lemma(const PairPotential& p, const SoftPotential& U,
                               const RadialProfile& psi, double R1, int dimension,
                               const Units& units) {
  const double a = p.has_hard_core() ? p.core_radius() : scattering_length(p, units, dimension);
  return verify_dyson_lemma(p, a, U, psi, R1, dimension, units);
}

RadialProfile seeded_test_profile(std::uint64_t seed, std::size_t index, double core_radius,
                                  double length_scale) {
  std::seed_seq seq{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32),
                    static_cast<std::uint32_t>(index)};
  std::mt19937_64 gen(seq);
  auto uniform = [&gen](double lo, double hi) {
    const double u01 = static_cast<double>(gen() >> 11) * 0x1.0p-53;
    return lo + (hi - lo) * u01;
  };
  struct Mode {
    double amp, k, phase;
  };
  std::array<Mode, 4> modes{};
  for (std::size_t j = 0; j < modes.size(); ++j) {
    modes[j] = Mode{uniform(-0.6, 0.6), (1.0 + static_cast<double>(j)) * uniform(0.5, 2.0) * kPi /
                                           length_scale,
                    uniform(0.0, 2.0 * kPi)};
  }
  const double scale = uniform(0.2, 5.0);
  const double power = uniform(1.0, 3.0);
  const double c = core_radius;

  // psi = scale * g(r) * exp(S(r)), g = (1 - c/r)^power outside the core
  auto S = [modes](double r) {
    double s = 0.0;
    for (const Mode& m : modes) s += m.amp * std::sin(m.k * r + m.phase);
    return s;
  };
  auto dS = [modes](double r) {
    double s = 0.0;
    for (const Mode& m : modes) s += m.amp * m.k * std::cos(m.k * r + m.phase);
    return s;
  };
  auto g = [c, power](double r) {
    if (c <= 0.0) return 1.0;
    return r <= c ? 0.0 : std::pow(1.0 - c / r, power);
  };
  auto dg = [c, power](double r) {
    if (c <= 0.0 || r <= c) return 0.0;
    return power * std::pow(1.0 - c / r, power - 1.0) * c / (r * r);
  };
  RadialProfile prof;
  prof.value = [=](double r) { return scale * g(r) * std::exp(S(r)); };
  prof.derivative = [=](double r) {
    return scale * std::exp(S(r)) * (dg(r) + g(r) * dS(r));
  };
  return prof;
}

}  // namespace bosegas
