#include "bosegas/gp_solver.hpp"

#include <Eigen/IterativeLinearSolvers>
#include <Eigen/SparseCholesky>
#include <Eigen/SparseCore>
#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <string>

#include "bosegas/errors.hpp"

namespace bosegas {
namespace {

constexpr double kPi = std::numbers::pi;
using SpMat = Eigen::SparseMatrix<double>;
using Vec = Eigen::VectorXd;

double kappa(double omega, const Units& u) { return omega * omega / (4.0 * u.mu); }

const Harmonic* as_harmonic(const TrapPotential& t) { return std::get_if<Harmonic>(&t.form()); }

void validate(const GPProblem& p) {
  if (p.dimension != 2 && p.dimension != 3) throw DomainError("gp: dimension must be 2 or 3");
  p.units.require(Convention::dilute, "gp");
  if (!(p.N > 0.0) || !std::isfinite(p.N)) throw DomainError("gp: need N > 0");
  if (!(p.a >= 0.0) || !std::isfinite(p.a))
    throw DomainError("gp: negative coupling rejected (need a >= 0)");
  if (p.mode == CouplingMode::fixed_3d && p.dimension != 3)
    throw DomainError("gp: fixed_3d coupling requires dimension 3");
  if (p.mode == CouplingMode::fixed_2d_logbar && p.dimension != 2)
    throw DomainError("gp: fixed_2d_logbar coupling requires dimension 2");
  if (p.dimension == 2 && !(p.a > 0.0))
    throw DomainError("gp: the 2D log coupling requires a > 0");
}

/// Interaction coefficient used to size the default grid.
double coupling_estimate(const GPProblem& p) {
  if (p.dimension == 3) return 4.0 * kPi * p.units.mu * p.a;
  const double ell = p.trap.length_scale(p.units);
  const double rho_bar = p.N / (2.0 * kPi * ell * ell);
  const double x = std::min(rho_bar * p.a * p.a, 0.5);
  return 4.0 * kPi * p.units.mu / std::abs(std::log(x));
}

/// Largest Thomas-Fermi radius of a harmonic trap, 0 when there is no coupling.
double tf_radius_estimate(const GPProblem& p, const Harmonic& h) {
  const double g = coupling_estimate(p);
  if (!(g > 0.0)) return 0.0;
  double kbar = 1.0, kmin = std::numeric_limits<double>::infinity();
  for (int i = 0; i < p.dimension; ++i) {
    const double k = kappa(h.omega[static_cast<std::size_t>(i)], p.units);
    kbar *= k;
    kmin = std::min(kmin, k);
  }
  kbar = std::pow(kbar, 1.0 / p.dimension);
  const double mu_c = p.dimension == 3
                          ? std::pow(15.0 * g * p.N * std::pow(kbar, 1.5) / (4.0 * kPi), 0.4)
                          : std::sqrt(4.0 * g * p.N * kbar / kPi);
  return std::sqrt(mu_c / kmin);
}

double min_harmonic_length(const Harmonic& h, int dim, const Units& u) {
  double w = 0.0;
  for (int i = 0; i < dim; ++i) w = std::max(w, h.omega[static_cast<std::size_t>(i)]);
  return std::sqrt(2.0 * u.mu / w);
}

double max_harmonic_length(const Harmonic& h, int dim, const Units& u) {
  double w = std::numeric_limits<double>::infinity();
  for (int i = 0; i < dim; ++i) w = std::min(w, h.omega[static_cast<std::size_t>(i)]);
  return std::sqrt(2.0 * u.mu / w);
}

struct Discretization {
  GridGeometry grid;
  SpMat K;  // Dirichlet form: E_kin = mu * phi^T K phi
  std::vector<double> V;
};

Discretization discretize(const GPProblem& p) {
  Discretization d;
  d.grid = make_grid(p);
  const GridGeometry& g = d.grid;
  const std::size_t n = g.size();
  const double h = g.spacing;
  const int dim = g.dimension;
  std::vector<Eigen::Triplet<double>> trip;
  std::vector<double> diag(n, 0.0);
  d.V.resize(n);

  if (g.radial) {
    const double omega = dim == 3 ? 4.0 * kPi : 2.0 * kPi;
    for (std::size_t i = 0; i + 1 < n; ++i) {
      const double rf = static_cast<double>(i + 1) * h;
      const double c = omega * std::pow(rf, dim - 1) / h;
      diag[i] += c;
      diag[i + 1] += c;
      trip.emplace_back(static_cast<int>(i), static_cast<int>(i + 1), -c);
      trip.emplace_back(static_cast<int>(i + 1), static_cast<int>(i), -c);
    }
    const double r_max = static_cast<double>(n) * h;
    diag[n - 1] += omega * std::pow(r_max, dim - 1) / (0.5 * h);
    for (std::size_t i = 0; i < n; ++i) d.V[i] = p.trap.radial(g.axis[i], p.units);
  } else {
    const std::size_t m = g.points_per_axis;
    const double c = std::pow(h, dim - 2);
    const Box* box = std::get_if<Box>(&p.trap.form());
    const bool dirichlet = box == nullptr || box->boundary == BoxBoundary::dirichlet;
    std::array<std::size_t, 3> stride{1, m, m * m};
    for (std::size_t i = 0; i < n; ++i) {
      for (int ax = 0; ax < dim; ++ax) {
        const std::size_t s = stride[static_cast<std::size_t>(ax)];
        const std::size_t idx = (i / s) % m;
        if (idx + 1 < m) {
          const std::size_t j = i + s;
          diag[i] += c;
          diag[j] += c;
          trip.emplace_back(static_cast<int>(i), static_cast<int>(j), -c);
          trip.emplace_back(static_cast<int>(j), static_cast<int>(i), -c);
        }
        if (dirichlet && (idx == 0 || idx + 1 == m)) diag[i] += 2.0 * c;
      }
      const auto x = g.point(i);
      d.V[i] = box != nullptr ? 0.0 : p.trap(x, p.units);
    }
  }
  for (std::size_t i = 0; i < n; ++i)
    trip.emplace_back(static_cast<int>(i), static_cast<int>(i), diag[i]);
  d.K.resize(static_cast<int>(n), static_cast<int>(n));
  d.K.setFromTriplets(trip.begin(), trip.end());
  d.K.makeCompressed();
  return d;
}

double norm2(const GridGeometry& g, const std::vector<double>& phi) {
  double s = 0.0;
  for (std::size_t i = 0; i < phi.size(); ++i) s += g.weights[i] * phi[i] * phi[i];
  return s;
}

double quartic(const GridGeometry& g, const std::vector<double>& phi) {
  double s = 0.0;
  for (std::size_t i = 0; i < phi.size(); ++i) {
    const double q = phi[i] * phi[i];
    s += g.weights[i] * q * q;
  }
  return s;
}

void normalize(const GridGeometry& g, std::vector<double>& phi, double N) {
  for (double& x : phi) x = std::abs(x);
  const double s = std::sqrt(N / norm2(g, phi));
  for (double& x : phi) x *= s;
}

double kinetic(const Discretization& d, const std::vector<double>& phi, const Units& u) {
  const Eigen::Map<const Vec> v(phi.data(), static_cast<Eigen::Index>(phi.size()));
  return u.mu * v.dot(d.K * v);
}

EnergyComponents energy_with(const Discretization& d, const GPProblem& p,
                             const std::vector<double>& phi, double g) {
  EnergyComponents e;
  e.kinetic = kinetic(d, phi, p.units);
  for (std::size_t i = 0; i < phi.size(); ++i) e.trap += d.grid.weights[i] * d.V[i] * phi[i] * phi[i];
  const double q = quartic(d.grid, phi);
  e.interaction = g * q;
  e.coupling = g;
  e.rho_bar = q / p.N;
  e.total = e.trap + e.interaction + (p.mode == CouplingMode::thomas_fermi ? 0.0 : e.kinetic);
  return e;
}

double log_coupling(const GPProblem& p, double rho_bar) {
  const double x = rho_bar * p.a * p.a;
  if (!(x < 1.0)) throw DomainError("gp_2d_coupling: need rho_bar a^2 < 1");
  if (!(x > 0.0)) throw DomainError("gp_2d_coupling: need rho_bar a^2 > 0");
  return 4.0 * kPi * p.units.mu / std::abs(std::log(x));
}

std::vector<double> initial_profile(const GPProblem& p, const GridGeometry& g) {
  std::vector<double> phi(g.size());
  const double f = p.options.initial_width_factor;
  if (!(f > 0.0)) throw DomainError("gp: initial_width_factor must be > 0");
  if (const Box* box = std::get_if<Box>(&p.trap.form())) {
    for (std::size_t i = 0; i < g.size(); ++i) {
      double v = 1.0;
      if (box->boundary == BoxBoundary::dirichlet) {
        for (double x : g.point(i)) v *= std::cos(kPi * x / box->side);
      }
      phi[i] = v;
    }
  } else if (const Harmonic* h = as_harmonic(p.trap)) {
    for (std::size_t i = 0; i < g.size(); ++i) {
      double s = 0.0;
      if (g.radial) {
        const double ell = f * std::sqrt(2.0 * p.units.mu / h->omega[0]);
        s = g.axis[i] * g.axis[i] / (ell * ell);
      } else {
        const auto x = g.point(i);
        for (std::size_t ax = 0; ax < x.size(); ++ax) {
          const double ell = f * std::sqrt(2.0 * p.units.mu / h->omega[ax]);
          s += x[ax] * x[ax] / (ell * ell);
        }
      }
      phi[i] = std::exp(-0.5 * s);
    }
  } else {
    const double ell = f * g.axis.back() / 8.0;
    for (std::size_t i = 0; i < g.size(); ++i)
      phi[i] = std::exp(-0.5 * g.radius[i] * g.radius[i] / (ell * ell));
  }
  normalize(g, phi, p.N);
  return phi;
}

struct FlowState {
  std::vector<double> phi;
  double chemical_potential = 0.0;
  double residual = 0.0;
  std::size_t iterations = 0;
  bool converged = false;
  std::vector<double> history;
};

/// Projected gradient residual and Rayleigh quotient of H(phi) phi.
std::pair<double, double> residual_of(const Discretization& d, const GPProblem& p,
                                      const std::vector<double>& phi, double g, double scale) {
  const std::size_t n = phi.size();
  const Eigen::Map<const Vec> v(phi.data(), static_cast<Eigen::Index>(n));
  const Vec Kv = d.K * v;
  std::vector<double> Hphi(n);
  double num = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    Hphi[i] = p.units.mu * Kv[static_cast<Eigen::Index>(i)] / d.grid.weights[i] +
              (d.V[i] + 2.0 * g * phi[i] * phi[i]) * phi[i];
    num += d.grid.weights[i] * phi[i] * Hphi[i];
  }
  const double mu_r = num / p.N;
  double r2 = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    const double r = Hphi[i] - mu_r * phi[i];
    r2 += d.grid.weights[i] * r * r;
  }
  const double denom = std::max(std::abs(mu_r), scale) * std::sqrt(p.N);
  return {std::sqrt(r2) / denom, mu_r};
}

/// Semi-implicit gradient flow at fixed coupling g:
///   (M/dt + mu K + M diag(V + 2 g phi^2)) psi = M phi / dt,
/// followed by |psi| and projection onto int phi^2 = N. A step that raises
/// the energy is rejected and retried with dt / 2.
void flow(const Discretization& d, const GPProblem& p, double g, FlowState& st,
          std::size_t& budget) {
  const std::size_t n = st.phi.size();
  const auto& w = d.grid.weights;
  const double ell = p.trap.length_scale(p.units);
  const double scale = p.units.mu / (ell * ell);
  double E = energy_with(d, p, st.phi, g).total;

  auto [res, mu_r] = residual_of(d, p, st.phi, g, scale);
  const double dt0 = 1.0 / std::max(std::abs(mu_r), scale);
  double dt = dt0;
  // large steps make CG on tensor grids expensive; the direct radial solve does not care
  const double dt_max = (d.grid.radial ? 1e8 : 100.0) * dt0;

  const SpMat muK = p.units.mu * d.K;
  SpMat S = muK;
  Eigen::SimplicialLDLT<SpMat> ldlt;
  Eigen::ConjugateGradient<SpMat, Eigen::Lower | Eigen::Upper> cg;
  if (d.grid.radial) ldlt.analyzePattern(S);
  cg.setTolerance(1e-12);

  Vec rhs(static_cast<Eigen::Index>(n)), psi(static_cast<Eigen::Index>(n));
  std::vector<double> next(n);
  st.residual = res;
  if (st.chemical_potential == 0.0) st.chemical_potential = mu_r;

  while (true) {
    if (res < p.options.tolerance) {
      st.converged = true;
      break;
    }
    if (budget == 0 || dt < 1e-14 * dt0) break;
    --budget;
    ++st.iterations;

    S = muK;
    for (std::size_t i = 0; i < n; ++i) {
      const auto ii = static_cast<Eigen::Index>(i);
      S.coeffRef(ii, ii) += w[i] * (1.0 / dt + d.V[i] + 2.0 * g * st.phi[i] * st.phi[i]);
      rhs[ii] = w[i] * st.phi[i] / dt;
    }
    if (d.grid.radial) {
      ldlt.factorize(S);
      if (ldlt.info() != Eigen::Success) throw ConvergenceError("gp: factorization failed");
      psi = ldlt.solve(rhs);
    } else {
      cg.compute(S);
      const Eigen::Map<const Vec> guess(st.phi.data(), static_cast<Eigen::Index>(n));
      psi = cg.solveWithGuess(rhs, guess);
    }
    for (std::size_t i = 0; i < n; ++i) next[i] = std::abs(psi[static_cast<Eigen::Index>(i)]);
    const double s = std::sqrt(p.N / norm2(d.grid, next));
    for (double& x : next) x *= s;

    const double En = energy_with(d, p, next, g).total;
    if (En <= E + 1e-12 * std::abs(E)) {
      st.phi.swap(next);
      E = En;
      st.history.push_back(E);
      st.chemical_potential = (s - 1.0) / dt;
      std::tie(res, mu_r) = residual_of(d, p, st.phi, g, scale);
      st.residual = res;
      dt = std::min(2.0 * dt, dt_max);
    } else {
      dt *= 0.5;
    }
  }
}

GPSolution finish(const Discretization& d, const GPProblem& p, FlowState&& st) {
  GPSolution sol;
  sol.grid = d.grid;
  sol.phi = std::move(st.phi);
  const double g = gp_coupling(p, d.grid, sol.phi);
  sol.energy = energy_with(d, p, sol.phi, g);
  sol.rho_bar = sol.energy.rho_bar;
  sol.chemical_potential = st.chemical_potential;
  const double kin = p.mode == CouplingMode::thomas_fermi ? 0.0 : sol.energy.kinetic;
  const double mu_id = (kin + sol.energy.trap + 2.0 * sol.energy.interaction) / p.N;
  sol.identity_residual =
      std::abs(sol.chemical_potential - mu_id) / std::max(std::abs(sol.chemical_potential), 1e-300);
  sol.iterations = st.iterations;
  sol.residual = st.residual;
  sol.converged = st.converged;
  sol.energy_history = std::move(st.history);
  return sol;
}

/// Chemical potential with sum w max(0, (mu - V)/(2g)) = N, by bisection.
double tf_chemical_potential(const Discretization& d, double g, double N, std::size_t& steps) {
  auto mass = [&](double mu) {
    double s = 0.0;
    for (std::size_t i = 0; i < d.V.size(); ++i)
      s += d.grid.weights[i] * std::max(0.0, (mu - d.V[i]) / (2.0 * g));
    return s;
  };
  const double vmin = *std::min_element(d.V.begin(), d.V.end());
  double lo = vmin;
  double width = std::max(1.0, std::abs(vmin));
  double hi = lo + width;
  while (mass(hi) < N) {
    width *= 2.0;
    hi = lo + width;
    if (!std::isfinite(hi)) throw ConvergenceError("tf_minimize: cannot bracket the chemical potential");
  }
  steps = 0;
  while (steps < 2000) {
    const double mid = 0.5 * (lo + hi);
    if (mid <= lo || mid >= hi) break;
    (mass(mid) < N ? lo : hi) = mid;
    ++steps;
  }
  return hi;
}

}  // namespace

// ---------------------------------------------------------------------------

std::vector<double> GridGeometry::point(std::size_t i) const {
  if (radial) return {axis[i]};
  std::vector<double> x(static_cast<std::size_t>(dimension));
  for (auto& c : x) {
    c = axis[i % points_per_axis];
    i /= points_per_axis;
  }
  return x;
}

std::vector<double> GPSolution::density() const {
  std::vector<double> rho(phi.size());
  for (std::size_t i = 0; i < phi.size(); ++i) rho[i] = phi[i] * phi[i];
  return rho;
}

GridGeometry make_grid(const GPProblem& p) {
  validate(p);
  const int dim = p.dimension;
  const Harmonic* h = as_harmonic(p.trap);
  const Box* box = std::get_if<Box>(&p.trap.form());

  GridSpec spec = p.grid;
  if (std::holds_alternative<std::monostate>(spec)) {
    if (p.trap.is_isotropic(dim) && box == nullptr)
      spec = RadialGrid{};
    else
      spec = TensorGrid{};
  }

  GridGeometry g;
  g.dimension = dim;
  if (auto* rg = std::get_if<RadialGrid>(&spec)) {
    if (!p.trap.is_isotropic(dim) || box != nullptr)
      throw DomainError("gp: radial grid requires an isotropic trap");
    double r_max = rg->r_max;
    double ell = p.trap.length_scale(p.units);
    if (h != nullptr) {
      if (r_max == 0.0) r_max = std::max(8.0 * ell, 1.5 * tf_radius_estimate(p, *h));
    } else {
      if (r_max == 0.0) r_max = ell;
      ell = r_max / 8.0;
    }
    std::size_t points = rg->points;
    if (points == 0)
      points = std::max<std::size_t>(800, static_cast<std::size_t>(std::ceil(100.0 * r_max / ell)));
    if (!(r_max > 0.0) || points < 8) throw DomainError("gp: radial grid needs r_max > 0 and >= 8 points");
    g.radial = true;
    g.spacing = r_max / static_cast<double>(points);
    g.points_per_axis = points;
    const double omega = dim == 3 ? 4.0 * kPi : 2.0 * kPi;
    for (std::size_t i = 0; i < points; ++i) {
      const double r = (static_cast<double>(i) + 0.5) * g.spacing;
      g.axis.push_back(r);
      g.radius.push_back(r);
      g.weights.push_back(omega * std::pow(r, dim - 1) * g.spacing);
    }
    if (h != nullptr && g.spacing > 0.5 * min_harmonic_length(*h, dim, p.units))
      throw DomainError("gp: grid spacing does not resolve the oscillator length");
    return g;
  }

  const auto& tg = std::get<TensorGrid>(spec);
  double hw = tg.half_width;
  std::size_t m = tg.points_per_axis;
  if (box != nullptr) {
    if (hw == 0.0) hw = 0.5 * box->side;
    if (std::abs(hw - 0.5 * box->side) > 1e-12 * box->side)
      throw DomainError("gp: tensor grid of a box trap must span the box");
    if (m == 0) m = dim == 3 ? 32 : 128;
  } else {
    if (hw == 0.0) {
      if (h == nullptr) throw DomainError("gp: tensor grid needs an explicit half_width for this trap");
      hw = std::max(5.0 * max_harmonic_length(*h, dim, p.units), 1.3 * tf_radius_estimate(p, *h));
    }
    if (m == 0) {
      const double target = h != nullptr ? min_harmonic_length(*h, dim, p.units) / 2.5 : hw / 16.0;
      m = std::max<std::size_t>(16, static_cast<std::size_t>(std::ceil(2.0 * hw / target)));
    }
  }
  if (!(hw > 0.0) || m < 4) throw DomainError("gp: tensor grid needs half_width > 0 and >= 4 points");
  g.radial = false;
  g.points_per_axis = m;
  g.spacing = 2.0 * hw / static_cast<double>(m);
  for (std::size_t j = 0; j < m; ++j) g.axis.push_back(-hw + (static_cast<double>(j) + 0.5) * g.spacing);
  std::size_t n = 1;
  for (int i = 0; i < dim; ++i) n *= m;
  g.weights.assign(n, std::pow(g.spacing, dim));
  g.radius.resize(n);
  for (std::size_t i = 0; i < n; ++i) {
    double s = 0.0;
    for (double x : g.point(i)) s += x * x;
    g.radius[i] = std::sqrt(s);
  }
  if (h != nullptr && g.spacing > 0.5 * min_harmonic_length(*h, dim, p.units))
    throw DomainError("gp: grid spacing does not resolve the oscillator length");
  return g;
}

double gp_2d_coupling(const GPProblem& p, const GridGeometry& g, const std::vector<double>& phi) {
  if (p.dimension != 2) throw DomainError("gp_2d_coupling: dimension must be 2");
  if (!(p.a > 0.0)) throw DomainError("gp_2d_coupling: need a > 0");
  if (phi.size() != g.size()) throw DomainError("gp_2d_coupling: profile does not match the grid");
  return log_coupling(p, quartic(g, phi) / p.N);
}

double gp_coupling(const GPProblem& p, const GridGeometry& g, const std::vector<double>& phi) {
  if (p.dimension == 2) return gp_2d_coupling(p, g, phi);
  return 4.0 * kPi * p.units.mu * p.a;
}

EnergyComponents gp_energy(const GPProblem& p, const GridGeometry& grid,
                           const std::vector<double>& phi) {
  validate(p);
  if (phi.size() != grid.size()) throw DomainError("gp_energy: profile does not match the grid");
  for (double x : phi)
    if (!std::isfinite(x)) throw DomainError("gp_energy: profile is not finite");
  const double norm = norm2(grid, phi);
  if (std::abs(norm - p.N) > 1e-6 * p.N)
    throw DomainError("gp_energy: normalization off by more than 1e-6 relative; project first");
  GPProblem q = p;
  q.grid = grid.radial ? GridSpec{RadialGrid{grid.axis.back() + 0.5 * grid.spacing, grid.size()}}
                       : GridSpec{TensorGrid{-grid.axis.front() + 0.5 * grid.spacing,
                                             grid.points_per_axis}};
  const Discretization d = discretize(q);
  return energy_with(d, p, phi, gp_coupling(p, grid, phi));
}

GPSolution gp_minimize(const GPProblem& p) {
  if (p.mode == CouplingMode::thomas_fermi) return tf_minimize(p);
  const Discretization d = discretize(p);
  FlowState st;
  st.phi = initial_profile(p, d.grid);
  std::size_t budget = p.options.max_iterations;

  if (p.mode == CouplingMode::fixed_3d) {
    flow(d, p, 4.0 * kPi * p.units.mu * p.a, st, budget);
    return finish(d, p, std::move(st));
  }

  std::vector<double> couplings;
  double g = gp_2d_coupling(p, d.grid, st.phi);
  couplings.push_back(g);
  bool settled = false;
  for (std::size_t k = 0; k < p.options.max_refreshes; ++k) {
    st.converged = false;
    st.chemical_potential = 0.0;
    flow(d, p, g, st, budget);
    const double g_new = gp_2d_coupling(p, d.grid, st.phi);
    couplings.push_back(g_new);
    const bool small = std::abs(g_new - g) <= p.options.coupling_tolerance * g;
    g = g_new;
    if (small && st.converged) {
      settled = true;
      break;
    }
    if (budget == 0) break;
  }
  // final inner solve at the settled coupling so the residual refers to it
  st.converged = false;
  st.chemical_potential = 0.0;
  flow(d, p, g, st, budget);
  st.converged = st.converged && settled;
  GPSolution sol = finish(d, p, std::move(st));
  sol.coupling_history = std::move(couplings);
  return sol;
}

GPSolution tf_minimize(const GPProblem& p) {
  validate(p);
  if (!(p.a > 0.0)) throw DomainError("tf_minimize: Thomas-Fermi theory is degenerate at a = 0");
  GPProblem q = p;
  q.mode = CouplingMode::thomas_fermi;
  const Discretization d = discretize(q);
  std::vector<double> phi = initial_profile(q, d.grid);
  double g = q.dimension == 3 ? 4.0 * kPi * q.units.mu * q.a : gp_2d_coupling(q, d.grid, phi);

  FlowState st;
  std::vector<double> couplings{g};
  std::size_t total_steps = 0;
  for (std::size_t k = 0; k < q.options.max_refreshes; ++k) {
    std::size_t steps = 0;
    const double mu_c = tf_chemical_potential(d, g, q.N, steps);
    total_steps += steps;
    for (std::size_t i = 0; i < phi.size(); ++i)
      phi[i] = std::sqrt(std::max(0.0, (mu_c - d.V[i]) / (2.0 * g)));
    normalize(d.grid, phi, q.N);
    st.chemical_potential = mu_c;
    if (q.dimension == 3) {
      st.converged = true;
      break;
    }
    const double g_new = gp_2d_coupling(q, d.grid, phi);
    couplings.push_back(g_new);
    const bool small = std::abs(g_new - g) <= q.options.coupling_tolerance * g;
    g = g_new;
    if (small) {
      // recompute with the settled coupling
      const double mu2 = tf_chemical_potential(d, g, q.N, steps);
      for (std::size_t i = 0; i < phi.size(); ++i)
        phi[i] = std::sqrt(std::max(0.0, (mu2 - d.V[i]) / (2.0 * g)));
      normalize(d.grid, phi, q.N);
      st.chemical_potential = mu2;
      st.converged = true;
      break;
    }
  }
  st.phi = std::move(phi);
  st.iterations = total_steps;
  st.residual = 0.0;
  GPSolution sol = finish(d, q, std::move(st));
  sol.energy_history.push_back(sol.energy.total);
  if (q.dimension == 2) sol.coupling_history = std::move(couplings);
  return sol;
}

TfClosedForm tf_harmonic_closed_form(double N, double a, double omega, const Units& units) {
  units.require(Convention::dilute, "tf_harmonic_closed_form");
  if (!(N > 0.0) || !(a > 0.0) || !(omega > 0.0))
    throw DomainError("tf_harmonic_closed_form: need N, a, omega > 0");
  const double g = 4.0 * kPi * units.mu * a;
  const double k = kappa(omega, units);
  TfClosedForm out;
  out.chemical_potential = std::pow(15.0 * g * N * std::pow(k, 1.5) / (4.0 * kPi), 0.4);
  out.energy = 5.0 / 7.0 * N * out.chemical_potential;
  out.radius = std::sqrt(out.chemical_potential / k);
  return out;
}

LimitScan gp_limit_scan(const TrapPotential& trap, double Na, const std::vector<double>& N_list,
                        const Units& units, const GridSpec& grid, const GPOptions& options) {
  if (!(Na >= 0.0)) throw DomainError("gp_limit_scan: need Na >= 0");
  if (N_list.empty()) throw DomainError("gp_limit_scan: empty N list");
  for (std::size_t i = 0; i < N_list.size(); ++i) {
    if (!(N_list[i] > 0.0)) throw DomainError("gp_limit_scan: N must be > 0");
    if (i > 0 && !(N_list[i] > N_list[i - 1])) throw DomainError("gp_limit_scan: N list must increase");
  }
  LimitScan scan;
  std::vector<double> tf_density;
  for (double N : N_list) {
    GPProblem p;
    p.dimension = 3;
    p.trap = trap;
    p.N = N;
    p.a = Na / N;
    p.units = units;
    p.mode = CouplingMode::fixed_3d;
    p.grid = grid;
    p.options = options;
    const GPSolution s = gp_minimize(p);
    LimitRow row;
    row.N = N;
    row.a = p.a;
    row.energy_per_particle = s.energy.total / N;
    row.chemical_potential = s.chemical_potential;
    row.converged = s.converged;
    row.rescaled_density = s.density();
    for (double& x : row.rescaled_density) x /= N;
    if (scan.rows.empty()) {
      scan.grid = s.grid;
      if (Na > 0.0) {
        tf_density = tf_minimize(p).density();
        for (double& x : tf_density) x /= N;
      }
    }
    const auto& w = scan.grid.weights;
    for (std::size_t i = 0; i < w.size(); ++i) {
      if (!tf_density.empty()) row.l1_to_tf += w[i] * std::abs(row.rescaled_density[i] - tf_density[i]);
      if (!scan.rows.empty())
        row.l1_to_first += w[i] * std::abs(row.rescaled_density[i] - scan.rows.front().rescaled_density[i]);
    }
    scan.rows.push_back(std::move(row));
  }
  return scan;
}

}  // namespace bosegas
