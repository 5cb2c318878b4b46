#include <gtest/gtest.h>

#include <cmath>
#include <numbers>
#include <vector>

#include "bosegas/errors.hpp"
#include "bosegas/gp_solver.hpp"

using namespace bosegas;

namespace {

constexpr double kPi = std::numbers::pi;

GPProblem harmonic(double N, double a) {
  GPProblem p;
  p.N = N;
  p.a = a;
  return p;
}

double norm2(const GridGeometry& g, const std::vector<double>& phi) {
  double s = 0.0;
  for (std::size_t i = 0; i < phi.size(); ++i) s += g.weights[i] * phi[i] * phi[i];
  return s;
}

// sqrt(N) times the normalized Gaussian exp(-r^2 / (2 w^2)) on the grid
std::vector<double> gaussian(const GridGeometry& g, double N, double w) {
  std::vector<double> phi(g.size());
  for (std::size_t i = 0; i < phi.size(); ++i) phi[i] = std::exp(-g.radius[i] * g.radius[i] / (2.0 * w * w));
  const double s = std::sqrt(N / norm2(g, phi));
  for (double& x : phi) x *= s;
  return phi;
}

}  // namespace

TEST(GpEnergy, UniformBoxProfile) {
  GPProblem p;
  p.trap = TrapPotential::box(10.0);
  p.N = 500.0;
  p.a = 0.01;
  const auto g = make_grid(p);
  std::vector<double> phi(g.size(), std::sqrt(p.N / 1000.0));
  const auto e = gp_energy(p, g, phi);
  EXPECT_NEAR(e.kinetic, 0.0, 1e-12);
  EXPECT_NEAR(e.trap, 0.0, 1e-12);
  EXPECT_NEAR(e.interaction, 4.0 * kPi * p.a * p.N * p.N / 1000.0, 1e-10);
  EXPECT_NEAR(e.total, e.kinetic + e.trap + e.interaction, 1e-12);
}

TEST(GpEnergy, FreeGroundStateGivesNLambda) {
  const auto p = harmonic(10.0, 0.0);
  const auto g = make_grid(p);
  // oscillator length sqrt(2 mu / omega) = sqrt(2)
  const auto phi = gaussian(g, p.N, std::sqrt(2.0));
  const auto e = gp_energy(p, g, phi);
  EXPECT_NEAR(e.total / (p.N * 1.5), 1.0, 1e-4);
}

TEST(GpEnergy, WrongWidthCostsEnergy) {
  const auto p = harmonic(10.0, 0.0);
  const auto g = make_grid(p);
  const double best = gp_energy(p, g, gaussian(g, p.N, std::sqrt(2.0))).total;
  for (double f : {0.7, 1.3}) EXPECT_GT(gp_energy(p, g, gaussian(g, p.N, f * std::sqrt(2.0))).total, best);
}

TEST(GpEnergy, RejectsUnnormalizedProfile) {
  const auto p = harmonic(10.0, 0.0);
  const auto g = make_grid(p);
  auto phi = gaussian(g, p.N, 1.0);
  phi[0] *= 2.0;
  EXPECT_THROW(gp_energy(p, g, phi), DomainError);
}

TEST(GpMinimize, FreeHarmonicTrap) {
  const auto s = gp_minimize(harmonic(10.0, 0.0));
  EXPECT_TRUE(s.converged);
  EXPECT_NEAR(s.energy.total / (10.0 * 1.5), 1.0, 1e-4);
  EXPECT_NEAR(s.chemical_potential, 1.5, 1e-4);
}

TEST(GpMinimize, SecondOrderGridConvergence) {
  std::vector<double> err;
  for (std::size_t n : {200u, 400u, 800u}) {
    auto p = harmonic(10.0, 0.0);
    p.grid = RadialGrid{0.0, n};
    err.push_back(std::abs(gp_minimize(p).energy.total / 15.0 - 1.0));
  }
  EXPECT_NEAR(err[0] / err[1], 4.0, 0.2);
  EXPECT_NEAR(err[1] / err[2], 4.0, 0.2);
}

TEST(GpMinimize, InvariantsAtModerateCoupling) {
  const auto p = harmonic(1000.0, 0.01);
  const auto s = gp_minimize(p);
  ASSERT_TRUE(s.converged);
  EXPECT_NEAR(norm2(s.grid, s.phi) / p.N, 1.0, 1e-12);
  for (double x : s.phi) EXPECT_GE(x, 0.0);
  for (std::size_t i = 1; i < s.energy_history.size(); ++i)
    EXPECT_LE(s.energy_history[i], s.energy_history[i - 1] * (1.0 + 1e-12));
  const double mu = (s.energy.kinetic + s.energy.trap + 2.0 * s.energy.interaction) / p.N;
  EXPECT_NEAR(s.chemical_potential, mu, 1e-6 * mu);
  EXPECT_LT(s.identity_residual, 1e-6);
  EXPECT_NEAR(s.energy.total, s.energy.kinetic + s.energy.trap + s.energy.interaction, 1e-10 * s.energy.total);
}

TEST(GpMinimize, DiluteBoxApproachesHomogeneousEnergy) {
  GPProblem p;
  p.trap = TrapPotential::box(1000.0);
  p.N = 1000.0;
  p.a = 1e-3;
  const auto s = gp_minimize(p);
  const double hom = 4.0 * kPi * p.a * p.N / 1e9;
  EXPECT_NEAR(s.energy.total / p.N, hom, 0.03 * hom);
}

TEST(GpMinimize, StrongCouplingNearThomasFermi) {
  const auto p = harmonic(1000.0, 0.1);  // Na = 100
  const auto s = gp_minimize(p);
  const auto tf = tf_harmonic_closed_form(p.N, p.a, 1.0, Units::dilute());
  EXPECT_NEAR(s.energy.total / tf.energy, 1.0, 0.02);
}

TEST(GpMinimize, VeryStrongCouplingNearThomasFermi) {
  const auto p = harmonic(1000.0, 1.0);  // Na = 1000
  const auto s = gp_minimize(p);
  const auto tf = tf_harmonic_closed_form(p.N, p.a, 1.0, Units::dilute());
  EXPECT_GT(s.energy.total, tf.energy);
  EXPECT_NEAR(s.energy.total / tf.energy, 1.00827, 1e-4);
}

TEST(GpMinimize, AnisotropicTensorGrid) {
  GPProblem p;
  p.trap = TrapPotential::harmonic({1.0, 1.5, 2.0});
  p.N = 100.0;
  p.a = 0.01;
  const auto s = gp_minimize(p);
  EXPECT_TRUE(s.converged);
  EXPECT_FALSE(s.grid.radial);
  EXPECT_GT(s.energy.total / p.N, 2.25);
  EXPECT_LT(s.identity_residual, 1e-6);
  EXPECT_GE(s.energy.total, tf_minimize(p).energy.total);
}

TEST(GpMinimize, RejectsBadProblems) {
  auto p = harmonic(10.0, -1.0);
  EXPECT_THROW(gp_minimize(p), DomainError);
  p = harmonic(10.0, 0.1);
  p.dimension = 2;
  EXPECT_THROW(gp_minimize(p), DomainError);  // fixed 3D coupling in 2D
  p = harmonic(0.0, 0.1);
  EXPECT_THROW(gp_minimize(p), DomainError);
  p = harmonic(10.0, 0.1);
  p.grid = RadialGrid{8.0, 10};
  EXPECT_THROW(gp_minimize(p), DomainError);  // spacing does not resolve the trap
}

TEST(TfMinimize, InvertedParabola) {
  const auto p = harmonic(1000.0, 1.0);
  const auto s = tf_minimize(p);
  const auto cf = tf_harmonic_closed_form(p.N, p.a, 1.0, Units::dilute());
  EXPECT_NEAR(s.chemical_potential / cf.chemical_potential, 1.0, 1e-4);
  EXPECT_NEAR(s.energy.total / cf.energy, 1.0, 1e-4);
  const double g = 4.0 * kPi * p.a;
  for (std::size_t i = 0; i < s.phi.size(); i += 37) {
    const double r = s.grid.radius[i];
    const double ref = std::max(0.0, (cf.chemical_potential - r * r / 4.0) / (2.0 * g));
    EXPECT_NEAR(s.phi[i] * s.phi[i], ref, 1e-3 * cf.chemical_potential / (2.0 * g));
  }
}

TEST(TfMinimize, ChemicalPotentialScaling) {
  const auto a = tf_harmonic_closed_form(1000.0, 1.0, 1.0, Units::dilute());
  const auto b = tf_harmonic_closed_form(1000.0, 10.0, 1.0, Units::dilute());
  EXPECT_NEAR(b.chemical_potential / a.chemical_potential, std::pow(10.0, 0.4), 1e-12);
  // E = (5/7) mu N
  EXPECT_NEAR(a.energy, 5.0 / 7.0 * a.chemical_potential * 1000.0, 1e-9 * a.energy);
}

TEST(TfMinimize, UniformInBox) {
  GPProblem p;
  p.trap = TrapPotential::box(10.0);
  p.N = 100.0;
  p.a = 0.01;
  const auto s = tf_minimize(p);
  for (double x : s.phi) EXPECT_NEAR(x * x, 0.1, 1e-12);
}

TEST(TfMinimize, LowerThanGp) {
  for (double a : {0.001, 0.01, 0.1}) {
    const auto p = harmonic(1000.0, a);
    EXPECT_LE(tf_minimize(p).energy.total, gp_minimize(p).energy.total) << "a = " << a;
  }
  EXPECT_THROW(tf_minimize(harmonic(10.0, 0.0)), DomainError);
}

TEST(LimitScan, WeakCouplingScaleInvariance) {
  const auto scan = gp_limit_scan(TrapPotential::harmonic(1.0), 1.0, {10.0, 100.0, 1000.0});
  ASSERT_EQ(scan.rows.size(), 3u);
  for (const auto& r : scan.rows) {
    EXPECT_TRUE(r.converged);
    EXPECT_NEAR(r.energy_per_particle, scan.rows[0].energy_per_particle, 1e-9);
    EXPECT_LT(r.l1_to_first, 1e-8);
  }
}

TEST(LimitScan, NoInteractionGivesLambda) {
  const auto scan = gp_limit_scan(TrapPotential::harmonic(1.0), 0.0, {10.0, 1000.0});
  for (const auto& r : scan.rows) EXPECT_NEAR(r.energy_per_particle, 1.5, 1.5e-4);
}

TEST(LimitScan, StrongCouplingProfileNearThomasFermi) {
  const auto scan = gp_limit_scan(TrapPotential::harmonic(1.0), 1000.0, {100.0, 1000.0});
  for (const auto& r : scan.rows) EXPECT_LT(r.l1_to_tf, 0.02) << "N = " << r.N;
}

TEST(LimitScan, StrongCouplingProfileFrozen) {
  const auto scan = gp_limit_scan(TrapPotential::harmonic(1.0), 1000.0, {100.0, 1000.0});
  for (const auto& r : scan.rows) EXPECT_NEAR(r.l1_to_tf, 0.0245, 5e-4) << "N = " << r.N;
}

TEST(Coupling2D, UniformBox) {
  GPProblem p;
  p.dimension = 2;
  p.mode = CouplingMode::fixed_2d_logbar;
  p.trap = TrapPotential::box(10.0);
  p.N = 100.0;
  p.a = 1e-3;
  const auto g = make_grid(p);
  std::vector<double> phi(g.size(), std::sqrt(p.N / 100.0));
  const double rho = p.N / 100.0;
  EXPECT_NEAR(gp_2d_coupling(p, g, phi), 4.0 * kPi / std::abs(std::log(rho * p.a * p.a)), 1e-12);
}

TEST(Coupling2D, VanishesLogarithmically) {
  GPProblem p;
  p.dimension = 2;
  p.mode = CouplingMode::fixed_2d_logbar;
  p.trap = TrapPotential::box(10.0);
  p.N = 100.0;
  p.a = 1e-2;
  const auto g = make_grid(p);
  std::vector<double> phi(g.size(), 1.0);
  const std::vector<double> as{1e-2, 1e-4, 1e-8, 1e-16};
  std::vector<double> inverse;
  for (double a : as) {
    p.a = a;
    inverse.push_back(1.0 / gp_2d_coupling(p, g, phi));
  }
  // 1/g = |ln rho_bar + 2 ln a| / (4 pi): linear in ln a once rho_bar a^2 < 1
  for (std::size_t i = 1; i < as.size(); ++i)
    EXPECT_NEAR(inverse[i] - inverse[i - 1], 2.0 * std::log(as[i - 1] / as[i]) / (4.0 * kPi), 1e-12);
  EXPECT_LT(1.0 / inverse.back(), 0.2);
}

TEST(Coupling2D, SelfConsistentFixedPoint) {
  GPProblem p;
  p.dimension = 2;
  p.mode = CouplingMode::fixed_2d_logbar;
  p.N = 1000.0;
  p.a = 1e-3;
  const auto s = gp_minimize(p);
  EXPECT_TRUE(s.converged);
  ASSERT_GE(s.coupling_history.size(), 2u);
  const double last = s.coupling_history.back();
  const double before = s.coupling_history[s.coupling_history.size() - 2];
  EXPECT_LT(std::abs(last - before), 1e-6 * last);
  EXPECT_NEAR(s.energy.coupling, 4.0 * kPi / std::abs(std::log(s.rho_bar * p.a * p.a)), 1e-9);
}
