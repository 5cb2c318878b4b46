#include <gtest/gtest.h>

#include <cmath>
#include <vector>

#include "bosegas/charged_gas.hpp"
#include "bosegas/dilute_bounds.hpp"
#include "bosegas/errors.hpp"
#include "bosegas/gp_solver.hpp"
#include "bosegas/potentials.hpp"
#include "bosegas/scattering.hpp"
#include "oracles.hpp"

using namespace bosegas;

namespace {

constexpr std::array<double, 3> kOptimal{1.8686417590626825, 0.6870276401385266, 0.5540583159115735};

PairPotential random_potential(oracle::SplitMix& g) {
  switch (g.index(0, 3)) {
    case 0:
      return PairPotential::hard_core(g.uniform(0.1, 3.0));
    case 1:
      return PairPotential::square_well(g.log_uniform(1e-3, 1e3), g.uniform(0.1, 3.0));
    case 2: {
      std::vector<double> r{0.0}, v{g.log_uniform(1e-2, 1e2)};
      const std::size_t n = g.index(2, 8);
      for (std::size_t i = 1; i < n; ++i) {
        r.push_back(r.back() + g.uniform(0.05, 0.5));
        v.push_back(g.uniform(0.0, 5.0));
      }
      v.back() = 0.0;
      return PairPotential::tabulated(r, v);
    }
    default:
      return PairPotential::power_tail(g.log_uniform(1e-2, 1e2), g.uniform(0.2, 2.0), g.uniform(0.1, 2.0),
                                       g.uniform(0.1, 2.0));
  }
}

}  // namespace

TEST(Property, PotentialsAreNonNegative) {
  oracle::SplitMix g(11);
  for (int trial = 0; trial < 200; ++trial) {
    const auto p = random_potential(g);
    for (int k = 0; k < 50; ++k) {
      const double r = g.uniform(0.0, 10.0);
      EXPECT_GE(p(r), 0.0) << p.name() << " at r = " << r;
    }
    if (p.has_finite_range()) EXPECT_EQ(p(p.range() * 1.001 + 1e-9), 0.0) << p.name();
  }
}

TEST(Property, SquareWellLengthMatchesClosedForm) {
  oracle::SplitMix g(12);
  for (int trial = 0; trial < 40; ++trial) {
    const double h = g.log_uniform(1e-4, 1e2);
    const double R0 = g.uniform(0.2, 3.0);
    const double a = scattering_length(PairPotential::square_well(h, R0), Units::dilute());
    const double ref = oracle::square_well_a_3d(h, R0, 1.0);
    EXPECT_NEAR(a / ref, 1.0, 1e-8) << "h = " << h << ", R0 = " << R0;
    EXPECT_GE(a, 0.0);
    EXPECT_LE(a, R0);
  }
}

TEST(Property, LengthIsMonotoneInHeight) {
  oracle::SplitMix g(13);
  for (int trial = 0; trial < 20; ++trial) {
    const double R0 = g.uniform(0.2, 3.0);
    double h = g.log_uniform(1e-3, 1e-1);
    double previous = 0.0;
    for (int step = 0; step < 5; ++step) {
      const double a = scattering_length(PairPotential::square_well(h, R0), Units::dilute());
      EXPECT_GT(a, previous);
      EXPECT_LE(a, scattering_length(PairPotential::hard_core(R0), Units::dilute()) * (1.0 + 1e-12));
      previous = a;
      h *= g.uniform(1.5, 10.0);
    }
  }
}

TEST(Property, LengthIsMonotoneInPotential) {
  // v1 <= v2 pointwise implies a(v1) <= a(v2)
  oracle::SplitMix g(14);
  for (int trial = 0; trial < 30; ++trial) {
    const std::size_t n = g.index(2, 6);
    std::vector<double> r{0.0}, v1, v2;
    for (std::size_t i = 0; i < n; ++i) {
      if (i) r.push_back(r.back() + g.uniform(0.1, 0.6));
      const double x = g.uniform(0.0, 3.0);
      v1.push_back(x);
      v2.push_back(x + g.uniform(0.0, 2.0));
    }
    v1.back() = v2.back() = 0.0;
    const double a1 = scattering_length(PairPotential::tabulated(r, v1), Units::dilute());
    const double a2 = scattering_length(PairPotential::tabulated(r, v2), Units::dilute());
    EXPECT_LE(a1, a2 * (1.0 + 1e-9) + 1e-12);
  }
}

TEST(Property, DysonMarginNonNegative) {
  oracle::SplitMix g(15);
  for (int trial = 0; trial < 30; ++trial) {
    const double R0 = g.uniform(0.3, 2.0);
    const auto p = g.index(0, 1) ? PairPotential::hard_core(R0)
                                 : PairPotential::square_well(g.log_uniform(0.1, 100.0), R0);
    const double a = scattering_length(p, Units::dilute());
    const double R1 = R0 * g.uniform(2.0, 6.0);
    const auto profile = seeded_test_profile(g.next(), trial, p.core_radius(), R1);
    const SoftPotential U = ShellU{R0, R0 + g.uniform(0.1, 1.0) * (R1 - R0), g.uniform(0.0, 1.0)};
    const auto m = verify_dyson_lemma(p, a, U, profile, R1, 3);
    EXPECT_GE(m.margin, -1e-8 * std::max(1.0, std::abs(m.lhs))) << "trial " << trial;
  }
}

TEST(Property, TempleKNonIncreasingInParticleNumber) {
  oracle::SplitMix g(21);
  int valid_chains = 0;
  for (int trial = 0; trial < 100; ++trial) {
    const double ell = g.log_uniform(1e4, 1e7);
    const double R = g.uniform(0.02, 0.2) * ell;
    const double R0 = g.uniform(0.1, 1.0) * std::min(R, 1.0);
    const double eps = g.uniform(0.05, 0.5);
    double previous = 1.0;
    for (double n = 2.0; n <= 40.0; n += 1.0) {
      const auto K = temple_K(n, ell, R, R0, eps, 1.0);
      EXPECT_GE(K.value, 0.0);
      EXPECT_LE(K.value, 1.0);
      if (!K.valid) break;
      EXPECT_LE(K.value, previous * (1.0 + 1e-12)) << "n = " << n;
      previous = K.value;
      if (n == 10.0) ++valid_chains;
    }
  }
  EXPECT_GT(valid_chains, 50);
}

TEST(Property, BoundsBracketOne) {
  oracle::SplitMix g(22);
  int positive = 0;
  for (int trial = 0; trial < 60; ++trial) {
    const double Y = g.log_uniform(1e-24, 1e-8);
    const auto gas = GasParameter::from_Y(Y, 1.0);
    const auto params = ansatz_parameters(gas, 1.0, kOptimal);
    const auto rep = lower_bound_ratio(gas, params);
    EXPECT_GE(rep.lower, 0.0);
    EXPECT_LE(rep.lower, 1.0) << "Y = " << Y;
    EXPECT_GE(upper_bound_ratio(Y), 1.0) << "Y = " << Y;
    EXPECT_LE(rep.lower, rep.upper);
    if (rep.lower > 0.0) ++positive;
  }
  EXPECT_GT(positive, 30);
}

TEST(Property, LowerBoundImprovesAsYShrinks) {
  oracle::SplitMix g(23);
  for (int trial = 0; trial < 30; ++trial) {
    const double Y = g.log_uniform(1e-22, 1e-14);
    const double Y2 = Y * g.log_uniform(1e-3, 1e-1);
    const auto lower = [](double y) {
      const auto gas = GasParameter::from_Y(y, 1.0);
      return lower_bound_ratio(gas, ansatz_parameters(gas, 1.0, kOptimal)).lower;
    };
    EXPECT_GE(lower(Y2), lower(Y) - 1e-12) << "Y = " << Y;
  }
}

TEST(Property, UpperBoundDecreasesToOne) {
  oracle::SplitMix g(24);
  for (int trial = 0; trial < 100; ++trial) {
    const double Y = g.log_uniform(1e-30, 1e-2);
    EXPECT_GE(upper_bound_ratio(Y), upper_bound_ratio(Y * 0.5));
    EXPECT_NEAR(upper_bound_ratio(Y), oracle::upper_bound_ratio(Y), 1e-12 * upper_bound_ratio(Y));
  }
}

TEST(Property, CellBruteForceNotBelowAnalytic) {
  oracle::SplitMix g(25);
  OccupancyOptions opts;
  opts.denominator = 4;
  opts.n_max = 12;
  for (int trial = 0; trial < 40; ++trial) {
    const double k = static_cast<double>(g.index(4, 16)) / 4.0;
    const std::size_t p = g.index(2, 24);
    const double brute = cell_occupancy_minimize(k, p, OccupancyMode::brute_force, opts);
    const double analytic = cell_occupancy_minimize(k, p, OccupancyMode::analytic);
    EXPECT_GE(brute, analytic - 1e-12) << "k = " << k << ", p = " << p;
  }
}

TEST(Property, BogolubovBranch) {
  oracle::SplitMix g(31);
  for (int trial = 0; trial < 1000; ++trial) {
    const double p = g.log_uniform(1e-4, 1e4);
    const double rho = g.log_uniform(1e-6, 1e6);
    const auto m = bogolubov_coefficients(p, rho);
    EXPECT_GT(m.beta, 0.0);
    EXPECT_LT(m.beta, 1.0);
    EXPECT_LT(m.residual, 1e-12);
    EXPECT_LT(pairing_kernel(rho, p).collapse_residual, 1e-12);
  }
}

TEST(Property, GpInvariants) {
  oracle::SplitMix g(41);
  for (int trial = 0; trial < 8; ++trial) {
    GPProblem p;
    p.N = g.log_uniform(1.0, 1e4);
    p.a = g.log_uniform(1e-5, 1e-1);
    p.trap = TrapPotential::harmonic(g.uniform(0.5, 2.0));
    const auto s = gp_minimize(p);
    ASSERT_TRUE(s.converged);
    double norm = 0.0;
    for (std::size_t i = 0; i < s.phi.size(); ++i) norm += s.grid.weights[i] * s.phi[i] * s.phi[i];
    EXPECT_NEAR(norm / p.N, 1.0, 1e-12);
    EXPECT_LT(s.identity_residual, 1e-6);
    EXPECT_GE(s.energy.total, tf_minimize(p).energy.total);
    EXPECT_GE(s.energy.total / p.N, p.trap.harmonic_ground_energy(3) * (1.0 - 1e-4));
  }
}
