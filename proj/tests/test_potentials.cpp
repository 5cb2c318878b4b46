#include <gtest/gtest.h>

#include <array>
#include <cmath>
#include <vector>

#include "bosegas/errors.hpp"
#include "bosegas/potentials.hpp"
#include "bosegas/units.hpp"

using namespace bosegas;

TEST(PairPotential, HardCoreInsideIsInfinite) {
  const auto p = PairPotential::hard_core(1.0);
  EXPECT_TRUE(std::isinf(evaluate_potential(p, 0.5)));
  EXPECT_EQ(evaluate_potential(p, 2.0), 0.0);
  EXPECT_EQ(p.core_radius(), 1.0);
  EXPECT_EQ(p.range(), 1.0);
}

TEST(PairPotential, SquareWellValues) {
  const auto p = PairPotential::square_well(3.5, 2.0);
  EXPECT_EQ(evaluate_potential(p, 1.0), 3.5);
  EXPECT_EQ(evaluate_potential(p, 2.5), 0.0);
  EXPECT_FALSE(p.has_hard_core());
  EXPECT_TRUE(p.has_finite_range());
}

TEST(PairPotential, ZeroPotential) {
  const auto p = PairPotential::zero();
  EXPECT_TRUE(p.is_zero());
  EXPECT_EQ(p(0.0), 0.0);
  EXPECT_EQ(p(10.0), 0.0);
}

TEST(PairPotential, TabulatedInterpolatesLinearly) {
  const auto p = PairPotential::tabulated({0.0, 1.0, 2.0}, {4.0, 2.0, 0.0});
  EXPECT_DOUBLE_EQ(p(0.5), 3.0);
  EXPECT_DOUBLE_EQ(p(1.5), 1.0);
  EXPECT_EQ(p(3.0), 0.0);
}

TEST(PairPotential, PowerTailDecays) {
  const auto p = PairPotential::power_tail(1.0, 1.0, 2.0, 0.5);
  EXPECT_EQ(p(0.5), 1.0);
  EXPECT_DOUBLE_EQ(p(4.0), 2.0 * std::pow(4.0, -3.5));
  EXPECT_FALSE(p.has_finite_range());
}

TEST(PairPotential, RejectsInvalidInput) {
  EXPECT_THROW(PairPotential::hard_core(0.0), DomainError);
  EXPECT_THROW(PairPotential::square_well(-1.0, 1.0), DomainError);
  EXPECT_THROW(PairPotential::power_tail(1.0, 1.0, 1.0, 0.0), DomainError);
  EXPECT_THROW(PairPotential::tabulated({0.0, 1.0}, {1.0, -1.0}), DomainError);
  EXPECT_THROW(PairPotential::tabulated({0.0, 0.0}, {1.0, 1.0}), DomainError);
  EXPECT_THROW(evaluate_potential(PairPotential::square_well(1.0, 1.0), -0.1), DomainError);
}

TEST(TrapPotential, HarmonicGroundEnergy) {
  const auto t = TrapPotential::harmonic({1.0, 2.0, 3.0});
  EXPECT_DOUBLE_EQ(t.harmonic_ground_energy(3), 3.0);
  EXPECT_DOUBLE_EQ(t.harmonic_ground_energy(2), 1.5);
  const std::array<double, 3> x{1.0, 0.0, 0.0};
  EXPECT_DOUBLE_EQ(t(x, Units::dilute()), 0.25);
  EXPECT_DOUBLE_EQ(t(x, Units::dilute(0.5)), 0.5);
}

TEST(TrapPotential, BoxIsInfiniteOutside) {
  const auto t = TrapPotential::box(2.0);
  const std::array<double, 3> in{0.5, -0.9, 0.0};
  const std::array<double, 3> out{1.5, 0.0, 0.0};
  EXPECT_EQ(t(in, Units::dilute()), 0.0);
  EXPECT_TRUE(std::isinf(t(out, Units::dilute())));
  EXPECT_TRUE(t.is_box());
}

TEST(Units, ConventionsAreChecked) {
  EXPECT_THROW(Units::dilute(0.0), DomainError);
  EXPECT_THROW(Units::charged().require(Convention::dilute, "test"), DomainError);
  EXPECT_NO_THROW(Units::dilute().require(Convention::dilute, "test"));
}

TEST(Units, WignerSeitzRoundTrip) {
  for (double rs : {0.1, 1.0, 7.5}) EXPECT_NEAR(wigner_seitz_radius(density_from_rs(rs)), rs, 1e-14 * rs);
  EXPECT_NEAR(density_from_rs(1.0), 3.0 / (4.0 * std::numbers::pi), 1e-16);
}
