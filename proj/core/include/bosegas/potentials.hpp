#pragma once

#include <array>
#include <cstddef>
#include <limits>
#include <span>
#include <string>
#include <variant>
#include <vector>

#include "bosegas/units.hpp"

namespace bosegas {

inline constexpr double kInfinity = std::numeric_limits<double>::infinity();

// ---------------------------------------------------------------------------
// Pair potentials
// ---------------------------------------------------------------------------

/// v = +inf for r < radius, 0 otherwise.
struct HardCore {
  double radius;
};

/// v = height for r < range, 0 otherwise. height = 0 is the free case.
struct SquareWell {
  double height;
  double range;
};

/// Samples of v on a strictly increasing radial grid, linearly interpolated.
/// v is constant (= v[0]) below the first sample and zero beyond the last.
struct Tabulated {
  std::vector<double> r;
  std::vector<double> v;
};

/// v = height for r < range and amplitude * r^{-(3 + epsilon)} beyond.
struct PowerTail {
  double height;
  double range;
  double amplitude;
  double epsilon;
};

/// A nonnegative, spherically symmetric two-body potential. Immutable.
class PairPotential {
 public:
  using Kind = std::variant<HardCore, SquareWell, Tabulated, PowerTail>;

  static PairPotential hard_core(double radius);
  static PairPotential square_well(double height, double range);
  static PairPotential zero() { return square_well(0.0, 0.0); }
  static PairPotential tabulated(std::vector<double> r, std::vector<double> v);
  static PairPotential power_tail(double height, double range, double amplitude,
                                  double epsilon);

  /// v(r); +inf inside a hard core. r must be >= 0.
  double operator()(double r) const;

  const Kind& kind() const { return kind_; }
  std::string name() const;

  /// Smallest r beyond which v vanishes; +inf for power-law tails.
  double range() const;
  /// Radius of the hard core, 0 if there is none.
  double core_radius() const;
  bool has_hard_core() const { return core_radius() > 0.0; }
  bool has_finite_range() const { return range() < kInfinity; }
  bool is_zero() const;
  /// Radii where v or its derivative jumps (core edge, well edge, samples).
  std::vector<double> breakpoints() const;

 private:
  explicit PairPotential(Kind k) : kind_(std::move(k)) {}
  Kind kind_;
};

/// Free-function form: v(r) with r >= 0 checked.
double evaluate_potential(const PairPotential& p, double r);

// ---------------------------------------------------------------------------
// Trap potentials
// ---------------------------------------------------------------------------

/// V(x) = sum_i omega_i^2 x_i^2 / (4 mu). With hbar = 1 the one-body ground
/// state energy is lambda = (omega_1 + ... + omega_d) / 2 for any mu.
struct Harmonic {
  std::array<double, 3> omega{1.0, 1.0, 1.0};
};

enum class BoxBoundary { neumann, dirichlet };

/// V = 0 inside [-L/2, L/2]^d, infinite walls outside. The wall condition on
/// the wave function is a separate choice; Neumann keeps the constant state.
struct Box {
  double side;
  BoxBoundary boundary = BoxBoundary::neumann;
};

/// Isotropic V(|x|) sampled on a radial grid, linearly interpolated and
/// extrapolated linearly from the last two samples.
struct TabulatedRadial {
  std::vector<double> r;
  std::vector<double> v;
};

class TrapPotential {
 public:
  using Form = std::variant<Harmonic, Box, TabulatedRadial>;

  static TrapPotential harmonic(double omega) { return harmonic({omega, omega, omega}); }
  static TrapPotential harmonic(std::array<double, 3> omega);
  static TrapPotential box(double side, BoxBoundary boundary = BoxBoundary::neumann);
  static TrapPotential tabulated_radial(std::vector<double> r, std::vector<double> v);

  /// V at a point with `x.size()` = dimension.
  double operator()(std::span<const double> x, const Units& units) const;
  /// V at radius r; only for isotropic traps.
  double radial(double r, const Units& units) const;

  const Form& form() const { return form_; }
  bool confining() const { return true; }
  bool is_isotropic(int dimension) const;
  bool is_box() const { return std::holds_alternative<Box>(form_); }
  std::string name() const;

  /// One-body ground state energy when known in closed form (harmonic only).
  double harmonic_ground_energy(int dimension) const;
  /// Natural length of the trap: sqrt(2 mu / omega_min) or the box side.
  double length_scale(const Units& units) const;

 private:
  explicit TrapPotential(Form f) : form_(std::move(f)) {}
  Form form_;
};

}  // namespace bosegas
