#pragma once

#include <cstddef>
#include <cstdint>
#include <functional>
#include <variant>
#include <vector>

#include "bosegas/potentials.hpp"
#include "bosegas/units.hpp"

namespace bosegas {

/// Raised when a 2D profile carries no logarithm (psi constant, v = 0),
/// so no scattering length can be read off.
class NoLogarithmError : public DomainError {
 public:
  using DomainError::DomainError;
};

/// Zero-energy two-body solution on a radial grid.
///
/// In 3D `u` holds the reduced radial function u0 (u0(0) = 0) and `du` its
/// derivative; in 2D they hold psi and psi'. The overall normalization is the
/// start condition (unit slope at the origin or at the core edge) and is
/// recorded in `start_slope` / `asymptotic_slope`.
struct ScatteringSolution {
  int dimension = 3;
  std::vector<double> r;
  std::vector<double> u;
  std::vector<double> du;
  /// u (or psi) minus the free solution through the start condition;
  /// fitted instead of u when present, so small a keeps its digits.
  std::vector<double> deviation;
  double a = 0.0;                ///< scattering length (NaN when not extractable)
  double residual = 0.0;         ///< relative rms misfit of the asymptotic form
  double window_lo = 0.0;        ///< fit window [window_lo, window_hi]
  double window_hi = 0.0;
  double start_slope = 1.0;
  double asymptotic_slope = 0.0; ///< c in u0 ~ c (r - a) or psi ~ c ln(r/a)
  std::size_t substeps = 0;      ///< RK4 steps per grid interval after refinement
  bool refined = true;           ///< step refinement met its tolerance

  // power-law tail bookkeeping (zero for finite-range potentials)
  double tail_amplitude = 0.0;
  double tail_epsilon = 0.0;
  double tail_correction = 0.0;  ///< first-order change of a from r > r_max
  double tail_cutoff = 0.0;      ///< radius where the tail's Born share of a drops below 1e-10 a
  double mu = 1.0;
};

/// Result of an asymptotic extraction.
struct LengthFit {
  double a = 0.0;
  double residual = 0.0;
  double slope = 0.0;
  double window_lo = 0.0;
  double window_hi = 0.0;
};

struct ScatteringOptions {
  double refine_tol = 1e-10;      ///< relative change of a that stops step doubling
  std::size_t max_substeps = 4096;
  double window_fraction = 0.2;   ///< outer fraction of the grid used for the fit
};

/// Integrates -2 mu u'' + v u = 0 (3D, reduced form) or the radial 2D
/// equation outward from the origin (or from a hard-core edge with u = 0).
/// Fixed-step RK4 on every grid interval; the number of steps per interval
/// is doubled until the extracted scattering length settles.
ScatteringSolution solve_zero_energy(const PairPotential& p, const Units& units, double r_max,
                                     std::size_t n_points, int dimension = 3,
                                     const ScatteringOptions& opts = {});

/// a = lim r - u0/u0', by least squares of u0 = c (r - a) over the fit window.
LengthFit scattering_length_3d(const ScatteringSolution& s, double potential_range,
                               double window_fraction = 0.2);
/// a from psi = c ln(r / a) over the fit window. Throws NoLogarithmError
/// when psi is constant.
LengthFit scattering_length_2d(const ScatteringSolution& s, double potential_range,
                               double window_fraction = 0.2);

/// Convenience: solve on a default grid and return a.
double scattering_length(const PairPotential& p, const Units& units, int dimension = 3);

/// Integral of v over R^3. Throws DomainError for a hard core (divergent).
double born_approximation(const PairPotential& p, const Units& units);

struct IdentityCheck {
  double ratio = 0.0;           ///< int_{|x|<=R} (2 mu |grad f0|^2 + v f0^2) / (8 pi mu a)
  double boundary_ratio = 0.0;  ///< u0(R)/R with u0 ~ r - a at infinity
  double a = 0.0;
  bool degenerate = false;      ///< a = 0: both sides vanish
};

/// Quadratic form of the scattering solution on the ball of radius R,
/// normalized so that f0 = u0/r -> 1 at infinity, divided by 8 pi mu a.
IdentityCheck energy_identity_check(const PairPotential& p, const Units& units, double R,
                                    std::size_t n_points = 4000);

// ---------------------------------------------------------------------------
// Dyson lemma
// ---------------------------------------------------------------------------

/// Radial test function with its derivative.
struct RadialProfile {
  std::function<double(double)> value;
  std::function<double(double)> derivative;
};

/// Soft potential U used in the Dyson lemma. `weight` in [0, 1] is the share
/// of the allowed normalization (int U r^2 dr in 3D, int U ln(r/a) r dr in 2D).
struct ShellU {
  double r_in;
  double r_out;
  double weight = 1.0;
};
struct DeltaU {
  double radius;
  double weight = 1.0;
};
/// Arbitrary U(r) supported in [r_in, r_out]; normalization is checked.
struct FunctionU {
  std::function<double(double)> u;
  double r_in;
  double r_out;
};
struct ZeroU {};

using SoftPotential = std::variant<ZeroU, ShellU, DeltaU, FunctionU>;

struct DysonMargin {
  double lhs = 0.0;
  double rhs = 0.0;
  double margin = 0.0;  ///< lhs - rhs
  double a = 0.0;
};

/// Evaluates both sides of the Dyson lemma on the ball (3D) or disc (2D) of
/// radius R1 for a radial psi:
///   3D: int [mu |grad psi|^2 + v psi^2 / 2]  >=  mu a int U psi^2
///   2D: int [mu |grad psi|^2 + v psi^2 / 2]  >=  mu   int U psi^2
/// Throws DomainError when U violates its support or normalization.
DysonMargin verify_dyson_lemma(const PairPotential& p, const SoftPotential& U,
                               const RadialProfile& psi, double R1, int dimension,
                               const Units& units = Units::dilute());

/// Same, with a precomputed scattering length.
DysonMargin verify_dyson_lemma(const PairPotential& p, double a, const SoftPotential& U,
                               const RadialProfile& psi, double R1, int dimension,
                               const Units& units = Units::dilute());

/// Smooth positive radial profile drawn from a seeded family. Vanishes for
/// r <= core_radius (like (1 - core/r)^q just outside it) so that it lies in
/// the form domain of a hard core. Deterministic in (seed, index).
RadialProfile seeded_test_profile(std::uint64_t seed, std::size_t index, double core_radius,
                                  double length_scale);

}  // namespace bosegas
