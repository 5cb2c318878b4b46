#pragma once

#include <string_view>

#include "bosegas/errors.hpp"

namespace bosegas {

/// Which unit system a computation runs in.
///
///  - dilute: the kinetic term is -mu * Laplacian with mu = hbar^2/2m (default
///    mu = 1). Used by scattering, bounds and the GP solver.
///  - charged: hbar = m = e = 1, kinetic term -1/2 Laplacian (so mu = 1/2).
///    Used by the jellium module.
enum class Convention { dilute, charged };

constexpr std::string_view to_string(Convention c) {
  return c == Convention::dilute ? "dilute(mu=hbar^2/2m)" : "charged(hbar=m=e=1)";
}

struct Units {
  double mu = 1.0;
  Convention convention = Convention::dilute;

  static Units dilute(double mu = 1.0) {
    if (!(mu > 0.0)) throw DomainError("Units: mu must be positive");
    return Units{mu, Convention::dilute};
  }
  static constexpr Units charged() { return Units{0.5, Convention::charged}; }

  /// Throws unless this is the convention the caller works in.
  void require(Convention expected, std::string_view who) const;

  friend bool operator==(const Units&, const Units&) = default;
};

// ---------------------------------------------------------------------------
// Conversions. All of them are multiplicative rescalings; nothing else in the
// library converts units.
// ---------------------------------------------------------------------------

/// Length in units of the scattering length: r / a.
constexpr double in_scattering_lengths(double r, double a) { return r / a; }

/// Rescale an energy computed with mu_from to the equivalent value for mu_to
/// at fixed lengths (energies are linear in mu at zero interaction).
constexpr double rescale_kinetic_energy(double e, double mu_from, double mu_to) {
  return e * (mu_to / mu_from);
}

/// Bogolubov pairing coefficients are written in the normalization
///     A(1 + b^2) = p^2/2 + rho/p^2,   2 A b = rho/p^2,
/// which absorbs the 4 pi of the Coulomb transform and doubles the kinetic
/// term. In hbar = m = e = 1 the same quadratic form has
///     A(1 + b^2) = p^2/4 + 2 pi rho/p^2,   2 A b = 2 pi rho/p^2,
/// which is one half of the normalized form evaluated at density 4 pi rho.
/// Hence e_hartree(rho) = kBogolubovEnergyScale * e_norm(kBogolubovDensityScale * rho).
inline constexpr double kBogolubovDensityScale = 4.0 * 3.14159265358979323846;
inline constexpr double kBogolubovEnergyScale = 0.5;

/// Wigner-Seitz parameter in hbar = m = e = 1 units: r_s = (3 / (4 pi rho))^{1/3}.
double wigner_seitz_radius(double rho);
/// Inverse of wigner_seitz_radius.
double density_from_rs(double rs);

}  // namespace bosegas
