#pragma once

#include <cstddef>
#include <variant>
#include <vector>

#include "bosegas/potentials.hpp"
#include "bosegas/units.hpp"

namespace bosegas {

enum class CouplingMode {
  fixed_3d,         ///< g = 4 pi mu a
  fixed_2d_logbar,  ///< g = 4 pi mu / |ln(rho_bar a^2)|, refreshed in an outer loop
  thomas_fermi,     ///< gradient term dropped
};

/// Cell-centred radial grid r_i = (i + 1/2) h on [0, r_max], Dirichlet at
/// r_max. Zero fields are chosen from the trap.
struct RadialGrid {
  double r_max = 0.0;
  std::size_t points = 0;
};

/// Cell-centred tensor grid on [-half_width, half_width]^d. Box traps use the
/// box's own wall condition; all other traps use Dirichlet walls.
struct TensorGrid {
  double half_width = 0.0;
  std::size_t points_per_axis = 0;
};

/// monostate: radial for isotropic traps, tensor otherwise.
using GridSpec = std::variant<std::monostate, RadialGrid, TensorGrid>;

struct GPOptions {
  double tolerance = 1e-8;  ///< relative projected-gradient residual
  std::size_t max_iterations = 100000;
  double coupling_tolerance = 1e-9;  ///< relative change of g between 2D refreshes
  std::size_t max_refreshes = 200;
  /// Width of the Gaussian starting profile relative to the trap ground state.
  double initial_width_factor = 1.0;
};

struct GPProblem {
  int dimension = 3;
  TrapPotential trap = TrapPotential::harmonic(1.0);
  double N = 1.0;
  double a = 0.0;
  Units units = Units::dilute();
  CouplingMode mode = CouplingMode::fixed_3d;
  GridSpec grid;
  GPOptions options;
};

/// The discrete grid a problem is solved on.
struct GridGeometry {
  bool radial = true;
  int dimension = 3;
  std::size_t points_per_axis = 0;
  double spacing = 0.0;
  std::vector<double> axis;     ///< r_i, or the cell centres of one axis
  std::vector<double> weights;  ///< quadrature weight of every unknown
  std::vector<double> radius;   ///< |x| of every unknown

  std::size_t size() const { return weights.size(); }
  /// Coordinates of unknown i (for tensor grids; x-fastest ordering).
  std::vector<double> point(std::size_t i) const;
};

GridGeometry make_grid(const GPProblem& problem);

struct EnergyComponents {
  double kinetic = 0.0;
  double trap = 0.0;
  double interaction = 0.0;
  double total = 0.0;  ///< objective: kinetic is excluded in TF mode
  double coupling = 0.0;
  double rho_bar = 0.0;  ///< (1/N) int phi^4
};

struct GPSolution {
  GridGeometry grid;
  std::vector<double> phi;
  EnergyComponents energy;
  double chemical_potential = 0.0;  ///< Lagrange multiplier of the normalization
  /// |chemical_potential - (E_kin + E_trap + 2 E_int)/N| / |chemical_potential|.
  double identity_residual = 0.0;
  std::size_t iterations = 0;
  double residual = 0.0;
  double rho_bar = 0.0;
  bool converged = false;
  std::vector<double> energy_history;    ///< objective after every accepted step
  std::vector<double> coupling_history;  ///< 2D log mode: g after every refresh

  std::vector<double> density() const;
};

/// Interaction coefficient for fixed modes, or 4 pi mu / |ln(rho_bar a^2)| in
/// 2D log mode with rho_bar taken from phi.
double gp_coupling(const GPProblem& problem, const GridGeometry& grid,
                   const std::vector<double>& phi);

/// Energy split of phi on the problem grid. Throws DomainError when
/// int phi^2 differs from N by more than 1e-6 relative.
EnergyComponents gp_energy(const GPProblem& problem, const GridGeometry& grid,
                           const std::vector<double>& phi);

/// Ground state by semi-implicit gradient flow with normalization projection
/// and energy backtracking. A non-converged result is returned flagged.
GPSolution gp_minimize(const GPProblem& problem);

/// |Phi|^2 = max(0, (mu - V)/(2 g)) with mu found by bisection on the grid.
GPSolution tf_minimize(const GPProblem& problem);

struct TfClosedForm {
  double chemical_potential = 0.0;
  double energy = 0.0;
  double radius = 0.0;
};

/// Thomas-Fermi solution of an isotropic harmonic trap with g = 4 pi mu a (3D).
TfClosedForm tf_harmonic_closed_form(double N, double a, double omega, const Units& units);

/// 4 pi mu / |ln(rho_bar a^2)| for a 2D profile.
double gp_2d_coupling(const GPProblem& problem, const GridGeometry& grid,
                      const std::vector<double>& phi);

struct LimitRow {
  double N = 0.0;
  double a = 0.0;
  double energy_per_particle = 0.0;
  double chemical_potential = 0.0;
  std::vector<double> rescaled_density;  ///< |Phi|^2 / N on the shared grid
  double l1_to_tf = 0.0;     ///< int | |Phi|^2 - rho_TF | / N, 0 when Na = 0
  double l1_to_first = 0.0;  ///< same against the first row
  bool converged = false;
};

struct LimitScan {
  GridGeometry grid;
  std::vector<LimitRow> rows;
};

/// Solves GP at a = Na / N for every N of an increasing list in 3D.
LimitScan gp_limit_scan(const TrapPotential& trap, double Na, const std::vector<double>& N_list,
                        const Units& units = Units::dilute(), const GridSpec& grid = {},
                        const GPOptions& options = {});

}  // namespace bosegas
