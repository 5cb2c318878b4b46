#include "cli/runner.hpp"

#include <unistd.h>

#include <algorithm>
#include <atomic>
#include <cmath>
#include <exception>
#include <filesystem>
#include <fstream>
#include <json.hpp>
#include <ostream>
#include <thread>

#include "bosegas/charged_gas.hpp"
#include "bosegas/dilute_bounds.hpp"
#include "bosegas/errors.hpp"
#include "bosegas/gp_solver.hpp"
#include "bosegas/potentials.hpp"
#include "bosegas/scattering.hpp"

namespace bosegas::cli {
namespace {

using Json = nlohmann::ordered_json;

std::string csv_cell(double v) { return format_double(v); }
std::string csv_cell(bool v) { return v ? "true" : "false"; }
std::string csv_cell(std::size_t v) { return std::to_string(v); }

std::string dump(const Json& j) { return j.dump(2) + "\n"; }

// ---------------------------------------------------------------------------
// scatter

PairPotential make_potential(const ScatterSection& s) {
  if (s.potential == "hard_core") return PairPotential::hard_core(s.radius);
  if (s.potential == "square_well") return PairPotential::square_well(s.height, s.range);
  return PairPotential::power_tail(s.height, s.range, s.amplitude, s.epsilon);
}

double default_r_max(const PairPotential& p) {
  if (p.has_finite_range()) return std::max(4.0 * p.range(), 1.0);
  return 50.0 * std::get<PowerTail>(p.kind()).range;
}

struct ScatterRun {
  PairPotential potential = PairPotential::zero();
  ScatteringSolution solution;
  double r_max = 0.0;
};

ScatterRun scatter_solve(const RunConfig& c) {
  const auto& s = c.scatter;
  ScatterRun r;
  r.potential = make_potential(s);
  r.r_max = s.r_max > 0.0 ? s.r_max : default_r_max(r.potential);
  r.solution = solve_zero_energy(r.potential, Units::dilute(s.mu), r.r_max, s.points, s.dimension);
  return r;
}

Json dyson_check(const RunConfig& c, const ScatterRun& r) {
  const auto& s = c.scatter;
  if (!r.potential.has_finite_range())
    throw DomainError("scatter: the Dyson check needs a finite-range potential");
  const double a = r.solution.a;
  const double R0 = std::max(r.potential.range(), a);
  const std::vector<SoftPotential> choices = {ShellU{R0, 2.0 * R0, 1.0}, ShellU{1.5 * R0, 3.0 * R0, 0.5},
                                              DeltaU{2.0 * R0, 1.0}, DeltaU{3.0 * R0, 0.7}, ZeroU{}};
  const double R1 = 4.0 * R0;
  double worst = kInfinity;
  std::size_t checks = 0;
  for (std::size_t i = 0; i < s.dyson_profiles; ++i) {
    const RadialProfile psi = seeded_test_profile(c.run.seed, i, r.potential.core_radius(), R0);
    for (const auto& U : choices) {
      const DysonMargin m = verify_dyson_lemma(r.potential, a, U, psi, R1, s.dimension, Units::dilute(s.mu));
      worst = std::min(worst, m.margin / std::max(1.0, std::abs(m.lhs)));
      ++checks;
    }
  }
  Json j;
  j["profiles"] = s.dyson_profiles;
  j["checks"] = checks;
  j["seed"] = c.run.seed;
  j["min_relative_margin"] = worst;
  j["passed"] = worst >= -1e-8;
  return j;
}

std::string scatter_profile_csv(const ScatteringSolution& s) {
  std::string out = "r,u,du\n";
  for (std::size_t i = 0; i < s.r.size(); ++i)
    out += csv_cell(s.r[i]) + "," + csv_cell(s.u[i]) + "," + csv_cell(s.du[i]) + "\n";
  return out;
}

Outcome execute_scatter(const RunConfig& c) {
  const ScatterRun r = scatter_solve(c);
  const auto& s = r.solution;
  Outcome o;
  if (c.output.format == "csv") {
    o.artifacts.push_back({c.output.path, scatter_profile_csv(s)});
  } else {
    Json j;
    j["subcommand"] = "scatter";
    j["potential"] = r.potential.name();
    j["dimension"] = c.scatter.dimension;
    j["mu"] = c.scatter.mu;
    j["a"] = s.a;
    j["residual"] = s.residual;
    j["window"] = {s.window_lo, s.window_hi};
    j["substeps"] = s.substeps;
    j["refined"] = s.refined;
    j["r_max"] = r.r_max;
    j["points"] = c.scatter.points;
    j["tail_correction"] = s.tail_correction;
    if (!r.potential.has_hard_core() && c.scatter.dimension == 3)
      j["born_integral"] = born_approximation(r.potential, Units::dilute(c.scatter.mu));
    else
      j["born_integral"] = nullptr;
    if (c.scatter.dyson_profiles > 0) j["dyson"] = dyson_check(c, r);
    o.artifacts.push_back({c.output.path, dump(j)});
    if (!c.output.profile.empty()) o.artifacts.push_back({c.output.profile, scatter_profile_csv(s)});
  }
  o.summary = "scatter: " + r.potential.name() + " a = " + format_double(s.a);
  return o;
}

// ---------------------------------------------------------------------------
// bounds

struct BoundsRun {
  ExponentCheck check;
  std::array<double, 3> constants{};
  bool optimized = false;
  double C = 0.0;
  std::vector<BoundReport> rows;
};

BoundsRun bounds_compute(const RunConfig& c) {
  const auto& b = c.bounds;
  BoundsRun r;
  r.check = check_exponents(b.exponents);
  if (!r.check.all_passed) {
    std::string msg = "bounds: exponents inadmissible:";
    for (const auto& f : r.check.failures) msg += " [" + f + "]";
    throw DomainError(msg);
  }
  const std::vector<double> grid = b.optimize_Y.values();
  OptimizerOptions opts;
  opts.R0_over_a = b.R0_over_a;
  opts.gap = b.gap_convention;
  if (b.constants) {
    r.constants = *b.constants;
    r.C = error_constant(grid, r.constants, b.exponents, opts);
  } else {
    const OptimizerResult res = optimize_error_constant(grid, b.exponents, opts);
    r.constants = res.constants;
    r.C = res.C;
    r.optimized = true;
  }
  for (double Y : b.Y.values()) {
    const GasParameter gas = GasParameter::from_Y(Y, 1.0);
    const CellParameters params = ansatz_parameters(gas, b.R0_over_a, r.constants, b.exponents);
    r.rows.push_back(lower_bound_ratio(gas, params, b.gap_convention, c.run.extended_precision));
  }
  return r;
}

const std::vector<std::string> kBoundsColumns = {"Y", "lower", "upper", "epsilon", "R_over_a", "ell_over_a", "valid"};

std::vector<std::string> bounds_row(const BoundReport& r) {
  return {csv_cell(r.Y), csv_cell(r.lower), csv_cell(r.upper), csv_cell(r.params.epsilon),
          csv_cell(r.params.R), csv_cell(r.params.ell), csv_cell(r.valid)};
}

Json bounds_row_json(const BoundReport& r) {
  Json j;
  j["Y"] = r.Y;
  j["lower"] = r.lower;
  j["upper"] = r.upper;
  j["epsilon"] = r.params.epsilon;
  j["R_over_a"] = r.params.R;
  j["ell_over_a"] = r.params.ell;
  j["n"] = r.p;
  j["k"] = r.k;
  j["valid"] = r.valid;
  j["extended_precision"] = r.extended_precision;
  j["factors"] = {{"pair_count", r.factors.pair_count},
                  {"one_minus_epsilon", r.factors.one_minus_epsilon},
                  {"geometry", r.factors.geometry},
                  {"density", r.factors.density},
                  {"temple", r.factors.temple}};
  return j;
}

Outcome execute_bounds(const RunConfig& c) {
  if (!c.output.profile.empty()) throw ParseError("bounds has no profile artifact; remove output.profile");
  const BoundsRun r = bounds_compute(c);
  Outcome o;
  if (c.output.format == "csv") {
    Table t{kBoundsColumns, {}};
    for (const auto& row : r.rows) t.rows.push_back(bounds_row(row));
    o.artifacts.push_back({c.output.path, t.to_csv()});
  } else {
    Json j;
    j["subcommand"] = "bounds";
    j["exponents"] = {{"alpha", c.bounds.exponents.alpha.str()},
                      {"beta", c.bounds.exponents.beta.str()},
                      {"gamma", c.bounds.exponents.gamma.str()},
                      {"error_exponent", r.check.error_exponent.str()},
                      {"admissible", r.check.all_passed}};
    j["constants"] = r.constants;
    j["constants_source"] = r.optimized ? "optimized" : "given";
    j["C"] = r.C;
    j["gap_convention"] = c.bounds.gap_convention == GapConvention::pi ? "pi" : "pi_squared";
    j["precision"] = c.run.extended_precision ? "extended" : "double";
    if (r.rows.size() == 1) {
      j["Y"] = r.rows[0].Y;
      j["lower"] = r.rows[0].lower;
      j["upper"] = r.rows[0].upper;
    }
    Json rows = Json::array();
    for (const auto& row : r.rows) rows.push_back(bounds_row_json(row));
    j["rows"] = rows;
    o.artifacts.push_back({c.output.path, dump(j)});
  }
  o.summary = "bounds: " + std::to_string(r.rows.size()) + " value(s) of Y, C = " + format_double(r.C);
  return o;
}

// ---------------------------------------------------------------------------
// gp

GPProblem gp_problem(const RunConfig& c) {
  const auto& g = c.gp;
  GPProblem p;
  p.dimension = g.dim;
  if (g.trap == "box") {
    p.trap = TrapPotential::box(g.side, g.boundary == "dirichlet" ? BoxBoundary::dirichlet : BoxBoundary::neumann);
  } else {
    std::array<double, 3> w{};
    for (std::size_t i = 0; i < 3; ++i) w[i] = g.omega[std::min(i, g.omega.size() - 1)];
    p.trap = TrapPotential::harmonic(w);
  }
  p.N = g.N;
  p.a = g.a;
  p.units = Units::dilute(g.mu);
  if (g.mode == "gp") {
    if (g.dim != 3) throw DomainError("gp: mode gp needs dim = 3; use mode 2dlog in two dimensions");
    p.mode = CouplingMode::fixed_3d;
  } else if (g.mode == "2dlog") {
    if (g.dim != 2) throw DomainError("gp: mode 2dlog needs dim = 2");
    p.mode = CouplingMode::fixed_2d_logbar;
  } else {
    p.mode = CouplingMode::thomas_fermi;
  }
  switch (g.grid.kind) {
    case GridChoice::Kind::automatic: break;
    case GridChoice::Kind::radial: p.grid = RadialGrid{g.grid.extent, g.grid.points}; break;
    case GridChoice::Kind::tensor: p.grid = TensorGrid{g.grid.extent, g.grid.points}; break;
  }
  p.options.tolerance = g.tolerance;
  p.options.max_iterations = g.max_iterations;
  return p;
}

std::string gp_profile_csv(const GPSolution& s) {
  std::string out;
  if (s.grid.radial) {
    out = "r,density\n";
  } else {
    out = s.grid.dimension == 3 ? "x,y,z,density\n" : "x,y,density\n";
  }
  for (std::size_t i = 0; i < s.phi.size(); ++i) {
    for (double x : s.grid.point(i)) out += csv_cell(x) + ",";
    out += csv_cell(s.phi[i] * s.phi[i]) + "\n";
  }
  return out;
}

Outcome execute_gp(const RunConfig& c) {
  const GPProblem p = gp_problem(c);
  const GPSolution s = gp_minimize(p);
  Outcome o;
  if (c.output.format == "csv") {
    o.artifacts.push_back({c.output.path, gp_profile_csv(s)});
  } else {
    Json j;
    j["subcommand"] = "gp";
    j["dimension"] = p.dimension;
    j["trap"] = p.trap.name();
    j["mode"] = c.gp.mode;
    j["N"] = p.N;
    j["a"] = p.a;
    j["mu"] = p.units.mu;
    j["grid"] = {{"kind", s.grid.radial ? "radial" : "tensor"},
                 {"points_per_axis", s.grid.points_per_axis},
                 {"spacing", s.grid.spacing},
                 {"unknowns", s.grid.size()}};
    j["energy"] = {{"total", s.energy.total},
                   {"kinetic", s.energy.kinetic},
                   {"trap", s.energy.trap},
                   {"interaction", s.energy.interaction},
                   {"per_particle", s.energy.total / p.N}};
    j["chemical_potential"] = s.chemical_potential;
    j["identity_residual"] = s.identity_residual;
    j["coupling"] = s.energy.coupling;
    j["rho_bar"] = s.rho_bar;
    j["iterations"] = s.iterations;
    j["residual"] = s.residual;
    j["converged"] = s.converged;
    const auto* h = std::get_if<Harmonic>(&p.trap.form());
    if (h != nullptr && p.dimension == 3 && p.a > 0.0 && p.trap.is_isotropic(3)) {
      const TfClosedForm tf = tf_harmonic_closed_form(p.N, p.a, h->omega[0], p.units);
      j["tf_closed_form"] = {{"chemical_potential", tf.chemical_potential},
                             {"energy", tf.energy},
                             {"radius", tf.radius}};
    }
    o.artifacts.push_back({c.output.path, dump(j)});
    if (!c.output.profile.empty()) o.artifacts.push_back({c.output.profile, gp_profile_csv(s)});
  }
  o.summary = "gp: E/N = " + format_double(s.energy.total / p.N) +
              (s.converged ? "" : " (NOT converged, best so far)");
  return o;
}

// ---------------------------------------------------------------------------
// jellium

std::vector<double> jellium_densities(const RunConfig& c) {
  if (!c.jellium.rs) return c.jellium.rho.values();
  std::vector<double> rho;
  for (double rs : c.jellium.rs->values()) rho.push_back(density_from_rs(rs));
  return rho;
}

QuadratureSpec jellium_quad(const RunConfig& c) {
  QuadratureSpec q;
  q.q_max = c.jellium.q_max;
  q.panels = c.jellium.panels;
  return q;
}

Json jellium_json(const JelliumResult& r) {
  Json j;
  j["rho"] = r.rho;
  j["e_per_particle"] = r.e_per_particle;
  j["coefficient_rs"] = r.coefficient_rs;
  j["quadrature_error"] = r.quadrature_error;
  j["r_s"] = r.r_s;
  j["C_F"] = r.C_F;
  j["e_per_volume"] = r.e_per_volume;
  return j;
}

const std::vector<std::string> kJelliumColumns = {"rho", "r_s", "e_per_particle", "coefficient_rs",
                                                  "quadrature_error"};

std::vector<std::string> jellium_row(const JelliumResult& r) {
  return {csv_cell(r.rho), csv_cell(r.r_s), csv_cell(r.e_per_particle), csv_cell(r.coefficient_rs),
          csv_cell(r.quadrature_error)};
}

std::string g_table_csv(const Range& range) {
  if (range.kind == Range::Kind::single) throw ParseError("jellium.g_table must be a range");
  std::string out = "t,G\n";
  const auto v = range.values();
  for (double t : v) out += csv_cell(t) + "," + csv_cell(pairing_G(t)) + "\n";
  return out;
}

Outcome execute_jellium(const RunConfig& c) {
  const auto rho = jellium_densities(c);
  std::vector<JelliumResult> res;
  for (double r : rho) res.push_back(foldy_energy(r, jellium_quad(c)));
  Outcome o;
  if (c.output.format == "csv") {
    Table t{kJelliumColumns, {}};
    for (const auto& r : res) t.rows.push_back(jellium_row(r));
    o.artifacts.push_back({c.output.path, t.to_csv()});
  } else {
    Json j;
    if (res.size() == 1) {
      j = jellium_json(res.front());
    } else {
      Json pts = Json::array();
      std::vector<double> e;
      for (const auto& r : res) {
        pts.push_back(jellium_json(r));
        e.push_back(r.e_per_particle);
      }
      j["points"] = pts;
      j["fitted_slope"] = fit_loglog(rho, e).slope;
    }
    o.artifacts.push_back({c.output.path, dump(j)});
  }
  if (!c.output.profile.empty()) o.artifacts.push_back({c.output.profile, g_table_csv(c.jellium.g_table)});
  o.summary = "jellium: " + std::to_string(res.size()) + " density value(s), coefficient_rs = " +
              format_double(res.front().coefficient_rs);
  return o;
}

// ---------------------------------------------------------------------------
// sweep

std::string_view section_of(Subcommand s) { return to_string(s); }

bool sweepable(Subcommand cmd, const std::string& var) {
  const auto keys = section_keys(section_of(cmd));
  if (std::find(keys.begin(), keys.end(), var) == keys.end()) return false;
  if (is_numeric_key(section_of(cmd), var)) return true;
  return (cmd == Subcommand::bounds && var == "Y") ||
         (cmd == Subcommand::jellium && (var == "rho" || var == "rs"));
}

std::vector<std::string> columns_for(Subcommand cmd) {
  switch (cmd) {
    case Subcommand::bounds: return kBoundsColumns;
    case Subcommand::jellium: {
      auto cols = kJelliumColumns;
      cols.push_back("fitted_slope");
      return cols;
    }
    case Subcommand::scatter: return {"a", "fit_residual", "substeps"};
    case Subcommand::gp:
      return {"energy_total", "energy_kinetic", "energy_trap", "energy_interaction",
              "chemical_potential", "iterations", "converged"};
    case Subcommand::sweep: break;
  }
  throw ParseError("sweep: cannot sweep a sweep");
}

std::vector<std::string> point_row(Subcommand cmd, const RunConfig& c) {
  switch (cmd) {
    case Subcommand::bounds: {
      const BoundsRun r = bounds_compute(c);
      if (r.rows.size() != 1) throw ParseError("sweep: bounds.Y must be a single value inside a sweep");
      return bounds_row(r.rows.front());
    }
    case Subcommand::jellium: {
      const auto rho = jellium_densities(c);
      if (rho.size() != 1) throw ParseError("sweep: jellium density must be a single value inside a sweep");
      auto row = jellium_row(foldy_energy(rho.front(), jellium_quad(c)));
      row.emplace_back();
      return row;
    }
    case Subcommand::scatter: {
      const ScatterRun r = scatter_solve(c);
      return {csv_cell(r.solution.a), csv_cell(r.solution.residual), csv_cell(r.solution.substeps)};
    }
    case Subcommand::gp: {
      const GPSolution s = gp_minimize(gp_problem(c));
      return {csv_cell(s.energy.total), csv_cell(s.energy.kinetic), csv_cell(s.energy.trap),
              csv_cell(s.energy.interaction), csv_cell(s.chemical_potential), csv_cell(s.iterations),
              csv_cell(s.converged)};
    }
    case Subcommand::sweep: break;
  }
  throw ParseError("sweep: cannot sweep a sweep");
}

Json cell_json(const std::string& cell) {
  if (cell.empty()) return nullptr;
  if (cell == "true") return true;
  if (cell == "false") return false;
  try {
    std::size_t used = 0;
    const double v = std::stod(cell, &used);
    if (used == cell.size()) return v;
  } catch (const std::exception&) {
  }
  return cell;
}

Outcome execute_sweep(const RunConfig& c) {
  const Table t = sweep_table(c);
  Outcome o;
  if (!c.output.profile.empty()) throw ParseError("sweep has no profile artifact; remove output.profile");
  if (c.output.format == "csv") {
    o.artifacts.push_back({c.output.path, t.to_csv()});
  } else {
    Json j;
    j["subcommand"] = "sweep";
    j["command"] = to_string(*c.sweep.command);
    j["variable"] = c.sweep.variable;
    j["columns"] = t.columns;
    Json rows = Json::array();
    for (const auto& r : t.rows) {
      Json row = Json::array();
      for (const auto& cell : r) row.push_back(cell_json(cell));
      rows.push_back(row);
    }
    j["rows"] = rows;
    o.artifacts.push_back({c.output.path, dump(j)});
  }
  o.summary = "sweep: " + std::string(to_string(*c.sweep.command)) + " over " + c.sweep.variable + ", " +
              std::to_string(t.rows.size()) + " rows";
  return o;
}

}  // namespace

std::string Table::to_csv() const {
  std::string out;
  for (std::size_t i = 0; i < columns.size(); ++i) out += (i ? "," : "") + columns[i];
  out += "\n";
  for (const auto& r : rows) {
    for (std::size_t i = 0; i < r.size(); ++i) out += (i ? "," : "") + r[i];
    out += "\n";
  }
  return out;
}

Table sweep_table(const RunConfig& c) {
  if (!c.sweep.command) throw ParseError("sweep: missing key 'command' in section [sweep]");
  if (c.sweep.variable.empty()) throw ParseError("sweep: missing key 'variable' in section [sweep]");
  if (!c.sweep.range) throw ParseError("sweep: missing key 'range' in section [sweep]");
  const Subcommand cmd = *c.sweep.command;
  if (!sweepable(cmd, c.sweep.variable))
    throw ParseError("sweep: '" + c.sweep.variable + "' is not a numeric parameter of " +
                     std::string(to_string(cmd)));
  const std::vector<double> values = c.sweep.range->values();
  const auto base = columns_for(cmd);

  Table t;
  const bool prepend = std::find(base.begin(), base.end(), c.sweep.variable) == base.end();
  if (prepend) t.columns.push_back(c.sweep.variable);
  t.columns.insert(t.columns.end(), base.begin(), base.end());

  std::vector<std::vector<std::string>> rows(values.size());
  std::vector<std::exception_ptr> errors(values.size());
  std::atomic<std::size_t> next{0};
  auto worker = [&] {
    for (std::size_t i = next++; i < values.size(); i = next++) {
      try {
        RunConfig point = c;
        point.run.subcommand = cmd;
        if (cmd == Subcommand::jellium && c.sweep.variable == "rho") point.jellium.rs.reset();
        set_value(point, section_of(cmd), c.sweep.variable, format_double(values[i]));
        rows[i] = point_row(cmd, point);
      } catch (...) {
        errors[i] = std::current_exception();
      }
    }
  };
  std::size_t jobs = c.sweep.jobs == 0 ? std::max(1u, std::thread::hardware_concurrency()) : c.sweep.jobs;
  jobs = std::min(jobs, values.size());
  std::vector<std::thread> pool;
  for (std::size_t j = 1; j < jobs; ++j) pool.emplace_back(worker);
  worker();
  for (auto& th : pool) th.join();
  for (const auto& e : errors)
    if (e) std::rethrow_exception(e);

  if (cmd == Subcommand::jellium) {
    std::vector<double> rho, e;
    for (const auto& r : rows) {
      rho.push_back(std::stod(r[0]));
      e.push_back(std::stod(r[2]));
    }
    const bool varied = std::any_of(rho.begin(), rho.end(), [&](double x) { return x != rho.front(); });
    const std::string slope = varied ? format_double(fit_loglog(rho, e).slope) : "";
    for (auto& r : rows) r.back() = slope;
  }
  for (std::size_t i = 0; i < rows.size(); ++i) {
    if (prepend) rows[i].insert(rows[i].begin(), format_double(values[i]));
    t.rows.push_back(std::move(rows[i]));
  }
  return t;
}

Outcome execute(const RunConfig& c) {
  if (!c.run.subcommand) throw ParseError("missing key 'subcommand' in section [run]");
  switch (*c.run.subcommand) {
    case Subcommand::scatter: return execute_scatter(c);
    case Subcommand::bounds: return execute_bounds(c);
    case Subcommand::gp: return execute_gp(c);
    case Subcommand::jellium: return execute_jellium(c);
    case Subcommand::sweep: return execute_sweep(c);
  }
  throw ParseError("unknown subcommand");
}

void write_atomic(const std::string& path, const std::string& content) {
  namespace fs = std::filesystem;
  const fs::path target(path);
  fs::path dir = target.parent_path();
  if (dir.empty()) dir = ".";
  if (!fs::is_directory(dir)) throw IoError("output directory does not exist: " + dir.string());
  const fs::path tmp = dir / (target.filename().string() + ".tmp." + std::to_string(::getpid()));
  {
    std::ofstream f(tmp, std::ios::binary | std::ios::trunc);
    if (!f) throw IoError("cannot open " + tmp.string() + " for writing");
    f.write(content.data(), static_cast<std::streamsize>(content.size()));
    f.flush();
    if (!f) {
      std::error_code ec;
      fs::remove(tmp, ec);
      throw IoError("write to " + tmp.string() + " failed");
    }
  }
  std::error_code ec;
  fs::rename(tmp, target, ec);
  if (ec) {
    std::error_code ignore;
    fs::remove(tmp, ignore);
    throw IoError("cannot rename " + tmp.string() + " to " + path + ": " + ec.message());
  }
}

int run(const RunConfig& config, std::ostream& out, std::ostream& err) {
  try {
    const Outcome o = execute(config);
    bool to_stdout = false;
    for (const auto& a : o.artifacts) {
      if (a.path == "-") {
        out << a.content;
        to_stdout = true;
      } else {
        write_atomic(a.path, a.content);
      }
    }
    std::string summary = o.summary;
    for (const auto& a : o.artifacts)
      if (a.path != "-") summary += ", wrote " + a.path;
    (to_stdout ? err : out) << summary << "\n";
    return kOk;
  } catch (const ParseError& e) {
    err << "error: " << e.what() << "\n";
    return kParseError;
  } catch (const IoError& e) {
    err << "error: " << e.what() << "\n";
    return kIoError;
  } catch (const bosegas::Error& e) {
    err << "error: " << e.what() << "\n";
    return kDomainError;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return kFailure;
  }
}

}  // namespace bosegas::cli
