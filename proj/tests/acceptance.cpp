// One PASS/FAIL line per acceptance criterion; exit status 1 if any fails.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <functional>
#include <numbers>
#include <sstream>
#include <string>
#include <unistd.h>
#include <vector>

#include "bosegas/charged_gas.hpp"
#include "bosegas/dilute_bounds.hpp"
#include "bosegas/gp_solver.hpp"
#include "bosegas/potentials.hpp"
#include "bosegas/scattering.hpp"
#include "oracles.hpp"

using namespace bosegas;
namespace fs = std::filesystem;

namespace {

constexpr double kPi = std::numbers::pi;

struct Verdict {
  bool pass = true;
  std::string detail;

  void require(bool ok, const std::string& what) {
    if (!ok) {
      pass = false;
      detail += (detail.empty() ? "" : "; ") + std::string("failed: ") + what;
    }
  }
  void note(const std::string& what) { detail += (detail.empty() ? "" : "; ") + what; }
};

std::string fmt(const char* f, double x) {
  char buf[64];
  std::snprintf(buf, sizeof buf, f, x);
  return buf;
}

Verdict with_budget(Verdict v, double seconds, double budget) {
  v.require(seconds < budget, "runtime " + fmt("%.2f", seconds) + " s over " + fmt("%g", budget) + " s");
  return v;
}

double seconds_since(std::chrono::steady_clock::time_point t) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - t).count();
}

// ---------------------------------------------------------------------------

Verdict scattering_lengths() {
  Verdict v;
  const auto t = std::chrono::steady_clock::now();
  const double hc = scattering_length(PairPotential::hard_core(1.0), Units::dilute());
  v.require(std::abs(hc - 1.0) <= 1e-10, "hard core a = " + fmt("%.15g", hc));
  double worst = 0.0;
  for (double h = 1e-2; h <= 1e2 * 1.0001; h *= std::sqrt(10.0)) {
    const double a = scattering_length(PairPotential::square_well(h, 1.0), Units::dilute());
    worst = std::max(worst, std::abs(a / oracle::square_well_a_3d(h, 1.0) - 1.0));
  }
  v.require(worst <= 1e-8, "square well relative error " + fmt("%.2e", worst));
  v.note("|a_hc - 1| = " + fmt("%.1e", std::abs(hc - 1.0)) + ", square well max rel err " + fmt("%.1e", worst));
  return with_budget(v, seconds_since(t), 1.0);
}

Verdict energy_identity() {
  Verdict v;
  double last = 0.0;
  for (double R : {10.0, 100.0, 1000.0, 10000.0}) {
    const auto c = energy_identity_check(PairPotential::hard_core(1.0), Units::dilute(), R);
    const double err = std::abs(c.ratio - 1.0);
    const double tol = 1.1 * (2.0 / R - 1.0 / (R * R));
    v.require(err <= tol, "R = " + fmt("%g", R) + " error " + fmt("%.3e", err));
    v.require(c.ratio > last, "not increasing at R = " + fmt("%g", R));
    last = c.ratio;
  }
  v.note("ratio at R = 1e4 a: " + fmt("%.8f", last));
  return v;
}

Verdict dyson_margins() {
  Verdict v;
  const auto t = std::chrono::steady_clock::now();
  double worst = 1e300;
  std::size_t checks = 0;
  for (int dim : {3, 2}) {
    for (const auto& p : {PairPotential::hard_core(1.0), PairPotential::square_well(10.0, 1.0)}) {
      const double a = scattering_length(p, Units::dilute(), dim);
      const double R0 = std::max(p.range(), a);
      const double R1 = 4.0 * R0;
      const std::vector<SoftPotential> choices = {ShellU{R0, 2.0 * R0, 1.0}, ShellU{1.5 * R0, 3.0 * R0, 0.5},
                                                  DeltaU{2.0 * R0, 1.0}, DeltaU{3.0 * R0, 0.7}, ZeroU{}};
      for (std::size_t i = 0; i < 100; ++i) {
        const auto psi = seeded_test_profile(2024, i, p.core_radius(), R0);
        for (const auto& U : choices) {
          const auto m = verify_dyson_lemma(p, a, U, psi, R1, dim);
          worst = std::min(worst, m.margin / std::max(1.0, std::abs(m.lhs)));
          ++checks;
        }
      }
    }
  }
  v.require(worst >= -1e-8, "worst relative margin " + fmt("%.3e", worst));
  v.note(std::to_string(checks) + " checks, worst relative margin " + fmt("%.3e", worst));
  return with_budget(v, seconds_since(t), 10.0);
}

Verdict bound_bracket() {
  Verdict v;
  std::vector<double> Y;
  for (int e = -24; e <= -16; ++e) Y.push_back(std::pow(10.0, e));
  const auto opt = optimize_error_constant(Y);
  double worst_lower = 0.0, worst_upper = 0.0;
  for (double y : Y) {
    const auto gas = GasParameter::from_Y(y, 1.0);
    const auto params = ansatz_parameters(gas, 1.0, opt.constants);
    const double k = gas.rho * std::pow(params.ell, 3);
    const auto N = static_cast<std::size_t>(std::max(1e6, std::ceil(8.0 * k)));
    const double L = std::cbrt(static_cast<double>(N) / gas.rho);
    const auto rep = lower_bound_finite_box(N, L, gas, params, Units::dilute());
    const double up = upper_bound_ratio(y);
    v.require(rep.valid, "invalid at Y = " + fmt("%g", y));
    v.require(rep.lower > 0.0 && rep.lower <= 1.0, "lower outside (0, 1] at Y = " + fmt("%g", y));
    v.require(rep.lower <= up, "lower above upper at Y = " + fmt("%g", y));
    worst_lower = std::max(worst_lower, std::abs(rep.lower - 1.0) / std::pow(y, 1.0 / 17.0));
    worst_upper = std::max(worst_upper, std::abs(up - 1.0) / std::cbrt(y));
  }
  v.require(worst_lower <= opt.C * (1.0 + 1e-12), "|lower - 1| / Y^(1/17) reaches " + fmt("%.4f", worst_lower));
  v.require(worst_upper <= 3.0, "|upper - 1| / Y^(1/3) reaches " + fmt("%.4f", worst_upper) + " > 3");
  v.note("C = " + fmt("%.6f", opt.C) + ", max |lower-1|/Y^(1/17) = " + fmt("%.6f", worst_lower) +
         ", max |upper-1|/Y^(1/3) = " + fmt("%.4f", worst_upper));
  return v;
}

Verdict exponent_identities() {
  Verdict v;
  const Exponents e = Exponents::standard();
  const Rational target(1, 17);
  const Rational one(1);
  const Rational three(3), two(2);
  const Rational pair = three * e.beta - one;
  const Rational density = one - three * e.beta + e.gamma;
  const Rational temple = one - e.alpha - two * e.beta - e.gamma;
  v.require(e.alpha == target, "alpha = " + e.alpha.str());
  v.require(pair == target, "3 beta - 1 = " + pair.str());
  v.require(density == target, "1 - 3 beta + gamma = " + density.str());
  v.require(temple == target, "1 - alpha - 2 beta - gamma = " + temple.str());
  const auto check = check_exponents(e);
  v.require(check.all_passed, "admissibility");
  v.note("(alpha, beta, gamma) = (" + e.alpha.str() + ", " + e.beta.str() + ", " + e.gamma.str() +
         "), error exponent " + check.error_exponent.str());
  return v;
}

Verdict cell_minimization() {
  Verdict v;
  const auto t = std::chrono::steady_clock::now();
  OccupancyOptions opts;
  opts.denominator = 16;
  opts.n_max = 24;
  double worst = 1e300;
  std::size_t cases = 0;
  for (int j = 16; j <= 64; ++j) {
    const double k = j / 16.0;
    for (std::size_t p = 2; p <= 24; ++p) {
      const double brute = cell_occupancy_minimize(k, p, OccupancyMode::brute_force, opts);
      const double analytic = cell_occupancy_minimize(k, p, OccupancyMode::analytic);
      worst = std::min(worst, brute - analytic);
      if (static_cast<double>(p) >= 4.0 * k)
        v.require(std::abs(analytic - k * (k - 1.0)) <= 1e-12, "analytic != k(k-1) at k = " + fmt("%g", k));
      ++cases;
    }
  }
  v.require(worst >= -1e-12, "brute force below analytic by " + fmt("%.3e", -worst));
  v.note(std::to_string(cases) + " (k, p) pairs, min brute - analytic = " + fmt("%.3e", worst));
  return with_budget(v, seconds_since(t), 30.0);
}

Verdict dyson_constant() {
  Verdict v;
  const double lower = dyson_bounds_hard_sphere(1e-6).lower;
  const double err = std::abs(lower - 1.0 / (10.0 * std::sqrt(2.0)));
  v.require(err <= 1e-15, "error " + fmt("%.2e", err));
  v.note("lower = " + fmt("%.17g", lower));
  return v;
}

Verdict lhy_coefficient() {
  Verdict v;
  const double c = lhy_expansion(1e-6).sqrt_coefficient;
  const double err = std::abs(c - 128.0 / (15.0 * std::sqrt(kPi)));
  v.require(err <= 1e-12, "error " + fmt("%.2e", err));
  v.note("coefficient = " + fmt("%.15g", c));
  return v;
}

Verdict gp_limits() {
  Verdict v;
  const auto t = std::chrono::steady_clock::now();
  // (i)
  GPProblem free;
  free.N = 10.0;
  free.a = 0.0;
  const auto s0 = gp_minimize(free);
  const double err0 = std::abs(s0.energy.total / (free.N * 1.5) - 1.0);
  v.require(err0 <= 1e-4, "a = 0 energy error " + fmt("%.2e", err0));
  std::vector<double> errs;
  for (std::size_t n : {200u, 400u, 800u}) {
    GPProblem p = free;
    p.grid = RadialGrid{0.0, n};
    errs.push_back(std::abs(gp_minimize(p).energy.total / (p.N * 1.5) - 1.0));
  }
  const double order = std::log2(errs[1] / errs[2]);
  v.require(order > 1.8 && order < 2.2, "observed order " + fmt("%.3f", order));
  // (ii)
  GPProblem box;
  box.trap = TrapPotential::box(1000.0);
  box.N = 1000.0;
  box.a = 1e-3;
  const auto sb = gp_minimize(box);
  const double hom = 4.0 * kPi * box.a * box.N * box.N / 1e9 / box.N;
  const double box_err = std::abs(sb.energy.total / box.N / hom - 1.0);
  v.require(box_err <= 0.03, "box energy off by " + fmt("%.4f", box_err));
  // (iii), (iv)
  std::vector<GPProblem> problems;
  for (double a : {1e-3, 1e-2, 1e-1, 1.0}) {
    GPProblem p;
    p.N = 1000.0;
    p.a = a;
    problems.push_back(p);
  }
  GPProblem aniso;
  aniso.trap = TrapPotential::harmonic({1.0, 1.5, 2.0});
  aniso.N = 100.0;
  aniso.a = 0.01;
  problems.push_back(aniso);
  problems.push_back(box);
  double worst_identity = 0.0;
  for (const auto& p : problems) {
    const auto s = gp_minimize(p);
    v.require(tf_minimize(p).energy.total <= s.energy.total, "TF above GP for N a = " + fmt("%g", p.N * p.a));
    worst_identity = std::max(worst_identity, s.identity_residual);
  }
  v.require(worst_identity < 1e-6, "identity residual " + fmt("%.2e", worst_identity));
  v.note("a=0 err " + fmt("%.1e", err0) + ", order " + fmt("%.2f", order) + ", box err " + fmt("%.4f", box_err) +
         ", identity " + fmt("%.1e", worst_identity));
  return with_budget(v, seconds_since(t), 60.0);
}

Verdict foldy() {
  Verdict v;
  const auto t = std::chrono::steady_clock::now();
  const double c = foldy_energy(1.0).coefficient_rs;
  v.require(std::abs(c - 0.402) <= 0.002, "coefficient " + fmt("%.6f", c));
  std::vector<double> rho;
  for (int e = -3; e <= 3; ++e) rho.push_back(std::pow(10.0, e));
  const double slope = infinite_mass_comparison(rho).per_particle_slope;
  v.require(std::abs(slope - 0.25) <= 0.005, "slope " + fmt("%.6f", slope));
  oracle::SplitMix g(7);
  double worst_residual = 0.0, worst_collapse = 0.0;
  for (int i = 0; i < 2000; ++i) {
    const double p = g.log_uniform(1e-4, 1e4);
    const double r = g.log_uniform(1e-6, 1e6);
    const auto m = bogolubov_coefficients(p, r);
    worst_residual = std::max(worst_residual, m.residual);
    const double b2 = bogolubov_coefficients(2.0 * p, 16.0 * r).beta;
    worst_collapse = std::max(worst_collapse, std::abs(b2 - m.beta) / m.beta);
  }
  v.require(worst_residual < 1e-12, "residual " + fmt("%.2e", worst_residual));
  v.require(worst_collapse <= 4.0 * std::numeric_limits<double>::epsilon(), "collapse " + fmt("%.2e", worst_collapse));
  v.note("coefficient " + fmt("%.6f", c) + ", slope " + fmt("%.12f", slope) + ", residual " +
         fmt("%.1e", worst_residual) + ", collapse " + fmt("%.1e", worst_collapse));
  return with_budget(v, seconds_since(t), 5.0);
}

Verdict two_component() {
  Verdict v;
  const auto fit = two_component_scaling({1.0, 10.0, 1e2, 1e3, 1e4, 1e5, 1e6}, 1.0, foldy_constant().first);
  v.require(std::abs(fit.energy_slope - 1.4) <= 0.01, "energy slope " + fmt("%.6f", fit.energy_slope));
  v.require(std::abs(fit.length_slope + 0.2) <= 0.01, "length slope " + fmt("%.6f", fit.length_slope));
  v.note("energy slope " + fmt("%.12f", fit.energy_slope) + ", length slope " + fmt("%.12f", fit.length_slope));
  return v;
}

std::string slurp(const fs::path& p) {
  std::ifstream f(p, std::ios::binary);
  std::ostringstream s;
  s << f.rdbuf();
  return s.str();
}

Verdict cli_determinism() {
  Verdict v;
  const fs::path dir = fs::temp_directory_path() / ("bosegas_acceptance_" + std::to_string(::getpid()));
  fs::create_directories(dir);
  const std::vector<std::string> commands = {
      "scatter --potential square_well --height 3 --dyson-profiles 10 --seed 5",
      "scatter --potential hard_core --out csv",
      "bounds --Y geom:1e-24:1e-16:9",
      "bounds --Y 1e-20 --constants 1,1,1 --out csv",
      "gp --N 1000 --a 0.01",
      "gp --N 100 --a 0.01 --out csv",
      "jellium --rho geom:1e-3:1e3:7",
      "sweep --command scatter --variable height --range geom:1e-2:1e2:5 --jobs 3",
      "sweep --command gp --variable a --range geom:1e-3:1e-1:4 --set N=100 --jobs 2 --out csv",
  };
  std::size_t compared = 0;
  for (std::size_t i = 0; i < commands.size(); ++i) {
    std::string outputs[2];
    for (int rep = 0; rep < 2; ++rep) {
      const fs::path out = dir / ("run" + std::to_string(i) + "_" + std::to_string(rep));
      const std::string cmd =
          std::string("\"") + BOSEGAS_EXE + "\" " + commands[i] + " -o \"" + out.string() + "\" > /dev/null 2>&1";
      const int status = std::system(cmd.c_str());
      v.require(status == 0, "'" + commands[i] + "' exited with status " + std::to_string(status));
      outputs[rep] = slurp(out);
    }
    v.require(!outputs[0].empty() && outputs[0] == outputs[1], "'" + commands[i] + "' differs between runs");
    ++compared;
  }
  fs::remove_all(dir);
  v.note(std::to_string(compared) + " configurations byte-identical");
  return v;
}

}  // namespace

int main() {
  struct Criterion {
    int id;
    const char* name;
    std::function<Verdict()> run;
  };
  const std::vector<Criterion> criteria = {
      {1, "scattering lengths", scattering_lengths},
      {2, "energy identity", energy_identity},
      {3, "Dyson lemma margins", dyson_margins},
      {4, "bound bracket and limit", bound_bracket},
      {5, "exponent identities", exponent_identities},
      {6, "cell minimization", cell_minimization},
      {7, "Dyson 1957 constant", dyson_constant},
      {8, "LHY coefficient", lhy_coefficient},
      {9, "GP limits", gp_limits},
      {10, "Foldy coefficient", foldy},
      {11, "two-component law", two_component},
      {12, "CLI determinism", cli_determinism},
  };
  int failures = 0;
  for (const auto& c : criteria) {
    const auto t = std::chrono::steady_clock::now();
    Verdict v;
    try {
      v = c.run();
    } catch (const std::exception& e) {
      v.pass = false;
      v.detail = std::string("exception: ") + e.what();
    }
    const double s = seconds_since(t);
    if (!v.pass) ++failures;
    std::printf("%s  %2d %-26s %6.2fs  %s\n", v.pass ? "PASS" : "FAIL", c.id, c.name, s, v.detail.c_str());
    std::fflush(stdout);
  }
  std::printf("%d of %zu criteria passed\n", static_cast<int>(criteria.size()) - failures, criteria.size());
  return failures == 0 ? 0 : 1;
}
