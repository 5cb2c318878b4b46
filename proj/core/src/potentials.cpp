#include "bosegas/potentials.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <sstream>

namespace bosegas {

void Units::require(Convention expected, std::string_view who) const {
  if (convention != expected) {
    std::string msg(who);
    msg += ": expected units convention ";
    msg += to_string(expected);
    msg += ", got ";
    msg += to_string(convention);
    throw DomainError(msg);
  }
  if (!(mu > 0.0)) throw DomainError(std::string(who) + ": mu must be positive");
}

double wigner_seitz_radius(double rho) {
  if (!(rho > 0.0)) throw DomainError("wigner_seitz_radius: rho must be positive");
  return std::cbrt(3.0 / (4.0 * std::numbers::pi * rho));
}

double density_from_rs(double rs) {
  if (!(rs > 0.0)) throw DomainError("density_from_rs: r_s must be positive");
  return 3.0 / (4.0 * std::numbers::pi * rs * rs * rs);
}

namespace {

template <class... Ts>
struct Overloaded : Ts... {
  using Ts::operator()...;
};
template <class... Ts>
Overloaded(Ts...) -> Overloaded<Ts...>;

double interpolate(std::span<const double> xs, std::span<const double> ys, double x) {
  auto it = std::upper_bound(xs.begin(), xs.end(), x);
  if (it == xs.begin()) return ys.front();
  if (it == xs.end()) return ys.back();
  const auto i = static_cast<std::size_t>(it - xs.begin());
  const double t = (x - xs[i - 1]) / (xs[i] - xs[i - 1]);
  return ys[i - 1] + t * (ys[i] - ys[i - 1]);
}

void check_samples(const std::vector<double>& r, const std::vector<double>& v,
                   const char* who, bool nonnegative) {
  if (r.size() != v.size() || r.size() < 2)
    throw DomainError(std::string(who) + ": need at least two (r, v) samples of equal length");
  for (std::size_t i = 0; i < r.size(); ++i) {
    if (!std::isfinite(r[i]) || !std::isfinite(v[i]))
      throw DomainError(std::string(who) + ": samples must be finite");
    if (nonnegative && v[i] < 0.0)
      throw DomainError(std::string(who) + ": potential samples must be nonnegative");
    if (r[i] < 0.0) throw DomainError(std::string(who) + ": radii must be nonnegative");
    if (i > 0 && !(r[i] > r[i - 1]))
      throw DomainError(std::string(who) + ": radial grid must be strictly increasing");
  }
}

}  // namespace

PairPotential PairPotential::hard_core(double radius) {
  if (!(radius > 0.0) || !std::isfinite(radius))
    throw DomainError("hard_core: radius must be positive and finite");
  return PairPotential(HardCore{radius});
}

PairPotential PairPotential::square_well(double height, double range) {
  if (!(height >= 0.0) || !std::isfinite(height))
    throw DomainError("square_well: height must be finite and >= 0");
  if (!(range >= 0.0) || !std::isfinite(range))
    throw DomainError("square_well: range must be finite and >= 0");
  return PairPotential(SquareWell{height, range});
}

PairPotential PairPotential::tabulated(std::vector<double> r, std::vector<double> v) {
  check_samples(r, v, "tabulated potential", true);
  return PairPotential(Tabulated{std::move(r), std::move(v)});
}

PairPotential PairPotential::power_tail(double height, double range, double amplitude,
                                        double epsilon) {
  if (!(epsilon > 0.0))
    throw DomainError("power_tail: epsilon must be > 0 (decay faster than 1/r^3)");
  if (!(height >= 0.0) || !(amplitude >= 0.0))
    throw DomainError("power_tail: height and amplitude must be >= 0");
  if (!(range > 0.0)) throw DomainError("power_tail: range must be > 0");
  return PairPotential(PowerTail{height, range, amplitude, epsilon});
}

double PairPotential::operator()(double r) const {
  return std::visit(
      Overloaded{
          [r](const HardCore& h) { return r < h.radius ? kInfinity : 0.0; },
          [r](const SquareWell& s) { return r < s.range ? s.height : 0.0; },
          [r](const Tabulated& t) {
            if (r > t.r.back()) return 0.0;
            return interpolate(t.r, t.v, r);
          },
          [r](const PowerTail& p) {
            if (r < p.range) return p.height;
            return p.amplitude * std::pow(r, -(3.0 + p.epsilon));
          },
      },
      kind_);
}

std::string PairPotential::name() const {
  std::ostringstream os;
  std::visit(Overloaded{
                 [&](const HardCore& h) { os << "hard_core(radius=" << h.radius << ")"; },
                 [&](const SquareWell& s) {
                   os << "square_well(height=" << s.height << ", range=" << s.range << ")";
                 },
                 [&](const Tabulated& t) { os << "tabulated(" << t.r.size() << " samples)"; },
                 [&](const PowerTail& p) {
                   os << "power_tail(height=" << p.height << ", range=" << p.range
                      << ", amplitude=" << p.amplitude << ", epsilon=" << p.epsilon << ")";
                 },
             },
             kind_);
  return os.str();
}

double PairPotential::range() const {
  return std::visit(Overloaded{
                        [](const HardCore& h) { return h.radius; },
                        [](const SquareWell& s) { return s.height > 0.0 ? s.range : 0.0; },
                        [](const Tabulated& t) {
                          // last sample where v is nonzero, or the next one if the
                          // interpolant decays to zero there
                          for (std::size_t i = t.v.size(); i-- > 0;) {
                            if (t.v[i] > 0.0)
                              return i + 1 < t.r.size() ? t.r[i + 1] : t.r[i];
                          }
                          return 0.0;
                        },
                        [](const PowerTail& p) {
                          return p.amplitude > 0.0 ? kInfinity : (p.height > 0.0 ? p.range : 0.0);
                        },
                    },
                    kind_);
}

double PairPotential::core_radius() const {
  if (const auto* h = std::get_if<HardCore>(&kind_)) return h->radius;
  return 0.0;
}

bool PairPotential::is_zero() const { return range() == 0.0; }

std::vector<double> PairPotential::breakpoints() const {
  return std::visit(Overloaded{
                        [](const HardCore& h) { return std::vector<double>{h.radius}; },
                        [](const SquareWell& s) {
                          return s.range > 0.0 ? std::vector<double>{s.range}
                                               : std::vector<double>{};
                        },
                        [](const Tabulated& t) { return t.r; },
                        [](const PowerTail& p) { return std::vector<double>{p.range}; },
                    },
                    kind_);
}

double evaluate_potential(const PairPotential& p, double r) {
  if (!(r >= 0.0)) throw DomainError("evaluate_potential: r must be >= 0");
  return p(r);
}

// ---------------------------------------------------------------------------

TrapPotential TrapPotential::harmonic(std::array<double, 3> omega) {
  for (double w : omega)
    if (!(w > 0.0) || !std::isfinite(w))
      throw DomainError("harmonic trap: frequencies must be positive and finite");
  return TrapPotential(Harmonic{omega});
}

TrapPotential TrapPotential::box(double side, BoxBoundary boundary) {
  if (!(side > 0.0) || !std::isfinite(side))
    throw DomainError("box trap: side must be positive and finite");
  return TrapPotential(Box{side, boundary});
}

TrapPotential TrapPotential::tabulated_radial(std::vector<double> r, std::vector<double> v) {
  check_samples(r, v, "tabulated trap", false);
  const std::size_t n = v.size();
  // confining: the linear extrapolation beyond the table must increase
  if (!(v[n - 1] > v[n - 2]))
    throw DomainError("tabulated trap: V must increase at the outer end (confining)");
  return TrapPotential(TabulatedRadial{std::move(r), std::move(v)});
}

double TrapPotential::operator()(std::span<const double> x, const Units& units) const {
  return std::visit(
      Overloaded{
          [&](const Harmonic& h) {
            double v = 0.0;
            for (std::size_t i = 0; i < x.size(); ++i) v += h.omega[i] * h.omega[i] * x[i] * x[i];
            return v / (4.0 * units.mu);
          },
          [&](const Box& b) {
            for (double xi : x)
              if (std::abs(xi) > 0.5 * b.side) return kInfinity;
            return 0.0;
          },
          [&](const TabulatedRadial&) {
            double r2 = 0.0;
            for (double xi : x) r2 += xi * xi;
            return radial(std::sqrt(r2), units);
          },
      },
      form_);
}

double TrapPotential::radial(double r, const Units& units) const {
  return std::visit(
      Overloaded{
          [&](const Harmonic& h) {
            if (h.omega[0] != h.omega[1] || h.omega[1] != h.omega[2])
              throw DomainError("radial(): harmonic trap is anisotropic");
            return h.omega[0] * h.omega[0] * r * r / (4.0 * units.mu);
          },
          [&](const Box&) -> double {
            throw DomainError("radial(): a box trap is not isotropic");
          },
          [&](const TabulatedRadial& t) {
            const std::size_t n = t.r.size();
            if (r <= t.r.back()) return interpolate(t.r, t.v, r);
            const double slope = (t.v[n - 1] - t.v[n - 2]) / (t.r[n - 1] - t.r[n - 2]);
            return t.v[n - 1] + slope * (r - t.r[n - 1]);
          },
      },
      form_);
}

bool TrapPotential::is_isotropic(int dimension) const {
  if (const auto* h = std::get_if<Harmonic>(&form_)) {
    for (int i = 1; i < dimension; ++i)
      if (h->omega[i] != h->omega[0]) return false;
    return true;
  }
  return std::holds_alternative<TabulatedRadial>(form_);
}

std::string TrapPotential::name() const {
  std::ostringstream os;
  std::visit(Overloaded{
                 [&](const Harmonic& h) {
                   os << "harmonic(" << h.omega[0] << "," << h.omega[1] << "," << h.omega[2]
                      << ")";
                 },
                 [&](const Box& b) {
                   os << "box(side=" << b.side << ", "
                      << (b.boundary == BoxBoundary::neumann ? "neumann" : "dirichlet") << ")";
                 },
                 [&](const TabulatedRadial& t) {
                   os << "tabulated_radial(" << t.r.size() << " samples)";
                 },
             },
             form_);
  return os.str();
}

double TrapPotential::harmonic_ground_energy(int dimension) const {
  const auto* h = std::get_if<Harmonic>(&form_);
  if (h == nullptr) throw DomainError("harmonic_ground_energy: trap is not harmonic");
  double sum = 0.0;
  for (int i = 0; i < dimension; ++i) sum += h->omega[i];
  return 0.5 * sum;
}

double TrapPotential::length_scale(const Units& units) const {
  return std::visit(Overloaded{
                        [&](const Harmonic& h) {
                          const double w = std::min({h.omega[0], h.omega[1], h.omega[2]});
                          return std::sqrt(2.0 * units.mu / w);
                        },
                        [](const Box& b) { return b.side; },
                        [](const TabulatedRadial& t) { return t.r.back(); },
                    },
                    form_);
}

}  // namespace bosegas
