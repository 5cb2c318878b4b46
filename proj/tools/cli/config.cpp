#include "cli/config.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <functional>
#include <map>
#include <set>
#include <sstream>

namespace bosegas::cli {
namespace {

std::string_view trim(std::string_view s) {
  while (!s.empty() && (s.front() == ' ' || s.front() == '\t' || s.front() == '\r')) s.remove_prefix(1);
  while (!s.empty() && (s.back() == ' ' || s.back() == '\t' || s.back() == '\r')) s.remove_suffix(1);
  return s;
}

std::vector<std::string_view> split(std::string_view s, char sep) {
  std::vector<std::string_view> out;
  std::size_t pos = 0;
  while (true) {
    const auto next = s.find(sep, pos);
    out.push_back(trim(s.substr(pos, next == std::string_view::npos ? std::string_view::npos : next - pos)));
    if (next == std::string_view::npos) break;
    pos = next + 1;
  }
  return out;
}

[[noreturn]] void bad(std::string_view key, std::string_view value, std::string_view why) {
  throw ParseError("invalid value '" + std::string(value) + "' for key '" + std::string(key) +
                   "': " + std::string(why));
}

double to_double(std::string_view key, std::string_view s) {
  s = trim(s);
  double v = 0.0;
  const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (s.empty() || ec != std::errc() || ptr != s.data() + s.size()) bad(key, s, "expected a number");
  if (!std::isfinite(v)) bad(key, s, "expected a finite number");
  return v;
}

template <class Int>
Int to_integer(std::string_view key, std::string_view s) {
  s = trim(s);
  Int v = 0;
  const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (s.empty() || ec != std::errc() || ptr != s.data() + s.size()) bad(key, s, "expected an integer");
  return v;
}

std::string choice(std::string_view key, std::string_view s, std::initializer_list<std::string_view> allowed) {
  s = trim(s);
  for (auto a : allowed)
    if (s == a) return std::string(s);
  std::string list;
  for (auto a : allowed) list += (list.empty() ? "" : ", ") + std::string(a);
  bad(key, s, "expected one of " + list);
}

std::vector<double> to_list(std::string_view key, std::string_view s, std::size_t min_n, std::size_t max_n) {
  std::vector<double> out;
  for (auto part : split(trim(s), ',')) out.push_back(to_double(key, part));
  if (out.size() < min_n || out.size() > max_n) bad(key, s, "wrong number of entries");
  return out;
}

std::string join(const std::vector<double>& v) {
  std::string s;
  for (std::size_t i = 0; i < v.size(); ++i) s += (i ? "," : "") + format_double(v[i]);
  return s;
}

struct Field {
  std::string section;
  std::string key;
  bool numeric;
  std::function<std::string(const RunConfig&)> get;
  std::function<void(RunConfig&, std::string_view)> set;
};

#define BG_NUM(SEC, KEY, MEMBER)                                                        \
  Field{SEC, KEY, true, [](const RunConfig& c) { return format_double(c.MEMBER); },     \
        [](RunConfig& c, std::string_view v) { c.MEMBER = to_double(KEY, v); }}
#define BG_INT(SEC, KEY, MEMBER, TYPE)                                                  \
  Field{SEC, KEY, true, [](const RunConfig& c) { return std::to_string(c.MEMBER); },    \
        [](RunConfig& c, std::string_view v) { c.MEMBER = to_integer<TYPE>(KEY, v); }}
#define BG_RANGE(SEC, KEY, MEMBER)                                                      \
  Field{SEC, KEY, false, [](const RunConfig& c) { return c.MEMBER.str(); },             \
        [](RunConfig& c, std::string_view v) { c.MEMBER = Range::parse(v); }}

const std::vector<Field>& fields() {
  static const std::vector<Field> table = {
      Field{"run", "subcommand", false,
            [](const RunConfig& c) { return c.run.subcommand ? std::string(to_string(*c.run.subcommand)) : ""; },
            [](RunConfig& c, std::string_view v) {
              v = trim(v);
              if (v.empty())
                c.run.subcommand.reset();
              else
                c.run.subcommand = parse_subcommand(v);
            }},
      BG_INT("run", "seed", run.seed, std::uint64_t),
      Field{"run", "precision", false,
            [](const RunConfig& c) { return std::string(c.run.extended_precision ? "extended" : "double"); },
            [](RunConfig& c, std::string_view v) {
              c.run.extended_precision = choice("precision", v, {"double", "extended"}) == "extended";
            }},

      Field{"output", "path", false, [](const RunConfig& c) { return c.output.path; },
            [](RunConfig& c, std::string_view v) {
              if (trim(v).empty()) bad("path", v, "must not be empty");
              c.output.path = std::string(trim(v));
            }},
      Field{"output", "format", false, [](const RunConfig& c) { return c.output.format; },
            [](RunConfig& c, std::string_view v) { c.output.format = choice("format", v, {"csv", "json"}); }},
      Field{"output", "profile", false, [](const RunConfig& c) { return c.output.profile; },
            [](RunConfig& c, std::string_view v) { c.output.profile = std::string(trim(v)); }},

      Field{"scatter", "potential", false, [](const RunConfig& c) { return c.scatter.potential; },
            [](RunConfig& c, std::string_view v) {
              c.scatter.potential = choice("potential", v, {"hard_core", "square_well", "power_tail"});
            }},
      BG_NUM("scatter", "radius", scatter.radius),
      BG_NUM("scatter", "height", scatter.height),
      BG_NUM("scatter", "range", scatter.range),
      BG_NUM("scatter", "amplitude", scatter.amplitude),
      BG_NUM("scatter", "epsilon", scatter.epsilon),
      BG_INT("scatter", "dimension", scatter.dimension, int),
      BG_NUM("scatter", "mu", scatter.mu),
      BG_NUM("scatter", "r_max", scatter.r_max),
      BG_INT("scatter", "points", scatter.points, std::size_t),
      BG_INT("scatter", "dyson_profiles", scatter.dyson_profiles, std::size_t),

      BG_RANGE("bounds", "Y", bounds.Y),
      Field{"bounds", "exponents", false,
            [](const RunConfig& c) {
              const auto& e = c.bounds.exponents;
              return e.alpha.str() + "," + e.beta.str() + "," + e.gamma.str();
            },
            [](RunConfig& c, std::string_view v) {
              const auto parts = split(trim(v), ',');
              if (parts.size() != 3) bad("exponents", v, "expected alpha,beta,gamma");
              try {
                c.bounds.exponents.alpha = Rational::parse(std::string(parts[0]));
                c.bounds.exponents.beta = Rational::parse(std::string(parts[1]));
                c.bounds.exponents.gamma = Rational::parse(std::string(parts[2]));
              } catch (const Error&) {
                bad("exponents", v, "expected three rationals such as 1/17");
              }
            }},
      Field{"bounds", "constants", false,
            [](const RunConfig& c) {
              if (!c.bounds.constants) return std::string("auto");
              const auto& k = *c.bounds.constants;
              return join({k[0], k[1], k[2]});
            },
            [](RunConfig& c, std::string_view v) {
              if (trim(v) == "auto") {
                c.bounds.constants.reset();
                return;
              }
              const auto l = to_list("constants", v, 3, 3);
              for (double x : l)
                if (!(x > 0.0)) bad("constants", v, "constants must be positive");
              c.bounds.constants = std::array<double, 3>{l[0], l[1], l[2]};
            }},
      Field{"bounds", "gap_convention", false,
            [](const RunConfig& c) {
              return std::string(c.bounds.gap_convention == GapConvention::pi ? "pi" : "pi_squared");
            },
            [](RunConfig& c, std::string_view v) {
              c.bounds.gap_convention = choice("gap_convention", v, {"pi", "pi_squared", "pi-squared"}) == "pi"
                                            ? GapConvention::pi
                                            : GapConvention::pi_squared;
            }},
      BG_NUM("bounds", "R0_over_a", bounds.R0_over_a),
      BG_RANGE("bounds", "optimize_Y", bounds.optimize_Y),

      BG_INT("gp", "dim", gp.dim, int),
      Field{"gp", "trap", false, [](const RunConfig& c) { return c.gp.trap; },
            [](RunConfig& c, std::string_view v) { c.gp.trap = choice("trap", v, {"harmonic", "box"}); }},
      Field{"gp", "omega", false, [](const RunConfig& c) { return join(c.gp.omega); },
            [](RunConfig& c, std::string_view v) { c.gp.omega = to_list("omega", v, 1, 3); }},
      BG_NUM("gp", "side", gp.side),
      Field{"gp", "boundary", false, [](const RunConfig& c) { return c.gp.boundary; },
            [](RunConfig& c, std::string_view v) {
              c.gp.boundary = choice("boundary", v, {"neumann", "dirichlet"});
            }},
      BG_NUM("gp", "N", gp.N),
      BG_NUM("gp", "a", gp.a),
      Field{"gp", "mode", false, [](const RunConfig& c) { return c.gp.mode; },
            [](RunConfig& c, std::string_view v) { c.gp.mode = choice("mode", v, {"gp", "tf", "2dlog"}); }},
      Field{"gp", "grid", false, [](const RunConfig& c) { return c.gp.grid.str(); },
            [](RunConfig& c, std::string_view v) { c.gp.grid = GridChoice::parse(v); }},
      BG_NUM("gp", "tolerance", gp.tolerance),
      BG_INT("gp", "max_iterations", gp.max_iterations, std::size_t),
      BG_NUM("gp", "mu", gp.mu),

      BG_RANGE("jellium", "rho", jellium.rho),
      Field{"jellium", "rs", false,
            [](const RunConfig& c) { return c.jellium.rs ? c.jellium.rs->str() : std::string("none"); },
            [](RunConfig& c, std::string_view v) {
              if (trim(v) == "none")
                c.jellium.rs.reset();
              else
                c.jellium.rs = Range::parse(v);
            }},
      BG_NUM("jellium", "q_max", jellium.q_max),
      BG_INT("jellium", "panels", jellium.panels, std::size_t),
      BG_RANGE("jellium", "g_table", jellium.g_table),

      Field{"sweep", "command", false,
            [](const RunConfig& c) { return c.sweep.command ? std::string(to_string(*c.sweep.command)) : ""; },
            [](RunConfig& c, std::string_view v) {
              v = trim(v);
              if (v.empty()) {
                c.sweep.command.reset();
                return;
              }
              const Subcommand s = parse_subcommand(v);
              if (s == Subcommand::sweep) bad("command", v, "a sweep cannot sweep a sweep");
              c.sweep.command = s;
            }},
      Field{"sweep", "variable", false, [](const RunConfig& c) { return c.sweep.variable; },
            [](RunConfig& c, std::string_view v) { c.sweep.variable = std::string(trim(v)); }},
      Field{"sweep", "range", false,
            [](const RunConfig& c) { return c.sweep.range ? c.sweep.range->str() : std::string(); },
            [](RunConfig& c, std::string_view v) {
              if (trim(v).empty()) {
                c.sweep.range.reset();
                return;
              }
              Range r = Range::parse(v);
              if (r.kind == Range::Kind::single) bad("range", v, "a sweep needs lin:... or geom:... with count >= 2");
              c.sweep.range = r;
            }},
      BG_INT("sweep", "jobs", sweep.jobs, std::size_t),
  };
  return table;
}

#undef BG_NUM
#undef BG_INT
#undef BG_RANGE

const Field& find_field(std::string_view section, std::string_view key) {
  for (const auto& f : fields())
    if (f.section == section && f.key == key) return f;
  bool known_section = false;
  for (const auto& f : fields()) known_section = known_section || f.section == section;
  if (!known_section) throw ParseError("unknown section '" + std::string(section) + "'");
  throw ParseError("unknown key '" + std::string(key) + "' in section [" + std::string(section) + "]");
}

}  // namespace

std::string format_double(double v) {
  char buf[64];
  const auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, v);
  if (ec != std::errc()) throw std::runtime_error("format_double: conversion failed");
  return std::string(buf, ptr);
}

Range Range::parse(std::string_view text) {
  const std::string_view t = trim(text);
  const auto parts = split(t, ':');
  if (parts.size() == 1) return single_value(to_double("range", t));
  if (parts.size() != 4 || (parts[0] != "lin" && parts[0] != "geom"))
    bad("range", t, "expected a number, lin:start:stop:count or geom:start:stop:count");
  Range r;
  r.kind = parts[0] == "lin" ? Kind::linear : Kind::geometric;
  r.start = to_double("range", parts[1]);
  r.stop = to_double("range", parts[2]);
  r.count = to_integer<std::size_t>("range", parts[3]);
  if (r.count < 2) bad("range", t, "count must be >= 2");
  if (r.kind == Kind::geometric && !(r.start > 0.0 && r.stop > 0.0))
    bad("range", t, "geometric ranges need positive endpoints");
  return r;
}

std::string Range::str() const {
  if (kind == Kind::single) return format_double(start);
  return std::string(kind == Kind::linear ? "lin:" : "geom:") + format_double(start) + ":" +
         format_double(stop) + ":" + std::to_string(count);
}

std::vector<double> Range::values() const {
  if (kind == Kind::single) return {start};
  std::vector<double> v(count);
  const double last = static_cast<double>(count - 1);
  for (std::size_t i = 0; i < count; ++i) {
    const double f = static_cast<double>(i) / last;
    if (i == 0)
      v[i] = start;
    else if (i + 1 == count)
      v[i] = stop;
    else if (kind == Kind::linear)
      v[i] = start + (stop - start) * f;
    else
      v[i] = std::pow(10.0, std::log10(start) + (std::log10(stop) - std::log10(start)) * f);
  }
  return v;
}

GridChoice GridChoice::parse(std::string_view text) {
  const std::string_view t = trim(text);
  if (t == "auto") return {};
  const auto parts = split(t, ':');
  if (parts.size() != 3 || (parts[0] != "radial" && parts[0] != "tensor"))
    bad("grid", t, "expected auto, radial:r_max:points or tensor:half_width:points");
  GridChoice g;
  g.kind = parts[0] == "radial" ? Kind::radial : Kind::tensor;
  g.extent = to_double("grid", parts[1]);
  g.points = to_integer<std::size_t>("grid", parts[2]);
  if (g.extent < 0.0) bad("grid", t, "extent must be >= 0");
  return g;
}

std::string GridChoice::str() const {
  if (kind == Kind::automatic) return "auto";
  return std::string(kind == Kind::radial ? "radial:" : "tensor:") + format_double(extent) + ":" +
         std::to_string(points);
}

std::string_view to_string(Subcommand s) {
  switch (s) {
    case Subcommand::scatter: return "scatter";
    case Subcommand::bounds: return "bounds";
    case Subcommand::gp: return "gp";
    case Subcommand::jellium: return "jellium";
    case Subcommand::sweep: return "sweep";
  }
  return "";
}

Subcommand parse_subcommand(std::string_view text) {
  const std::string_view t = trim(text);
  for (Subcommand s : {Subcommand::scatter, Subcommand::bounds, Subcommand::gp, Subcommand::jellium,
                       Subcommand::sweep})
    if (to_string(s) == t) return s;
  bad("subcommand", t, "expected scatter, bounds, gp, jellium or sweep");
}

void set_value(RunConfig& config, std::string_view section, std::string_view key, std::string_view value) {
  find_field(section, key).set(config, value);
}

std::string get_value(const RunConfig& config, std::string_view section, std::string_view key) {
  return find_field(section, key).get(config);
}

std::vector<std::string> section_keys(std::string_view section) {
  std::vector<std::string> keys;
  for (const auto& f : fields())
    if (f.section == section) keys.push_back(f.key);
  return keys;
}

bool is_numeric_key(std::string_view section, std::string_view key) {
  return find_field(section, key).numeric;
}

RunConfig parse_config(std::string_view text) {
  RunConfig cfg;
  std::string section;
  std::set<std::string> seen;
  std::size_t line_no = 0;
  bool any = false;
  std::size_t pos = 0;
  while (pos <= text.size()) {
    const auto nl = text.find('\n', pos);
    const std::string_view raw = text.substr(pos, nl == std::string_view::npos ? std::string_view::npos : nl - pos);
    pos = nl == std::string_view::npos ? text.size() + 1 : nl + 1;
    ++line_no;
    const std::string_view line = trim(raw);
    if (line.empty() || line.front() == '#' || line.front() == ';') continue;
    if (line.front() == '[') {
      if (line.back() != ']') throw ParseError("line " + std::to_string(line_no) + ": unterminated section header");
      section = std::string(trim(line.substr(1, line.size() - 2)));
      if (section_keys(section).empty()) throw ParseError("unknown section '" + section + "'");
      continue;
    }
    const auto eq = line.find('=');
    if (eq == std::string_view::npos)
      throw ParseError("line " + std::to_string(line_no) + ": expected 'key = value'");
    const std::string key(trim(line.substr(0, eq)));
    if (section.empty()) throw ParseError("key '" + key + "' appears before any [section]");
    if (!seen.insert(section + "." + key).second)
      throw ParseError("duplicate key '" + key + "' in section [" + section + "]");
    set_value(cfg, section, key, line.substr(eq + 1));
    any = true;
  }
  if (!any) throw ParseError("empty config: no key = value entries");
  return cfg;
}

std::string serialize_config(const RunConfig& config) {
  std::ostringstream os;
  std::string section;
  for (const auto& f : fields()) {
    if (f.section != section) {
      if (!section.empty()) os << "\n";
      section = f.section;
      os << "[" << section << "]\n";
    }
    os << f.key << " = " << f.get(config) << "\n";
  }
  return os.str();
}

}  // namespace bosegas::cli
