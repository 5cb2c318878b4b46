#pragma once

#include <array>
#include <cstddef>
#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "bosegas/dilute_bounds.hpp"

namespace bosegas::cli {

/// Malformed config or flag value. Maps to exit code 2.
class ParseError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// A single value or a linear / geometric range: "1e-20", "lin:0:1:5",
/// "geom:1e-24:1e-16:9".
struct Range {
  enum class Kind { single, linear, geometric };
  Kind kind = Kind::single;
  double start = 0.0;
  double stop = 0.0;
  std::size_t count = 1;

  static Range single_value(double v) { return Range{Kind::single, v, v, 1}; }
  static Range parse(std::string_view text);
  std::string str() const;
  std::vector<double> values() const;
  friend bool operator==(const Range&, const Range&) = default;
};

enum class Subcommand { scatter, bounds, gp, jellium, sweep };

struct RunSection {
  std::optional<Subcommand> subcommand;
  std::uint64_t seed = 0;
  bool extended_precision = false;
  friend bool operator==(const RunSection&, const RunSection&) = default;
};

struct OutputSection {
  std::string path = "-";  ///< "-" writes to standard output
  std::string format = "json";
  std::string profile;  ///< optional secondary CSV artifact
  friend bool operator==(const OutputSection&, const OutputSection&) = default;
};

struct ScatterSection {
  std::string potential = "hard_core";  ///< hard_core | square_well | power_tail
  double radius = 1.0;
  double height = 1.0;
  double range = 1.0;
  double amplitude = 1.0;
  double epsilon = 1.0;
  int dimension = 3;
  double mu = 1.0;
  double r_max = 0.0;  ///< 0: chosen from the potential
  std::size_t points = 2000;
  std::size_t dyson_profiles = 0;  ///< seeded Dyson-lemma profiles to check
  friend bool operator==(const ScatterSection&, const ScatterSection&) = default;
};

struct BoundsSection {
  Range Y = Range::single_value(1e-20);
  Exponents exponents;
  std::optional<std::array<double, 3>> constants;  ///< empty: optimize
  GapConvention gap_convention = GapConvention::pi;
  double R0_over_a = 1.0;
  Range optimize_Y{Range::Kind::geometric, 1e-24, 1e-16, 9};
  friend bool operator==(const BoundsSection& x, const BoundsSection& y) {
    return x.Y == y.Y && x.exponents.alpha == y.exponents.alpha &&
           x.exponents.beta == y.exponents.beta && x.exponents.gamma == y.exponents.gamma &&
           x.constants == y.constants && x.gap_convention == y.gap_convention &&
           x.R0_over_a == y.R0_over_a && x.optimize_Y == y.optimize_Y;
  }
};

struct GridChoice {
  enum class Kind { automatic, radial, tensor };
  Kind kind = Kind::automatic;
  double extent = 0.0;  ///< r_max or half width; 0 = automatic
  std::size_t points = 0;
  static GridChoice parse(std::string_view text);
  std::string str() const;
  friend bool operator==(const GridChoice&, const GridChoice&) = default;
};

struct GpSection {
  int dim = 3;
  std::string trap = "harmonic";  ///< harmonic | box
  std::vector<double> omega{1.0};
  double side = 1.0;
  std::string boundary = "neumann";
  double N = 1000.0;
  double a = 0.001;
  std::string mode = "gp";  ///< gp | tf | 2dlog
  GridChoice grid;
  double tolerance = 1e-8;
  std::size_t max_iterations = 100000;
  double mu = 1.0;
  friend bool operator==(const GpSection&, const GpSection&) = default;
};

struct JelliumSection {
  Range rho = Range::single_value(1.0);
  std::optional<Range> rs;  ///< overrides rho when set
  double q_max = 100.0;
  std::size_t panels = 0;
  Range g_table{Range::Kind::geometric, 1e-4, 1e4, 81};
  friend bool operator==(const JelliumSection&, const JelliumSection&) = default;
};

struct SweepSection {
  std::optional<Subcommand> command;
  std::string variable;
  std::optional<Range> range;
  std::size_t jobs = 1;
  friend bool operator==(const SweepSection&, const SweepSection&) = default;
};

struct RunConfig {
  RunSection run;
  OutputSection output;
  ScatterSection scatter;
  BoundsSection bounds;
  GpSection gp;
  JelliumSection jellium;
  SweepSection sweep;
  friend bool operator==(const RunConfig&, const RunConfig&) = default;
};

std::string_view to_string(Subcommand s);
Subcommand parse_subcommand(std::string_view text);

/// Parses "key = value" text with [section] headers. Unknown sections and
/// keys, duplicates and malformed values throw ParseError naming the key.
RunConfig parse_config(std::string_view text);
/// Every key of every section, in a fixed order.
std::string serialize_config(const RunConfig& config);

/// Sets one key ("section.key" or, with `section`, a bare key) from text.
void set_value(RunConfig& config, std::string_view section, std::string_view key,
               std::string_view value);
/// Current value of a key as text.
std::string get_value(const RunConfig& config, std::string_view section, std::string_view key);
/// Keys of one section, in serialization order.
std::vector<std::string> section_keys(std::string_view section);
/// Whether the key holds a plain number that a sweep can vary.
bool is_numeric_key(std::string_view section, std::string_view key);

/// Shortest decimal text that parses back to the same double.
std::string format_double(double v);

}  // namespace bosegas::cli
