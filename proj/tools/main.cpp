// bosegas command-line tool.
#include <CLI11.hpp>
#include <fstream>
#include <iostream>
#include <map>
#include <sstream>
#include <string>
#include <vector>

#include "bosegas/units.hpp"
#include "cli/config.hpp"
#include "cli/runner.hpp"

namespace {

using bosegas::cli::ParseError;
using bosegas::cli::RunConfig;
using bosegas::cli::Subcommand;

std::string version_text() {
  std::string s = "bosegas " BOSEGAS_VERSION_STRING "\n";
  s += "units: ";
  s += to_string(bosegas::Convention::dilute);
  s += " for scatter, bounds, gp; ";
  s += to_string(bosegas::Convention::charged);
  s += " for jellium";
  return s;
}

std::string hyphenate(std::string key) {
  for (char& c : key)
    if (c == '_') c = '-';
  return key;
}

// Flags that mirror one config section. Values stay text until they are
// applied through set_value, so the flag and file paths share one parser.
struct Bindings {
  struct Binding {
    std::string section;
    std::string key;
    CLI::Option* option;
  };
  std::vector<Binding> keys;
  std::map<std::string, std::string> values;  // "section.key" -> text

  void add(CLI::App& app, const std::string& section, const std::string& key, const std::string& names,
           const std::string& help) {
    keys.push_back({section, key, app.add_option(names, values[section + "." + key], help)});
  }

  void add_section(CLI::App& app, const std::string& section) {
    for (const auto& key : bosegas::cli::section_keys(section)) {
      std::string names = "--" + hyphenate(key);
      if (key.find('_') != std::string::npos) names += ",--" + key;
      add(app, section, key, names, section + "." + key);
    }
  }

  void add_common(CLI::App& app) {
    add(app, "output", "path", "-o,--output", "output path, - for stdout");
    add(app, "output", "format", "--out,--format", "csv or json");
    add(app, "output", "profile", "--profile", "secondary CSV artifact path");
    add(app, "run", "seed", "--seed", "seed for randomized test profiles");
    add(app, "run", "precision", "--precision", "double or extended");
  }

  void apply(RunConfig& config) const {
    for (const auto& b : keys)
      if (b.option->count() > 0) bosegas::cli::set_value(config, b.section, b.key, values.at(b.section + "." + b.key));
  }
};

std::string read_file(const std::string& path) {
  std::ifstream f(path, std::ios::binary);
  if (!f) throw bosegas::cli::IoError("cannot read config file " + path);
  std::ostringstream s;
  s << f.rdbuf();
  return s.str();
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Dilute and charged Bose gas numerics"};
  app.set_version_flag("--version", version_text());
  app.require_subcommand(0, 1);

  std::string config_path;
  bool print_config = false;
  app.add_option("-c,--config", config_path, "key = value config file, flags override it");
  app.add_flag("--print-config", print_config, "print the effective config and exit");

  struct Command {
    Subcommand id;
    CLI::App* app;
    Bindings bind;
  };
  std::vector<Command> commands;
  commands.reserve(5);
  auto add_command = [&](Subcommand id, const std::string& help) {
    commands.push_back({id, app.add_subcommand(std::string(to_string(id)), help), {}});
    auto& c = commands.back();
    c.bind.add_common(*c.app);
    if (id != Subcommand::sweep) c.bind.add_section(*c.app, std::string(to_string(id)));
  };
  add_command(Subcommand::scatter, "zero-energy scattering solution and scattering length");
  add_command(Subcommand::bounds, "upper and certified lower bounds on the energy ratio");
  add_command(Subcommand::gp, "Gross-Pitaevskii or Thomas-Fermi ground state in a trap");
  add_command(Subcommand::jellium, "Foldy correlation energy of the charged Bose gas");
  add_command(Subcommand::sweep, "run one subcommand over a range of one parameter");

  auto& sweep = commands.back();
  sweep.bind.add(*sweep.app, "sweep", "command", "--command", "subcommand to sweep");
  sweep.bind.add(*sweep.app, "sweep", "variable", "--variable", "parameter name in that subcommand's section");
  sweep.bind.add(*sweep.app, "sweep", "range", "--range", "lin:start:stop:count or geom:start:stop:count");
  sweep.bind.add(*sweep.app, "sweep", "jobs", "--jobs", "concurrent points, 0 for all cores");
  std::vector<std::string> fixed;
  sweep.app->add_option("--set", fixed, "fixed binding key=value (repeatable)");

  std::string run_path;
  CLI::App* run_cmd = app.add_subcommand("run", "execute a config file");
  run_cmd->add_option("file", run_path, "config file")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForVersion& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return bosegas::cli::kParseError;
  }

  RunConfig config;
  try {
    if (run_cmd->parsed()) config_path = run_path;
    if (!config_path.empty()) config = bosegas::cli::parse_config(read_file(config_path));
    for (auto& c : commands) {
      if (!c.app->parsed()) continue;
      config.run.subcommand = c.id;
      c.bind.apply(config);
      if (c.id == Subcommand::sweep) {
        for (const auto& binding : fixed) {
          const auto eq = binding.find('=');
          if (eq == std::string::npos) throw ParseError("--set expects key=value, got '" + binding + "'");
          std::string key = binding.substr(0, eq);
          std::string section;
          if (const auto dot = key.find('.'); dot != std::string::npos) {
            section = key.substr(0, dot);
            key = key.substr(dot + 1);
          } else {
            if (!config.sweep.command) throw ParseError("--set needs --command first, or a section.key name");
            section = std::string(to_string(*config.sweep.command));
          }
          bosegas::cli::set_value(config, section, key, binding.substr(eq + 1));
        }
      }
    }
    if (print_config) {
      std::cout << bosegas::cli::serialize_config(config);
      return bosegas::cli::kOk;
    }
    if (!config.run.subcommand) {
      std::cerr << app.help();
      return bosegas::cli::kParseError;
    }
  } catch (const ParseError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return bosegas::cli::kParseError;
  } catch (const bosegas::cli::IoError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return bosegas::cli::kIoError;
  }
  return bosegas::cli::run(config, std::cout, std::cerr);
}
