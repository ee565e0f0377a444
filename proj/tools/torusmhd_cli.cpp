// Command-line runner for the four experiment families.
//
// Settings are resolved as: built-in defaults < preset < config file < flags.
// TORUSMHD_THREADS caps the OpenMP thread count.

#include <omp.h>

#include <cstdlib>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "torusmhd/config.hpp"
#include "torusmhd/errors.hpp"
#include "torusmhd/experiment.hpp"

namespace {

void apply_thread_cap() {
  const char* env = std::getenv("TORUSMHD_THREADS");
  if (!env || !*env) return;
  char* end = nullptr;
  const long n = std::strtol(env, &end, 10);
  if (*end != '\0' || n < 1) {
    std::cerr << "ignoring TORUSMHD_THREADS='" << env << "': expected a positive integer\n";
    return;
  }
  omp_set_num_threads(static_cast<int>(n));
}

struct Options {
  std::string config_file;
  std::string preset;
  std::vector<std::string> sets;
  std::string output_dir;
  bool print_config = false;
};

void add_common(CLI::App* sub, Options& opt) {
  sub->add_option("-c,--config", opt.config_file, "key = value config file");
  sub->add_option("-p,--preset", opt.preset, "named preset applied before the config file");
  sub->add_option("-s,--set", opt.sets, "override one key, e.g. --set dt=0.005 (repeatable)");
  sub->add_option("-o,--output-dir", opt.output_dir, "directory for artifacts");
  sub->add_flag("--print-config", opt.print_config, "print the resolved config and exit");
}

}  // namespace

int main(int argc, char** argv) {
  using namespace torusmhd;
  apply_thread_cap();

  CLI::App app{"Damped ideal MHD on the torus: linear propagator, kernel bounds, "
               "Diophantine estimates and nonlinear runs"};
  app.require_subcommand(0, 1);
  bool list_presets = false;
  app.add_flag("--list-presets", list_presets, "list the shipped presets");

  Options opt;
  struct Sub {
    const char* name;
    const char* help;
  };
  const std::vector<Sub> subs{
      {"linear-decay", "exact linear evolution, energy identity and decay fits"},
      {"nonlinear", "integrate the full system with IF-RK4"},
      {"kernel-sweep", "empirical constants of the kernel bounds"},
      {"diophantine-estimate", "lattice estimate of the Diophantine constant"}};
  std::vector<CLI::App*> commands;
  for (const auto& s : subs) {
    CLI::App* sub = app.add_subcommand(s.name, s.help);
    add_common(sub, opt);
    commands.push_back(sub);
  }

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? 0 : static_cast<int>(ExitCode::Validation);
  }

  if (list_presets) {
    for (const auto& name : preset_names()) std::cout << name << "\n";
    return 0;
  }
  const CLI::App* chosen = nullptr;
  for (const auto* c : commands)
    if (c->parsed()) chosen = c;
  if (!chosen) {
    std::cerr << app.help();
    return static_cast<int>(ExitCode::Validation);
  }

  ExperimentConfig cfg;
  try {
    KeyValues flags{{"experiment", chosen->get_name()}};
    for (const auto& s : opt.sets) {
      const auto eq = s.find('=');
      if (eq == std::string::npos) throw ConfigError("--set expects key=value, got '" + s + "'");
      flags.emplace_back(s.substr(0, eq), s.substr(eq + 1));
    }
    if (!opt.output_dir.empty()) flags.emplace_back("output_dir", opt.output_dir);
    std::optional<std::filesystem::path> file;
    if (!opt.config_file.empty()) file = opt.config_file;
    cfg = parse_config(file, flags, opt.preset);
  } catch (const IoError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return static_cast<int>(ExitCode::Io);
  } catch (const Error& e) {
    std::cerr << "invalid configuration: " << e.what() << "\n";
    return static_cast<int>(ExitCode::Validation);
  }

  if (opt.print_config) {
    std::cout << write_config(cfg);
    return 0;
  }

  const ExperimentOutcome out = run_experiment(cfg);
  if (out.code != ExitCode::Ok) {
    std::cerr << experiment_name(cfg.experiment) << " failed (exit "
              << static_cast<int>(out.code) << "): " << out.message << "\n";
  } else {
    std::cout << experiment_name(cfg.experiment) << ": artifacts in " << cfg.output_dir << "\n";
  }
  return static_cast<int>(out.code);
}
