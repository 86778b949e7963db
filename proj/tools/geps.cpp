#include "geps/cli_io.hpp"

#include <CLI11.hpp>

#include <iostream>

int main(int argc, char** argv) {
  using namespace geps::cli;
  CLI::App app{"Concentrated-kernel Boltzmann solver and bound checker"};
  app.set_version_flag("--version", version());
  app.require_subcommand(1);

  std::string sim_config;
  auto* sim = app.add_subcommand("simulate", "Run the explicit relaxation from a config file");
  sim->add_option("config", sim_config, "INI config")->required();

  VerifyOptions vopt;
  std::string out_path;
  auto* ver = app.add_subcommand("verify", "Run a seeded verification suite");
  ver->add_option("suite", vopt.suite, "geometry|kernel|young|rearrange|llogl|convolution|all")->required();
  ver->add_option("--seed", vopt.seed, "Base seed")->capture_default_str();
  ver->add_option("--trials", vopt.trials, "Trials per suite")->capture_default_str()->check(CLI::NonNegativeNumber);
  ver->add_option("--out", out_path, "Write the report here instead of stdout");
  ver->add_option("--grid-sizes", vopt.suite_options.grid_sizes, "Grid sizes cycled over trials")
      ->capture_default_str();
  ver->add_option("--v-max", vopt.suite_options.v_max, "Grid half-width")->capture_default_str();
  ver->add_option("--m-phi", vopt.suite_options.m_phi, "Azimuthal nodes")->capture_default_str();

  std::string graz_config;
  auto* graz = app.add_subcommand("grazing", "Tabulate the Boltzmann-Landau weak-form gap over eps");
  graz->add_option("config", graz_config, "INI config")->required();

  std::string snap_path;
  auto* mom = app.add_subcommand("moments", "Print the moments of a snapshot");
  mom->add_option("snapshot", snap_path, "Snapshot file")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kExitOk : kExitConfig;
  }

  if (*sim) return cmd_simulate(sim_config, std::cout, std::cerr);
  if (*ver) {
    if (!out_path.empty()) vopt.out_path = out_path;
    return cmd_verify(vopt, std::cout, std::cerr);
  }
  if (*graz) return cmd_grazing(graz_config, std::cout, std::cerr);
  if (*mom) return cmd_moments(snap_path, std::cout, std::cerr);
  return kExitConfig;
}
