#include <iostream>
#include <optional>
#include <string>

#include "CLI11.hpp"
#include "uio/cli.hpp"

int main(int argc, char** argv) {
  CLI::App app{"Unknown input observer design and simulation"};
  app.require_subcommand(1);

  std::string model;
  std::string out_path;
  std::string csv_path;
  std::string plot_path;
  bool strict = false;
  std::string scenario_name;

  auto* check = app.add_subcommand("check", "Check the observer existence conditions");
  check->add_option("model", model, "Model file (JSON)")->required();

  auto* design = app.add_subcommand("design", "Design observer gains");
  design->add_option("model", model, "Model file (JSON)")->required();
  design->add_option("-o,--output", out_path, "Gains file to write")->required();

  auto* simulate = app.add_subcommand("simulate", "Simulate plant and observer");
  simulate->add_option("model", model, "Model file (JSON)")->required();
  simulate->add_option("--csv", csv_path, "Trajectory CSV to write")->required();
  simulate->add_option("--plot", plot_path, "SVG plot to write");
  simulate->add_flag("--strict", strict, "Reject coarse sampling for disturbance estimation");

  auto* scenario = app.add_subcommand("scenario", "Built-in scenarios");
  scenario->require_subcommand(1);
  auto* export_cmd = scenario->add_subcommand("export", "Write a built-in scenario as a model file");
  export_cmd->add_option("name", scenario_name, "example1 | example2 | example3")->required();
  export_cmd->add_option("-o,--output", out_path, "Model file to write")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : uio::cli::kBadInput;
  }

  if (*check) return uio::cli::cmd_check(model, std::cout, std::cerr);
  if (*design) return uio::cli::cmd_design(model, out_path, std::cout, std::cerr);
  if (*simulate) {
    std::optional<std::string> plot;
    if (!plot_path.empty()) plot = plot_path;
    return uio::cli::cmd_simulate(model, csv_path, plot, strict, std::cout, std::cerr);
  }
  if (*export_cmd) {
    return uio::cli::cmd_scenario_export(scenario_name, out_path, std::cout, std::cerr);
  }
  return uio::cli::kBadInput;
}
