#include <iostream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "commands.hpp"
#include "config.hpp"
#include "nnls/errors.hpp"

int main(int argc, char** argv) {
  using namespace nnls::cli;
  CLI::App app{"Scattering, asymptotics and PDE checks for the nonlocal NLS equation"};
  std::string command, config_path, out_dir;
  int threads = 1;
  std::vector<std::string> overrides;
  app.add_option("command", command, "scatter | spectrum | soliton | evolve | asymptote | compare")
      ->required()
      ->check(CLI::IsMember(command_names()));
  app.add_option("--config", config_path, "JSON run configuration")->required();
  app.add_option("--out", out_dir, "output directory")->required();
  app.add_option("--threads", threads, "worker threads for k-grid sweeps")->check(CLI::PositiveNumber);
  app.add_option("--tol-override", overrides, "override a named tolerance: name=value")->take_all();
  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return exit_config;
  }
  try {
    const RunConfig cfg = load_config(config_path, out_dir, threads, overrides);
    return run_command(command, cfg);
  } catch (const nnls::Error& e) {
    std::cerr << "nnls: " << e.what() << '\n';
    return e.kind() == nnls::ErrorKind::ConfigError ? exit_config : exit_pipeline;
  }
}
