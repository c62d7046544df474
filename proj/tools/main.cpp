#include <CLI11.hpp>

#include <iostream>

#include "solwave/config.hpp"
#include "solwave/run.hpp"

int main(int argc, char** argv) {
  CLI::App app{"solwave: solitary waves of u_t + (m(D)u - u n(D)u^2)_x = 0"};
  app.require_subcommand(1, 1);

  std::string config_path;
  std::string out_dir;
  std::int64_t seed = -1;
  bool quiet = false;

  for (const char* name : {"solve", "sweep", "evolve", "probe"}) {
    auto* sub = app.add_subcommand(name);
    sub->add_option("--config,-c", config_path, "YAML configuration file")->required()->check(CLI::ExistingFile);
    sub->add_option("--out,-o", out_dir, "output directory (overrides output_dir)");
    sub->add_option("--seed", seed, "random seed (overrides seed)")->check(CLI::NonNegativeNumber);
    sub->add_flag("--quiet,-q", quiet, "suppress progress output");
  }
  CLI11_PARSE(app, argc, argv);

  const std::string command = app.get_subcommands().front()->get_name();
  try {
    solwave::RunConfig cfg = solwave::load_config(config_path, solwave::parse_command(command));
    if (!out_dir.empty()) cfg.output_dir = out_dir;
    if (seed >= 0) cfg.seed = static_cast<std::uint64_t>(seed);
    const int status = solwave::run(cfg, std::cout, quiet);
    if (!quiet) std::cout << (status == 0 ? "verifications passed" : "verifications FAILED") << '\n';
    return status;
  } catch (const solwave::ConfigError& e) {
    std::cerr << "config error: " << e.what() << '\n';
    return solwave::exit_usage;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return solwave::exit_failed;
  }
}
