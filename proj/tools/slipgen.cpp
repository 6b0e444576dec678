#include <iostream>
#include <string>

#include "CLI11.hpp"
#include "slipgen/cli/commands.hpp"

int main(int argc, char** argv) {
  CLI::App app{"Karhunen-Loeve slip realizations, Okada deformation and tsunami-proxy ensembles"};
  app.require_subcommand(1);

  std::string config;
  std::string out;
  unsigned workers = 0;
  std::uint64_t seed = 0;

  for (auto [name, help] : {std::pair{"modes", "eigenvalue spectrum and leading modes"},
                            std::pair{"sample", "slip and deformation of a few draws"},
                            std::pair{"ensemble", "Monte Carlo proxy ensembles and statistics"},
                            std::pair{"bank", "build or refresh the unit-source bank cache"}}) {
    auto* sub = app.add_subcommand(name, help);
    sub->add_option("--config", config, "JSON run configuration")->required()->check(CLI::ExistingFile);
    sub->add_option("--out", out, "output directory (overrides the config)");
    sub->add_option("--workers", workers, "worker threads (default: available parallelism)");
    sub->add_option("--seed", seed, "random seed (overrides the config)");
  }

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 1;
  }

  const CLI::App* sub = app.get_subcommands().front();
  slipgen::cli::CommandOptions options;
  options.workers = workers;
  options.log = &std::cout;
  if (!out.empty()) options.out = out;
  if (sub->count("--seed") > 0) options.seed = seed;
  return slipgen::cli::run_command(sub->get_name(), config, options, std::cerr);
}
