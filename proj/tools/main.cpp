#include <iostream>
#include <string>

#include "CLI11.hpp"
#include "nlocal/cli.hpp"

int main(int argc, char** argv) {
  CLI::App app{
      "Non-n-locality detection and persistency analysis for noisy linear "
      "entanglement-swapping chains"};
  app.require_subcommand(1);

  nlocal::RunConfig cfg;
  std::uint64_t seed = 0;
  long n_cap = 0;
  double margin = 0.0;
  double grid_step = 0.0;

  auto add_common = [&](CLI::App* sub) {
    sub->add_option("--input", cfg.input, "JSON config document");
    sub->add_option("--output", cfg.output, "report path (stdout if omitted)");
    sub->add_option("--format", cfg.format, "json or csv")
        ->check(CLI::IsMember({"json", "csv"}));
    sub->add_option("--seed", seed, "seed for randomized suites")
        ->each([&](const std::string&) { cfg.seed = seed; });
    sub->add_option("--n-cap", n_cap, "chain-length cap for persistency scans")
        ->each([&](const std::string&) { cfg.n_cap = n_cap; });
    sub->add_option("--margin", margin, "detection margin above 1")
        ->each([&](const std::string&) { cfg.margin = margin; });
    sub->add_option("--grid-step", grid_step, "override sweep grid step")
        ->each([&](const std::string&) { cfg.grid_step = grid_step; });
    return sub;
  };

  add_common(app.add_subcommand("detect", "evaluate one network"));
  add_common(app.add_subcommand("persistency", "maximum detecting chain length"));
  add_common(app.add_subcommand("sweep", "persistency over a parameter grid"));
  add_common(app.add_subcommand("table1", "recompute the comparison table"));
  add_common(app.add_subcommand("verify", "run the randomized property suites"));

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e) == 0 ? 0 : nlocal::kExitConfig;
  }

  cfg.command = app.get_subcommands().front()->get_name();
  return nlocal::run_command(cfg, std::cout, std::cerr);
}
