#include <cstdint>
#include <iostream>
#include <optional>
#include <string>

#include "CLI11.hpp"
#include "harness.hpp"

int main(int argc, char** argv) {
  CLI::App app{"Constrained online convex optimization harness"};
  app.require_subcommand(1);

  std::string config_path, algo, out_path, level = "quick";
  std::optional<int> horizon;
  std::optional<std::uint64_t> seed;
  std::optional<std::string> sweep_out, instance_path;
  int workers = 0;

  CLI::App* run = app.add_subcommand("run", "Run one algorithm, write per-round CSV");
  run->add_option("--config", config_path, "JSON config file")
      ->required()
      ->check(CLI::ExistingFile);
  run->add_option("--algo", algo,
                  "Algorithm: PFS-Cor1, PFS-Cor2, PFS-Cor3, DPP, DPP-T")
      ->required();
  run->add_option("--T", horizon, "Horizon override (default: config T)");
  run->add_option("--seed", seed, "Stream seed override (default: config seed)");
  run->add_option("--out", out_path, "Output CSV path")->required();

  CLI::App* sweep =
      app.add_subcommand("sweep", "Run the configured sweep grid, write summary CSV");
  sweep->add_option("--config", config_path, "JSON config file with a sweep object")
      ->required()
      ->check(CLI::ExistingFile);
  sweep->add_option("--out", sweep_out, "Output CSV path (default: sweep.output_path)");
  sweep->add_option("--workers", workers,
                    "Parallel workers (default 0 = hardware concurrency)");

  CLI::App* verify = app.add_subcommand("verify", "Run the property suites");
  verify->add_option("--level", level, "quick (100 samples) or full (10000)")
      ->check(CLI::IsMember({"quick", "full"}));
  verify->add_option("--instance", instance_path,
                     "Instance JSON overriding the built-in base instance")
      ->check(CLI::ExistingFile);

  CLI11_PARSE(app, argc, argv);

  try {
    if (run->parsed()) {
      return pfs::harness::cmd_run(config_path, algo, horizon, seed, out_path);
    }
    if (sweep->parsed()) {
      return pfs::harness::cmd_sweep(config_path, sweep_out, workers);
    }
    if (verify->parsed()) {
      return pfs::harness::cmd_verify(level, instance_path);
    }
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 1;
}
