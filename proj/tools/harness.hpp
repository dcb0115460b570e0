#ifndef PFS_TOOLS_HARNESS_HPP
#define PFS_TOOLS_HARNESS_HPP

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "pfs/analysis.hpp"
#include "pfs/instance_io.hpp"
#include "pfs/verify.hpp"

namespace pfs::harness {

// Algorithm wire names accepted by --algo and sweep configs.
bool is_known_algo(const std::string& name);
const std::vector<std::string>& known_algos();

// Sweep grid: one summary row per (algorithm, horizon) aggregated over
// trials; trial seeds are base_seed + trial index.
struct SweepPlan {
  std::vector<int> horizons;
  int trials = 0;
  std::vector<std::string> algorithms;
  std::uint64_t base_seed = 0;
  double alpha = 0.25;  // feasibility margin consumed by PFS-Cor1
  double c = 20.0;      // tightening scale consumed by DPP-T
  std::string output_path;
};

// One JSON document: the instance fields, optional run-level "alpha"/"c",
// and an optional "sweep" object.
struct Config {
  InstanceSpec instance;
  double alpha = 0.25;
  double c = 20.0;
  std::optional<SweepPlan> sweep;
  std::uint64_t config_hash = 0;  // FNV-1a over the raw config bytes
};

Config parse_config(const std::string& text);
Config load_config(const std::string& path);

std::uint64_t fnv1a(const std::string& bytes);

// Shortest decimal that round-trips to the same double (<= 17 significant
// digits).
std::string format_double(double v);

struct RunResult {
  ProblemInstance instance;
  std::vector<RoundLog> logs;
  Vec comparator;  // hindsight optimum for the run's horizon
  Metrics metrics;
};

// Build the instance at (seed, T), start at the origin, run the named
// algorithm. Throws std::invalid_argument for unknown names.
RunResult execute_run(const Config& cfg, const std::string& algo,
                      std::uint64_t seed, int T);

// Per-round CSV: provenance comment, fixed header
// t,x0,...,x{d-1},f,g,cum_regret,cum_violation,cum_pos_violation.
void write_run_csv(std::ostream& os, const Config& cfg, std::uint64_t seed,
                   const RunResult& result);

struct SweepRow {
  std::string algo;
  int horizon = 0;
  int trials = 0;
  double regret_mean = 0, regret_std = 0;
  double cum_violation_mean = 0, cum_violation_std = 0;
  double cum_pos_violation_mean = 0, cum_pos_violation_std = 0;
  double max_violation_mean = 0, max_violation_std = 0;
  // first feasible round aggregated with the convention absent -> T+1
  double first_feasible_mean = 0, first_feasible_std = 0;
};

// Cells (algorithm x horizon x trial) run in parallel across `workers`
// threads (0 = hardware concurrency); the aggregation order is fixed, so the
// output is identical for any worker count.
std::vector<SweepRow> run_sweep(const Config& cfg, const SweepPlan& plan,
                                int workers);

void write_sweep_csv(std::ostream& os, const Config& cfg, const SweepPlan& plan,
                     const std::vector<SweepRow>& rows);

// Subcommand entry points; return a process exit code.
int cmd_run(const std::string& config_path, const std::string& algo,
            std::optional<int> horizon, std::optional<std::uint64_t> seed,
            const std::string& out_path);
int cmd_sweep(const std::string& config_path,
              const std::optional<std::string>& out_path, int workers);
int cmd_verify(const std::string& level,
               const std::optional<std::string>& instance_path);

}  // namespace pfs::harness

#endif  // PFS_TOOLS_HARNESS_HPP
