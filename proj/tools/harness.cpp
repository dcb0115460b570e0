#include "harness.hpp"

#include <atomic>
#include <charconv>
#include <cmath>
#include <fstream>
#include <iostream>
#include <sstream>
#include <stdexcept>
#include <thread>

#include "json.hpp"
#include "pfs/algorithms.hpp"

namespace pfs::harness {

namespace {

using nlohmann::json;

double mean_of(const std::vector<double>& v) {
  double s = 0.0;
  for (double x : v) s += x;
  return s / static_cast<double>(v.size());
}

// Sample standard deviation; 0 for a single observation.
double std_of(const std::vector<double>& v, double mean) {
  if (v.size() < 2) return 0.0;
  double s = 0.0;
  for (double x : v) s += (x - mean) * (x - mean);
  return std::sqrt(s / static_cast<double>(v.size() - 1));
}

SweepPlan parse_sweep(const json& j, double default_alpha, double default_c) {
  SweepPlan plan;
  if (!j.contains("horizons") || !j.at("horizons").is_array() ||
      j.at("horizons").empty()) {
    throw std::invalid_argument("sweep config: \"horizons\" must be a nonempty array");
  }
  for (const json& h : j.at("horizons")) {
    if (!h.is_number_integer() || h.get<std::int64_t>() < 1) {
      throw std::invalid_argument("sweep config: horizons must be positive integers");
    }
    plan.horizons.push_back(static_cast<int>(h.get<std::int64_t>()));
  }
  if (!j.contains("trials") || !j.at("trials").is_number_integer() ||
      j.at("trials").get<std::int64_t>() < 1) {
    throw std::invalid_argument("sweep config: \"trials\" must be a positive integer");
  }
  plan.trials = static_cast<int>(j.at("trials").get<std::int64_t>());
  if (!j.contains("algorithms") || !j.at("algorithms").is_array() ||
      j.at("algorithms").empty()) {
    throw std::invalid_argument(
        "sweep config: \"algorithms\" must be a nonempty array");
  }
  for (const json& a : j.at("algorithms")) {
    if (!a.is_string() || !is_known_algo(a.get<std::string>())) {
      throw std::invalid_argument("sweep config: unknown algorithm name");
    }
    plan.algorithms.push_back(a.get<std::string>());
  }
  plan.base_seed = j.contains("base_seed")
                       ? static_cast<std::uint64_t>(j.at("base_seed").get<std::int64_t>())
                       : 1;
  plan.alpha = j.contains("alpha") ? j.at("alpha").get<double>() : default_alpha;
  plan.c = j.contains("c") ? j.at("c").get<double>() : default_c;
  if (j.contains("output_path")) {
    plan.output_path = j.at("output_path").get<std::string>();
  }
  return plan;
}

}  // namespace

const std::vector<std::string>& known_algos() {
  static const std::vector<std::string> names = {"PFS-Cor1", "PFS-Cor2", "PFS-Cor3",
                                                 "DPP", "DPP-T"};
  return names;
}

bool is_known_algo(const std::string& name) {
  for (const std::string& n : known_algos()) {
    if (n == name) return true;
  }
  return false;
}

std::uint64_t fnv1a(const std::string& bytes) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char c : bytes) {
    h ^= c;
    h *= 0x100000001b3ULL;
  }
  return h;
}

std::string format_double(double v) {
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof(buf), v);
  return std::string(buf, res.ptr);
}

Config parse_config(const std::string& text) {
  Config cfg{parse_instance_spec(text)};
  cfg.config_hash = fnv1a(text);
  const json j = json::parse(text);
  if (j.contains("alpha")) cfg.alpha = j.at("alpha").get<double>();
  if (j.contains("c")) cfg.c = j.at("c").get<double>();
  if (j.contains("sweep")) {
    if (!j.at("sweep").is_object()) {
      throw std::invalid_argument("config: \"sweep\" must be an object");
    }
    cfg.sweep = parse_sweep(j.at("sweep"), cfg.alpha, cfg.c);
  }
  return cfg;
}

Config load_config(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) {
    throw std::runtime_error("config: cannot open " + path);
  }
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse_config(buf.str());
}

namespace {

RunResult execute_on(const ProblemInstance& inst, const std::string& algo,
                     double alpha, double c, int T) {
  const Vec origin = Vec::Zero(inst.dim());
  std::vector<RoundLog> logs;
  if (algo == "PFS-Cor1") {
    logs = run_pfs(inst, preset_anytime_feasible(inst, alpha, T, origin), T);
  } else if (algo == "PFS-Cor2") {
    logs = run_pfs(inst, preset_eventual_feasible(inst, T, origin), T);
  } else if (algo == "PFS-Cor3") {
    logs = run_pfs(inst, preset_regret_optimal(inst, T, origin), T);
  } else if (algo == "DPP") {
    logs = run_dpp(inst, preset_dpp(inst, T, /*tightened=*/false), T);
  } else if (algo == "DPP-T") {
    logs = run_dpp(inst, preset_dpp(inst, T, /*tightened=*/true, c), T);
  } else {
    throw std::invalid_argument("unknown algorithm \"" + algo + "\"");
  }
  Vec comparator = hindsight_optimum(inst, T);
  Metrics metrics = compute_metrics(logs, inst, comparator);
  return RunResult{inst, std::move(logs), std::move(comparator), metrics};
}

}  // namespace

RunResult execute_run(const Config& cfg, const std::string& algo,
                      std::uint64_t seed, int T) {
  if (!is_known_algo(algo)) {
    throw std::invalid_argument("unknown algorithm \"" + algo + "\"");
  }
  return execute_on(cfg.instance.instantiate(seed, T), algo, cfg.alpha, cfg.c, T);
}

void write_run_csv(std::ostream& os, const Config& cfg, std::uint64_t seed,
                   const RunResult& result) {
  const int d = result.instance.dim();
  os << "# base_seed=" << seed << " generator=" << CostStream::kGeneratorId
     << " config_hash=" << std::hex << cfg.config_hash << std::dec << "\n";
  os << "t";
  for (int j = 0; j < d; ++j) os << ",x" << j;
  os << ",f,g,cum_regret,cum_violation,cum_pos_violation\n";
  double cum_regret = 0.0, cum_violation = 0.0, cum_pos = 0.0;
  for (const RoundLog& log : result.logs) {
    cum_regret +=
        log.cost_value - result.instance.costs().value(log.t, result.comparator);
    cum_violation += log.g_value;
    cum_pos += std::max(log.g_value, 0.0);
    os << log.t;
    for (int j = 0; j < d; ++j) os << "," << format_double(log.x[j]);
    os << "," << format_double(log.cost_value) << "," << format_double(log.g_value)
       << "," << format_double(cum_regret) << "," << format_double(cum_violation)
       << "," << format_double(cum_pos) << "\n";
  }
}

std::vector<SweepRow> run_sweep(const Config& cfg, const SweepPlan& plan,
                                int workers) {
  struct Cell {
    std::size_t algo_idx;
    std::size_t horizon_idx;
    int trial;
  };
  std::vector<Cell> cells;
  for (std::size_t a = 0; a < plan.algorithms.size(); ++a) {
    for (std::size_t h = 0; h < plan.horizons.size(); ++h) {
      for (int trial = 0; trial < plan.trials; ++trial) {
        cells.push_back(Cell{a, h, trial});
      }
    }
  }

  std::vector<Metrics> measured(cells.size());
  std::vector<std::string> errors(cells.size());
  std::atomic<std::size_t> next{0};
  auto work = [&]() {
    for (;;) {
      const std::size_t i = next.fetch_add(1);
      if (i >= cells.size()) return;
      const Cell& cell = cells[i];
      try {
        const int T = plan.horizons[cell.horizon_idx];
        const std::uint64_t seed =
            plan.base_seed + static_cast<std::uint64_t>(cell.trial);
        measured[i] = execute_on(cfg.instance.instantiate(seed, T),
                                 plan.algorithms[cell.algo_idx], plan.alpha, plan.c,
                                 T)
                          .metrics;
      } catch (const std::exception& e) {
        errors[i] = e.what();
      }
    }
  };

  int n_workers = workers > 0
                      ? workers
                      : static_cast<int>(std::max(1u, std::thread::hardware_concurrency()));
  n_workers = std::min<int>(n_workers, static_cast<int>(cells.size()));
  std::vector<std::thread> pool;
  pool.reserve(static_cast<std::size_t>(n_workers));
  for (int w = 0; w < n_workers; ++w) pool.emplace_back(work);
  for (std::thread& t : pool) t.join();

  for (std::size_t i = 0; i < cells.size(); ++i) {
    if (!errors[i].empty()) {
      throw std::runtime_error("sweep cell failed: " + errors[i]);
    }
  }

  std::vector<SweepRow> rows;
  for (std::size_t a = 0; a < plan.algorithms.size(); ++a) {
    for (std::size_t h = 0; h < plan.horizons.size(); ++h) {
      const int T = plan.horizons[h];
      std::vector<double> regret, cumv, cumpos, maxv, firstf;
      for (std::size_t i = 0; i < cells.size(); ++i) {
        if (cells[i].algo_idx != a || cells[i].horizon_idx != h) continue;
        const Metrics& m = measured[i];
        regret.push_back(m.regret);
        cumv.push_back(m.cum_violation);
        cumpos.push_back(m.cum_pos_violation);
        maxv.push_back(m.max_violation);
        firstf.push_back(static_cast<double>(m.first_feasible_round.value_or(T + 1)));
      }
      SweepRow row;
      row.algo = plan.algorithms[a];
      row.horizon = T;
      row.trials = plan.trials;
      row.regret_mean = mean_of(regret);
      row.regret_std = std_of(regret, row.regret_mean);
      row.cum_violation_mean = mean_of(cumv);
      row.cum_violation_std = std_of(cumv, row.cum_violation_mean);
      row.cum_pos_violation_mean = mean_of(cumpos);
      row.cum_pos_violation_std = std_of(cumpos, row.cum_pos_violation_mean);
      row.max_violation_mean = mean_of(maxv);
      row.max_violation_std = std_of(maxv, row.max_violation_mean);
      row.first_feasible_mean = mean_of(firstf);
      row.first_feasible_std = std_of(firstf, row.first_feasible_mean);
      rows.push_back(std::move(row));
    }
  }
  return rows;
}

void write_sweep_csv(std::ostream& os, const Config& cfg, const SweepPlan& plan,
                     const std::vector<SweepRow>& rows) {
  os << "# base_seed=" << plan.base_seed << " generator=" << CostStream::kGeneratorId
     << " config_hash=" << std::hex << cfg.config_hash << std::dec << "\n";
  os << "algo,T,trials,regret_mean,regret_std,cum_violation_mean,cum_violation_std,"
        "cum_pos_violation_mean,cum_pos_violation_std,max_violation_mean,"
        "max_violation_std,first_feasible_mean,first_feasible_std\n";
  for (const SweepRow& r : rows) {
    os << r.algo << "," << r.horizon << "," << r.trials << ","
       << format_double(r.regret_mean) << "," << format_double(r.regret_std) << ","
       << format_double(r.cum_violation_mean) << ","
       << format_double(r.cum_violation_std) << ","
       << format_double(r.cum_pos_violation_mean) << ","
       << format_double(r.cum_pos_violation_std) << ","
       << format_double(r.max_violation_mean) << ","
       << format_double(r.max_violation_std) << ","
       << format_double(r.first_feasible_mean) << ","
       << format_double(r.first_feasible_std) << "\n";
  }
}

int cmd_run(const std::string& config_path, const std::string& algo,
            std::optional<int> horizon, std::optional<std::uint64_t> seed,
            const std::string& out_path) {
  const Config cfg = load_config(config_path);
  const int T = horizon.value_or(cfg.instance.horizon);
  const std::uint64_t s = seed.value_or(cfg.instance.seed);
  const RunResult result = execute_run(cfg, algo, s, T);

  std::ofstream out(out_path, std::ios::binary);
  if (!out) {
    throw std::runtime_error("run: cannot open output file " + out_path);
  }
  out.imbue(std::locale::classic());
  write_run_csv(out, cfg, s, result);
  out.close();

  std::cout << "wrote " << out_path << ": algo=" << algo << " T=" << T
            << " seed=" << s << " regret=" << format_double(result.metrics.regret)
            << " cum_pos_violation="
            << format_double(result.metrics.cum_pos_violation) << "\n";
  return 0;
}

int cmd_sweep(const std::string& config_path,
              const std::optional<std::string>& out_path, int workers) {
  const Config cfg = load_config(config_path);
  if (!cfg.sweep) {
    throw std::invalid_argument("sweep: config has no \"sweep\" object");
  }
  const SweepPlan& plan = *cfg.sweep;
  const std::string out = out_path.value_or(plan.output_path);
  if (out.empty()) {
    throw std::invalid_argument(
        "sweep: no output path (--out or sweep.output_path required)");
  }
  const std::vector<SweepRow> rows = run_sweep(cfg, plan, workers);

  std::ofstream os(out, std::ios::binary);
  if (!os) {
    throw std::runtime_error("sweep: cannot open output file " + out);
  }
  os.imbue(std::locale::classic());
  write_sweep_csv(os, cfg, plan, rows);
  os.close();

  std::cout << "wrote " << out << ": " << rows.size() << " summary rows ("
            << plan.algorithms.size() << " algorithms x " << plan.horizons.size()
            << " horizons, " << plan.trials << " trials each)\n";
  return 0;
}

int cmd_verify(const std::string& level,
               const std::optional<std::string>& instance_path) {
  VerifyOptions opts;
  if (level == "quick") {
    opts.samples = 100;
  } else if (level == "full") {
    opts.samples = 10000;
  } else {
    throw std::invalid_argument("verify: level must be \"quick\" or \"full\"");
  }
  if (instance_path) {
    opts.custom = load_instance_spec(*instance_path);
  }
  const std::vector<SuiteResult> results = run_verify_suites(opts);
  bool all_passed = true;
  for (const SuiteResult& r : results) {
    std::cout << (r.passed ? "[PASS] " : "[FAIL] ") << r.name << " (checked "
              << r.checked << ", skipped " << r.skipped << ")\n";
    if (!r.passed) {
      all_passed = false;
      std::cout << "  counterexample: " << r.counterexample << "\n";
    }
  }
  return all_passed ? 0 : 1;
}

}  // namespace pfs::harness
