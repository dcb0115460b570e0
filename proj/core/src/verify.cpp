#include "pfs/verify.hpp"

#include <cmath>
#include <iomanip>
#include <random>
#include <sstream>

#include "pfs/analysis.hpp"

namespace pfs {

namespace {

constexpr int kRandomInstances = 5;
constexpr int kEnvelopeHorizon = 2000;
constexpr int kHindsightHorizon = 500;

std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

std::uint64_t point_seed(std::uint64_t base, std::uint64_t suite, std::uint64_t i) {
  return splitmix64(base ^ splitmix64(suite * 0x100000001b3ULL + i));
}

double u01(std::mt19937_64& rng) {
  return static_cast<double>(rng() >> 11) * 0x1.0p-53;
}

// Uniform direction by rejection from the cube: implementation-pinned, unlike
// std::normal_distribution.
Vec unit_direction(std::mt19937_64& rng, int d) {
  for (;;) {
    Vec v(d);
    for (int j = 0; j < d; ++j) v[j] = 2.0 * u01(rng) - 1.0;
    const double n = v.norm();
    if (n >= 1e-3 && n <= 1.0) return v / n;
  }
}

Vec ball_point(std::mt19937_64& rng, int d, double radius) {
  const Vec dir = unit_direction(rng, d);
  return dir * (radius * std::pow(u01(rng), 1.0 / static_cast<double>(d)));
}

std::string vec_json(const Vec& v) {
  std::ostringstream os;
  os << std::setprecision(17) << "[";
  for (int j = 0; j < v.size(); ++j) {
    if (j) os << ",";
    os << v[j];
  }
  os << "]";
  return os.str();
}

InstanceSpec base_spec(const VerifyOptions& opts) {
  return opts.custom ? *opts.custom : quadratic_box_spec();
}

std::vector<ProblemInstance> sweep_instances(const VerifyOptions& opts) {
  std::vector<ProblemInstance> instances;
  instances.push_back(base_spec(opts).instantiate(1, 1));
  for (int k = 0; k < kRandomInstances; ++k) {
    instances.push_back(
        make_random_certified_instance(splitmix64(opts.seed) + static_cast<std::uint64_t>(k)));
  }
  return instances;
}

}  // namespace

InstanceSpec quadratic_box_spec(std::uint64_t seed, int horizon) {
  InstanceSpec spec;
  spec.dim = 2;
  spec.radius = 1.0;
  spec.cost_grad_bound = std::sqrt(2.0);
  spec.cons_grad_bound = 1.0;
  spec.sigma = std::sqrt(0.5);
  spec.epsilon = 0.25;
  spec.rows = {{Vec{{1.0, 0.0}}, 0.5},
               {Vec{{0.0, 1.0}}, 0.5},
               {Vec{{-1.0, 0.0}}, 0.5},
               {Vec{{0.0, -1.0}}, 0.5}};
  spec.seed = seed;
  spec.horizon = horizon;
  return spec;
}

ProblemInstance make_random_certified_instance(std::uint64_t seed, int horizon) {
  std::mt19937_64 rng(splitmix64(seed));
  const int d = 2 + static_cast<int>(rng() % 2);
  const double radius = 1.0;
  const double box = 0.9 * radius / std::sqrt(static_cast<double>(d));
  const double margin = 0.25 * box;

  std::vector<ConstraintModel::Row> rows;
  for (int j = 0; j < d; ++j) {
    Vec plus = Vec::Zero(d);
    plus[j] = 1.0;
    rows.push_back({plus, box});
    rows.push_back({-plus, box});
  }
  const int extra = 3 + static_cast<int>(rng() % 4);
  for (int i = 0; i < extra; ++i) {
    const Vec a = unit_direction(rng, d);
    rows.push_back({a, margin * (1.0 + 1.5 * u01(rng))});
  }
  // The origin satisfies g <= -margin, all row norms are 1 and the box rows
  // keep {g <= 0} inside the radius ball, so the certificate applies.
  const SlaterCertificate cert = slater_certificate(radius, margin, 0.5);
  const double cost_grad_bound =
      2.0 * CostStream::kCostScale * (radius + std::sqrt(static_cast<double>(d)));
  return ProblemInstance(ConstraintModel(std::move(rows)),
                         CostStream::generate(seed, horizon, d), radius,
                         cost_grad_bound, cert.sigma, cert.epsilon);
}

SuiteResult verify_halfspace_equivalence(const VerifyOptions& opts) {
  SuiteResult result{"halfspace-equivalence", true, 0, 0, ""};
  for (int i = 0; i < opts.samples; ++i) {
    std::mt19937_64 rng(point_seed(opts.seed, 1, static_cast<std::uint64_t>(i)));
    const int d = 2 + static_cast<int>(rng() % 3);
    const double radius = 1.0;
    const Vec x = ball_point(rng, d, radius);
    const Vec subgrad =
        unit_direction(rng, d) * std::pow(10.0, -2.0 + 3.0 * u01(rng));
    const Vec grad = unit_direction(rng, d) * std::pow(10.0, -2.0 + 3.0 * u01(rng));
    const double g = 2.0 * u01(rng) - 1.0;
    const double rho = u01(rng);
    const double eta = std::pow(10.0, -4.0 + 4.0 * u01(rng));

    const Vec direct = pfs_step(x, grad, g, subgrad, eta, rho, radius);
    const Vec y = x - eta * grad;
    const Vec composed = project_ball(
        project_halfspace(y, feasibility_halfspace(x, g, subgrad, rho)), radius);
    ++result.checked;
    if ((direct - composed).cwiseAbs().maxCoeff() > 1e-12) {
      result.passed = false;
      std::ostringstream os;
      os << std::setprecision(17) << "{\"suite\":\"halfspace-equivalence\",\"i\":" << i
         << ",\"x\":" << vec_json(x) << ",\"s\":" << vec_json(subgrad)
         << ",\"g\":" << g << ",\"rho\":" << rho << ",\"eta\":" << eta
         << ",\"direct\":" << vec_json(direct) << ",\"composed\":" << vec_json(composed)
         << "}";
      result.counterexample = os.str();
      return result;
    }
  }
  return result;
}

SuiteResult verify_error_bound(const VerifyOptions& opts) {
  SuiteResult result{"error-bound", true, 0, 0, ""};
  const auto instances = sweep_instances(opts);
  for (std::size_t k = 0; k < instances.size(); ++k) {
    const ProblemInstance& inst = instances[k];
    for (int i = 0; i < opts.samples; ++i) {
      std::mt19937_64 rng(point_seed(opts.seed, 2 + k * 100, static_cast<std::uint64_t>(i)));
      const Vec x = ball_point(rng, inst.dim(), inst.radius());
      const double rho = inst.epsilon() * u01(rng);
      ++result.checked;
      if (!check_error_bound(x, inst, rho)) {
        result.passed = false;
        std::ostringstream os;
        os << std::setprecision(17) << "{\"suite\":\"error-bound\",\"instance\":" << k
           << ",\"i\":" << i << ",\"x\":" << vec_json(x) << ",\"rho\":" << rho
           << ",\"g\":" << inst.constraint().value(x)
           << ",\"dist\":" << distance_to_sublevel(x, inst, rho) << "}";
        result.counterexample = os.str();
        return result;
      }
    }
  }
  return result;
}

SuiteResult verify_contraction(const VerifyOptions& opts) {
  SuiteResult result{"contraction", true, 0, 0, ""};
  const auto instances = sweep_instances(opts);

  auto run_check = [&](const ProblemInstance& inst, const Vec& x, double rho,
                       std::size_t k, long i) {
    const std::optional<bool> ok =
        check_contraction(x, inst, rho, opts.contraction_scale);
    if (!ok.has_value()) {
      ++result.skipped;
      return true;
    }
    ++result.checked;
    if (*ok) return true;
    result.passed = false;
    const double before = distance_to_sublevel(x, inst, rho);
    std::ostringstream os;
    os << std::setprecision(17) << "{\"suite\":\"contraction\",\"instance\":" << k
       << ",\"i\":" << i << ",\"x\":" << vec_json(x) << ",\"rho\":" << rho
       << ",\"dist_before\":" << before << "}";
    result.counterexample = os.str();
    return false;
  };

  // Deterministic probes aimed at the default instance's corner region, where
  // the contraction factor is tight; they keep the suite sensitive to an
  // understated factor even at small sample counts.
  if (!opts.custom) {
    const ProblemInstance& box = instances.front();
    const double c = std::sqrt(0.5);
    const Vec probes[] = {Vec{{0.7, 0.7}},  Vec{{c, c}},      Vec{{0.6, 0.6}},
                          Vec{{0.55, 0.55}}, Vec{{0.7, 0.65}}, Vec{{-0.7, -0.7}}};
    const double rhos[] = {0.0, 0.0, 0.1, 0.05, 0.0, 0.0};
    for (std::size_t p = 0; p < std::size(probes); ++p) {
      if (!run_check(box, probes[p], rhos[p], 0, -static_cast<long>(p) - 1)) {
        return result;
      }
    }
  }

  for (std::size_t k = 0; k < instances.size(); ++k) {
    const ProblemInstance& inst = instances[k];
    for (int i = 0; i < opts.samples; ++i) {
      std::mt19937_64 rng(point_seed(opts.seed, 3 + k * 100, static_cast<std::uint64_t>(i)));
      const Vec x = ball_point(rng, inst.dim(), inst.radius());
      const double rho = inst.epsilon() * u01(rng);
      if (!run_check(inst, x, rho, k, i)) return result;
    }
  }
  return result;
}

SuiteResult verify_guarantee_envelopes(const VerifyOptions& opts) {
  SuiteResult result{"guarantee-envelopes", true, 0, 0, ""};
  const InstanceSpec spec = base_spec(opts);
  const int T = kEnvelopeHorizon;

  auto check_run = [&](const ProblemInstance& inst, const PfsConfig& cfg,
                       const char* label, long i) {
    const std::vector<RoundLog> logs = run_pfs(inst, cfg, T);
    const GuaranteeBounds bounds = guarantee_bounds(inst, cfg, T);
    const Metrics metrics = compute_metrics(logs, inst, hindsight_optimum(inst, T));
    ++result.checked;
    if (metrics.regret > bounds.regret_bound + 1e-6) {
      result.passed = false;
      std::ostringstream os;
      os << std::setprecision(17) << "{\"suite\":\"guarantee-envelopes\",\"case\":\""
         << label << "\",\"i\":" << i << ",\"eta\":" << cfg.step_size
         << ",\"rho\":" << cfg.tightening << ",\"regret\":" << metrics.regret
         << ",\"bound\":" << bounds.regret_bound << "}";
      result.counterexample = os.str();
      return false;
    }
    for (const RoundLog& log : logs) {
      if (log.g_value > bounds.violation_bound(log.t) + 1e-9) {
        result.passed = false;
        std::ostringstream os;
        os << std::setprecision(17) << "{\"suite\":\"guarantee-envelopes\",\"case\":\""
           << label << "\",\"i\":" << i << ",\"eta\":" << cfg.step_size
           << ",\"rho\":" << cfg.tightening << ",\"t\":" << log.t
           << ",\"g\":" << log.g_value
           << ",\"bound\":" << bounds.violation_bound(log.t) << "}";
        result.counterexample = os.str();
        return false;
      }
    }
    return true;
  };

  auto fail = [&](const char* label, const std::string& detail) {
    result.passed = false;
    result.counterexample = std::string("{\"suite\":\"guarantee-envelopes\",\"case\":\"") +
                            label + "\"," + detail + "}";
  };

  // Random draws spanning the preset magnitudes at this horizon.
  for (int i = 0; i < opts.samples; ++i) {
    std::mt19937_64 rng(point_seed(opts.seed, 4, static_cast<std::uint64_t>(i)));
    const ProblemInstance inst =
        spec.instantiate(splitmix64(opts.seed + 77) + static_cast<std::uint64_t>(i), T);
    const double eta_max =
        2.0 * inst.radius() / (inst.cost_grad_bound() * std::sqrt(static_cast<double>(T)));
    const double eta =
        std::exp(std::log(1e-4) + (std::log(eta_max) - std::log(1e-4)) * u01(rng));
    const double rho = inst.epsilon() * u01(rng);
    Vec x1 = (i % 2 == 1) ? ball_point(rng, inst.dim(), inst.radius())
                          : Vec(Vec::Zero(inst.dim()));
    if (!check_run(inst, PfsConfig{eta, rho, std::move(x1)}, "random", i)) {
      return result;
    }
  }

  // The three presets with their individual guarantees.
  const ProblemInstance inst = spec.instantiate(splitmix64(opts.seed + 99), T);
  const Vec origin = Vec::Zero(inst.dim());
  const double g_origin = inst.constraint().value(origin);

  if (g_origin < 0.0) {
    const double alpha = std::min(inst.epsilon(), -g_origin);
    const PfsConfig cfg = preset_anytime_feasible(inst, alpha, T, origin);
    if (!check_run(inst, cfg, "preset-anytime", 0)) return result;
    const Metrics m = compute_metrics(run_pfs(inst, cfg, T), inst,
                                      hindsight_optimum(inst, T));
    if (m.max_violation > 1e-12) {
      std::ostringstream os;
      os << std::setprecision(17) << "\"max_violation\":" << m.max_violation;
      fail("preset-anytime", os.str());
      return result;
    }
  } else {
    ++result.skipped;  // no strictly feasible start available at the origin
  }

  {
    const PfsConfig cfg = preset_eventual_feasible(inst, T, origin);
    if (!check_run(inst, cfg, "preset-eventual", 0)) return result;
    const std::vector<RoundLog> logs = run_pfs(inst, cfg, T);
    const EventualFeasibilityReport report = eventual_feasibility_report(inst, T);
    double cum = 0.0;
    for (const RoundLog& log : logs) {
      cum += log.g_value;
      if (log.t >= report.feasible_after && log.g_value > 1e-12) {
        std::ostringstream os;
        os << std::setprecision(17) << "\"t\":" << log.t << ",\"g\":" << log.g_value
           << ",\"feasible_after\":" << report.feasible_after;
        fail("preset-eventual", os.str());
        return result;
      }
    }
    if (report.cumulative_ok && cum > 1e-9) {
      std::ostringstream os;
      os << std::setprecision(17) << "\"cum_violation\":" << cum;
      fail("preset-eventual", os.str());
      return result;
    }
  }

  {
    const PfsConfig cfg = preset_regret_optimal(inst, T, origin);
    if (!check_run(inst, cfg, "preset-regret-optimal", 0)) return result;
    const std::vector<RoundLog> logs = run_pfs(inst, cfg, T);
    const Metrics m = compute_metrics(logs, inst, hindsight_optimum(inst, T));
    const double regret_cap = 2.0 * inst.radius() * inst.cost_grad_bound() *
                              std::sqrt(static_cast<double>(T));
    if (m.regret > regret_cap + 1e-6) {
      std::ostringstream os;
      os << std::setprecision(17) << "\"regret\":" << m.regret
         << ",\"bound\":" << regret_cap;
      fail("preset-regret-optimal", os.str());
      return result;
    }
    for (const RoundLog& log : logs) {
      if (log.g_value > regret_optimal_violation_bound(inst, T, log.t) + 1e-9) {
        std::ostringstream os;
        os << std::setprecision(17) << "\"t\":" << log.t << ",\"g\":" << log.g_value
           << ",\"bound\":" << regret_optimal_violation_bound(inst, T, log.t);
        fail("preset-regret-optimal", os.str());
        return result;
      }
    }
  }

  return result;
}

SuiteResult verify_hindsight_equivalence(const VerifyOptions& opts) {
  SuiteResult result{"hindsight-equivalence", true, 0, 0, ""};
  const InstanceSpec spec = base_spec(opts);
  for (int i = 0; i < opts.samples; ++i) {
    const ProblemInstance inst =
        spec.instantiate(splitmix64(opts.seed + 5) + static_cast<std::uint64_t>(i),
                         kHindsightHorizon);
    const Vec closed = hindsight_optimum(inst, kHindsightHorizon);
    const Vec iterative = hindsight_optimum_iterative(inst, kHindsightHorizon);
    ++result.checked;
    if ((closed - iterative).cwiseAbs().maxCoeff() > 1e-6) {
      result.passed = false;
      std::ostringstream os;
      os << std::setprecision(17) << "{\"suite\":\"hindsight-equivalence\",\"i\":" << i
         << ",\"closed\":" << vec_json(closed)
         << ",\"iterative\":" << vec_json(iterative) << "}";
      result.counterexample = os.str();
      return result;
    }
  }
  return result;
}

std::vector<SuiteResult> run_verify_suites(const VerifyOptions& opts) {
  return {verify_halfspace_equivalence(opts), verify_error_bound(opts),
          verify_contraction(opts), verify_guarantee_envelopes(opts),
          verify_hindsight_equivalence(opts)};
}

}  // namespace pfs
