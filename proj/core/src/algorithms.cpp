#include "pfs/algorithms.hpp"

#include <cmath>
#include <stdexcept>
#include <utility>

namespace pfs {

namespace {

void validate_step_inputs(const Vec& x, const Vec& cost_grad, double g_value,
                          const Vec& subgrad, double step_size, double tightening,
                          double radius) {
  if (!is_finite(x) || !is_finite(cost_grad) || !is_finite(subgrad) ||
      !std::isfinite(g_value)) {
    throw std::invalid_argument("pfs_step: non-finite input");
  }
  if (x.size() != cost_grad.size() || x.size() != subgrad.size()) {
    throw std::invalid_argument("pfs_step: dimension mismatch");
  }
  if (!(step_size > 0.0)) {
    throw std::invalid_argument("pfs_step: step size must be positive");
  }
  if (!(tightening >= 0.0) || !std::isfinite(tightening)) {
    throw std::invalid_argument("pfs_step: tightening must be nonnegative");
  }
  if (!(radius > 0.0)) {
    throw std::invalid_argument("pfs_step: radius must be positive");
  }
}

void validate_pfs_config(const ProblemInstance& inst, const PfsConfig& cfg) {
  if (!(cfg.step_size > 0.0) || !std::isfinite(cfg.step_size)) {
    throw std::invalid_argument("PfsConfig: step size must be positive");
  }
  if (!(cfg.tightening >= 0.0) || cfg.tightening > inst.epsilon()) {
    throw std::invalid_argument("PfsConfig: tightening must lie in [0, epsilon]");
  }
  if (cfg.start.size() != inst.dim() || !is_finite(cfg.start)) {
    throw std::invalid_argument("PfsConfig: bad start point");
  }
  if (cfg.start.norm() > inst.radius() * (1.0 + 1e-12)) {
    throw std::invalid_argument("PfsConfig: start point outside the radius ball");
  }
}

void validate_horizon(const ProblemInstance& inst, int T) {
  if (T < 1 || T > inst.costs().horizon()) {
    throw std::invalid_argument("run: T must lie in [1, instance horizon]");
  }
}

}  // namespace

Halfspace feasibility_halfspace(const Vec& x, double g_value, const Vec& subgrad,
                                double tightening) {
  if (!is_finite(x) || !is_finite(subgrad) || !std::isfinite(g_value) ||
      !std::isfinite(tightening)) {
    throw std::invalid_argument("feasibility_halfspace: non-finite input");
  }
  if (subgrad.norm() < kMinDirectionNorm) {
    throw std::invalid_argument("feasibility_halfspace: degenerate subgradient");
  }
  return Halfspace{subgrad, subgrad.dot(x) - g_value - tightening};
}

PfsStepDetail pfs_step_detailed(const Vec& x, const Vec& cost_grad, double g_value,
                                const Vec& subgrad, double step_size,
                                double tightening, double radius) {
  validate_step_inputs(x, cost_grad, g_value, subgrad, step_size, tightening, radius);
  const Vec y = x - step_size * cost_grad;
  if (subgrad.norm() < kMinDirectionNorm) {
    return PfsStepDetail{project_ball(y, radius), 0.0};
  }
  const double hinge =
      std::max(g_value + subgrad.dot(y - x) + tightening, 0.0);
  const double multiplier = hinge / subgrad.squaredNorm();
  return PfsStepDetail{project_ball(y - multiplier * subgrad, radius), multiplier};
}

Vec pfs_step(const Vec& x, const Vec& cost_grad, double g_value, const Vec& subgrad,
             double step_size, double tightening, double radius) {
  return pfs_step_detailed(x, cost_grad, g_value, subgrad, step_size, tightening,
                           radius)
      .next;
}

std::vector<RoundLog> run_pfs(const ProblemInstance& inst, const PfsConfig& cfg,
                              int T) {
  validate_pfs_config(inst, cfg);
  validate_horizon(inst, T);

  std::vector<RoundLog> logs;
  logs.reserve(static_cast<std::size_t>(T));
  Vec x = cfg.start;
  for (int t = 1; t <= T; ++t) {
    const CostStream::Eval cost = inst.costs().evaluate(t, x);
    const ConstraintModel::Eval cons = inst.constraint().evaluate(x);

    RoundLog log;
    log.t = t;
    log.x = x;
    log.cost_value = cost.value;
    log.g_value = cons.value;

    if (t < T) {
      PfsStepDetail step =
          pfs_step_detailed(x, cost.gradient, cons.value, cons.subgradient,
                            cfg.step_size, cfg.tightening, inst.radius());
      log.eta_effective = step.feasibility_multiplier;
      x = std::move(step.next);
    } else {
      // Round T: the action is recorded as played; no trailing update (and no
      // extra oracle work beyond the single per-round query above).
      log.eta_effective = 0.0;
    }
    logs.push_back(std::move(log));
  }
  return logs;
}

std::vector<RoundLog> run_dpp(const ProblemInstance& inst, const DppConfig& cfg,
                              int T) {
  if (!(cfg.prox_weight > 0.0) || !(cfg.cost_weight > 0.0)) {
    throw std::invalid_argument("DppConfig: weights must be positive");
  }
  if (!(cfg.tightening >= 0.0) || !std::isfinite(cfg.tightening)) {
    throw std::invalid_argument("DppConfig: tightening must be nonnegative");
  }
  if (!(cfg.initial_queue >= 0.0)) {
    throw std::invalid_argument("DppConfig: initial queue must be nonnegative");
  }
  if (cfg.start.size() != inst.dim() || !is_finite(cfg.start) ||
      cfg.start.norm() > inst.radius() * (1.0 + 1e-12)) {
    throw std::invalid_argument("DppConfig: bad start point");
  }
  validate_horizon(inst, T);

  const double grad_scale = cfg.cost_weight / (2.0 * cfg.prox_weight);
  std::vector<RoundLog> logs;
  logs.reserve(static_cast<std::size_t>(T));
  Vec x = cfg.start;
  double queue = cfg.initial_queue;
  for (int t = 1; t <= T; ++t) {
    const CostStream::Eval cost = inst.costs().evaluate(t, x);
    const ConstraintModel::Eval cons = inst.constraint().evaluate(x);

    RoundLog log;
    log.t = t;
    log.x = x;
    log.cost_value = cost.value;
    log.g_value = cons.value;
    log.eta_effective = grad_scale;
    log.queue = queue;
    logs.push_back(std::move(log));

    x = project_ball(
        x - (cfg.cost_weight * cost.gradient + queue * cons.subgradient) /
                (2.0 * cfg.prox_weight),
        inst.radius());
    // Queue reacts to the (tightened) constraint at the next action: the
    // second oracle query of the round, applied after every round including
    // the last.
    const double g_next = inst.constraint().value(x);
    queue = std::max(queue + g_next + cfg.tightening, 0.0);
  }
  return logs;
}

PfsConfig preset_anytime_feasible(const ProblemInstance& inst, double alpha, int T,
                                  Vec x1) {
  if (!(alpha > 0.0) || alpha > inst.epsilon()) {
    throw std::invalid_argument(
        "preset_anytime_feasible: alpha must lie in (0, epsilon]");
  }
  validate_horizon(inst, T);
  if (x1.size() != inst.dim() || !is_finite(x1)) {
    throw std::invalid_argument("preset_anytime_feasible: bad start point");
  }
  const double g1 = inst.constraint().value(x1);
  if (g1 > -alpha) {
    throw std::invalid_argument(
        "preset_anytime_feasible: start must satisfy g(x1) <= -alpha");
  }
  const double rho = alpha / std::sqrt(static_cast<double>(T));
  const double eta =
      inst.xi() * rho / (inst.cost_grad_bound() * inst.cons_grad_bound());
  return PfsConfig{eta, rho, std::move(x1)};
}

PfsConfig preset_eventual_feasible(const ProblemInstance& inst, int T, Vec x1) {
  validate_horizon(inst, T);
  const double sqrtT = std::sqrt(static_cast<double>(T));
  const double rho = inst.epsilon() / sqrtT;
  const double eta = inst.xi() * inst.epsilon() /
                     (2.0 * inst.cost_grad_bound() * inst.cons_grad_bound() * sqrtT);
  return PfsConfig{eta, rho, std::move(x1)};
}

PfsConfig preset_regret_optimal(const ProblemInstance& inst, int T, Vec x1) {
  validate_horizon(inst, T);
  const double eta =
      2.0 * inst.radius() / (inst.cost_grad_bound() * std::sqrt(static_cast<double>(T)));
  return PfsConfig{eta, 0.0, std::move(x1)};
}

DppConfig preset_dpp(const ProblemInstance& inst, int T, bool tightened, double c) {
  validate_horizon(inst, T);
  if (tightened && !(c > 0.0)) {
    throw std::invalid_argument("preset_dpp: c must be positive");
  }
  DppConfig cfg;
  cfg.prox_weight = static_cast<double>(T);
  cfg.cost_weight = std::sqrt(static_cast<double>(T));
  cfg.tightening =
      tightened ? std::min(inst.epsilon(), c / std::sqrt(static_cast<double>(T))) : 0.0;
  cfg.start = Vec::Zero(inst.dim());
  cfg.initial_queue = 0.0;
  return cfg;
}

}  // namespace pfs
