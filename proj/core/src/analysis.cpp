#include "pfs/analysis.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

namespace pfs {

namespace {

constexpr double kDykstraTol = 1e-10;
constexpr int kDykstraMaxCycles = 100000;
constexpr double kGradMapTol = 1e-8;
constexpr int kGradMaxIters = 100000;
constexpr double kCheckSlack = 1e-9;

bool rows_axis_aligned(const std::vector<ConstraintModel::Row>& rows) {
  for (const auto& r : rows) {
    int nonzero = 0;
    for (int j = 0; j < r.a.size(); ++j) {
      if (r.a[j] != 0.0) ++nonzero;
    }
    if (nonzero != 1) return false;
  }
  return true;
}

// Exact projection onto {a_i . x <= b_i - rho} for axis-aligned rows: the
// sublevel set is a coordinate box.
Vec project_axis_aligned(const Vec& x, const std::vector<ConstraintModel::Row>& rows,
                         double rho) {
  const int d = static_cast<int>(x.size());
  const double inf = std::numeric_limits<double>::infinity();
  Vec lo = Vec::Constant(d, -inf);
  Vec hi = Vec::Constant(d, inf);
  for (const auto& r : rows) {
    for (int j = 0; j < d; ++j) {
      const double c = r.a[j];
      if (c == 0.0) continue;
      const double bound = (r.b - rho) / c;
      if (c > 0.0) {
        hi[j] = std::min(hi[j], bound);
      } else {
        lo[j] = std::max(lo[j], bound);
      }
    }
  }
  if ((lo.array() > hi.array()).any()) {
    throw InfeasibleLevelError("sublevel set is empty at the requested level");
  }
  return x.cwiseMax(lo).cwiseMin(hi);
}

// Dykstra's alternating projections onto the intersection of the shifted
// halfspaces; converges to the Euclidean projection for polyhedra.
Vec project_dykstra(const Vec& x, const std::vector<ConstraintModel::Row>& rows,
                    double rho) {
  const std::size_t m = rows.size();
  Vec z = x;
  std::vector<Vec> corrections(m, Vec::Zero(x.size()));
  for (int cycle = 0; cycle < kDykstraMaxCycles; ++cycle) {
    double shift = 0.0;
    for (std::size_t i = 0; i < m; ++i) {
      if (rows[i].a.norm() < kMinDirectionNorm) continue;  // handled by caller
      const Vec w = z + corrections[i];
      Vec znew = project_halfspace(w, Halfspace{rows[i].a, rows[i].b - rho});
      corrections[i] = w - znew;
      shift = std::max(shift, (znew - z).norm());
      z = std::move(znew);
    }
    if (shift < kDykstraTol) {
      break;
    }
  }
  double residual = 0.0;
  for (const auto& r : rows) {
    residual = std::max(residual, r.a.dot(z) - (r.b - rho));
  }
  if (residual > 1e-8) {
    throw InfeasibleLevelError(
        "no feasible point found within the iteration cap (residual " +
        std::to_string(residual) + ")");
  }
  return z;
}

void validate_level(const ProblemInstance& inst, double rho) {
  if (!(rho >= 0.0) || !std::isfinite(rho)) {
    throw std::invalid_argument("sublevel projection: rho must be nonnegative");
  }
  // Constant rows (zero coefficients) with b < rho make the level empty
  // regardless of geometry.
  for (const auto& r : inst.constraint().rows()) {
    if (r.a.norm() < kMinDirectionNorm && r.b < rho) {
      throw InfeasibleLevelError("constant row already exceeds the requested level");
    }
  }
}

double sum_comparator_cost(const ProblemInstance& inst, int T, const Vec& comparator) {
  double total = 0.0;
  for (int t = 1; t <= T; ++t) total += inst.costs().value(t, comparator);
  return total;
}

}  // namespace

Metrics compute_metrics(const std::vector<RoundLog>& logs,
                        const ProblemInstance& inst, const Vec& comparator) {
  if (logs.empty()) {
    throw std::invalid_argument("compute_metrics: empty log");
  }
  if (comparator.size() != inst.dim() || !is_finite(comparator)) {
    throw std::invalid_argument("compute_metrics: bad comparator");
  }
  Metrics m;
  double cost_sum = 0.0;
  m.max_violation = -std::numeric_limits<double>::infinity();
  int last_violation = 0;
  for (const RoundLog& log : logs) {
    cost_sum += log.cost_value;
    m.cum_violation += log.g_value;
    m.cum_pos_violation += std::max(log.g_value, 0.0);
    m.max_violation = std::max(m.max_violation, log.g_value);
    if (log.g_value > 0.0) last_violation = log.t;
  }
  const int T = logs.back().t;
  m.regret = cost_sum - sum_comparator_cost(inst, T, comparator);
  if (logs.back().g_value <= 0.0) {
    m.first_feasible_round = last_violation + 1;
  }
  return m;
}

Vec project_to_sublevel(const Vec& x, const ProblemInstance& inst, double rho) {
  if (x.size() != inst.dim() || !is_finite(x)) {
    throw std::invalid_argument("project_to_sublevel: bad point");
  }
  validate_level(inst, rho);
  const auto& rows = inst.constraint().rows();
  if (rows_axis_aligned(rows)) {
    return project_axis_aligned(x, rows, rho);
  }
  return project_dykstra(x, rows, rho);
}

double distance_to_sublevel(const Vec& x, const ProblemInstance& inst, double rho) {
  return (x - project_to_sublevel(x, inst, rho)).norm();
}

Vec hindsight_optimum(const ProblemInstance& inst, int T) {
  // Total cost is an isotropic quadratic centered at the mean target, so the
  // constrained minimizer is the projection of that mean.
  return project_to_sublevel(inst.costs().mean_target(T), inst, 0.0);
}

Vec hindsight_optimum_iterative(const ProblemInstance& inst, int T) {
  const Vec mean = inst.costs().mean_target(T);
  const double lipschitz = 2.0 * CostStream::kCostScale * static_cast<double>(T);
  const double step = 0.3 / lipschitz;
  Vec x = project_to_sublevel(Vec::Zero(inst.dim()), inst, 0.0);
  double mapping = std::numeric_limits<double>::infinity();
  for (int k = 0; k < kGradMaxIters; ++k) {
    const Vec grad = 2.0 * CostStream::kCostScale * static_cast<double>(T) * (x - mean);
    Vec next = project_to_sublevel(x - step * grad, inst, 0.0);
    mapping = (x - next).norm() / step;
    x = std::move(next);
    if (mapping <= kGradMapTol) return x;
  }
  throw ConvergenceError("hindsight solver: gradient mapping did not converge", x,
                         mapping);
}

bool check_error_bound(const Vec& x, const ProblemInstance& inst, double rho) {
  if (x.norm() > inst.radius() * (1.0 + 1e-12)) {
    throw std::invalid_argument("check_error_bound: point outside the radius ball");
  }
  if (!(rho >= 0.0) || rho > inst.epsilon()) {
    throw std::invalid_argument("check_error_bound: rho must lie in [0, epsilon]");
  }
  const double g = inst.constraint().value(x);
  const double excess = std::max(g + rho, 0.0);
  const double dist = distance_to_sublevel(x, inst, rho);
  return dist <= excess / inst.sigma() + kCheckSlack;
}

std::optional<bool> check_contraction(const Vec& x, const ProblemInstance& inst,
                                      double rho, double gamma_scale) {
  if (x.norm() > inst.radius() * (1.0 + 1e-12)) {
    throw std::invalid_argument("check_contraction: point outside the radius ball");
  }
  if (!(rho >= 0.0) || rho > inst.epsilon()) {
    throw std::invalid_argument("check_contraction: rho must lie in [0, epsilon]");
  }
  const ConstraintModel::Eval eval = inst.constraint().evaluate(x);
  if (eval.subgradient.norm() < kMinDirectionNorm) {
    return std::nullopt;
  }
  const double hinge = std::max(eval.value + rho, 0.0);
  const Vec stepped = project_ball(
      x - (hinge / eval.subgradient.squaredNorm()) * eval.subgradient, inst.radius());
  const double before = distance_to_sublevel(x, inst, rho);
  const double after = distance_to_sublevel(stepped, inst, rho);
  return after * after <= gamma_scale * inst.gamma() * before * before + kCheckSlack;
}

double GuaranteeBounds::violation_bound(int t) const {
  if (t < 1) {
    throw std::invalid_argument("violation_bound: t must be >= 1");
  }
  return transient_coeff * std::pow(decay, t - 1) + steady_floor;
}

GuaranteeBounds guarantee_bounds(const ProblemInstance& inst, const PfsConfig& cfg,
                                 int T) {
  if (!(cfg.step_size > 0.0)) {
    throw std::invalid_argument("guarantee_bounds: step size must be positive");
  }
  if (!(cfg.tightening >= 0.0) || cfg.tightening > inst.epsilon()) {
    throw std::invalid_argument("guarantee_bounds: tightening must lie in [0, epsilon]");
  }
  if (T < 1) {
    throw std::invalid_argument("guarantee_bounds: T must be >= 1");
  }
  const double R = inst.radius();
  const double gf = inst.cost_grad_bound();
  const double gg = inst.cons_grad_bound();
  GuaranteeBounds b;
  b.regret_bound = 2.0 * R * R / cfg.step_size +
                   0.5 * cfg.step_size * gf * gf * static_cast<double>(T) +
                   gf * cfg.tightening / inst.sigma() * static_cast<double>(T);
  b.transient_coeff = gg * distance_to_sublevel(cfg.start, inst, cfg.tightening);
  b.decay = std::sqrt(inst.gamma());
  b.steady_floor = cfg.step_size * gg * gf / inst.xi() - cfg.tightening;
  return b;
}

EventualFeasibilityReport eventual_feasibility_report(const ProblemInstance& inst,
                                                      int T) {
  if (T < 1) {
    throw std::invalid_argument("eventual_feasibility_report: T must be >= 1");
  }
  const double sqrtT = std::sqrt(static_cast<double>(T));
  const double gg = inst.cons_grad_bound();
  const double ratio = gg / inst.sigma();
  const double threshold =
      1.0 + 2.0 * ratio * ratio *
                std::log(4.0 * gg * inst.radius() * sqrtT / inst.epsilon());
  EventualFeasibilityReport report;
  report.feasible_after = std::max(1, static_cast<int>(std::ceil(threshold)));
  report.cumulative_ok =
      sqrtT >= 4.0 * inst.radius() * gg / (inst.epsilon() * inst.xi());
  return report;
}

double regret_optimal_violation_bound(const ProblemInstance& inst, int T, int t) {
  if (T < 1 || t < 1) {
    throw std::invalid_argument("regret_optimal_violation_bound: T, t must be >= 1");
  }
  const double R = inst.radius();
  const double gg = inst.cons_grad_bound();
  const double s = inst.sigma();
  return 2.0 * R * gg * std::exp(-s * s * static_cast<double>(t - 1) / (2.0 * gg * gg)) +
         2.0 * R * gg / (inst.xi() * std::sqrt(static_cast<double>(T)));
}

}  // namespace pfs
