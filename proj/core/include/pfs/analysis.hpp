#ifndef PFS_ANALYSIS_HPP
#define PFS_ANALYSIS_HPP

#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "pfs/algorithms.hpp"
#include "pfs/problem.hpp"

namespace pfs {

// Outcome summary of one run against a fixed comparator action.
struct Metrics {
  double regret = 0.0;             // sum f_t(x_t) - sum f_t(comparator)
  double cum_violation = 0.0;      // sum g(x_t)
  double cum_pos_violation = 0.0;  // sum [g(x_t)]+
  double max_violation = 0.0;      // max_t g(x_t)
  // Smallest t0 with g(x_t) <= 0 for all t >= t0; empty when the final round
  // still violates.
  std::optional<int> first_feasible_round;
};

Metrics compute_metrics(const std::vector<RoundLog>& logs,
                        const ProblemInstance& inst, const Vec& comparator);

// Iterative solver failed to reach its stopping rule; carries the last
// iterate and the residual for diagnosis.
class ConvergenceError : public std::runtime_error {
 public:
  ConvergenceError(const std::string& what, Vec last_iterate, double residual)
      : std::runtime_error(what),
        last_iterate_(std::move(last_iterate)),
        residual_(residual) {}
  const Vec& last_iterate() const { return last_iterate_; }
  double residual() const { return residual_; }

 private:
  Vec last_iterate_;
  double residual_;
};

// The requested sublevel set {g <= -rho} has no feasible point.
class InfeasibleLevelError : public std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Euclidean projection onto the sublevel set {g <= -rho} (a polytope for
// max-affine g). Axis-aligned rows (exactly one nonzero coefficient each)
// use the exact box clamp; general rows use Dykstra's alternating projections
// (tolerance 1e-10, cap 1e5 cycles). This is a test oracle: the online
// algorithms never call it.
Vec project_to_sublevel(const Vec& x, const ProblemInstance& inst, double rho);
double distance_to_sublevel(const Vec& x, const ProblemInstance& inst, double rho);

// Minimizer of the total cost sum_{t<=T} f_t over {g <= 0}: the projection of
// the mean target (closed-form clamp for axis-aligned rows, Dykstra
// otherwise), since the costs are isotropic quadratics.
Vec hindsight_optimum(const ProblemInstance& inst, int T);

// Independent reference route: projected gradient descent with a deliberately
// conservative step (0.3/L), stopping at gradient-mapping norm <= 1e-8, cap
// 1e5 iterations. Throws ConvergenceError when the stopping rule is not met.
Vec hindsight_optimum_iterative(const ProblemInstance& inst, int T);

// Error bound of the certified constants: for x in the radius ball and
// rho in [0, epsilon], dist(x, {g <= -rho}) <= [g(x)+rho]+ / sigma + 1e-9.
bool check_error_bound(const Vec& x, const ProblemInstance& inst, double rho);

// Contraction of the exact Polyak feasibility step toward {g <= -rho}:
// dist^2(step(x)) <= gamma_scale * gamma * dist^2(x) + 1e-9. Returns nullopt
// when the subgradient at x vanishes (the step is undefined there).
// gamma_scale is a sensitivity hook for suite self-tests; 1.0 is the real
// check.
std::optional<bool> check_contraction(const Vec& x, const ProblemInstance& inst,
                                      double rho, double gamma_scale = 1.0);

// Guarantee envelopes for a PFS configuration at horizon T:
//   regret_bound    = 2R^2/eta + (eta/2) G_f^2 T + (G_f rho / sigma) T
//   violation_bound(t) = G_g gamma^{(t-1)/2} dist(x1,{g<=-rho})
//                        + eta G_g G_f / xi - rho    (nonincreasing in t)
struct GuaranteeBounds {
  double regret_bound = 0.0;
  double transient_coeff = 0.0;  // G_g * dist(x1, {g <= -rho})
  double decay = 0.0;            // sqrt(gamma), per-round transient decay
  double steady_floor = 0.0;     // eta*G_g*G_f/xi - rho

  double violation_bound(int t) const;
};
GuaranteeBounds guarantee_bounds(const ProblemInstance& inst, const PfsConfig& cfg,
                                 int T);

// Burn-in and cumulative-violation side conditions of the eventual-feasibility
// preset: rounds strictly after `feasible_after` are guaranteed feasible, and
// `cumulative_ok` indicates sqrt(T) >= 4 R G_g / (epsilon xi).
struct EventualFeasibilityReport {
  int feasible_after = 0;  // ceil(1 + (2 G_g^2/sigma^2) ln(4 G_g R sqrt(T)/epsilon))
  bool cumulative_ok = false;
};
EventualFeasibilityReport eventual_feasibility_report(const ProblemInstance& inst,
                                                      int T);

// Violation envelope of the regret-optimal (rho = 0) preset:
// 2 R G_g exp(-sigma^2 (t-1) / (2 G_g^2)) + 2 R G_g / (xi sqrt(T)).
double regret_optimal_violation_bound(const ProblemInstance& inst, int T, int t);

}  // namespace pfs

#endif  // PFS_ANALYSIS_HPP
