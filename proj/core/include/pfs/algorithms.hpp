#ifndef PFS_ALGORITHMS_HPP
#define PFS_ALGORITHMS_HPP

#include <optional>
#include <vector>

#include "pfs/problem.hpp"

namespace pfs {

// Configuration of the projected-gradient learner with Polyak feasibility
// steps (PFS).
struct PfsConfig {
  double step_size = 0.0;   // gradient step on the round cost, > 0
  double tightening = 0.0;  // constraint buffer rho, in [0, epsilon]
  Vec start;                // x_1, inside the radius-R ball
};

// Configuration of the drift-plus-penalty baseline (DPP).
struct DppConfig {
  double prox_weight = 0.0;   // alpha > 0, weight of the proximal term
  double cost_weight = 0.0;   // V > 0, weight of the cost gradient
  double tightening = 0.0;    // rho >= 0 added to the queue's constraint term
  Vec start;                  // x_1, inside the radius-R ball
  double initial_queue = 0.0; // Q_1 >= 0
};

// Per-round trace of a run. x is the action actually played in round t;
// cost_value/g_value are f_t(x) and g(x) at that action. eta_effective
// records the Polyak feasibility multiplier actually applied for PFS rounds
// (0 when the hinge is inactive or the subgradient vanishes) and the constant
// gradient scaling cost_weight/(2*prox_weight) for DPP rounds. queue is the
// pre-update virtual queue, present only for DPP rounds.
struct RoundLog {
  int t = 0;
  Vec x;
  double cost_value = 0.0;
  double g_value = 0.0;
  double eta_effective = 0.0;
  std::optional<double> queue;
};

// Tightened linearization of the constraint at x as a halfspace
// {z : subgrad . z <= subgrad . x - g_value - tightening}. The feasibility
// step equals projection onto this halfspace followed by the ball projection.
Halfspace feasibility_halfspace(const Vec& x, double g_value, const Vec& subgrad,
                                double tightening);

// One PFS update from x: gradient step y = x - step_size*cost_grad, Polyak
// feasibility step z = y - [g_value + subgrad.(y-x) + tightening]+ /
// ||subgrad||^2 * subgrad, then projection onto the radius ball. Subgradients
// with norm below kMinDirectionNorm skip the feasibility step (plain
// projected gradient). Throws std::invalid_argument on non-finite input.
Vec pfs_step(const Vec& x, const Vec& cost_grad, double g_value, const Vec& subgrad,
             double step_size, double tightening, double radius);

struct PfsStepDetail {
  Vec next;
  double feasibility_multiplier = 0.0;  // applied hinge / ||subgrad||^2
};
PfsStepDetail pfs_step_detailed(const Vec& x, const Vec& cost_grad, double g_value,
                                const Vec& subgrad, double step_size,
                                double tightening, double radius);

// Run PFS for T rounds. Exactly one constraint oracle query per round, at the
// played action. Returns exactly T logs; the round-T action is recorded
// without a trailing update. Requires 1 <= T <= instance horizon.
std::vector<RoundLog> run_pfs(const ProblemInstance& inst, const PfsConfig& cfg, int T);

// Run DPP for T rounds: x_{t+1} = Pi_ball(x_t - (V*grad + Q_t*s_t)/(2*alpha)),
// Q_{t+1} = max(Q_t + g(x_{t+1}) + rho, 0). Two oracle queries per round (the
// queue update consults the constraint at the next action, including after
// the final round).
std::vector<RoundLog> run_dpp(const ProblemInstance& inst, const DppConfig& cfg, int T);

// Preset: anytime feasibility from a strictly feasible start. Requires
// g(x1) <= -alpha with 0 < alpha <= epsilon (checked, one oracle query);
// rho = alpha/sqrt(T), step = xi*rho/(G_f*G_g).
PfsConfig preset_anytime_feasible(const ProblemInstance& inst, double alpha, int T,
                                  Vec x1);

// Preset: feasibility after a logarithmic burn-in, nonpositive cumulative
// violation once sqrt(T) >= 4*R*G_g/(epsilon*xi). Any start in the ball;
// rho = epsilon/sqrt(T), step = xi*epsilon/(2*G_f*G_g*sqrt(T)).
PfsConfig preset_eventual_feasible(const ProblemInstance& inst, int T, Vec x1);

// Preset: projection-matching regret 2*R*G_f*sqrt(T) with an O(1/sqrt(T))
// violation floor. rho = 0, step = 2*R/(G_f*sqrt(T)).
PfsConfig preset_regret_optimal(const ProblemInstance& inst, int T, Vec x1);

// Baseline preset: alpha = T, V = sqrt(T), start at the origin, empty queue.
// The tightened variant buffers the queue with rho = min(epsilon, c/sqrt(T)).
DppConfig preset_dpp(const ProblemInstance& inst, int T, bool tightened,
                     double c = 20.0);

}  // namespace pfs

#endif  // PFS_ALGORITHMS_HPP
