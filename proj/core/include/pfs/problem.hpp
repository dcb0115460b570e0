#ifndef PFS_PROBLEM_HPP
#define PFS_PROBLEM_HPP

#include <atomic>
#include <cstdint>
#include <mutex>
#include <vector>

#include "pfs/geometry.hpp"

namespace pfs {

// Max-affine constraint g(x) = max_i (a_i . x - b_i) with a first-order oracle
// returning one maximizing row as the subgradient. Immutable after
// construction; concurrent evaluation is safe.
class ConstraintModel {
 public:
  struct Row {
    Vec a;
    double b = 0.0;
  };
  struct Eval {
    double value = 0.0;
    Vec subgradient;
  };

  // Rows must be nonempty, mutually dimension-consistent and finite.
  explicit ConstraintModel(std::vector<Row> rows);
  ConstraintModel(const ConstraintModel& other);
  ConstraintModel& operator=(const ConstraintModel& other);

  int dim() const { return dim_; }
  const std::vector<Row>& rows() const { return rows_; }

  // max_i ||a_i||; upper bound on every subgradient norm the oracle returns.
  double subgradient_bound() const { return subgradient_bound_; }

  // First-order oracle. Ties within 1e-12 of the max resolve to the lowest
  // row index. Every call bumps the query counter.
  Eval evaluate(const Vec& x) const;
  // Value only; also counted as a query.
  double value(const Vec& x) const;

  // Query instrumentation. Counting is always on; point recording is opt-in
  // (used by tests that assert where the oracle was consulted).
  std::uint64_t query_count() const { return queries_.load(); }
  void reset_query_count() const { queries_.store(0); }
  void record_queries(bool on) const;
  std::vector<Vec> recorded_queries() const;

 private:
  void count(const Vec& x) const;

  std::vector<Row> rows_;
  int dim_ = 0;
  double subgradient_bound_ = 0.0;
  mutable std::atomic<std::uint64_t> queries_{0};
  mutable std::atomic<bool> record_{false};
  mutable std::mutex record_mutex_;
  mutable std::vector<Vec> recorded_;
};

// Quadratic cost family f_t(x) = kCostScale * ||x - v_t||^2 with targets v_t
// drawn uniformly from [0,1]^d. The draw is a pure function of (seed, horizon,
// dim): a mt19937_64 stream mapped to 53-bit uniforms, coordinates in
// round-major order, so replays are bitwise identical.
class CostStream {
 public:
  static constexpr double kCostScale = 3.0;
  static constexpr const char* kGeneratorId = "mt19937_64-u53";

  struct Eval {
    double value = 0.0;
    Vec gradient;
  };

  static CostStream generate(std::uint64_t seed, int horizon, int dim);

  std::uint64_t seed() const { return seed_; }
  int horizon() const { return static_cast<int>(targets_.size()); }
  int dim() const { return dim_; }

  // 1-based round index; throws std::out_of_range outside [1, horizon].
  const Vec& target(int t) const;
  // Value and gradient of f_t at x: kCostScale*||x-v_t||^2, 2*kCostScale*(x-v_t).
  Eval evaluate(int t, const Vec& x) const;
  double value(int t, const Vec& x) const;
  // Average of v_1..v_T; throws std::out_of_range for T outside [1, horizon].
  Vec mean_target(int T) const;

 private:
  CostStream() = default;

  std::uint64_t seed_ = 0;
  int dim_ = 0;
  std::vector<Vec> targets_;
};

// Conversion of a Slater point with margin (a point with g <= -margin) into a
// certified (epsilon, sigma) pair: epsilon = c*margin,
// sigma = (1-c)*margin/(2*radius), for a split c in (0,1).
struct SlaterCertificate {
  double epsilon = 0.0;
  double sigma = 0.0;
};
SlaterCertificate slater_certificate(double radius, double margin, double c);

// A constrained online problem: action set {g <= 0} inside the radius-R ball,
// costs from the pinned quadratic stream, plus the certified constants the
// guarantees consume.
class ProblemInstance {
 public:
  // Requires radius > 0, cost_grad_bound > 0, 0 < sigma <= subgradient bound,
  // epsilon > 0, and consistent dimensions.
  ProblemInstance(ConstraintModel constraint, CostStream costs, double radius,
                  double cost_grad_bound, double sigma, double epsilon);

  int dim() const { return constraint_.dim(); }
  double radius() const { return radius_; }
  double cost_grad_bound() const { return cost_grad_bound_; }
  double cons_grad_bound() const { return constraint_.subgradient_bound(); }
  double sigma() const { return sigma_; }
  double epsilon() const { return epsilon_; }
  // Squared-distance contraction factor of the feasibility step,
  // 1 - (sigma/cons_grad_bound)^2, in [0, 1).
  double gamma() const { return gamma_; }
  // 1 - sqrt(gamma), in (0, 1].
  double xi() const { return xi_; }

  const ConstraintModel& constraint() const { return constraint_; }
  const CostStream& costs() const { return costs_; }

 private:
  ConstraintModel constraint_;
  CostStream costs_;
  double radius_ = 0.0;
  double cost_grad_bound_ = 0.0;
  double sigma_ = 0.0;
  double epsilon_ = 0.0;
  double gamma_ = 0.0;
  double xi_ = 0.0;
};

// The d=2 quadratic/box benchmark instance: box |x_i| <= 1/2 inside the unit
// ball, cost gradient bound sqrt(2), unit constraint rows, sigma = sqrt(1/2),
// epsilon = 1/4.
ProblemInstance make_quadratic_box_instance(std::uint64_t seed, int horizon);

}  // namespace pfs

#endif  // PFS_PROBLEM_HPP
