#include "pfs/problem.hpp"

#include <cmath>
#include <random>
#include <stdexcept>
#include <utility>

namespace pfs {

namespace {
constexpr double kTieTolerance = 1e-12;
}  // namespace

ConstraintModel::ConstraintModel(std::vector<Row> rows) : rows_(std::move(rows)) {
  if (rows_.empty()) {
    throw std::invalid_argument("ConstraintModel: at least one row required");
  }
  dim_ = static_cast<int>(rows_.front().a.size());
  if (dim_ < 1) {
    throw std::invalid_argument("ConstraintModel: rows must have dimension >= 1");
  }
  for (const Row& r : rows_) {
    if (r.a.size() != dim_) {
      throw std::invalid_argument("ConstraintModel: inconsistent row dimensions");
    }
    if (!is_finite(r.a) || !std::isfinite(r.b)) {
      throw std::invalid_argument("ConstraintModel: non-finite row");
    }
    subgradient_bound_ = std::max(subgradient_bound_, r.a.norm());
  }
}

ConstraintModel::ConstraintModel(const ConstraintModel& other)
    : rows_(other.rows_),
      dim_(other.dim_),
      subgradient_bound_(other.subgradient_bound_) {}

ConstraintModel& ConstraintModel::operator=(const ConstraintModel& other) {
  if (this != &other) {
    rows_ = other.rows_;
    dim_ = other.dim_;
    subgradient_bound_ = other.subgradient_bound_;
    queries_.store(0);
    record_.store(false);
    std::lock_guard<std::mutex> lock(record_mutex_);
    recorded_.clear();
  }
  return *this;
}

void ConstraintModel::count(const Vec& x) const {
  queries_.fetch_add(1, std::memory_order_relaxed);
  if (record_.load(std::memory_order_relaxed)) {
    std::lock_guard<std::mutex> lock(record_mutex_);
    recorded_.push_back(x);
  }
}

ConstraintModel::Eval ConstraintModel::evaluate(const Vec& x) const {
  if (x.size() != dim_) {
    throw std::invalid_argument("ConstraintModel::evaluate: dimension mismatch");
  }
  if (!is_finite(x)) {
    throw std::invalid_argument("ConstraintModel::evaluate: non-finite point");
  }
  count(x);
  double best = rows_.front().a.dot(x) - rows_.front().b;
  for (std::size_t i = 1; i < rows_.size(); ++i) {
    best = std::max(best, rows_[i].a.dot(x) - rows_[i].b);
  }
  // Lowest row index attaining the max within tolerance.
  for (const Row& r : rows_) {
    const double v = r.a.dot(x) - r.b;
    if (v >= best - kTieTolerance) {
      return Eval{best, r.a};
    }
  }
  return Eval{best, rows_.front().a};  // unreachable
}

double ConstraintModel::value(const Vec& x) const {
  if (x.size() != dim_ || !is_finite(x)) {
    throw std::invalid_argument("ConstraintModel::value: bad point");
  }
  count(x);
  double best = rows_.front().a.dot(x) - rows_.front().b;
  for (std::size_t i = 1; i < rows_.size(); ++i) {
    best = std::max(best, rows_[i].a.dot(x) - rows_[i].b);
  }
  return best;
}

void ConstraintModel::record_queries(bool on) const {
  std::lock_guard<std::mutex> lock(record_mutex_);
  record_.store(on);
  if (on) recorded_.clear();
}

std::vector<Vec> ConstraintModel::recorded_queries() const {
  std::lock_guard<std::mutex> lock(record_mutex_);
  return recorded_;
}

CostStream CostStream::generate(std::uint64_t seed, int horizon, int dim) {
  if (horizon < 1) {
    throw std::invalid_argument("CostStream::generate: horizon must be >= 1");
  }
  if (dim < 1) {
    throw std::invalid_argument("CostStream::generate: dim must be >= 1");
  }
  CostStream s;
  s.seed_ = seed;
  s.dim_ = dim;
  s.targets_.reserve(static_cast<std::size_t>(horizon));
  std::mt19937_64 rng(seed);
  // 53-bit uniform in [0,1): implementation-pinned, unlike
  // std::uniform_real_distribution.
  auto u01 = [&rng]() {
    return static_cast<double>(rng() >> 11) * 0x1.0p-53;
  };
  for (int t = 0; t < horizon; ++t) {
    Vec v(dim);
    for (int j = 0; j < dim; ++j) v[j] = u01();
    s.targets_.push_back(std::move(v));
  }
  return s;
}

const Vec& CostStream::target(int t) const {
  if (t < 1 || t > horizon()) {
    throw std::out_of_range("CostStream::target: round index outside [1, horizon]");
  }
  return targets_[static_cast<std::size_t>(t - 1)];
}

CostStream::Eval CostStream::evaluate(int t, const Vec& x) const {
  const Vec& v = target(t);
  if (x.size() != dim_ || !is_finite(x)) {
    throw std::invalid_argument("CostStream::evaluate: bad point");
  }
  const Vec diff = x - v;
  return Eval{kCostScale * diff.squaredNorm(), 2.0 * kCostScale * diff};
}

double CostStream::value(int t, const Vec& x) const {
  const Vec& v = target(t);
  if (x.size() != dim_ || !is_finite(x)) {
    throw std::invalid_argument("CostStream::value: bad point");
  }
  return kCostScale * (x - v).squaredNorm();
}

Vec CostStream::mean_target(int T) const {
  if (T < 1 || T > horizon()) {
    throw std::out_of_range("CostStream::mean_target: T outside [1, horizon]");
  }
  Vec m = Vec::Zero(dim_);
  for (int t = 0; t < T; ++t) m += targets_[static_cast<std::size_t>(t)];
  return m / static_cast<double>(T);
}

SlaterCertificate slater_certificate(double radius, double margin, double c) {
  if (!(radius > 0.0)) {
    throw std::invalid_argument("slater_certificate: radius must be positive");
  }
  if (!(margin > 0.0)) {
    throw std::invalid_argument("slater_certificate: margin must be positive");
  }
  if (!(c > 0.0) || !(c < 1.0)) {
    throw std::invalid_argument("slater_certificate: split c must lie in (0,1)");
  }
  return SlaterCertificate{c * margin, (1.0 - c) * margin / (2.0 * radius)};
}

ProblemInstance::ProblemInstance(ConstraintModel constraint, CostStream costs,
                                 double radius, double cost_grad_bound,
                                 double sigma, double epsilon)
    : constraint_(std::move(constraint)),
      costs_(std::move(costs)),
      radius_(radius),
      cost_grad_bound_(cost_grad_bound),
      sigma_(sigma),
      epsilon_(epsilon) {
  if (!(radius_ > 0.0)) {
    throw std::invalid_argument("ProblemInstance: radius must be positive");
  }
  if (!(cost_grad_bound_ > 0.0)) {
    throw std::invalid_argument("ProblemInstance: cost gradient bound must be positive");
  }
  if (!(sigma_ > 0.0) || sigma_ > constraint_.subgradient_bound()) {
    throw std::invalid_argument(
        "ProblemInstance: sigma must lie in (0, subgradient bound]");
  }
  if (!(epsilon_ > 0.0)) {
    throw std::invalid_argument("ProblemInstance: epsilon must be positive");
  }
  if (costs_.dim() != constraint_.dim()) {
    throw std::invalid_argument("ProblemInstance: cost/constraint dimension mismatch");
  }
  const double ratio = sigma_ / constraint_.subgradient_bound();
  gamma_ = 1.0 - ratio * ratio;
  xi_ = 1.0 - std::sqrt(gamma_);
}

ProblemInstance make_quadratic_box_instance(std::uint64_t seed, int horizon) {
  std::vector<ConstraintModel::Row> rows(4);
  rows[0] = {Vec{{1.0, 0.0}}, 0.5};
  rows[1] = {Vec{{0.0, 1.0}}, 0.5};
  rows[2] = {Vec{{-1.0, 0.0}}, 0.5};
  rows[3] = {Vec{{0.0, -1.0}}, 0.5};
  return ProblemInstance(ConstraintModel(std::move(rows)),
                         CostStream::generate(seed, horizon, 2),
                         /*radius=*/1.0,
                         /*cost_grad_bound=*/std::sqrt(2.0),
                         /*sigma=*/std::sqrt(0.5),
                         /*epsilon=*/0.25);
}

}  // namespace pfs
