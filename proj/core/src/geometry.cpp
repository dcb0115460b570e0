#include "pfs/geometry.hpp"

#include <stdexcept>

namespace pfs {

bool is_finite(const Vec& x) { return x.allFinite(); }

Vec project_ball(const Vec& x, double radius) {
  if (!(radius > 0.0)) {
    throw std::invalid_argument("project_ball: radius must be positive");
  }
  if (!is_finite(x)) {
    throw std::invalid_argument("project_ball: non-finite input point");
  }
  const double n = x.norm();
  if (n <= radius) return x;
  return x * (radius / n);
}

Vec project_halfspace(const Vec& x, const Halfspace& h) {
  if (!is_finite(x) || !is_finite(h.normal) || !std::isfinite(h.offset)) {
    throw std::invalid_argument("project_halfspace: non-finite input");
  }
  if (x.size() != h.normal.size()) {
    throw std::invalid_argument("project_halfspace: dimension mismatch");
  }
  const double nn = h.normal.squaredNorm();
  if (h.normal.norm() < kMinDirectionNorm) {
    throw std::invalid_argument("project_halfspace: degenerate normal");
  }
  const double excess = h.normal.dot(x) - h.offset;
  if (excess <= 0.0) return x;
  return x - (excess / nn) * h.normal;
}

Vec project_box(const Vec& x, const Vec& lo, const Vec& hi) {
  if (x.size() != lo.size() || x.size() != hi.size()) {
    throw std::invalid_argument("project_box: dimension mismatch");
  }
  if (!is_finite(x)) {
    throw std::invalid_argument("project_box: non-finite input point");
  }
  if ((lo.array() > hi.array()).any()) {
    throw std::invalid_argument("project_box: empty box (lo > hi)");
  }
  return x.cwiseMax(lo).cwiseMin(hi);
}

}  // namespace pfs
