#ifndef PFS_GEOMETRY_HPP
#define PFS_GEOMETRY_HPP

#include <Eigen/Core>

namespace pfs {

using Vec = Eigen::VectorXd;

// Closed halfspace {x : normal . x <= offset}.
struct Halfspace {
  Vec normal;
  double offset = 0.0;
};

// Directions with norm below this are treated as degenerate (no usable
// normal / subgradient direction).
inline constexpr double kMinDirectionNorm = 1e-15;

bool is_finite(const Vec& x);

// Euclidean projection onto the origin-centered closed ball of given radius.
// Throws std::invalid_argument for radius <= 0 or non-finite input.
Vec project_ball(const Vec& x, double radius);

// Euclidean projection onto h: identity inside, otherwise
// x - (normal.x - offset)/||normal||^2 * normal.
// Throws std::invalid_argument for a degenerate normal or non-finite input.
Vec project_halfspace(const Vec& x, const Halfspace& h);

// Coordinatewise clamp onto the box [lo, hi].
// Throws std::invalid_argument if the box is empty (lo_i > hi_i) or dimensions
// disagree.
Vec project_box(const Vec& x, const Vec& lo, const Vec& hi);

}  // namespace pfs

#endif  // PFS_GEOMETRY_HPP
