#include "pfs/geometry.hpp"

#include <cmath>
#include <limits>
#include <random>
#include <stdexcept>

#include "doctest.h"

using pfs::Halfspace;
using pfs::Vec;

namespace {

double u01(std::mt19937_64& rng) {
  return static_cast<double>(rng() >> 11) * 0x1.0p-53;
}

Vec random_vec(std::mt19937_64& rng, int d, double scale) {
  Vec v(d);
  for (int j = 0; j < d; ++j) v[j] = scale * (2.0 * u01(rng) - 1.0);
  return v;
}

}  // namespace

TEST_CASE("project_ball keeps interior points untouched") {
  Vec x(2);
  x << 0.3, -0.4;
  const Vec p = pfs::project_ball(x, 1.0);
  CHECK(p[0] == 0.3);
  CHECK(p[1] == -0.4);

  // Boundary point: norm exactly the radius.
  Vec b(2);
  b << 1.0, 0.0;
  const Vec q = pfs::project_ball(b, 1.0);
  CHECK(q[0] == 1.0);
  CHECK(q[1] == 0.0);
}

TEST_CASE("project_ball rescales exterior points radially") {
  Vec x(2);
  x << 3.0, 4.0;  // norm 5
  const Vec p = pfs::project_ball(x, 1.0);
  CHECK(p[0] == doctest::Approx(0.6).epsilon(1e-15));
  CHECK(p[1] == doctest::Approx(0.8).epsilon(1e-15));
  CHECK(p.norm() == doctest::Approx(1.0).epsilon(1e-15));
}

TEST_CASE("project_ball input validation") {
  Vec x(2);
  x << 1.0, 2.0;
  CHECK_THROWS_AS(pfs::project_ball(x, 0.0), std::invalid_argument);
  CHECK_THROWS_AS(pfs::project_ball(x, -1.0), std::invalid_argument);
  Vec bad(2);
  bad << 1.0, std::numeric_limits<double>::quiet_NaN();
  CHECK_THROWS_AS(pfs::project_ball(bad, 1.0), std::invalid_argument);
  bad[1] = std::numeric_limits<double>::infinity();
  CHECK_THROWS_AS(pfs::project_ball(bad, 1.0), std::invalid_argument);
}

TEST_CASE("project_halfspace is identity inside and exact on the boundary outside") {
  Halfspace h;
  h.normal = Vec(2);
  h.normal << 2.0, 0.0;
  h.offset = 0.5;

  Vec inside(2);
  inside << 0.1, 7.0;  // 2*0.1 = 0.2 <= 0.5
  const Vec p = pfs::project_halfspace(inside, h);
  CHECK(p[0] == 0.1);
  CHECK(p[1] == 7.0);

  Vec outside(2);
  outside << 1.0, 1.0;  // excess = 2 - 0.5 = 1.5, ||n||^2 = 4
  const Vec q = pfs::project_halfspace(outside, h);
  CHECK(q[0] == doctest::Approx(0.25).epsilon(1e-15));
  CHECK(q[1] == 1.0);
  CHECK(h.normal.dot(q) == doctest::Approx(h.offset).epsilon(1e-15));
}

TEST_CASE("project_halfspace input validation") {
  Vec x(2);
  x << 1.0, 1.0;
  Halfspace degenerate;
  degenerate.normal = Vec::Zero(2);
  degenerate.offset = 0.0;
  CHECK_THROWS_AS(pfs::project_halfspace(x, degenerate), std::invalid_argument);

  Halfspace mismatched;
  mismatched.normal = Vec::Ones(3);
  mismatched.offset = 0.0;
  CHECK_THROWS_AS(pfs::project_halfspace(x, mismatched), std::invalid_argument);

  Halfspace h;
  h.normal = Vec::Ones(2);
  h.offset = std::numeric_limits<double>::quiet_NaN();
  CHECK_THROWS_AS(pfs::project_halfspace(x, h), std::invalid_argument);
}

TEST_CASE("project_box clamps coordinatewise and honors infinite bounds") {
  Vec x(3);
  x << -2.0, 0.25, 9.0;
  Vec lo(3), hi(3);
  lo << -1.0, -1.0, -std::numeric_limits<double>::infinity();
  hi << 1.0, 1.0, std::numeric_limits<double>::infinity();
  const Vec p = pfs::project_box(x, lo, hi);
  CHECK(p[0] == -1.0);
  CHECK(p[1] == 0.25);
  CHECK(p[2] == 9.0);
}

TEST_CASE("project_box rejects empty boxes and bad shapes") {
  Vec x(2);
  x << 0.0, 0.0;
  Vec lo(2), hi(2);
  lo << 1.0, 0.0;
  hi << -1.0, 0.0;  // lo > hi on coordinate 0
  CHECK_THROWS_AS(pfs::project_box(x, lo, hi), std::invalid_argument);
  Vec lo3 = Vec::Zero(3);
  CHECK_THROWS_AS(pfs::project_box(x, lo3, hi), std::invalid_argument);
}

TEST_CASE("projections are idempotent and non-expansive") {
  std::mt19937_64 rng(20240817);
  for (int trial = 0; trial < 500; ++trial) {
    const int d = 1 + static_cast<int>(rng() % 5);
    const Vec x = random_vec(rng, d, 3.0);
    const Vec y = random_vec(rng, d, 3.0);

    const double radius = 0.5 + 2.0 * u01(rng);
    const Vec px = pfs::project_ball(x, radius);
    const Vec py = pfs::project_ball(y, radius);
    CHECK(px.norm() <= radius * (1.0 + 1e-12));
    CHECK((pfs::project_ball(px, radius) - px).norm() <= 1e-12);
    CHECK((px - py).norm() <= (x - y).norm() + 1e-12);

    Halfspace h;
    h.normal = random_vec(rng, d, 1.0);
    if (h.normal.norm() < 1e-3) continue;
    h.offset = 2.0 * u01(rng) - 1.0;
    const Vec hx = pfs::project_halfspace(x, h);
    const Vec hy = pfs::project_halfspace(y, h);
    CHECK(h.normal.dot(hx) <= h.offset + 1e-12 * h.normal.norm());
    CHECK((pfs::project_halfspace(hx, h) - hx).norm() <= 1e-12);
    CHECK((hx - hy).norm() <= (x - y).norm() + 1e-12);

    Vec lo(d), hi(d);
    for (int j = 0; j < d; ++j) {
      const double a = 2.0 * u01(rng) - 1.0;
      const double b = 2.0 * u01(rng) - 1.0;
      lo[j] = std::min(a, b);
      hi[j] = std::max(a, b);
    }
    const Vec bx = pfs::project_box(x, lo, hi);
    const Vec by = pfs::project_box(y, lo, hi);
    CHECK(((bx.array() >= lo.array() - 1e-15) && (bx.array() <= hi.array() + 1e-15))
              .all());
    CHECK((pfs::project_box(bx, lo, hi) - bx).norm() <= 1e-12);
    CHECK((bx - by).norm() <= (x - y).norm() + 1e-12);
  }
}

TEST_CASE("projection minimality: no feasible point is closer") {
  std::mt19937_64 rng(77);
  for (int trial = 0; trial < 200; ++trial) {
    const int d = 2 + static_cast<int>(rng() % 3);
    const Vec x = random_vec(rng, d, 3.0);

    Halfspace h;
    h.normal = random_vec(rng, d, 1.0);
    if (h.normal.norm() < 1e-3) continue;
    h.offset = u01(rng) - 0.5;
    const Vec hx = pfs::project_halfspace(x, h);
    // Any feasible z is no closer than the projection.
    Vec z = random_vec(rng, d, 2.0);
    z = pfs::project_halfspace(z, h);
    CHECK((x - hx).norm() <= (x - z).norm() + 1e-12);
  }
}

TEST_CASE("is_finite flags NaN and infinity") {
  Vec x(2);
  x << 1.0, 2.0;
  CHECK(pfs::is_finite(x));
  x[0] = std::numeric_limits<double>::quiet_NaN();
  CHECK_FALSE(pfs::is_finite(x));
  x[0] = -std::numeric_limits<double>::infinity();
  CHECK_FALSE(pfs::is_finite(x));
}
