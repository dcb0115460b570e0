#include "pfs/algorithms.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>
#include <vector>

#include "doctest.h"
#include "pfs/geometry.hpp"

using pfs::DppConfig;
using pfs::PfsConfig;
using pfs::ProblemInstance;
using pfs::RoundLog;
using pfs::Vec;

namespace {

ProblemInstance box(std::uint64_t seed = 1, int horizon = 64) {
  return pfs::make_quadratic_box_instance(seed, horizon);
}

}  // namespace

TEST_CASE("feasibility halfspace encodes the tightened linearization") {
  Vec x(2), s(2);
  x << 0.4, 0.2;
  s << 1.0, 0.0;
  const pfs::Halfspace h = pfs::feasibility_halfspace(x, -0.1, s, 0.3);
  CHECK(h.normal[0] == 1.0);
  CHECK(h.normal[1] == 0.0);
  // offset = s.x - g - rho = 0.4 + 0.1 - 0.3
  CHECK(h.offset == doctest::Approx(0.2).epsilon(1e-15));

  CHECK_THROWS_AS(pfs::feasibility_halfspace(x, -0.1, Vec::Zero(2), 0.0),
                  std::invalid_argument);
  CHECK_THROWS_AS(
      pfs::feasibility_halfspace(x, std::numeric_limits<double>::quiet_NaN(), s, 0.0),
      std::invalid_argument);
}

TEST_CASE("pfs step: worked example with an active hinge") {
  Vec x(2), grad(2), s(2);
  x << 0.4, 0.2;
  grad << 1.0, -1.0;
  s << 1.0, 0.0;
  // y = (0.3, 0.3); hinge = g + s.(y-x) + rho = -0.1 - 0.1 + 0.3 = 0.1
  const auto detail = pfs::pfs_step_detailed(x, grad, -0.1, s, 0.1, 0.3, 1.0);
  CHECK(detail.feasibility_multiplier == doctest::Approx(0.1).epsilon(1e-12));
  CHECK(detail.next[0] == doctest::Approx(0.2).epsilon(1e-12));
  CHECK(detail.next[1] == doctest::Approx(0.3).epsilon(1e-12));
  const Vec same = pfs::pfs_step(x, grad, -0.1, s, 0.1, 0.3, 1.0);
  CHECK(same[0] == detail.next[0]);
  CHECK(same[1] == detail.next[1]);
}

TEST_CASE("pfs step: inactive hinge reduces to projected gradient") {
  Vec x(2), grad(2), s(2);
  x << 0.4, 0.2;
  grad << 1.0, -1.0;
  s << 1.0, 0.0;
  // hinge = -0.1 - 0.1 + 0 < 0: no feasibility correction.
  const auto detail = pfs::pfs_step_detailed(x, grad, -0.1, s, 0.1, 0.0, 1.0);
  CHECK(detail.feasibility_multiplier == 0.0);
  CHECK(detail.next[0] == doctest::Approx(0.3).epsilon(1e-15));
  CHECK(detail.next[1] == doctest::Approx(0.3).epsilon(1e-15));
}

TEST_CASE("pfs step: vanishing subgradient skips the feasibility step") {
  Vec x(2), grad(2);
  x << 0.2, 0.1;
  grad << 1.0, 0.0;
  const Vec tiny = Vec::Constant(2, 1e-18);
  const auto detail = pfs::pfs_step_detailed(x, grad, 5.0, tiny, 0.1, 0.2, 1.0);
  CHECK(detail.feasibility_multiplier == 0.0);
  CHECK(detail.next[0] == doctest::Approx(0.1).epsilon(1e-15));
  CHECK(detail.next[1] == doctest::Approx(0.1).epsilon(1e-15));
}

TEST_CASE("pfs step: final ball projection caps the iterate") {
  Vec x(2), grad(2), s(2);
  x << 0.9, 0.0;
  grad << -20.0, 0.0;  // y = (2.9, 0)
  s << 1.0, 0.0;
  const Vec next = pfs::pfs_step(x, grad, -1.0, s, 0.1, 0.0, 1.0);
  CHECK(next.norm() == doctest::Approx(1.0).epsilon(1e-15));
  CHECK(next[0] == doctest::Approx(1.0).epsilon(1e-15));
}

TEST_CASE("pfs step validates inputs") {
  Vec x(2), grad(2), s(2);
  x << 0.1, 0.1;
  grad << 1.0, 1.0;
  s << 1.0, 0.0;
  CHECK_THROWS_AS(pfs::pfs_step(x, grad, 0.0, s, 0.0, 0.0, 1.0),
                  std::invalid_argument);
  CHECK_THROWS_AS(pfs::pfs_step(x, grad, 0.0, s, 0.1, -0.1, 1.0),
                  std::invalid_argument);
  CHECK_THROWS_AS(pfs::pfs_step(x, grad, 0.0, s, 0.1, 0.0, 0.0),
                  std::invalid_argument);
  CHECK_THROWS_AS(pfs::pfs_step(x, Vec::Ones(3), 0.0, s, 0.1, 0.0, 1.0),
                  std::invalid_argument);
  Vec bad(2);
  bad << std::numeric_limits<double>::infinity(), 0.0;
  CHECK_THROWS_AS(pfs::pfs_step(bad, grad, 0.0, s, 0.1, 0.0, 1.0),
                  std::invalid_argument);
}

TEST_CASE("hinge update equals halfspace-then-ball projection") {
  // Direct cross-check of the two routes on a deterministic grid.
  const double radius = 1.0;
  for (double gx : {-0.4, -0.05, 0.0, 0.2, 0.6}) {
    for (double rho : {0.0, 0.05, 0.3}) {
      for (double eta : {1e-3, 0.05, 0.4}) {
        Vec x(2), grad(2), s(2);
        x << 0.5, -0.3;
        grad << 1.2, 0.7;
        s << 0.8, -0.6;  // norm 1
        const Vec direct = pfs::pfs_step(x, grad, gx, s, eta, rho, radius);
        const Vec y = x - eta * grad;
        const Vec composed = pfs::project_ball(
            pfs::project_halfspace(y, pfs::feasibility_halfspace(x, gx, s, rho)),
            radius);
        CHECK((direct - composed).cwiseAbs().maxCoeff() <= 1e-12);
      }
    }
  }
}

TEST_CASE("run_pfs: first round plays the start and the trace is consistent") {
  const ProblemInstance inst = box();
  PfsConfig cfg;
  cfg.step_size = 0.1;
  cfg.tightening = 0.25;
  cfg.start = Vec::Zero(2);
  const auto logs = pfs::run_pfs(inst, cfg, 8);
  REQUIRE(logs.size() == 8);
  for (int i = 0; i < 8; ++i) {
    CHECK(logs[i].t == i + 1);
    CHECK(logs[i].x.norm() <= inst.radius() * (1.0 + 1e-12));
    CHECK(logs[i].cost_value ==
          inst.costs().value(logs[i].t, logs[i].x));
    CHECK(logs[i].eta_effective >= 0.0);
    CHECK_FALSE(logs[i].queue.has_value());
  }
  CHECK(logs[0].x[0] == 0.0);
  CHECK(logs[0].x[1] == 0.0);
  CHECK(logs[0].g_value == -0.5);
  // Round T records the played action without a trailing update.
  CHECK(logs[7].eta_effective == 0.0);

  // With g(x1) = -0.5 and small steps the hinge stays inactive in round 1,
  // so x2 is the plain gradient step: x2_j = 0.1 * (6 * v1_j).
  const Vec v1 = inst.costs().target(1);
  CHECK(logs[1].x[0] == 0.1 * (6.0 * v1[0]));
  CHECK(logs[1].x[1] == 0.1 * (6.0 * v1[1]));
  CHECK(logs[0].eta_effective == 0.0);
}

TEST_CASE("run_pfs: replay is bitwise deterministic") {
  const ProblemInstance inst = box(3, 128);
  PfsConfig cfg;
  cfg.step_size = 0.05;
  cfg.tightening = 0.01;
  cfg.start = Vec::Zero(2);
  const auto a = pfs::run_pfs(inst, cfg, 128);
  const auto b = pfs::run_pfs(inst, cfg, 128);
  REQUIRE(a.size() == b.size());
  for (std::size_t i = 0; i < a.size(); ++i) {
    CHECK(a[i].x[0] == b[i].x[0]);
    CHECK(a[i].x[1] == b[i].x[1]);
    CHECK(a[i].cost_value == b[i].cost_value);
    CHECK(a[i].g_value == b[i].g_value);
    CHECK(a[i].eta_effective == b[i].eta_effective);
  }
}

TEST_CASE("run_pfs: exactly one oracle query per round, at the played action") {
  const ProblemInstance inst = box(5, 64);
  PfsConfig cfg;
  cfg.step_size = 0.1;
  cfg.tightening = 0.0;
  cfg.start = Vec::Zero(2);
  inst.constraint().reset_query_count();
  inst.constraint().record_queries(true);
  const auto logs = pfs::run_pfs(inst, cfg, 64);
  inst.constraint().record_queries(false);
  CHECK(inst.constraint().query_count() == 64);
  const auto recorded = inst.constraint().recorded_queries();
  REQUIRE(recorded.size() == 64);
  for (std::size_t i = 0; i < recorded.size(); ++i) {
    CHECK(recorded[i][0] == logs[i].x[0]);
    CHECK(recorded[i][1] == logs[i].x[1]);
  }
}

TEST_CASE("run_pfs: T=1 plays the start only") {
  const ProblemInstance inst = box();
  PfsConfig cfg;
  cfg.step_size = 0.1;
  cfg.tightening = 0.0;
  cfg.start = Vec::Zero(2);
  inst.constraint().reset_query_count();
  const auto logs = pfs::run_pfs(inst, cfg, 1);
  REQUIRE(logs.size() == 1);
  CHECK(logs[0].t == 1);
  CHECK(logs[0].eta_effective == 0.0);
  CHECK(inst.constraint().query_count() == 1);
}

TEST_CASE("run_pfs validates configuration and horizon") {
  const ProblemInstance inst = box(1, 16);
  PfsConfig cfg;
  cfg.step_size = 0.1;
  cfg.tightening = 0.0;
  cfg.start = Vec::Zero(2);
  CHECK_THROWS_AS(pfs::run_pfs(inst, cfg, 0), std::invalid_argument);
  CHECK_THROWS_AS(pfs::run_pfs(inst, cfg, 17), std::invalid_argument);

  PfsConfig bad = cfg;
  bad.step_size = 0.0;
  CHECK_THROWS_AS(pfs::run_pfs(inst, bad, 8), std::invalid_argument);
  bad = cfg;
  bad.tightening = inst.epsilon() + 0.01;
  CHECK_THROWS_AS(pfs::run_pfs(inst, bad, 8), std::invalid_argument);
  bad = cfg;
  bad.start = Vec::Constant(2, 0.9);  // norm > 1
  CHECK_THROWS_AS(pfs::run_pfs(inst, bad, 8), std::invalid_argument);
  bad = cfg;
  bad.start = Vec::Zero(3);
  CHECK_THROWS_AS(pfs::run_pfs(inst, bad, 8), std::invalid_argument);
}

TEST_CASE("run_dpp: one-round dynamics match the proximal update by hand") {
  const ProblemInstance inst = box(1, 8);
  DppConfig cfg;
  cfg.prox_weight = 4.0;
  cfg.cost_weight = 2.0;
  cfg.tightening = 0.1;
  cfg.start = Vec::Zero(2);
  cfg.initial_queue = 2.0;
  const auto logs = pfs::run_dpp(inst, cfg, 2);
  REQUIRE(logs.size() == 2);
  CHECK(logs[0].t == 1);
  CHECK(logs[0].g_value == -0.5);
  REQUIRE(logs[0].queue.has_value());
  CHECK(*logs[0].queue == 2.0);
  CHECK(logs[0].eta_effective == doctest::Approx(0.25).epsilon(1e-15));

  // x2 = Pi_ball(x1 - (V grad + Q s)/(2 alpha)) with s = (1,0) at the origin.
  const Vec grad = inst.costs().evaluate(1, Vec::Zero(2)).gradient;
  Vec s(2);
  s << 1.0, 0.0;
  const Vec expected = pfs::project_ball(
      Vec(Vec::Zero(2) - (cfg.cost_weight * grad + 2.0 * s) / (2.0 * cfg.prox_weight)),
      inst.radius());
  CHECK(logs[1].x[0] == expected[0]);
  CHECK(logs[1].x[1] == expected[1]);

  // Queue reacts to the constraint at the next action plus the buffer.
  const double g2 = inst.constraint().value(expected);
  REQUIRE(logs[1].queue.has_value());
  CHECK(*logs[1].queue == doctest::Approx(std::max(2.0 + g2 + 0.1, 0.0)).epsilon(1e-15));
}

TEST_CASE("run_dpp: queue stays nonnegative and grad scale is logged") {
  const ProblemInstance inst = box(2, 400);
  const DppConfig cfg = pfs::preset_dpp(inst, 400, /*tightened=*/false);
  const auto logs = pfs::run_dpp(inst, cfg, 400);
  REQUIRE(logs.size() == 400);
  for (const RoundLog& log : logs) {
    REQUIRE(log.queue.has_value());
    CHECK(*log.queue >= 0.0);
    CHECK(log.eta_effective == doctest::Approx(0.025).epsilon(1e-15));
  }
}

TEST_CASE("run_dpp: two oracle queries per round") {
  const ProblemInstance inst = box(1, 32);
  DppConfig cfg = pfs::preset_dpp(inst, 32, false);
  inst.constraint().reset_query_count();
  pfs::run_dpp(inst, cfg, 32);
  CHECK(inst.constraint().query_count() == 64);
}

TEST_CASE("run_dpp validates configuration") {
  const ProblemInstance inst = box(1, 16);
  DppConfig cfg;
  cfg.prox_weight = 16.0;
  cfg.cost_weight = 4.0;
  cfg.start = Vec::Zero(2);
  DppConfig bad = cfg;
  bad.prox_weight = 0.0;
  CHECK_THROWS_AS(pfs::run_dpp(inst, bad, 8), std::invalid_argument);
  bad = cfg;
  bad.cost_weight = -1.0;
  CHECK_THROWS_AS(pfs::run_dpp(inst, bad, 8), std::invalid_argument);
  bad = cfg;
  bad.initial_queue = -0.5;
  CHECK_THROWS_AS(pfs::run_dpp(inst, bad, 8), std::invalid_argument);
  bad = cfg;
  bad.start = Vec::Constant(2, 0.9);
  CHECK_THROWS_AS(pfs::run_dpp(inst, bad, 8), std::invalid_argument);
}

TEST_CASE("presets reproduce the closed-form parameters") {
  const ProblemInstance big = box(1, 10000);
  const Vec origin = Vec::Zero(2);

  const PfsConfig c1 = pfs::preset_anytime_feasible(big, 0.25, 10000, origin);
  CHECK(c1.tightening == doctest::Approx(0.0025).epsilon(1e-15));
  CHECK(c1.step_size == doctest::Approx(0.0005177669529663689).epsilon(1e-14));

  const ProblemInstance tiny = box(1, 4);
  const PfsConfig c1b = pfs::preset_anytime_feasible(tiny, 0.25, 4, origin);
  CHECK(c1b.tightening == doctest::Approx(0.125).epsilon(1e-15));
  CHECK(c1b.step_size == doctest::Approx(0.025888347648318443).epsilon(1e-14));

  const PfsConfig c2 = pfs::preset_eventual_feasible(big, 10000, origin);
  CHECK(c2.tightening == doctest::Approx(0.0025).epsilon(1e-15));
  CHECK(c2.step_size == doctest::Approx(0.00025888347648318446).epsilon(1e-14));

  const PfsConfig c3 = pfs::preset_regret_optimal(big, 10000, origin);
  CHECK(c3.tightening == 0.0);
  CHECK(c3.step_size == doctest::Approx(0.01414213562373095).epsilon(1e-14));

  const DppConfig d = pfs::preset_dpp(big, 10000, /*tightened=*/false);
  CHECK(d.prox_weight == 10000.0);
  CHECK(d.cost_weight == 100.0);
  CHECK(d.tightening == 0.0);
  CHECK(d.initial_queue == 0.0);
  CHECK(d.start.norm() == 0.0);

  const DppConfig dt = pfs::preset_dpp(big, 10000, /*tightened=*/true, 20.0);
  CHECK(dt.tightening == doctest::Approx(0.2).epsilon(1e-15));
  const ProblemInstance mid = box(1, 2000);
  const DppConfig dt2 = pfs::preset_dpp(mid, 2000, /*tightened=*/true, 20.0);
  CHECK(dt2.tightening == 0.25);  // clipped at epsilon
}

TEST_CASE("preset_anytime_feasible checks the start margin with one query") {
  const ProblemInstance inst = box(1, 100);
  inst.constraint().reset_query_count();
  pfs::preset_anytime_feasible(inst, 0.25, 100, Vec::Zero(2));
  CHECK(inst.constraint().query_count() == 1);

  // alpha outside (0, epsilon] or an insufficient margin is rejected.
  CHECK_THROWS_AS(pfs::preset_anytime_feasible(inst, 0.0, 100, Vec::Zero(2)),
                  std::invalid_argument);
  CHECK_THROWS_AS(pfs::preset_anytime_feasible(inst, 0.3, 100, Vec::Zero(2)),
                  std::invalid_argument);
  Vec near_boundary(2);
  near_boundary << 0.4, 0.0;  // g = -0.1 > -0.25
  CHECK_THROWS_AS(pfs::preset_anytime_feasible(inst, 0.25, 100, near_boundary),
                  std::invalid_argument);
}

TEST_CASE("preset_dpp validates the tightening scale") {
  const ProblemInstance inst = box(1, 16);
  CHECK_THROWS_AS(pfs::preset_dpp(inst, 16, true, 0.0), std::invalid_argument);
  CHECK_NOTHROW(pfs::preset_dpp(inst, 16, false, 0.0));
}
