// SPDX-License-Identifier: Apache-2.0
#include <cmath>

#include "doctest.h"
#include "mcflow/error.hpp"
#include "mcflow/flow_engine.hpp"
#include "mcflow/geometry.hpp"
#include "support.hpp"

using namespace mcf;

namespace {

std::unique_ptr<Scenario> affine2() {
  Small A(2, 2);
  A << 0.3, -0.2, 0.1, 0.4;
  SmallVec b(2);
  b << 0.5, -0.5;
  return make_affine(A, b);
}

double max_diff(const GraphField& a, const GraphField& b) {
  double d = 0.0;
  for (std::size_t i = 0; i < a.values.size(); ++i) d = std::max(d, std::abs(a.values[i] - b.values[i]));
  return d;
}

}  // namespace

TEST_SUITE("flow_engine") {
  TEST_CASE("stable dt on a box with a flat graph") {
    const auto lat = test::lattice(test::box2(0.25));
    const GraphField f = GraphField::zeros(lat, 1);
    CHECK(stable_dt(f, 0.8) == doctest::Approx(0.8 * 0.0625 / 4.0));
  }

  TEST_CASE("affine data is stationary under both schemes") {
    const auto lat = test::lattice(test::ball(2, 0.2));
    const auto psi = affine2();
    const GraphField f = GraphField::sample(lat, *psi);
    const double dt = stable_dt(f, 0.8);
    CHECK(max_diff(step_explicit(f, dt), f) < 1e-13);
    StepConfig cfg;
    cfg.solver_tol = 1e-12;
    CHECK(max_diff(step_semi_implicit(f, dt, cfg), f) < 1e-11);
    CHECK(max_system_residual(f) < 1e-12);
  }

  TEST_CASE("semi-implicit step solves its linear system") {
    const auto lat = test::lattice(test::ball(2, 0.125));
    const auto psi = make_paraboloid(2, 1.0);
    const GraphField f = GraphField::sample(lat, *psi);
    StepConfig cfg;
    cfg.solver_tol = 1e-12;
    const double dt = 0.01;
    const GraphField g = step_semi_implicit(f, dt, cfg);
    // (g − f)/dt = L̃ g with g̃ frozen at f.
    for (std::size_t pos = 0; pos < lat->interior().size(); ++pos) {
      const std::size_t node = lat->interior()[pos];
      const NodeStencil st = node_stencil(*lat, pos);
      const Small ginv = induced_metric(jet_from_stencil(f, st).df).g_inv;
      const Jet jg = jet_from_stencil(g, st);
      const double lg = system_residual(jg, ginv)(0);
      CHECK(std::abs((g.value(node, 0) - f.value(node, 0)) / dt - lg) < 1e-7);
    }
    for (std::size_t ref : lat->boundary_refs()) CHECK(g.value(ref, 0) == f.value(ref, 0));
  }

  TEST_CASE("explicit step blows up into a numerical failure") {
    const auto lat = test::lattice(test::box2(0.25));
    const auto psi = make_paraboloid(2, 1.0);
    const GraphField f = GraphField::sample(lat, *psi);
    StepConfig cfg;
    cfg.dt = 50.0 * stable_dt(f, 0.8);
    cfg.t_end = 1e6;
    cfg.steady_tol = 0.0;
    const Trajectory t = run(f, cfg, {}, 0);
    CHECK(t.reason == Termination::numerical_failure);
    CHECK(t.detail.find("node") != std::string::npos);
  }

  TEST_CASE("run stops at t_end, at steady state, or on an observer veto") {
    const auto lat = test::lattice(test::box2(0.25));
    const auto para = make_paraboloid(2, 1.0);
    const GraphField f = GraphField::sample(lat, *para);
    StepConfig cfg;
    cfg.t_end = 0.02;
    cfg.steady_tol = 0.0;
    const Trajectory a = run(f, cfg, {}, 2);
    CHECK(a.reason == Termination::reached_t_end);
    CHECK(a.final_state.t == 0.02);
    CHECK(a.snapshots.front().t == 0.0);
    CHECK(a.snapshots.back().t == 0.02);

    const GraphField flat = GraphField::sample(lat, *affine2());
    cfg.steady_tol.reset();
    CHECK(run(flat, cfg, {}, 0).reason == Termination::steady_state);

    cfg.steady_tol = 0.0;
    cfg.t_end = 1.0;
    const Trajectory c = run(f, cfg, [](const GraphField&, long step) { return step < 3; }, 0);
    CHECK(c.reason == Termination::invariant_violation);
    CHECK(c.steps == 3);
  }

  TEST_CASE("worker count does not change the result") {
    const auto lat = test::lattice(test::ball(3, 0.2));
    const GraphField f = GraphField::sample(lat, *make_paraboloid(3, 2.0));
    StepConfig cfg;
    cfg.scheme = Scheme::semi_implicit;
    cfg.t_end = 0.01;
    cfg.dt = 0.0025;
    cfg.steady_tol = 0.0;
    const Trajectory one = run(f, cfg, {}, 0, 1);
    const Trajectory three = run(f, cfg, {}, 0, 3);
    CHECK(one.final_state.values == three.final_state.values);
  }

  TEST_CASE("config validation") {
    StepConfig cfg;
    cfg.t_end = 1.0;
    CHECK_NOTHROW(cfg.validate());
    cfg.safety = 1.0;
    CHECK_THROWS_AS(cfg.validate(), Error);
    cfg.safety = 0.5;
    cfg.solver_tol = 1e-6;
    CHECK_THROWS_AS(cfg.validate(), Error);
    cfg.solver_tol = 1e-10;
    cfg.picard_iters = 0;
    CHECK_THROWS_AS(cfg.validate(), Error);
  }
}
