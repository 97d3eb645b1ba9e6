// SPDX-License-Identifier: Apache-2.0
#include <cmath>

#include "doctest.h"
#include "mcflow/monitors.hpp"
#include "support.hpp"

using namespace mcf;

TEST_SUITE("monitors") {
  TEST_CASE("constant C for an affine map is √2 |A|") {
    Small A(1, 2);
    A << 0.3, 0.4;
    SmallVec b(1);
    b << 1.0;
    const ConditionValue c = admissibility_constant(*make_affine(A, b), test::box2(0.25), 3);
    CHECK(c.sup_d2 == 0.0);
    CHECK(c.C == doctest::Approx(std::sqrt(2.0) * 0.5));
    CHECK(c.admissible);
  }

  TEST_CASE("paraboloid on the unit ball") {
    const ConditionValue c = admissibility_constant(*make_paraboloid(2, 1.0), test::ball(2, 0.125), 3);
    CHECK(c.delta == doctest::Approx(2.0));
    CHECK(c.sup_d2 == doctest::Approx(1.0));
    CHECK(c.sup_d_boundary == doctest::Approx(1.0).epsilon(1e-9));
    CHECK(c.C == doctest::Approx(8 * 2 * 2.0 * 1.0 + std::sqrt(2.0)));
    CHECK_FALSE(c.admissible);
  }

  TEST_CASE("gradient bound at ξ = 1 equals C") {
    const double delta = 2.0, d2 = 0.01, db = 0.3;
    const double C = 8 * 4 * delta * d2 + std::sqrt(2.0) * db;
    CHECK(boundary_gradient_bound(4, delta, 1.0, d2, db) == doctest::Approx(C).epsilon(1e-15));
    CHECK(boundary_gradient_bound(4, delta, 0.0, d2, db) < C);
  }

  TEST_CASE("barrier parameters satisfy νk = 4nδ(1+ξ) sup|D²ψ|") {
    for (int n = 1; n <= 4; ++n) {
      const BarrierParams p = barrier_parameters(n, 1.7, 0.3, 0.25);
      CHECK(p.k == doctest::Approx(1.0 / 1.7));
      CHECK(std::abs(p.nu_k - 4 * n * 1.7 * 1.3 * 0.25) < 1e-12);
      CHECK(std::abs(p.nu * p.k - p.nu_k) < 1e-12);
    }
    CHECK(barrier_parameters(2, 1.0, 0.0, 0.0).degenerate());
  }

  TEST_CASE("barrier holds for sampled data and flags a pushed field") {
    const auto lat = test::lattice(test::ball(2, 0.125));
    const auto psi = make_paraboloid(2, 0.1);
    const GraphField f0 = GraphField::sample(lat, *psi);
    const DomainSpec spec = test::ball(2, 0.125);
    const ConditionValue c = admissibility_constant(*psi, spec, 1);
    const BarrierParams params = barrier_parameters(2, c.delta, 0.0, c.sup_d2);
    Point p{};
    p[0] = 1.0;
    const Hyperplane plane = supporting_hyperplane(spec, p);
    CHECK(barrier_check(f0, f0, plane, params, 0) >= 0.0);
    GraphField pushed = f0;
    for (std::size_t node : lat->interior()) pushed.values[node] += 10.0;
    CHECK(barrier_check(pushed, f0, plane, params, 0) < 0.0);
  }

  TEST_CASE("diagnostics of a flat graph") {
    const auto lat = test::lattice(test::box2(0.25));
    const GraphField f = GraphField::zeros(lat, 2);
    const DiagnosticsRecord r = monitor_step(f, nullptr);
    CHECK(r.area == doctest::Approx(lat->interior().size() * 0.0625));
    CHECK(r.max_lambda == 0.0);
    CHECK(r.min_star_omega1 == 1.0);
    CHECK(r.residual_max == 0.0);
    CHECK(r.energy_spent == 0.0);
    CHECK(r.f_max.size() == 2);
  }

  TEST_CASE("ξ and energy accumulate from the previous record") {
    const auto lat = test::lattice(test::box2(0.25));
    const GraphField f = GraphField::sample(lat, *make_paraboloid(2, 0.5));
    DiagnosticsRecord prev = monitor_step(f, nullptr);
    prev.xi = 7.0;
    GraphField g = f;
    g.t = 0.5;
    const DiagnosticsRecord r = monitor_step(g, &prev);
    CHECK(r.xi == 7.0);
    CHECK(r.energy_spent == doctest::Approx(prev.energy_spent + 0.25 * (prev.energy_rate + r.energy_rate)));
    CHECK(r.energy_rate > 0.0);
  }

  TEST_CASE("max principle report") {
    DiagnosticsRecord r;
    r.f_max = {1.0};
    r.f_min = {0.0};
    CHECK(max_principle_check({r}, {1.0}, {0.0}, 1e-9).ok);
    r.f_max = {1.1};
    const MaxPrincipleReport bad = max_principle_check({r}, {1.0}, {0.0}, 1e-9);
    CHECK_FALSE(bad.ok);
    CHECK(bad.worst_margin == doctest::Approx(0.1));
    CHECK(bad.violations == 1);
  }

  TEST_CASE("star Omega minimum principle report") {
    DiagnosticsRecord a, b;
    a.min_star_omega1 = 0.9;
    a.min_star_omega1_boundary = 0.9;
    b.t = 1.0;
    b.min_star_omega1 = 0.95;
    b.min_star_omega1_boundary = 0.92;
    CHECK(star_omega_min_principle({a, b}).ok);
    b.min_star_omega1 = 0.8;
    CHECK_FALSE(star_omega_min_principle({a, b}).ok);
    b.max_pair_product = 1.5;
    CHECK_FALSE(star_omega_min_principle({a, b}).applicable);
  }

  TEST_CASE("boundary gradient report uses the final ξ") {
    ConditionValue c;
    c.delta = 1.0;
    c.sup_d2 = 0.1;
    c.sup_d_boundary = 0.0;
    DiagnosticsRecord a, b;
    a.boundary_max_Df = 0.8;
    b.xi = 1.0;
    const GradientBoundReport rep = boundary_gradient_check({a, b}, c, 1, 0.0);
    CHECK(rep.bound == doctest::Approx(0.8));
    CHECK(rep.ok);
    a.boundary_max_Df = 0.9;
    CHECK_FALSE(boundary_gradient_check({a, b}, c, 1, 0.05).ok);
  }
}
