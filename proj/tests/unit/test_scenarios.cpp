// SPDX-License-Identifier: Apache-2.0
#include <cmath>
#include <random>

#include "doctest.h"
#include "mcflow/error.hpp"
#include "mcflow/jet_calculus.hpp"
#include "mcflow/scenarios.hpp"
#include "support.hpp"

using namespace mcf;

namespace {

Point random_point(std::mt19937_64& rng, int n, double lo, double hi) {
  std::uniform_real_distribution<double> u(lo, hi);
  Point x{};
  for (int i = 0; i < n; ++i) x[i] = u(rng);
  return x;
}

// Centered differences of ψ against the analytic callbacks.
void check_callbacks(const Scenario& psi, double lo, double hi, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  const int n = psi.n(), m = psi.m();
  const double h = 1e-3;
  for (int trial = 0; trial < 100; ++trial) {
    const Point x = random_point(rng, n, lo, hi);
    const Small D = psi.gradient(x);
    const Hessian H = psi.hessian(x);
    for (int i = 0; i < n; ++i) {
      Point xp = x, xm = x;
      xp[i] += h;
      xm[i] -= h;
      std::array<double, 4> fp{}, fm{};
      psi.value(xp, {fp.data(), static_cast<std::size_t>(m)});
      psi.value(xm, {fm.data(), static_cast<std::size_t>(m)});
      const Small Dp = psi.gradient(xp), Dm = psi.gradient(xm);
      for (int a = 0; a < m; ++a) {
        CHECK(std::abs((fp[a] - fm[a]) / (2 * h) - D(a, i)) <= 100 * h * h);
        for (int j = 0; j < n; ++j) {
          CHECK(std::abs((Dp(a, j) - Dm(a, j)) / (2 * h) - H[a](i, j)) <= 100 * h * h);
        }
      }
    }
  }
}

}  // namespace

TEST_SUITE("scenarios") {
  TEST_CASE("callbacks are consistent with centered differences") {
    Small A(2, 3);
    A << 0.5, -0.1, 0.2, 0.0, 0.3, 0.4;
    SmallVec b(2);
    b << 1.0, -2.0;
    check_callbacks(*make_affine(A, b), -1, 1, 1);
    check_callbacks(*make_holomorphic_square(), -1, 1, 2);
    check_callbacks(*make_scherk(), -1.2, 1.2, 3);
    check_callbacks(*make_hopf_quadratic(0.7), -0.5, 0.5, 4);
    check_callbacks(*make_lawson_osserman_cone(1.1, 0.1), 0.3, 0.5, 5);
    check_callbacks(*make_paraboloid(3, 1.5), -1, 1, 6);
  }

  TEST_CASE("|q(x)| = |x|² on random points") {
    const auto q = make_hopf_quadratic(1.0);
    std::mt19937_64 rng(7);
    for (int trial = 0; trial < 100000; ++trial) {
      const Point x = random_point(rng, 4, -2, 2);
      std::array<double, 3> v{};
      q->value(x, v);
      const double r2 = x[0] * x[0] + x[1] * x[1] + x[2] * x[2] + x[3] * x[3];
      REQUIRE(std::abs(std::hypot(v[0], v[1], v[2]) - r2) <= 1e-12 * (1 + r2));
    }
  }

  TEST_CASE("sup of |Dq| on the sphere and of |D²q(v,v)|") {
    const auto q = make_hopf_quadratic(1.0);
    CHECK(operator_norm(q->gradient(Point{1, 0, 0, 0})) == doctest::Approx(2.0).epsilon(1e-14));
    std::mt19937_64 rng(8);
    double sup = 0.0;
    for (int trial = 0; trial < 2000; ++trial) {
      Point x = random_point(rng, 4, -1, 1);
      const double r = std::sqrt(x[0] * x[0] + x[1] * x[1] + x[2] * x[2] + x[3] * x[3]);
      for (double& c : x) c /= r;
      sup = std::max(sup, operator_norm(q->gradient(x)));
    }
    CHECK(sup == doctest::Approx(2.0).epsilon(1e-12));
    CHECK(sup_direction_norm(q->hessian(Point{}), 3, 4, 9) == doctest::Approx(2.0).epsilon(1e-10));
  }

  TEST_CASE("holomorphic square singular values") {
    const auto z2 = make_holomorphic_square();
    const Svd s = singular_value_decomposition(z2->gradient(Point{0.5, 0, 0, 0}));
    CHECK(s.values(0) == doctest::Approx(1.0));
    CHECK(s.values(1) == doctest::Approx(1.0));
    const Svd t = singular_value_decomposition(z2->gradient(Point{0.3, -0.4, 0, 0}));
    CHECK(t.values(0) == doctest::Approx(1.0));
    CHECK(t.values(1) == doctest::Approx(1.0));
  }

  TEST_CASE("cone is homogeneous of degree one and excludes its vertex") {
    const auto cone = make_lawson_osserman_cone(std::sqrt(5.0) / 2, 0.1);
    const Point x{0.2, -0.3, 0.4, 0.1};
    Point y = x;
    for (double& c : y) c *= 2.5;
    std::array<double, 3> fx{}, fy{};
    cone->value(x, fx);
    cone->value(y, fy);
    for (int a = 0; a < 3; ++a) CHECK(fy[a] == doctest::Approx(2.5 * fx[a]).epsilon(1e-14));
    CHECK_THROWS_AS(cone->value(Point{0.01, 0, 0, 0}, fx), Error);
  }

  TEST_CASE("scherk is zero at the origin and rejects large domains") {
    const auto s = make_scherk();
    std::array<double, 1> v{};
    s->value(Point{}, v);
    CHECK(v[0] == 0.0);
    CHECK_NOTHROW(s->check_domain(test::box2(0.25, 1.5)));
    CHECK_THROWS_AS(s->check_domain(test::box2(0.25, 1.75)), Error);
  }

  TEST_CASE("named construction validates parameters") {
    ScenarioConfig c{"hopf_quadratic", {{"R", {0.5}}}};
    CHECK(make_scenario(c, 4)->m() == 3);
    CHECK_THROWS_AS(make_scenario(c, 2), Error);
    c.params["bogus"] = {1.0};
    CHECK_THROWS_AS(make_scenario(c, 4), Error);
    ScenarioConfig a{"affine", {{"A", {1, 2, 3, 4, 5, 6}}, {"b", {0, 0}}}};
    const auto aff = make_scenario(a, 3);
    CHECK(aff->m() == 2);
    CHECK(aff->gradient(Point{})(1, 0) == 4.0);
    a.params["b"] = {0, 0, 0};
    CHECK_THROWS_AS(make_scenario(a, 3), Error);
    CHECK_THROWS_AS(make_scenario(ScenarioConfig{"nope", {}}, 2), Error);
    CHECK(list_scenarios().size() == 6);
  }
}
