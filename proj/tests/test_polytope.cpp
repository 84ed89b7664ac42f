#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "minmax_lab/gallery.hpp"
#include "minmax_lab/polytope.hpp"

using namespace minmax_lab;

namespace {

Vec vec2(double a, double b) {
  Vec v(2);
  v << a, b;
  return v;
}

BoxPolytope random_feasible_polytope(Rng& rng, int d, int m) {
  // Rows anchored at a random interior point, so the polytope is nonempty.
  Vec z0(d);
  for (int i = 0; i < d; ++i) z0[i] = rng.uniform();
  BoxPolytope P(d);
  for (int j = 0; j < m; ++j) {
    Vec a(d);
    for (int i = 0; i < d; ++i) a[i] = rng.uniform(-1.0, 1.0);
    P.add_row({a, a.dot(z0) + rng.uniform(0.0, 0.5)});
  }
  return P;
}

}  // namespace

TEST_CASE("project_box clamps componentwise") {
  CHECK(project_box(vec2(1.3, -0.2)) == vec2(1.0, 0.0));
  CHECK(project_box(vec2(0.5, 0.5)) == vec2(0.5, 0.5));
  Vec p(3);
  p << 2, 2, -5;
  Vec q(3);
  q << 1, 1, 0;
  CHECK(project_box(p) == q);
}

TEST_CASE("project_polytope closed-form cases") {
  BoxPolytope half(2, {{vec2(1, 1), 1.0}});
  CHECK((project_polytope(half, vec2(1, 1)) - vec2(0.5, 0.5)).norm() < 1e-9);

  BoxPolytope box(2, {{vec2(1, 0), 0.6}, {vec2(-1, 0), -0.4}, {vec2(0, 1), 0.6},
                      {vec2(0, -1), -0.4}});
  CHECK((project_polytope(box, vec2(0, 1)) - vec2(0.4, 0.6)).norm() < 1e-12);
}

TEST_CASE("project_polytope tilted halfplane vs dense grid oracle") {
  BoxPolytope P(2, {{vec2(1, 2), 1.0}});
  const Vec q = project_polytope(P, vec2(1, 1));
  CHECK((q - vec2(0.6, 0.2)).norm() < 1e-8);

  // Independent oracle: dense feasible grid argmin of the distance.
  double best = 1e30;
  Vec arg(2);
  const double step = 1e-3;
  for (double x = 0; x <= 1.0 + 1e-12; x += step) {
    for (double y = 0; y <= 1.0 + 1e-12; y += step) {
      if (x + 2 * y <= 1.0) {
        const double d2 = (x - 1) * (x - 1) + (y - 1) * (y - 1);
        if (d2 < best) {
          best = d2;
          arg = vec2(x, y);
        }
      }
    }
  }
  CHECK((q - arg).norm() < 2 * step);
}

TEST_CASE("projection idempotence and optimality inequality") {
  Rng rng(11);
  for (int trial = 0; trial < 100; ++trial) {
    const int d = 2 + static_cast<int>(rng.below(4));
    BoxPolytope P = random_feasible_polytope(rng, d, 1 + static_cast<int>(rng.below(4)));
    Vec p(d);
    for (int i = 0; i < d; ++i) p[i] = rng.uniform(-1.0, 2.0);
    const Vec q = project_polytope(P, p);
    CHECK(P.contains(q, 1e-7));
    CHECK((project_polytope(P, q) - q).norm() <= 2e-9);

    Vec s(d);
    for (int i = 0; i < d; ++i) s[i] = rng.uniform();
    const Vec y = project_polytope(P, s);
    CHECK((y - q).dot(q - p) >= -1e-6);
  }
}

TEST_CASE("lp_min vertex solutions and tie-break") {
  BoxPolytope box(2);
  auto r1 = lp_min(box, vec2(1, 0));
  CHECK(r1.value == doctest::Approx(0.0).epsilon(1e-12));
  CHECK(r1.point[0] == doctest::Approx(0.0));

  BoxPolytope tri(2, {{vec2(1, 1), 1.0}});
  auto r2 = lp_min(tri, vec2(-1, -1));
  CHECK(r2.value == doctest::Approx(-1.0).epsilon(1e-9));
  CHECK((r2.point - vec2(0, 1)).norm() < 1e-7);  // lexicographically smallest optimum

  auto r3 = lp_min(tri, vec2(0, 0));
  CHECK(r3.value == 0.0);
  CHECK(tri.contains(r3.point, 1e-9));
}

TEST_CASE("lp_min lower-bounds random feasible points") {
  Rng rng(23);
  for (int trial = 0; trial < 100; ++trial) {
    const int d = 2 + static_cast<int>(rng.below(3));
    BoxPolytope P = random_feasible_polytope(rng, d, 1 + static_cast<int>(rng.below(3)));
    Vec cost(d);
    for (int i = 0; i < d; ++i) cost[i] = rng.uniform(-1.0, 1.0);
    const auto lp = lp_min(P, cost);
    Vec s(d);
    for (int i = 0; i < d; ++i) s[i] = rng.uniform();
    const Vec z = project_polytope(P, s);
    CHECK(lp.value <= cost.dot(z) + 1e-7);
  }
}

TEST_CASE("feasibility finds points or reports emptiness") {
  BoxPolytope box(2);
  auto z = feasibility(box);
  REQUIRE(z.has_value());
  CHECK(box.contains(*z, 1e-9));

  BoxPolytope empty(1, {{Vec::Ones(1), -0.5}});
  CHECK(!feasibility(empty).has_value());

  const auto kak = gallery::irrational_kakutani();
  Vec z08(2);
  z08 << 0.8, 0.8;
  auto pt = feasibility(kak.spec.slice(z08, 0.0));
  REQUIRE(pt.has_value());
  CHECK((*pt - vec2(0.8, 0.625)).norm() < 1e-7);
}

TEST_CASE("degenerate rows follow the zero-row rule") {
  BoxPolytope ok(2, {{vec2(0, 0), 0.5}});
  CHECK(ok.rows().empty());
  CHECK(!ok.trivially_infeasible());

  BoxPolytope bad(2, {{vec2(0, 0), -0.1}});
  CHECK(bad.trivially_infeasible());
  CHECK(!feasibility(bad).has_value());
  CHECK_THROWS_AS(project_polytope(bad, vec2(0, 0)), InfeasibleSet);
}

TEST_CASE("relaxation monotonicity") {
  Rng rng(37);
  for (int trial = 0; trial < 50; ++trial) {
    const int d = 2 + static_cast<int>(rng.below(3));
    BoxPolytope P = random_feasible_polytope(rng, d, 2);
    const double nu_small = rng.uniform(0.0, 0.2);
    const double nu_big = nu_small + rng.uniform(0.0, 0.3);
    const BoxPolytope Ps = P.relaxed(nu_small);
    const BoxPolytope Pb = P.relaxed(nu_big);
    for (int s = 0; s < 10; ++s) {
      Vec p(d);
      for (int i = 0; i < d; ++i) p[i] = rng.uniform();
      const Vec z = project_polytope(Ps, p);
      CHECK(Pb.max_row_excess(z) <= 1e-7);
    }
  }
}

TEST_CASE("one_sided_hausdorff basics") {
  BoxPolytope full(2);
  CHECK(one_sided_hausdorff(full, full, 100) == doctest::Approx(0.0).epsilon(1e-9));

  BoxPolytope halfbox(2, {{vec2(1, 0), 0.5}});
  const double h = one_sided_hausdorff(full, halfbox, 400, 5);
  CHECK(h <= 0.5 + 1e-9);
  CHECK(h >= 0.45);
}
