#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "minmax_lab/dynamics.hpp"
#include "minmax_lab/gallery.hpp"
#include "minmax_lab/reductions.hpp"
#include "minmax_lab/verify.hpp"

using namespace minmax_lab;

namespace {

Vec vec1(double a) {
  Vec v(1);
  v << a;
  return v;
}

Vec vec2(double a, double b) {
  Vec v(2);
  v << a, b;
  return v;
}

}  // namespace

TEST_CASE("verify_linearvi closed form") {
  LinearVIInstance up(Mat::Zero(1, 1), vec1(1.0), 0.05, true);
  const auto c0 = verify_linearvi(up, vec1(0.0));
  CHECK(c0.residual == 0.0);
  CHECK(c0.pass);
  const auto c1 = verify_linearvi(up, vec1(1.0));
  CHECK(c1.residual == -1.0);
  CHECK(!c1.pass);

  PolymatrixGame mp;
  mp.n = 2;
  EdgePayoffs e;
  e.i = 0;
  e.j = 1;
  e.a_ij << 1, 0, 0, 1;
  e.a_ji << 0, 1, 1, 0;
  mp.edges = {e};
  const auto [vi, trace] = polymatrix_to_linearvi(mp);
  CHECK(verify_linearvi(vi, vec2(0.5, 0.5)).residual == 0.0);
}

TEST_CASE("closed-form residual equals corner enumeration exactly") {
  Rng rng(808);
  for (int t = 0; t < 100; ++t) {
    const int d = 1 + static_cast<int>(rng.below(10));
    const auto vi = gallery::random_linearvi(d, 5000 + t, t % 2 == 0);
    Vec z(d);
    for (int i = 0; i < d; ++i) z[i] = rng.uniform();
    const auto cert = verify_linearvi(vi, z);

    const Vec w = vi.operator_at(z);
    double corner_min = std::numeric_limits<double>::infinity();
    for (unsigned mask = 0; mask < (1u << d); ++mask) {
      double s = 0.0;
      for (int i = 0; i < d; ++i) {
        const double b = (mask >> i) & 1u;
        s += w[i] * (b - z[i]);
      }
      corner_min = std::min(corner_min, s);
    }
    CHECK(cert.residual == corner_min);  // exact equality, identical accumulation order
  }
}

TEST_CASE("verify_qvi basics") {
  // F == 0: any member has residual 0
  CorrespondenceSpec spec;
  spec.d = 2;
  auto zero = QVIInstance::with_affine(spec, Mat::Zero(2, 2), Vec::Zero(2), 1e-9);
  const auto cert = verify_qvi(zero, vec2(0.4, 0.9));
  CHECK(cert.pass);
  CHECK(cert.residual == 0.0);

  // separation value on the joint-set VI of eq-not-vi
  const auto env = gallery::eq_not_vi();
  const auto joint = minmax_to_joint_vi(env.inst, 0.8 - 1e-6);
  const auto sep = verify_qvi(joint, vec2(1.0, 0.0));
  CHECK(sep.residual == doctest::Approx(-0.8).epsilon(1e-9));
  CHECK(!sep.pass);
  // membership is part of the check
  CHECK(verify_qvi(joint, vec2(1.0, 0.5)).pass == false);
}

TEST_CASE("verify_kakutani on the irrational spec") {
  const auto kak = gallery::irrational_kakutani();
  const Vec fp = vec2(0.70711, 0.70711);
  CHECK(verify_kakutani(kak.spec, fp, 1e-3).pass);
  // nu = 0 rejects every rational grid point
  Rng rng(4242);
  for (int t = 0; t < 50; ++t) {
    const Vec z = vec2(std::round(rng.uniform() * 100) / 100, std::round(rng.uniform() * 100) / 100);
    const auto cert = verify_kakutani(kak.spec, z, 0.0);
    CHECK(!cert.pass);
  }
  // unconstrained spec accepts anything in the box
  CorrespondenceSpec free;
  free.d = 2;
  CHECK(verify_kakutani(free, vec2(0.2, 0.9), 0.0).pass);
}

TEST_CASE("verify_local_minmax on the separation probe") {
  const auto env = gallery::eq_not_vi();
  const auto cert = verify_local_minmax(env.inst, vec1(1.0), vec1(0.0), 0.01, 1e-3, 0.3);
  CHECK(cert.pass);
  CHECK(cert.details.at("x_improvement") <= 1e-12);
  CHECK(cert.details.at("y_improvement") <= 1e-12);
  CHECK(cert.details.at("exact_single_component_pass") == 1.0);

  // zero objective: any feasible point passes
  QuadraticObjective zq(1, Mat::Zero(2, 2), Vec::Zero(2), 0.0);
  auto zero = MinMaxInstance::product(1, zq, BilinearConstraintSet::unconstrained(1, 1),
                                      BilinearConstraintSet::unconstrained(1, 2), 1e-3, 0.2);
  CHECK(verify_local_minmax(zero, vec1(0.6), vec1(0.3), 0.05).pass);

  // infeasible probe points violate the promise
  CHECK_THROWS_AS(verify_local_minmax(env.inst, vec1(1.0), vec1(0.5), 0.05), PromiseViolation);
}

TEST_CASE("verify_local_minmax reports both readings on the nonexistence instance") {
  const auto ne = gallery::nonexistence_instance(0.1);
  const auto cert = verify_local_minmax(ne.inst, ne.probe_x, ne.probe_y, 0.005);
  // nominal reading: gain delta = 5 eps/4 > eps, so the claimed regime fails
  CHECK(cert.details.at("claimed_gain") == doctest::Approx(0.125));
  CHECK(cert.details.at("claimed_reading_fails") == 1.0);
  // computed reading: gain delta^2/2 < eps, measured by the grid
  CHECK(cert.details.at("computed_gain") ==
        doctest::Approx(0.125 * 0.125 / 2.0).epsilon(1e-2));
  CHECK(cert.details.at("computed_gain") < ne.inst.eps);
}

TEST_CASE("verify_gda_fixed_point") {
  const auto env = gallery::eq_not_vi();
  CHECK(verify_gda_fixed_point(env.inst, vec1(1.0), vec1(0.0), 1e-9).pass);
  // (0.5, 0.5) is itself a gda fixed point of this instance
  const auto mid = verify_gda_fixed_point(env.inst, vec1(0.5), vec1(0.5), 0.1);
  CHECK(mid.residual == doctest::Approx(0.0).epsilon(1e-12));
  CHECK(mid.pass);

  QuadraticObjective zq(2, Mat::Zero(4, 4), Vec::Zero(4), 0.0);
  auto zero = MinMaxInstance::product(2, zq, BilinearConstraintSet::unconstrained(2, 1),
                                      BilinearConstraintSet::unconstrained(2, 2), 1e-3, 0.2);
  CHECK(verify_gda_fixed_point(zero, vec2(0.3, 0.6), vec2(0.9, 0.2), 0.0).pass);
}

TEST_CASE("verify_globalization") {
  // bilinear gadget is linear in x: exact LP path
  LinearVIInstance vi(Mat::Constant(1, 1, 0.2), vec1(0.4), 0.1, true);
  const auto [bl, trace] = linearvi_to_bilinear_minmax(vi, 1.0);
  // pick a feasible pair (x = y) that is globally optimal for x:
  // grad_x f = Dy + c = 0.2 y + 0.4 > 0, so x = 0 minimizes
  const auto good = verify_globalization(bl, vec1(0.0), vec1(0.0), 0.01, 0.01);
  CHECK(good.details.at("exact") == 1.0);
  CHECK(good.pass);
  const auto bad = verify_globalization(bl, vec1(1.0), vec1(1.0), 1e-6, 0.5);
  CHECK(!bad.pass);

  // constant objective: bound holds trivially (grid path)
  QuadraticObjective cq(1, Mat::Zero(2, 2), Vec::Zero(2), 3.0);
  auto cinst = MinMaxInstance::product(1, cq, BilinearConstraintSet::unconstrained(1, 1),
                                       BilinearConstraintSet::unconstrained(1, 2), 1e-3, 0.2);
  CHECK(verify_globalization(cinst, vec1(0.5), vec1(0.5), 1e-6, 0.1).pass);

  // eq-not-vi is convex in x; at (1,0) the global bound holds with margin 0
  const auto env = gallery::eq_not_vi();
  const auto sep = verify_globalization(env.inst, vec1(1.0), vec1(0.0), 1e-3, 0.3, 0.005);
  CHECK(sep.pass);
  CHECK(sep.residual <= 1e-9);

  // concave-in-x objectives fail the convexity probe
  Mat M = Mat::Zero(2, 2);
  M(0, 0) = -1.0;
  QuadraticObjective ncq(1, M, Vec::Zero(2), 0.0);
  auto ninst = MinMaxInstance::product(1, ncq, BilinearConstraintSet::unconstrained(1, 1),
                                       BilinearConstraintSet::unconstrained(1, 2), 1e-3, 0.2);
  CHECK_THROWS(verify_globalization(ninst, vec1(0.5), vec1(0.5), 1e-3, 0.1));
}

TEST_CASE("verify_qvi residual is never positive on members") {
  // lp_min value <= F(z)^T z whenever z itself lies in Q_nu(z)
  Rng rng(909090);
  const auto env = gallery::eq_not_vi();
  auto qvi = minmax_to_qvi(env.inst, 1.0);
  for (int t = 0; t < 50; ++t) {
    const double x = rng.uniform();
    const Vec z = vec2(x, rng.uniform(0.0, 1.0 - x));
    const auto cert = verify_qvi(qvi, z);
    if (cert.details.at("membership_excess") <= 1e-9) CHECK(cert.residual <= 1e-12);
  }
}

TEST_CASE("opaque evaluator instances run the map and verifier paths") {
  // same bilinear gadget objective, supplied as a callable with declared G, L
  LinearVIInstance vi(Mat::Constant(1, 1, 0.3), vec1(-0.2), 0.1, true);
  const auto [quad_inst, trace] = linearvi_to_bilinear_minmax(vi, 1.0);
  OpaqueObjective obj;
  const Mat D = vi.D;
  const Vec c = vi.c;
  obj.f = [D, c](const Vec& x, const Vec& y) { return x.dot(D * y + c); };
  obj.grad = [D, c](const Vec& x, const Vec& y) {
    Vec g(2);
    g << D * y + c, D.transpose() * x;
    return g;
  };
  obj.G = 3.0;
  obj.L = 1.0;
  auto inst = MinMaxInstance::opaque_bilinear(1, obj, quad_inst.g1(), quad_inst.g2(),
                                              quad_inst.eps, quad_inst.delta, quad_inst.nu);
  CHECK(inst.f(vec1(0.5), vec1(0.5)) == quad_inst.f(vec1(0.5), vec1(0.5)));
  CHECK(residual(inst, vec1(0.4), vec1(0.4), MapKind::Gda) ==
        doctest::Approx(residual(quad_inst, vec1(0.4), vec1(0.4), MapKind::Gda)));
  const auto run = iterate(inst, vec1(0.4), vec1(0.4), MapKind::Gda, 0.5, 2000, 1e-7);
  CHECK(verify_gda_fixed_point(inst, run.x, run.y, run.residual + 1e-12).pass);
  // sampled midpoint convexity accepts the (linear in x) objective
  CHECK(verify_globalization(inst, vec1(0.0), vec1(0.0), 0.05, 0.05, 0.01).pass);
}

TEST_CASE("local solutions pass the converted QVI at run scale") {
  Rng rng(606);
  for (int t = 0; t < 5; ++t) {
    const auto game = gallery::random_polymatrix(2, 3, 7100 + t);
    const auto [vi, tr1] = polymatrix_to_linearvi(game);
    const auto [inst, tr2] = linearvi_to_jc_minmax(vi, 1.0);
    const auto sol = find_gadget_solution_on_grid(inst, 200);
    REQUIRE(sol.has_value());
    const double bound = qvi_reverse_bound(inst.L(), inst.delta, inst.eps, inst.d());
    auto qvi = minmax_to_qvi(inst, bound + 1e-6);
    Vec z(2 * inst.d());
    z << sol->first, sol->second;
    const auto cert = verify_qvi(qvi, z);
    CHECK(cert.pass);
  }
}

TEST_CASE("map displacement bounds single-coordinate deviations at run scale") {
  LinearVIInstance vi(Mat::Constant(1, 1, 0.5), vec1(-0.3), 0.1, true);
  const auto [inst, trace] = linearvi_to_bilinear_minmax(vi, 1.0);
  // take iterates of the damped gda dynamics as candidate fixed points
  Vec x = vec1(0.4), y = vec1(0.4);
  Rng rng(17);
  for (int t = 0; t < 20; ++t) {
    const double alpha = residual(inst, x, y, MapKind::Gda);
    const auto chk = exact_single_component_check(inst, x, y, inst.eps, inst.delta);
    REQUIRE(chk.applicable);
    // G_inf: sampled max-abs gradient component
    double Ginf = 0.0;
    for (int s = 0; s < 200; ++s) {
      const Vec xs = vec1(rng.uniform());
      const Vec ys = vec1(rng.uniform());
      Ginf = std::max(Ginf, inst.grad(xs, ys).lpNorm<Eigen::Infinity>());
    }
    const double tol =
        alpha * (1.0 + Ginf) + 0.5 * inst.L() * inst.delta * inst.delta + 1e-9;
    CHECK(chk.x_improvement <= tol);
    CHECK(chk.y_improvement <= tol);
    const auto [xn, yn] = gda_map(inst, x, y);
    x = 0.5 * x + 0.5 * xn;
    y = 0.5 * y + 0.5 * yn;
  }
}
