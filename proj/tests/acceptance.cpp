// Acceptance suite: one pass/fail line per criterion, nonzero exit on any
// failure. Tolerances are pinned here, not configurable.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <string>
#include <vector>

#include "minmax_lab/dynamics.hpp"
#include "minmax_lab/gallery.hpp"
#include "minmax_lab/reductions.hpp"
#include "minmax_lab/sperner.hpp"
#include "minmax_lab/verify.hpp"

using namespace minmax_lab;

namespace {

struct Checker {
  bool ok = true;
  std::string why;
  void require(bool cond, const std::string& msg) {
    if (!cond && ok) {
      ok = false;
      why = msg;
    }
  }
};

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

// 1. Separation example: gda fixed point, local min-max, and the -4/5 VI gap.
void criterion1(Checker& c) {
  const auto env = gallery::eq_not_vi();
  c.require(verify_gda_fixed_point(env.inst, env.probe_x, env.probe_y, 1e-9).pass,
            "gda fixed point check failed at (1,0)");
  c.require(verify_local_minmax(env.inst, env.probe_x, env.probe_y, 0.005, 1e-3, 0.3).pass,
            "local min-max check failed at (1,0)");
  const auto joint = minmax_to_joint_vi(env.inst, 1e-3);
  Vec z(2);
  z << env.probe_x, env.probe_y;
  const auto cert = verify_qvi(joint, z);
  c.require(std::abs(cert.residual + 0.8) <= 1e-9,
            "VI residual is " + std::to_string(cert.residual) + ", want -0.8 +- 1e-9");
}

// 2. Irrational Kakutani through the Sperner solver, grid 128.
void criterion2(Checker& c) {
  const auto kak = gallery::irrational_kakutani();
  CorrespondenceSpec spec = kak.spec;
  spec.nu = 0.05;
  auto qvi = QVIInstance::with_affine(std::move(spec), Mat::Zero(2, 2), Vec::Zero(2), 0.05);
  const auto params = make_params(qvi, 1.0, 0.02, 128);
  const auto cert = solve_qvi(qvi, params);
  c.require(cert.pass, "sperner run failed to certify");
  const Vec target = vec2(0.70711, 0.70711);
  c.require((cert.point - target).norm() <= 0.05,
            "v0 is " + std::to_string(cert.point[0]) + "," + std::to_string(cert.point[1]) +
                ", too far from 1/sqrt(2)");
  c.require(verify_kakutani(kak.spec, cert.point, 0.05).pass, "kakutani membership at nu=0.05");
}

// 3. Non-existence at nu = 0; solutions reappear at nu = 0.1.
void criterion3(Checker& c) {
  const auto ne = gallery::nonexistence_instance(0.1);
  // exhaustive scan: (0,0) is the only feasible pair on a fine grid
  int feasible = 0;
  for (int i = 0; i <= 50; ++i) {
    for (int j = 0; j <= 50; ++j) {
      if (ne.inst.feasible_pair(vec1(i / 50.0), vec1(j / 50.0))) feasible++;
    }
  }
  c.require(feasible == 1, "expected exactly one feasible point at nu=0");
  const auto cert = verify_local_minmax(ne.inst, ne.probe_x, ne.probe_y, 0.002);
  c.require(cert.details.at("claimed_gain") > ne.inst.eps,
            "stated-regime gain must exceed eps");
  c.require(cert.details.at("claimed_reading_fails") == 1.0,
            "the claimed reading must fail the equilibrium check");

  auto qvi = minmax_to_qvi(ne.inst, 0.1);
  qvi.correspondence.nu = 0.1;
  const auto run = solve_qvi(qvi, make_params(qvi, 1.0, 0.02, 64));
  c.require(run.pass, "sperner found no verified QVI solution at nu=0.1");
  c.require(verify_qvi(qvi, run.point).pass, "standalone verifier rejects the sperner point");
}

// 4. Reduction soundness over 20 seeds, both gadgets.
void criterion4(Checker& c) {
  for (int seed = 1; seed <= 20; ++seed) {
    const auto game = gallery::random_polymatrix(2, 3, seed);
    const auto [vi, trace1] = polymatrix_to_linearvi(game);
    for (const bool bilinear : {false, true}) {
      const auto [inst, trace2] =
          bilinear ? linearvi_to_bilinear_minmax(vi, 1.0) : linearvi_to_jc_minmax(vi, 1.0);
      const auto sol = find_gadget_solution_on_grid(inst, 200);
      if (!sol) {
        c.require(false, "seed " + std::to_string(seed) + ": no grid solution");
        return;
      }
      const auto pull = minmax_solution_to_linearvi(sol->first, sol->second, vi, trace2);
      const auto eq = linearvi_solution_to_polymatrix(pull.point, game, trace1);
      c.require(eq.residual <= 0.088 + 0.02,
                "seed " + std::to_string(seed) + ": regret " + std::to_string(eq.residual));
    }
  }
}

// 5. Gadget constants: 1e4 sampled probes per gadget, exact inequalities.
void criterion5(Checker& c) {
  Rng rng(50505);
  for (const bool bilinear : {false, true}) {
    long probes = 0;
    for (int gi = 0; probes < 10000; ++gi) {
      const int n = 2 + gi % 5;
      const auto game = gallery::random_polymatrix(n, 3, 600 + gi);
      const auto [vi, tr] = polymatrix_to_linearvi(game);
      const auto [inst, tr2] =
          bilinear ? linearvi_to_bilinear_minmax(vi, 1.0) : linearvi_to_jc_minmax(vi, 1.0);
      const double Gcap = (bilinear ? 3.0 : 5.0) * std::sqrt(static_cast<double>(n));
      const double Lcap = bilinear ? 1.0 : 7.0;
      for (int t = 0; t < 500; ++t, ++probes) {
        Vec x1(n), y1(n), x2(n), y2(n);
        for (int i = 0; i < n; ++i) {
          x1[i] = rng.uniform();
          y1[i] = rng.uniform();
          x2[i] = rng.uniform();
          y2[i] = rng.uniform();
        }
        const Vec g1 = inst.grad(x1, y1);
        const Vec g2 = inst.grad(x2, y2);
        if (g1.norm() > Gcap) {
          c.require(false, "gradient norm probe exceeded G");
          return;
        }
        const double dz = std::sqrt((x1 - x2).squaredNorm() + (y1 - y2).squaredNorm());
        if (dz > 1e-12 && (g1 - g2).norm() > Lcap * dz) {
          c.require(false, "smoothness probe exceeded L");
          return;
        }
      }
    }
  }
}

// 6. Conversion-formula fidelity on 100 random tuples each.
void criterion6(Checker& c) {
  Rng rng(60606);
  for (int t = 0; t < 100; ++t) {
    const double G = rng.uniform(0.1, 10.0);
    const double L = rng.uniform(0.0, 10.0);
    const double delta = rng.uniform(0.0, 0.5);
    const double eps = 0.5 * L * delta * delta + rng.uniform(0.0, 1.0);
    const double a = alpha_from_eps_delta(G, L, delta, eps);
    const double resid = a * a + (G + delta) * a - (eps - 0.5 * L * delta * delta);
    c.require(std::abs(resid) <= 1e-12 * (1.0 + G * G), "alpha quadratic identity");
    const double q = qvi_alpha(G, L, delta, eps);
    c.require(std::abs(q - a * a / 2.0) <= 1e-12, "qvi_alpha identity");

    const double alpha = rng.uniform(0.0, 5.0);
    const double L2 = rng.uniform(1e-3, 10.0);
    const auto [e2, d2] = eps_delta_from_alpha(L2, alpha);
    const double s = 5.0 * L2 + 2.0;
    c.require(e2 == alpha * alpha * L2 / (s * s), "eps formula exact");
    c.require(d2 == alpha / s, "delta formula exact");

    const int dd = 1 + static_cast<int>(rng.below(6));
    const double dpos = rng.uniform(1e-3, 0.5);
    const double epos = rng.uniform(0.0, 1.0);
    c.require(qvi_reverse_bound(L2, dpos, epos, dd) ==
                  std::sqrt(static_cast<double>(dd)) * (3.0 * L2 * dpos + 2.0 * epos / dpos),
              "reverse bound formula exact");

    const double Lr = rng.uniform(0.1, 10.0);
    const double er = rng.uniform(1e-3, 1.0);
    const double nr = rng.uniform(1e-3, 1.0);
    const auto ref = reference_params(dd, er, nr, Lr);
    const auto& p = ref.params;
    const double sqd = std::sqrt(static_cast<double>(dd));
    c.require(p.gamma + sqd * p.omega() <= nr + 1e-15, "regime inequality 1");
    c.require(0.5 * p.eta * p.omega() * p.omega() + sqd * (1.0 + p.eta) * p.omega() +
                      dd * sqd * p.omega() / p.gamma <=
                  er + 1e-15,
              "regime inequality 2");
  }
}

// 7. VI <-> fixed-point equivalence on 50 random monotone instances.
void criterion7(Checker& c) {
  Rng rng(70707);
  for (int t = 0; t < 50; ++t) {
    const int d = 2 + static_cast<int>(rng.below(9));
    const auto vi = gallery::random_linearvi(d, 7000 + t, true);
    const auto run = extragradient_vi(vi.D, vi.c, -1, 1e-8, 20000);
    const auto cert = verify_linearvi(vi, run.z);
    const double alpha = std::max(1e-12, -cert.residual);
    const Vec disp = run.z - project_box(run.z - vi.operator_at(run.z));
    c.require(disp.norm() <= std::sqrt(alpha) + 1e-6, "VI residual -> displacement bound");

    Vec z(d);
    for (int i = 0; i < d; ++i) z[i] = rng.uniform();
    const double a2 = (z - project_box(z - vi.operator_at(z))).norm();
    c.require(verify_linearvi(vi, z).residual >=
                  -2.0 * a2 * std::sqrt(static_cast<double>(d)) - 1e-6,
              "displacement -> VI residual bound");
  }
}

// 8. Componentwise closed form equals dense corner enumeration exactly.
void criterion8(Checker& c) {
  Rng rng(80808);
  for (int t = 0; t < 100; ++t) {
    const int d = 1 + static_cast<int>(rng.below(10));
    const auto vi = gallery::random_linearvi(d, 8000 + t, t % 2 == 0);
    Vec z(d);
    for (int i = 0; i < d; ++i) z[i] = rng.uniform();
    const auto cert = verify_linearvi(vi, z);
    const Vec w = vi.operator_at(z);
    double corner_min = std::numeric_limits<double>::infinity();
    for (unsigned mask = 0; mask < (1u << d); ++mask) {
      double s = 0.0;
      for (int i = 0; i < d; ++i) s += w[i] * (((mask >> i) & 1u) - z[i]);
      corner_min = std::min(corner_min, s);
    }
    c.require(cert.residual == corner_min, "closed form != corner enumeration");
  }
}

// 9. Gradient correctness on every gallery/reduction instance family.
void criterion9(Checker& c) {
  std::vector<MinMaxInstance> instances;
  instances.push_back(gallery::eq_not_vi().inst);
  instances.push_back(gallery::nonexistence_instance(0.1).inst);
  instances.push_back(
      independent_set_localmin_instance(Graph{3, {{0, 1}, {1, 2}, {0, 2}}}, 2).first);
  const auto game = gallery::random_polymatrix(3, 3, 909);
  const auto [vi, tr] = polymatrix_to_linearvi(game);
  instances.push_back(linearvi_to_jc_minmax(vi, 1.0).first);
  instances.push_back(linearvi_to_bilinear_minmax(vi, 1.0).first);

  Rng rng(90909);
  const double h = 1e-5;
  for (const auto& inst : instances) {
    const int d = inst.d();
    for (int t = 0; t < 100; ++t) {
      Vec x(d), y(d);
      for (int i = 0; i < d; ++i) x[i] = rng.uniform(0.1, 0.9);
      for (int i = 0; i < d; ++i) y[i] = rng.uniform(0.1, 0.9);
      const Vec g = inst.grad(x, y);
      for (int i = 0; i < d; ++i) {
        Vec xp = x, xm = x;
        xp[i] += h;
        xm[i] -= h;
        if (std::abs((inst.f(xp, y) - inst.f(xm, y)) / (2 * h) - g[i]) >= 1e-6) {
          c.require(false, "x-gradient finite-difference mismatch");
          return;
        }
        Vec yp = y, ym = y;
        yp[i] += h;
        ym[i] -= h;
        if (std::abs((inst.f(x, yp) - inst.f(x, ym)) / (2 * h) - g[d + i]) >= 1e-6) {
          c.require(false, "y-gradient finite-difference mismatch");
          return;
        }
      }
    }
  }
}

// 10. Hausdorff continuity bounds on the gallery correspondence, 1000 pairs.
void criterion10(Checker& c) {
  const auto kak = gallery::irrational_kakutani();
  const double L = kak.spec.lipschitz;
  Rng rng(101010);
  int pairs = 0;
  for (int t = 0; pairs < 1000 && t < 20000; ++t) {
    const double beta = rng.uniform(0.05, 0.5);
    Vec z = vec2(rng.uniform(0.55, 1.0), rng.uniform());
    Vec zp = project_box(z + vec2(rng.uniform(-0.05, 0.05), rng.uniform(-0.05, 0.05)));
    if (zp[0] < 0.55) continue;
    const BoxPolytope Qa = kak.spec.slice(z, beta);
    const BoxPolytope Qb = kak.spec.slice(zp, beta);
    if (!feasibility(Qa) || !feasibility(Qb)) continue;
    ++pairs;
    const double h = one_sided_hausdorff(Qa, Qb, 20, 1000 + t);
    const double bound = 2.0 * L * std::sqrt(2.0) / beta * (z - zp).norm();
    if (h > bound + 1e-6) {
      c.require(false, "Hausdorff z-continuity bound violated");
      return;
    }
    const double g1 = beta + rng.uniform(0.0, 0.3);
    const double g2 = beta + rng.uniform(0.0, 0.3);
    const double h2 =
        one_sided_hausdorff(kak.spec.slice(z, g1), kak.spec.slice(z, g2), 20, 2000 + t);
    if (h2 > std::sqrt(2.0) / beta * std::abs(g1 - g2) + 1e-6) {
      c.require(false, "Hausdorff relaxation bound violated");
      return;
    }
  }
  c.require(pairs == 1000, "not enough feasible sample pairs");
}

}  // namespace

int main() {
  struct Entry {
    const char* name;
    std::function<void(Checker&)> fn;
  };
  const std::vector<Entry> criteria = {
      {"separation example (eq-not-vi)", criterion1},
      {"irrational Kakutani via Sperner, grid 128", criterion2},
      {"non-existence at nu=0, solutions at nu=0.1", criterion3},
      {"reduction soundness, 20 seeds, both gadgets", criterion4},
      {"gadget Lipschitz/smoothness constants, 1e4 probes", criterion5},
      {"conversion-formula fidelity, 100 tuples", criterion6},
      {"VI <-> fixed-point equivalence, 50 instances", criterion7},
      {"closed-form verifier vs corner enumeration", criterion8},
      {"gradient correctness vs finite differences", criterion9},
      {"Hausdorff continuity bounds, 1000 pairs", criterion10},
  };

  int failures = 0;
  for (std::size_t i = 0; i < criteria.size(); ++i) {
    Checker c;
    const auto start = std::chrono::steady_clock::now();
    try {
      criteria[i].fn(c);
    } catch (const std::exception& e) {
      c.require(false, std::string("exception: ") + e.what());
    }
    const double secs =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    std::printf("[%s] criterion %zu: %s (%.2f s)%s%s\n", c.ok ? "PASS" : "FAIL", i + 1,
                criteria[i].name, secs, c.ok ? "" : " -- ", c.ok ? "" : c.why.c_str());
    if (!c.ok) ++failures;
  }
  std::printf("%d/%zu criteria passed\n", static_cast<int>(criteria.size()) - failures,
              criteria.size());
  return failures == 0 ? 0 : 1;
}
