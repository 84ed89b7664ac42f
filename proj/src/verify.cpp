#include "minmax_lab/verify.hpp"

#include <Eigen/Eigenvalues>

#include <cmath>
#include <functional>

#include "minmax_lab/dynamics.hpp"

namespace minmax_lab {

Certificate verify_linearvi(const LinearVIInstance& vi, const Vec& z) {
  require_dim(z, vi.d, "verify_linearvi z");
  Certificate cert;
  cert.method = "linearvi";
  cert.point = z;
  cert.params["rho"] = vi.rho;
  const Vec w = vi.operator_at(z);
  double total = 0.0;
  double single = 0.0;
  for (int i = 0; i < vi.d; ++i) {
    const double m = std::min(w[i] * (0.0 - z[i]), w[i] * (1.0 - z[i]));
    total += m;
    single = std::min(single, m);
  }
  cert.residual = total;
  cert.details["single_component_residual"] = single;
  cert.pass = total >= -vi.rho - 1e-12;
  return cert;
}

Certificate verify_qvi(const QVIInstance& qvi, const Vec& z) {
  require_dim(z, qvi.d(), "verify_qvi z");
  Certificate cert;
  cert.method = "qvi";
  cert.point = z;
  cert.params["eps"] = qvi.eps;
  cert.params["nu"] = qvi.correspondence.nu;
  const double excess =
      qvi.correspondence.rows.empty()
          ? 0.0
          : qvi.correspondence.max_row_value(z, z) - qvi.correspondence.nu;
  cert.details["membership_excess"] = excess;
  bool member = excess <= 1e-9;
  for (int i = 0; i < z.size(); ++i) member = member && z[i] >= -1e-9 && z[i] <= 1.0 + 1e-9;
  const BoxPolytope Q = qvi.correspondence.slice(z, qvi.correspondence.nu);
  const Vec F = qvi.F(z);
  const auto lp = lp_min(Q, F);
  cert.residual = lp.value - F.dot(z);
  cert.pass = member && cert.residual >= -qvi.eps - 1e-12;
  return cert;
}

Certificate verify_kakutani(const CorrespondenceSpec& spec, const Vec& z, double nu) {
  require_dim(z, spec.d, "verify_kakutani z");
  Certificate cert;
  cert.method = "kakutani";
  cert.point = z;
  cert.params["nu"] = nu;
  double excess = -std::numeric_limits<double>::infinity();
  if (spec.rows.empty()) {
    excess = 0.0;  // unconstrained spec: membership always holds
  } else {
    excess = spec.max_row_value(z, z) - nu;
  }
  bool in_box = true;
  for (int i = 0; i < spec.d; ++i) in_box = in_box && z[i] >= -1e-12 && z[i] <= 1.0 + 1e-12;
  cert.residual = excess;
  cert.pass = in_box && excess <= 1e-12;
  return cert;
}

namespace {

struct Quadratic1d {
  double a = 0.0;  // t^2 coefficient
  double b = 0.0;  // t coefficient
};

double min_over_interval(const Quadratic1d& q, double lo, double hi) {
  double best = std::min(q.a * lo * lo + q.b * lo, q.a * hi * hi + q.b * hi);
  if (q.a > 0) {
    const double t = -q.b / (2.0 * q.a);
    if (t > lo && t < hi) best = std::min(best, q.a * t * t + q.b * t);
  }
  return best;
}

double max_over_interval(const Quadratic1d& q, double lo, double hi) {
  double best = std::max(q.a * lo * lo + q.b * lo, q.a * hi * hi + q.b * hi);
  if (q.a < 0) {
    const double t = -q.b / (2.0 * q.a);
    if (t > lo && t < hi) best = std::max(best, q.a * t * t + q.b * t);
  }
  return best;
}

}  // namespace

SingleComponentCheck exact_single_component_check(const MinMaxInstance& inst, const Vec& x,
                                                  const Vec& y, double eps, double delta) {
  (void)eps;
  SingleComponentCheck out;
  if (!inst.has_quadratic()) return out;
  const int d = inst.d();
  Vec lo1, hi1, lo2, hi2;
  if (!inst.k1_slice(y, inst.nu).interval_product(lo1, hi1) ||
      !inst.k2_slice(x, inst.nu).interval_product(lo2, hi2)) {
    return out;
  }
  out.applicable = true;
  const auto& q = inst.quadratic();
  Vec z(2 * d);
  z << x, y;
  const Vec g = q.gradient(z);
  for (int i = 0; i < d; ++i) {
    {
      const double tlo = std::max(lo1[i] - x[i], -delta);
      const double thi = std::min(hi1[i] - x[i], delta);
      if (tlo <= thi) {
        const Quadratic1d qi{q.M(i, i), g[i]};
        out.x_improvement = std::max(out.x_improvement, -min_over_interval(qi, tlo, thi));
      }
    }
    {
      const double tlo = std::max(lo2[i] - y[i], -delta);
      const double thi = std::min(hi2[i] - y[i], delta);
      if (tlo <= thi) {
        const Quadratic1d qi{q.M(d + i, d + i), g[d + i]};
        out.y_improvement = std::max(out.y_improvement, max_over_interval(qi, tlo, thi));
      }
    }
  }
  return out;
}

namespace {

// Axis grid over the delta-ball around `center` intersected with `slice`
// (rejection sampling of grid nodes); calls visit(point).
void scan_delta_ball(const Vec& center, double delta, double step, const BoxPolytope& slice,
                     const std::function<void(const Vec&)>& visit) {
  const int d = static_cast<int>(center.size());
  std::vector<int> lo(d), hi(d);
  double total = 1.0;
  for (int i = 0; i < d; ++i) {
    const double a = std::max(0.0, center[i] - delta);
    const double b = std::min(1.0, center[i] + delta);
    lo[i] = static_cast<int>(std::ceil((a - center[i]) / step - 1e-12));
    hi[i] = static_cast<int>(std::floor((b - center[i]) / step + 1e-12));
    total *= hi[i] - lo[i] + 1;
  }
  if (total > 2.1e7) {
    throw std::invalid_argument("verify grid too large; increase grid_step");
  }
  std::vector<int> idx = lo;
  Vec p(d);
  while (true) {
    double sq = 0.0;
    for (int i = 0; i < d; ++i) {
      p[i] = std::min(1.0, std::max(0.0, center[i] + idx[i] * step));
      const double diff = p[i] - center[i];
      sq += diff * diff;
    }
    if (sq <= delta * delta + 1e-15 && slice.max_row_excess(p) <= 1e-12) visit(p);
    int i = 0;
    for (; i < d; ++i) {
      if (++idx[i] <= hi[i]) break;
      idx[i] = lo[i];
    }
    if (i == d) break;
  }
}

}  // namespace

Certificate verify_local_minmax(const MinMaxInstance& inst, const Vec& x, const Vec& y,
                                double grid_step, double eps, double delta) {
  if (eps <= 0) eps = inst.eps;
  if (delta <= 0) delta = inst.delta;
  Certificate cert;
  cert.method = "local-minmax";
  Vec pt(2 * inst.d());
  pt << x, y;
  cert.point = pt;
  cert.params = {{"eps", eps}, {"delta", delta}, {"nu", inst.nu}, {"grid_step", grid_step}};

  if (!inst.feasible_pair(x, y)) {
    throw PromiseViolation("verify_local_minmax: probe point infeasible");
  }

  const double f0 = inst.f(x, y);
  double improve_x = 0.0, improve_y = 0.0;
  scan_delta_ball(x, delta, grid_step, inst.k1_slice(y),
                  [&](const Vec& xp) { improve_x = std::max(improve_x, f0 - inst.f(xp, y)); });
  scan_delta_ball(y, delta, grid_step, inst.k2_slice(x),
                  [&](const Vec& yp) { improve_y = std::max(improve_y, inst.f(x, yp) - f0); });

  const double slack = inst.G() * grid_step * std::sqrt(static_cast<double>(inst.d()));
  cert.details["grid_slack"] = slack;
  cert.details["x_improvement"] = improve_x;
  cert.details["y_improvement"] = improve_y;
  cert.residual = std::max(improve_x, improve_y);

  const auto exact = exact_single_component_check(inst, x, y, eps, delta);
  if (exact.applicable) {
    cert.details["exact_single_component_x"] = exact.x_improvement;
    cert.details["exact_single_component_y"] = exact.y_improvement;
    cert.details["exact_single_component_pass"] =
        (exact.x_improvement <= eps && exact.y_improvement <= eps) ? 1.0 : 0.0;
  }
  if (inst.has_quadratic() && inst.quadratic().evaluator_tag == "nonexistence") {
    // Non-existence instances record a nominal deviation gain of delta
    // alongside the polynomial's own delta^2/2; the certificate reports
    // both readings and which one holds.
    cert.details["claimed_gain"] = delta;
    cert.details["claimed_reading_fails"] = delta > eps ? 1.0 : 0.0;
    cert.details["computed_gain"] = improve_x;
  }
  cert.pass = improve_x <= eps + slack && improve_y <= eps + slack;
  return cert;
}

Certificate verify_gda_fixed_point(const MinMaxInstance& inst, const Vec& x, const Vec& y,
                                   double alpha) {
  Certificate cert;
  cert.method = "gda";
  Vec pt(2 * inst.d());
  pt << x, y;
  cert.point = pt;
  cert.params = {{"alpha", alpha}, {"nu", inst.nu}};
  cert.residual = residual(inst, x, y, MapKind::Gda);
  cert.pass = cert.residual <= alpha + 1e-15;
  return cert;
}

Certificate verify_globalization(const MinMaxInstance& inst, const Vec& x, const Vec& y,
                                 double eps, double delta, double grid_step) {
  Certificate cert;
  cert.method = "global";
  Vec pt(2 * inst.d());
  pt << x, y;
  cert.point = pt;
  cert.params = {{"eps", eps}, {"delta", delta}, {"nu", inst.nu}};
  const int d = inst.d();

  bool linear_in_x = false;
  if (inst.has_quadratic()) {
    // Exact convexity probe: x block of M + M^T must be PSD.
    const auto& q = inst.quadratic();
    const Mat Sym = q.M + q.M.transpose();
    Eigen::SelfAdjointEigenSolver<Mat> es(Sym.topLeftCorner(d, d));
    if (es.eigenvalues().minCoeff() < -1e-9) {
      throw std::invalid_argument("verify_globalization: objective not convex in x");
    }
    linear_in_x = Sym.topLeftCorner(d, d).cwiseAbs().maxCoeff() <= 1e-14;
  } else {
    // Sampled midpoint convexity for opaque evaluators.
    Rng rng(0x676c6f62);
    for (int t = 0; t < 1000; ++t) {
      Vec x1(d), x2(d);
      for (int i = 0; i < d; ++i) {
        x1[i] = rng.uniform();
        x2[i] = rng.uniform();
      }
      const Vec mid = 0.5 * (x1 + x2);
      if (inst.f(mid, y) > 0.5 * (inst.f(x1, y) + inst.f(x2, y)) + 1e-9) {
        throw std::invalid_argument("verify_globalization: midpoint convexity probe failed");
      }
    }
  }

  const double bound = eps * std::sqrt(static_cast<double>(d)) / delta;
  const double f0 = inst.f(x, y);
  const BoxPolytope K1 = inst.k1_slice(y);
  cert.details["bound"] = bound;
  if (linear_in_x) {
    Vec z(2 * d);
    z << x, y;
    const Vec cx = inst.quadratic().gradient(z).head(d);  // constant in x when linear
    const auto lp = lp_min(K1, cx);
    Vec xmin = lp.point;
    const double fmin = inst.f(xmin, y);
    cert.residual = f0 - fmin;
    cert.details["exact"] = 1.0;
    cert.pass = f0 <= fmin + bound + 1e-12;
    return cert;
  }

  double fmin = f0;
  scan_delta_ball(x, std::sqrt(static_cast<double>(d)) + 1.0, grid_step, K1,
                  [&](const Vec& xp) { fmin = std::min(fmin, inst.f(xp, y)); });
  const double slack = inst.G() * grid_step * std::sqrt(static_cast<double>(d));
  cert.residual = f0 - fmin;
  cert.details["exact"] = 0.0;
  cert.details["grid_slack"] = slack;
  cert.pass = f0 <= fmin + bound + slack;
  return cert;
}

}  // namespace minmax_lab
