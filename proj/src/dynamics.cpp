#include "minmax_lab/dynamics.hpp"

#include <cmath>

namespace minmax_lab {

std::string to_string(MapKind k) { return k == MapKind::Gda ? "gda" : "sgda"; }

MapKind map_kind_from_string(const std::string& s) {
  if (s == "gda") return MapKind::Gda;
  if (s == "sgda") return MapKind::Sgda;
  throw std::invalid_argument("unknown map kind: " + s);
}

std::pair<Vec, Vec> gda_map(const MinMaxInstance& inst, const Vec& x, const Vec& y) {
  const int d = inst.d();
  Vec g = inst.grad(x, y);
  const BoxPolytope K1 = inst.k1_slice(y);
  const BoxPolytope K2 = inst.k2_slice(x);
  Vec xp, yp;
  try {
    xp = project_polytope(K1, x - g.head(d));
    yp = project_polytope(K2, y + g.tail(d));
  } catch (const InfeasibleSet&) {
    throw PromiseViolation("gda_map: empty feasible slice (instance promise violated)");
  }
  return {std::move(xp), std::move(yp)};
}

std::pair<Vec, Vec> sgda_map(const MinMaxInstance& inst, const Vec& x, const Vec& y) {
  if (inst.kind() != ConstraintKind::JointlyConvex) {
    throw std::invalid_argument("sgda_map requires jointly convex constraints");
  }
  const int d = inst.d();
  Vec g = inst.grad(x, y);
  Vec target(2 * d);
  target << x - g.head(d), y + g.tail(d);
  Vec p;
  try {
    p = project_polytope(inst.joint_polytope(inst.nu), target);
  } catch (const InfeasibleSet&) {
    throw PromiseViolation("sgda_map: empty joint set");
  }
  return {p.head(d), p.tail(d)};
}

double residual(const MinMaxInstance& inst, const Vec& x, const Vec& y, MapKind kind) {
  const auto [xp, yp] = kind == MapKind::Gda ? gda_map(inst, x, y) : sgda_map(inst, x, y);
  return std::sqrt((x - xp).squaredNorm() + (y - yp).squaredNorm());
}

GdaResult iterate(const MinMaxInstance& inst, const Vec& x0, const Vec& y0, MapKind kind,
                  double lambda, int max_iters, double target_residual) {
  if (lambda <= 0.0 || lambda > 1.0) throw std::invalid_argument("iterate: damping in (0,1]");
  GdaResult best;
  best.map_kind = kind;
  Vec x = x0, y = y0;
  best.x = x;
  best.y = y;
  best.residual = std::numeric_limits<double>::infinity();
  for (int it = 0; it <= max_iters; ++it) {
    const auto [xp, yp] = kind == MapKind::Gda ? gda_map(inst, x, y) : sgda_map(inst, x, y);
    const double r = std::sqrt((x - xp).squaredNorm() + (y - yp).squaredNorm());
    if (r < best.residual) {
      best.residual = r;
      best.x = x;
      best.y = y;
      best.iterations = it;
    }
    if (r <= target_residual) return best;
    x = (1.0 - lambda) * x + lambda * xp;
    y = (1.0 - lambda) * y + lambda * yp;
  }
  best.budget_exhausted = true;
  return best;
}

namespace {

double spectral_norm_estimate(const Mat& D) {
  if (D.rows() == 0) return 0.0;
  Vec v = Vec::Ones(D.cols()).normalized();
  double s = 0.0;
  for (int it = 0; it < 50; ++it) {
    Vec w = D.transpose() * (D * v);
    const double n = w.norm();
    if (n < 1e-300) return 0.0;
    v = w / n;
    s = std::sqrt(n);
  }
  return s;
}

// Exact componentwise VI residual of z for F = Dz + c on the box:
// sum_i min_{b in {0,1}} (Dz+c)_i (b - z_i).
double box_vi_residual(const Mat& D, const Vec& c, const Vec& z) {
  const Vec w = D * z + c;
  double r = 0.0;
  for (int i = 0; i < z.size(); ++i) {
    r += std::min(w[i] * (0.0 - z[i]), w[i] * (1.0 - z[i]));
  }
  return r;
}

}  // namespace

ExtragradientResult extragradient_vi(const Mat& D, const Vec& c, double step, double tol,
                                     int max_iters) {
  const int d = static_cast<int>(c.size());
  if (step <= 0.0) step = 0.25 / std::max(1.0, spectral_norm_estimate(D));
  ExtragradientResult out;
  Vec z = Vec::Constant(d, 0.5);
  for (int it = 0; it < max_iters; ++it) {
    const Vec zh = project_box(z - step * (D * z + c));
    const Vec zn = project_box(z - step * (D * zh + c));
    z = zn;
    if (it % 8 == 0 || it + 1 == max_iters) {
      const double r = box_vi_residual(D, c, z);
      if (r >= -tol) {
        out.z = z;
        out.vi_residual = r;
        out.iterations = it + 1;
        out.converged = true;
        return out;
      }
    }
  }
  out.z = z;
  out.vi_residual = box_vi_residual(D, c, z);
  out.iterations = max_iters;
  out.converged = out.vi_residual >= -tol;
  return out;
}

double alpha_from_eps_delta(double G, double L, double delta, double eps) {
  const double gd = G + delta;
  const double radicand = gd * gd + 4.0 * (eps - 0.5 * L * delta * delta);
  if (radicand < 0) throw std::domain_error("alpha_from_eps_delta: negative radicand");
  return 0.5 * (std::sqrt(radicand) - gd);
}

std::pair<double, double> eps_delta_from_alpha(double L, double alpha) {
  const double s = 5.0 * L + 2.0;
  return {alpha * alpha * L / (s * s), alpha / s};
}

double qvi_alpha(double G, double L, double delta, double eps) {
  const double gd = G + delta;
  const double radicand = gd * gd + 4.0 * (eps - 0.5 * L * delta * delta);
  if (radicand < 0) throw std::domain_error("qvi_alpha: negative radicand");
  const double t = std::sqrt(radicand) - gd;
  return t * t / 8.0;
}

double qvi_reverse_bound(double L, double delta, double eps, int d) {
  if (delta <= 0.0) throw std::domain_error("qvi_reverse_bound: delta must be positive");
  return std::sqrt(static_cast<double>(d)) * (3.0 * L * delta + 2.0 * eps / delta);
}

}  // namespace minmax_lab
