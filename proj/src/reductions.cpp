#include "minmax_lab/reductions.hpp"

#include <Eigen/Eigenvalues>

#include <cmath>

#include "minmax_lab/verify.hpp"

namespace minmax_lab {

namespace {
double alpha_of(const Eigen::Matrix2d& A) { return A(0, 0) - A(0, 1) - A(1, 0) + A(1, 1); }
double beta_of(const Eigen::Matrix2d& A) { return A(0, 1) - A(1, 1); }
}  // namespace

std::pair<LinearVIInstance, ReductionTrace> polymatrix_to_linearvi(const PolymatrixGame& game) {
  const int n = game.n;
  Mat D = Mat::Zero(n, n);
  Vec c = Vec::Zero(n);
  for (const auto& e : game.edges) {
    D(e.i, e.j) = -alpha_of(e.a_ij) / 6.0;
    D(e.j, e.i) = -alpha_of(e.a_ji) / 6.0;
    c[e.i] -= beta_of(e.a_ij) / 6.0;
    c[e.j] -= beta_of(e.a_ji) / 6.0;
  }
  const bool certified = game.degree_bounded(3);
  LinearVIInstance vi(std::move(D), std::move(c), game.eps_star / 6.0, certified);
  ReductionTrace trace;
  trace.source = "polymatrix";
  trace.target = "linearvi";
  trace.constants = {{"eps_star", game.eps_star}, {"rho_star", game.eps_star / 6.0}};
  trace.pullback = "strategy-identity";
  return {std::move(vi), std::move(trace)};
}

Certificate linearvi_solution_to_polymatrix(const Vec& z, const PolymatrixGame& game,
                                            const ReductionTrace& trace) {
  Certificate cert;
  cert.method = "polymatrix-pullback";
  cert.point = z;
  cert.params = trace.constants;
  double worst = 0.0;
  for (int i = 0; i < game.n; ++i) {
    const double r = game.regret(i, z);
    cert.details["regret_" + std::to_string(i)] = r;
    worst = std::max(worst, r);
  }
  cert.residual = worst;
  cert.pass = worst <= game.eps_star + 1e-12;
  return cert;
}

std::pair<MinMaxInstance, ReductionTrace> linearvi_to_jc_minmax(const LinearVIInstance& vi,
                                                                double gamma) {
  if (!vi.norm_certified) {
    throw std::invalid_argument("linearvi_to_jc_minmax: instance must be norm certified");
  }
  if (gamma <= 0.0 || gamma > 1.0) throw std::invalid_argument("gamma must lie in (0,1]");
  const int d = vi.d;
  const double rho = vi.rho;
  const double Delta = rho / 4.0;
  const double delta = gamma * rho / 15.0;
  const double eps = gamma * rho * rho / 60.0;

  // f(x,y) = (x-y)^T (Dx + c)
  Mat M = Mat::Zero(2 * d, 2 * d);
  M.topLeftCorner(d, d) = vi.D;
  M.bottomLeftCorner(d, d) = -vi.D;
  Vec h(2 * d);
  h << vi.c, -vi.c;
  QuadraticObjective obj(d, std::move(M), std::move(h), 0.0);
  obj.evaluator_tag = "gadget-jc";
  obj.gadget_D = vi.D;
  obj.gadget_c = vi.c;

  auto inst = MinMaxInstance::jointly_convex(
      d, std::move(obj), BilinearConstraintSet::inf_norm_coupling(d, 1, Delta), eps, delta);
  inst.set_bounds(5.0 * std::sqrt(static_cast<double>(d)), 7.0);
  if (!inst.local_regime()) {
    throw std::logic_error("linearvi_to_jc_minmax: local regime check failed");
  }

  ReductionTrace trace;
  trace.source = "linearvi";
  trace.target = "minmax-jc";
  trace.constants = {{"rho_star", rho}, {"Delta", Delta}, {"gamma", gamma},
                     {"delta", delta},  {"eps", eps},     {"nu", 0.0}};
  trace.pullback = "x-component";
  return {std::move(inst), std::move(trace)};
}

std::pair<MinMaxInstance, ReductionTrace> linearvi_to_bilinear_minmax(const LinearVIInstance& vi,
                                                                      double gamma) {
  if (!vi.norm_certified) {
    throw std::invalid_argument("linearvi_to_bilinear_minmax: instance must be norm certified");
  }
  if (gamma <= 0.0 || gamma > 1.0) throw std::invalid_argument("gamma must lie in (0,1]");
  const int d = vi.d;
  const double rho = vi.rho;
  const double delta = gamma * rho / 15.0;
  const double eps = gamma * rho * rho / 60.0;
  const double nu = rho * delta / (4.0 * d);

  // f(x,y) = x^T (Dy + c)
  Mat M = Mat::Zero(2 * d, 2 * d);
  M.topRightCorner(d, d) = vi.D;
  Vec h(2 * d);
  h << vi.c, Vec::Zero(d);
  QuadraticObjective obj(d, std::move(M), std::move(h), 0.0);
  obj.evaluator_tag = "gadget-bilinear";
  obj.gadget_D = vi.D;
  obj.gadget_c = vi.c;

  auto inst = MinMaxInstance::bilinear(d, std::move(obj),
                                       BilinearConstraintSet::unconstrained(d, 1),
                                       BilinearConstraintSet::inf_norm_coupling(d, 2, 0.0), eps,
                                       delta, nu);
  inst.set_bounds(3.0 * std::sqrt(static_cast<double>(d)), 1.0);
  if (!inst.local_regime()) {
    throw std::logic_error("linearvi_to_bilinear_minmax: local regime check failed");
  }

  ReductionTrace trace;
  trace.source = "linearvi";
  trace.target = "minmax-bilinear";
  trace.constants = {{"rho_star", rho}, {"gamma", gamma}, {"delta", delta},
                     {"eps", eps},      {"nu", nu}};
  trace.pullback = "x-component";
  return {std::move(inst), std::move(trace)};
}

Certificate minmax_solution_to_linearvi(const Vec& x, const Vec& y, const LinearVIInstance& vi,
                                        const ReductionTrace& trace) {
  (void)y;
  Certificate cert;
  cert.method = "linearvi-pullback";
  cert.point = x;
  cert.params = trace.constants;
  const Vec w = vi.operator_at(x);
  double single = 0.0;
  for (int i = 0; i < vi.d; ++i) {
    single = std::min(single, std::min(w[i] * (0.0 - x[i]), w[i] * (1.0 - x[i])));
  }
  cert.residual = single;
  cert.details["rho"] = vi.rho;
  cert.pass = single >= -vi.rho - 1e-12;
  return cert;
}

namespace {

// Pseudo-gradient of a quadratic objective as an affine operator S z + t.
std::pair<Mat, Vec> pseudo_gradient_operator(const MinMaxInstance& inst) {
  if (!inst.has_quadratic()) {
    throw std::invalid_argument("affine pseudo-gradient requires a quadratic objective");
  }
  const int d = inst.d();
  const auto& q = inst.quadratic();
  Mat Sym = q.M + q.M.transpose();
  Mat S(2 * d, 2 * d);
  S.topRows(d) = Sym.topRows(d);
  S.bottomRows(d) = -Sym.bottomRows(d);
  Vec t(2 * d);
  t << q.h.head(d), -q.h.tail(d);
  return {std::move(S), std::move(t)};
}

double correspondence_lipschitz(const CorrespondenceSpec& spec) {
  // Per row: sup over z' in the box of || B^T z' + b2 ||, a valid Lipschitz
  // bound for z -> row(z, .).
  double L = 0.0;
  for (const auto& r : spec.rows) {
    double s = 0.0;
    for (int i = 0; i < spec.d; ++i) {
      double pos = r.b2[i], neg = r.b2[i];
      for (int k = 0; k < spec.d; ++k) {
        pos += std::max(r.B(k, i), 0.0);
        neg += std::min(r.B(k, i), 0.0);
      }
      s += std::max(pos * pos, neg * neg);
    }
    L = std::max(L, std::sqrt(s));
  }
  return L;
}

}  // namespace

QVIInstance minmax_to_qvi(const MinMaxInstance& inst, double eps_override) {
  const int d = inst.d();
  CorrespondenceSpec spec;
  spec.d = 2 * d;
  spec.nu = inst.nu;
  auto lift = [&](const BilinearPiece& p, bool owner1) {
    CorrRow r;
    r.B = Mat::Zero(2 * d, 2 * d);
    r.b1 = Vec::Zero(2 * d);
    r.b2 = Vec::Zero(2 * d);
    r.c = p.c;
    if (owner1) {
      // g1(x', y) <= nu : rows over the x' block, affine in the y block
      r.B.topRightCorner(d, d) = p.B;
      r.b1.head(d) = p.b1;
      r.b2.tail(d) = p.b2;
    } else {
      // g2(x, y') <= nu
      r.B.bottomLeftCorner(d, d) = p.B.transpose();
      r.b1.tail(d) = p.b2;
      r.b2.head(d) = p.b1;
    }
    spec.rows.push_back(std::move(r));
  };
  for (const auto& p : inst.g1().pieces) lift(p, true);
  for (const auto& p : inst.g2().pieces) lift(p, false);
  spec.lipschitz = correspondence_lipschitz(spec);

  auto [S, t] = pseudo_gradient_operator(inst);
  auto qvi = QVIInstance::with_affine(std::move(spec), std::move(S), std::move(t),
                                      eps_override >= 0 ? eps_override : inst.eps);
  qvi.L = qvi.correspondence.lipschitz;
  return qvi;
}

QVIInstance minmax_to_joint_vi(const MinMaxInstance& inst, double eps_override) {
  if (inst.kind() != ConstraintKind::JointlyConvex) {
    throw std::invalid_argument("minmax_to_joint_vi: instance must be jointly convex");
  }
  const int d = inst.d();
  CorrespondenceSpec spec;
  spec.d = 2 * d;
  spec.nu = inst.nu;
  for (const auto& p : inst.g1().pieces) {
    CorrRow r;
    r.B = Mat::Zero(2 * d, 2 * d);
    r.b1 = Vec::Zero(2 * d);
    r.b2 = Vec::Zero(2 * d);
    r.b1 << p.b1, p.b2;
    r.c = p.c;
    spec.rows.push_back(std::move(r));
  }
  spec.lipschitz = 0.0;  // constant correspondence

  auto [S, t] = pseudo_gradient_operator(inst);
  return QVIInstance::with_affine(std::move(spec), std::move(S), std::move(t),
                                  eps_override >= 0 ? eps_override : inst.eps);
}

QVIInstance gnep_to_qvi(int n, int l, const std::vector<GnepPlayerSpec>& players, double nu,
                        double eps) {
  if (static_cast<int>(players.size()) != n) {
    throw DimensionMismatch("gnep_to_qvi: players size mismatch");
  }
  const int d = n * l;
  Mat S = Mat::Zero(d, d);
  Vec t = Vec::Zero(d);
  CorrespondenceSpec spec;
  spec.d = d;
  spec.nu = nu;
  for (int i = 0; i < n; ++i) {
    const auto& u = players[i].utility;
    if (u.Q.rows() != d || u.Q.cols() != d || u.r.size() != d) {
      throw DimensionMismatch("gnep_to_qvi: utility dimensions");
    }
    const Mat Sym = u.Q + u.Q.transpose();
    Eigen::SelfAdjointEigenSolver<Mat> es(Sym.block(i * l, i * l, l, l));
    if (es.eigenvalues().maxCoeff() > 1e-7) {
      throw std::invalid_argument("gnep_to_qvi: own-variable concavity probe failed");
    }
    S.middleRows(i * l, l) = -Sym.middleRows(i * l, l);
    t.segment(i * l, l) = -u.r.segment(i * l, l);
    for (const auto& row : players[i].gamma_rows) {
      if (row.B.rows() != l || row.B.cols() != d || row.b1.size() != l || row.b2.size() != d) {
        throw DimensionMismatch("gnep_to_qvi: constraint row dimensions");
      }
      CorrRow r;
      r.B = Mat::Zero(d, d);
      r.B.middleRows(i * l, l) = row.B;
      r.b1 = Vec::Zero(d);
      r.b1.segment(i * l, l) = row.b1;
      r.b2 = row.b2;
      r.c = row.c;
      spec.rows.push_back(std::move(r));
    }
  }
  spec.lipschitz = correspondence_lipschitz(spec);
  auto qvi = QVIInstance::with_affine(std::move(spec), std::move(S), std::move(t), eps);
  qvi.L = qvi.correspondence.lipschitz;
  return qvi;
}

std::pair<MinMaxInstance, Vec> independent_set_localmin_instance(const Graph& graph, int k) {
  const int d = graph.n;
  if (k > d || k < 0) throw std::invalid_argument("independent_set: k must lie in [0, |V|]");
  const double d3 = std::pow(static_cast<double>(d), 3);
  Mat M = Mat::Zero(2 * d, 2 * d);
  for (const auto& [i, j] : graph.edges) {
    M(i, j) += 0.5 / d3;
    M(j, i) += 0.5 / d3;
  }
  Vec h = Vec::Zero(2 * d);
  h.head(d).setConstant(-1.0);
  QuadraticObjective obj(d, std::move(M), std::move(h), 0.0);
  obj.evaluator_tag = "indep-set";

  BilinearPiece l1;
  l1.B = Mat::Zero(d, d);
  l1.b1 = Vec::Constant(d, 1.0 / d);
  l1.b2 = Vec::Zero(d);
  l1.c = -static_cast<double>(k) / d;
  BilinearConstraintSet g1(d, 1, {l1});

  const double eps = std::max(static_cast<double>(k) - std::pow(static_cast<double>(d), -8), 0.0);
  const double delta = std::sqrt(static_cast<double>(k));
  auto inst = MinMaxInstance::product(d, std::move(obj), std::move(g1),
                                      BilinearConstraintSet::unconstrained(d, 2), eps, delta);
  return {std::move(inst), Vec::Zero(d)};
}

std::optional<std::pair<Vec, Vec>> find_gadget_solution_on_grid(const MinMaxInstance& inst,
                                                                int grid_steps) {
  const int d = inst.d();
  if (d > 3) throw std::invalid_argument("find_gadget_solution_on_grid: d <= 3 desk scale");
  const double step = 1.0 / grid_steps;
  std::vector<int> idx(d, 0);
  Vec z(d);
  while (true) {
    for (int i = 0; i < d; ++i) z[i] = idx[i] * step;
    if (inst.feasible_pair(z, z)) {
      const auto chk = exact_single_component_check(inst, z, z, inst.eps, inst.delta);
      if (chk.applicable && chk.x_improvement <= inst.eps && chk.y_improvement <= inst.eps) {
        return std::make_pair(z, z);
      }
    }
    int i = 0;
    for (; i < d; ++i) {
      if (++idx[i] <= grid_steps) break;
      idx[i] = 0;
    }
    if (i == d) break;
  }
  return std::nullopt;
}

}  // namespace minmax_lab
