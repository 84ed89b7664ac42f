#include "minmax_lab/core.hpp"

#include <Eigen/Eigenvalues>

#include <cmath>

namespace minmax_lab {

LinearVIInstance::LinearVIInstance(Mat D_, Vec c_, double rho_, bool norm_certified_)
    : d(static_cast<int>(c_.size())), D(std::move(D_)), c(std::move(c_)), rho(rho_),
      norm_certified(norm_certified_) {
  if (D.rows() != d || D.cols() != d) throw DimensionMismatch("LinearVIInstance: D must be d x d");
  if (D.cwiseAbs().maxCoeff() > 1.0 + 1e-12 ||
      (d > 0 && c.cwiseAbs().maxCoeff() > 1.0 + 1e-12)) {
    throw std::invalid_argument("LinearVIInstance: entries of D and c must lie in [-1,1]");
  }
  if (norm_certified && (max_col_l1() > 1.0 + 1e-12 || max_row_l1() > 1.0 + 1e-12)) {
    throw std::invalid_argument("LinearVIInstance: norm certification violated");
  }
}

double LinearVIInstance::max_col_l1() const {
  double m = 0.0;
  for (int j = 0; j < d; ++j) m = std::max(m, D.col(j).cwiseAbs().sum());
  return m;
}

double LinearVIInstance::max_row_l1() const {
  double m = 0.0;
  for (int i = 0; i < d; ++i) m = std::max(m, D.row(i).cwiseAbs().sum());
  return m;
}

QuadraticObjective::QuadraticObjective(int d_, Mat M_, Vec h_, double k_)
    : d(d_), M(std::move(M_)), h(std::move(h_)), k(k_) {
  if (M.rows() != 2 * d || M.cols() != 2 * d || h.size() != 2 * d) {
    throw DimensionMismatch("QuadraticObjective: M must be 2d x 2d, h of size 2d");
  }
}

double QuadraticObjective::smoothness() const {
  Eigen::SelfAdjointEigenSolver<Mat> es(M + M.transpose());
  return es.eigenvalues().cwiseAbs().maxCoeff();
}

double QuadraticObjective::lipschitz_bound() const {
  // sup ||(M+M^T)z + h|| <= ||M+M^T||_2 sqrt(2d) + ||h|| over the unit box
  return smoothness() * std::sqrt(2.0 * d) + h.norm();
}

BilinearConstraintSet::BilinearConstraintSet(int d_, int owner_, std::vector<BilinearPiece> pieces_)
    : d(d_), owner(owner_), pieces(std::move(pieces_)) {
  for (const auto& p : pieces) {
    if (p.B.rows() != d || p.B.cols() != d || p.b1.size() != d || p.b2.size() != d) {
      throw DimensionMismatch("BilinearConstraintSet: piece dimensions");
    }
  }
}

double BilinearConstraintSet::value(const Vec& x, const Vec& y) const {
  if (pieces.empty()) throw std::invalid_argument("BilinearConstraintSet: empty piece list");
  require_dim(x, d, "constraint x");
  require_dim(y, d, "constraint y");
  double m = -std::numeric_limits<double>::infinity();
  for (const auto& p : pieces) m = std::max(m, p.value(x, y));
  return m;
}

bool BilinearConstraintSet::all_bilinear_zero() const {
  for (const auto& p : pieces) {
    if (p.B.cwiseAbs().maxCoeff() > 0.0) return false;
  }
  return true;
}

BoxPolytope BilinearConstraintSet::slice_free_x(const Vec& y, double nu) const {
  require_dim(y, d, "slice_free_x fixed point");
  BoxPolytope P(d);
  for (const auto& p : pieces) {
    P.add_row({p.B * y + p.b1, nu - p.b2.dot(y) - p.c});
  }
  return P;
}

BoxPolytope BilinearConstraintSet::slice_free_y(const Vec& x, double nu) const {
  require_dim(x, d, "slice_free_y fixed point");
  BoxPolytope P(d);
  for (const auto& p : pieces) {
    P.add_row({p.B.transpose() * x + p.b2, nu - p.b1.dot(x) - p.c});
  }
  return P;
}

BilinearConstraintSet BilinearConstraintSet::inf_norm_coupling(int d, int owner, double delta) {
  std::vector<BilinearPiece> pieces;
  pieces.reserve(2 * d);
  for (int i = 0; i < d; ++i) {
    for (double s : {1.0, -1.0}) {
      BilinearPiece p;
      p.B = Mat::Zero(d, d);
      p.b1 = Vec::Zero(d);
      p.b2 = Vec::Zero(d);
      p.b1[i] = s;
      p.b2[i] = -s;
      p.c = -delta;
      pieces.push_back(std::move(p));
    }
  }
  return BilinearConstraintSet(d, owner, std::move(pieces));
}

BilinearConstraintSet BilinearConstraintSet::unconstrained(int d, int owner) {
  BilinearPiece p;
  p.B = Mat::Zero(d, d);
  p.b1 = Vec::Zero(d);
  p.b2 = Vec::Zero(d);
  p.c = -1.0;
  return BilinearConstraintSet(d, owner, {p});
}

std::string to_string(ConstraintKind k) {
  switch (k) {
    case ConstraintKind::Product: return "product";
    case ConstraintKind::JointlyConvex: return "jointly-convex";
    case ConstraintKind::Bilinear: return "bilinear";
  }
  return "?";
}

ConstraintKind constraint_kind_from_string(const std::string& s) {
  if (s == "product") return ConstraintKind::Product;
  if (s == "jointly-convex") return ConstraintKind::JointlyConvex;
  if (s == "bilinear") return ConstraintKind::Bilinear;
  throw std::invalid_argument("unknown constraint kind: " + s);
}

MinMaxInstance MinMaxInstance::jointly_convex(int d, QuadraticObjective obj,
                                              BilinearConstraintSet joint, double eps,
                                              double delta) {
  if (!joint.all_bilinear_zero()) {
    throw std::invalid_argument("jointly convex constraints admit no bilinear piece");
  }
  MinMaxInstance inst;
  inst.d_ = d;
  inst.kind_ = ConstraintKind::JointlyConvex;
  inst.G_ = obj.lipschitz_bound();
  inst.L_ = obj.smoothness();
  inst.quad_ = std::move(obj);
  inst.joint_ = std::make_shared<BilinearConstraintSet>(std::move(joint));
  inst.eps = eps;
  inst.delta = delta;
  inst.nu = 0.0;
  return inst;
}

MinMaxInstance MinMaxInstance::bilinear(int d, QuadraticObjective obj, BilinearConstraintSet g1,
                                        BilinearConstraintSet g2, double eps, double delta,
                                        double nu) {
  MinMaxInstance inst;
  inst.d_ = d;
  inst.kind_ = ConstraintKind::Bilinear;
  inst.G_ = obj.lipschitz_bound();
  inst.L_ = obj.smoothness();
  inst.quad_ = std::move(obj);
  inst.g1_ = std::move(g1);
  inst.g2_ = std::move(g2);
  inst.eps = eps;
  inst.delta = delta;
  inst.nu = nu;
  return inst;
}

MinMaxInstance MinMaxInstance::product(int d, QuadraticObjective obj, BilinearConstraintSet g1,
                                       BilinearConstraintSet g2, double eps, double delta) {
  MinMaxInstance inst = bilinear(d, std::move(obj), std::move(g1), std::move(g2), eps, delta, 0.0);
  inst.kind_ = ConstraintKind::Product;
  return inst;
}

MinMaxInstance MinMaxInstance::opaque_bilinear(int d, OpaqueObjective obj,
                                               BilinearConstraintSet g1, BilinearConstraintSet g2,
                                               double eps, double delta, double nu) {
  MinMaxInstance inst;
  inst.d_ = d;
  inst.kind_ = ConstraintKind::Bilinear;
  inst.G_ = obj.G;
  inst.L_ = obj.L;
  inst.opaque_ = std::move(obj);
  inst.g1_ = std::move(g1);
  inst.g2_ = std::move(g2);
  inst.eps = eps;
  inst.delta = delta;
  inst.nu = nu;
  return inst;
}

double MinMaxInstance::f(const Vec& x, const Vec& y) const {
  require_dim(x, d_, "f x");
  require_dim(y, d_, "f y");
  if (quad_) {
    Vec z(2 * d_);
    z << x, y;
    return quad_->value(z);
  }
  if (opaque_) return opaque_->f(x, y);
  throw std::logic_error("MinMaxInstance without objective");
}

Vec MinMaxInstance::grad(const Vec& x, const Vec& y) const {
  require_dim(x, d_, "grad x");
  require_dim(y, d_, "grad y");
  if (quad_) {
    Vec z(2 * d_);
    z << x, y;
    return quad_->gradient(z);
  }
  if (opaque_) return opaque_->grad(x, y);
  throw std::logic_error("MinMaxInstance without objective");
}

bool MinMaxInstance::local_regime() const {
  return L_ > 0 ? delta < std::sqrt(2.0 * eps / L_) : true;
}

const BilinearConstraintSet& MinMaxInstance::g1() const {
  return kind_ == ConstraintKind::JointlyConvex ? *joint_ : g1_;
}

const BilinearConstraintSet& MinMaxInstance::g2() const {
  return kind_ == ConstraintKind::JointlyConvex ? *joint_ : g2_;
}

BoxPolytope MinMaxInstance::k1_slice(const Vec& y, double nu_override) const {
  return g1().slice_free_x(y, nu_override);
}

BoxPolytope MinMaxInstance::k2_slice(const Vec& x, double nu_override) const {
  return g2().slice_free_y(x, nu_override);
}

BoxPolytope MinMaxInstance::joint_polytope(double nu_override) const {
  if (kind_ != ConstraintKind::JointlyConvex) {
    throw std::logic_error("joint_polytope: instance is not jointly convex");
  }
  BoxPolytope P(2 * d_);
  for (const auto& p : joint_->pieces) {
    Vec a(2 * d_);
    a << p.b1, p.b2;
    P.add_row({a, nu_override - p.c});
  }
  return P;
}

bool MinMaxInstance::feasible_pair(const Vec& x, const Vec& y, double tol) const {
  return g1().value(x, y) <= nu + tol && g2().value(x, y) <= nu + tol;
}

double CorrespondenceSpec::row_value(std::size_t j, const Vec& z, const Vec& zp) const {
  const auto& r = rows[j];
  return zp.dot(r.B * z) + r.b1.dot(zp) + r.b2.dot(z) + r.c;
}

double CorrespondenceSpec::max_row_value(const Vec& z, const Vec& zp) const {
  double m = -std::numeric_limits<double>::infinity();
  for (std::size_t j = 0; j < rows.size(); ++j) m = std::max(m, row_value(j, z, zp));
  return m;
}

BoxPolytope CorrespondenceSpec::slice(const Vec& z, double relax) const {
  require_dim(z, d, "CorrespondenceSpec::slice");
  BoxPolytope P(d);
  for (const auto& r : rows) {
    P.add_row({r.B * z + r.b1, relax - r.b2.dot(z) - r.c});
  }
  return P;
}

double nonempty_fraction(const CorrespondenceSpec& spec, int samples, std::uint64_t seed) {
  Rng rng(seed ^ 0x517cc1b727220a95ULL);
  int ok = 0;
  Vec z(spec.d);
  for (int s = 0; s < samples; ++s) {
    for (int i = 0; i < spec.d; ++i) z[i] = rng.uniform();
    if (feasibility(spec.slice(z, 0.0))) ++ok;
  }
  return samples > 0 ? static_cast<double>(ok) / samples : 1.0;
}

Vec QVIInstance::F(const Vec& z) const {
  if (affine) return affine->first * z + affine->second;
  if (opaque) return opaque(z);
  throw std::logic_error("QVIInstance without operator");
}

QVIInstance QVIInstance::with_affine(CorrespondenceSpec corr, Mat D, Vec c, double eps) {
  QVIInstance q;
  q.L = corr.lipschitz;
  q.correspondence = std::move(corr);
  double g = 0.0;  // sup ||Dz + c||^2 over the box, componentwise extremes
  for (int i = 0; i < D.rows(); ++i) {
    double pos = c[i], neg = c[i];
    for (int j = 0; j < D.cols(); ++j) {
      pos += std::max(D(i, j), 0.0);
      neg += std::min(D(i, j), 0.0);
    }
    g += std::max(pos * pos, neg * neg);
  }
  q.G = std::sqrt(g);
  q.affine = {std::move(D), std::move(c)};
  q.eps = eps;
  return q;
}

QVIInstance QVIInstance::with_opaque(CorrespondenceSpec corr, std::function<Vec(const Vec&)> F,
                                     double G, double eps) {
  QVIInstance q;
  q.L = corr.lipschitz;
  q.correspondence = std::move(corr);
  q.opaque = std::move(F);
  q.G = G;
  q.eps = eps;
  return q;
}

std::vector<int> PolymatrixGame::degrees() const {
  std::vector<int> deg(n, 0);
  for (const auto& e : edges) {
    deg[e.i]++;
    deg[e.j]++;
  }
  return deg;
}

bool PolymatrixGame::degree_bounded(int k) const {
  for (int d : degrees()) {
    if (d > k) return false;
  }
  return true;
}

namespace {
// alpha = a - b - c + d, beta = b - d for A = [[a, b], [c, d]].
double alpha_of(const Eigen::Matrix2d& A) { return A(0, 0) - A(0, 1) - A(1, 0) + A(1, 1); }
double beta_of(const Eigen::Matrix2d& A) { return A(0, 1) - A(1, 1); }
}  // namespace

double PolymatrixGame::own_coefficient(int i, const Vec& x) const {
  double w = 0.0;
  for (const auto& e : edges) {
    if (e.i == i) {
      w += x[e.j] * alpha_of(e.a_ij) + beta_of(e.a_ij);
    } else if (e.j == i) {
      w += x[e.i] * alpha_of(e.a_ji) + beta_of(e.a_ji);
    }
  }
  return w;
}

double PolymatrixGame::utility(int i, const Vec& x) const {
  // Exact bilinear expectation, kept independent of the alpha/beta expansion
  // so it can serve as the ground-truth oracle for it.
  double u = 0.0;
  auto add = [&](const Eigen::Matrix2d& A, double xi, double xj) {
    u += xi * xj * A(0, 0) + xi * (1 - xj) * A(0, 1) + (1 - xi) * xj * A(1, 0) +
         (1 - xi) * (1 - xj) * A(1, 1);
  };
  for (const auto& e : edges) {
    if (e.i == i) add(e.a_ij, x[e.i], x[e.j]);
    if (e.j == i) add(e.a_ji, x[e.j], x[e.i]);
  }
  return u;
}

double PolymatrixGame::regret(int i, const Vec& x) const {
  const double base = utility(i, x);
  double best = base;
  for (double b : {0.0, 1.0}) {
    Vec xd = x;
    xd[i] = b;
    best = std::max(best, utility(i, xd));
  }
  return best - base;
}

double PolymatrixGame::worst_regret(const Vec& x) const {
  double w = 0.0;
  for (int i = 0; i < n; ++i) w = std::max(w, regret(i, x));
  return w;
}

double eval_objective(const MinMaxInstance& inst, const Vec& x, const Vec& y) {
  return inst.f(x, y);
}

Vec pseudo_gradient(const MinMaxInstance& inst, const Vec& x, const Vec& y) {
  Vec g = inst.grad(x, y);
  const int d = inst.d();
  Vec pg(2 * d);
  pg.head(d) = g.head(d);
  pg.tail(d) = -g.tail(d);
  return pg;
}

double eval_constraint(const BilinearConstraintSet& gset, const Vec& x, const Vec& y) {
  return gset.value(x, y);
}

BoxPolytope feasible_set(const BilinearConstraintSet& gset, const Vec& fixed, int player,
                         double nu) {
  if (player == 1) return gset.slice_free_x(fixed, nu);
  if (player == 2) return gset.slice_free_y(fixed, nu);
  throw std::invalid_argument("feasible_set: player must be 1 or 2");
}

}  // namespace minmax_lab
