#pragma once

#include <functional>
#include <map>
#include <memory>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "minmax_lab/common.hpp"
#include "minmax_lab/polytope.hpp"

namespace minmax_lab {

/// Affine operator z -> Dz + c on the unit hypercube, with approximation
/// target rho. With norm_certified the column and row l1 norms of D are at
/// most 1, the regime of the hardness construction.
struct LinearVIInstance {
  int d = 0;
  Mat D;
  Vec c;
  double rho = 0.0;
  bool norm_certified = false;

  LinearVIInstance() = default;
  LinearVIInstance(Mat D_, Vec c_, double rho_, bool norm_certified_);

  Vec operator_at(const Vec& z) const { return D * z + c; }

  double max_col_l1() const;
  double max_row_l1() const;
};

/// f(x,y) = z^T M z + h^T z + k with z = (x, y) stacked; d is the
/// per-player dimension, so M is 2d x 2d.
struct QuadraticObjective {
  int d = 0;
  Mat M;
  Vec h;
  double k = 0.0;
  /// Serialization tag for compact gadget forms ("gadget-jc", ...); empty
  /// for plain coefficient storage.
  std::string evaluator_tag;
  Mat gadget_D;  // populated when evaluator_tag names a D/c gadget
  Vec gadget_c;

  QuadraticObjective() = default;
  QuadraticObjective(int d_, Mat M_, Vec h_, double k_);

  double value(const Vec& z) const { return z.dot(M * z) + h.dot(z) + k; }
  Vec gradient(const Vec& z) const { return (M + M.transpose()) * z + h; }

  /// Exact smoothness constant ||M + M^T||_2.
  double smoothness() const;
  /// An upper bound on sup ||grad|| over the unit box.
  double lipschitz_bound() const;
};

/// Callable objective with user-declared Lipschitz/smoothness promises; the
/// library probes these but never certifies them.
struct OpaqueObjective {
  std::function<double(const Vec& x, const Vec& y)> f;
  std::function<Vec(const Vec& x, const Vec& y)> grad;  // stacked (grad_x, grad_y)
  double G = 0.0;
  double L = 0.0;
};

struct BilinearPiece {
  Mat B;   // d x d, bilinear x^T B y term (zero matrix allowed)
  Vec b1;  // linear in x
  Vec b2;  // linear in y
  double c = 0.0;

  double value(const Vec& x, const Vec& y) const {
    return x.dot(B * y) + b1.dot(x) + b2.dot(y) + c;
  }
};

/// g(x,y) = max_j ( x^T B_j y + b1_j^T x + b2_j^T y + c_j ).
struct BilinearConstraintSet {
  int d = 0;
  int owner = 1;  // which player the set constrains
  std::vector<BilinearPiece> pieces;

  BilinearConstraintSet() = default;
  BilinearConstraintSet(int d_, int owner_, std::vector<BilinearPiece> pieces_);

  double value(const Vec& x, const Vec& y) const;
  bool all_bilinear_zero() const;

  /// Rows over x' with y fixed: K_1^nu(y) before box intersection.
  BoxPolytope slice_free_x(const Vec& y, double nu) const;
  /// Rows over y' with x fixed: K_2^nu(x).
  BoxPolytope slice_free_y(const Vec& x, double nu) const;

  /// Expands ||x - y||_inf <= delta into 2d linear pieces.
  static BilinearConstraintSet inf_norm_coupling(int d, int owner, double delta);
  /// A single always-satisfied piece (value -1 everywhere): the
  /// "unconstrained player" encoding.
  static BilinearConstraintSet unconstrained(int d, int owner);
};

enum class ConstraintKind { Product, JointlyConvex, Bilinear };

std::string to_string(ConstraintKind k);
ConstraintKind constraint_kind_from_string(const std::string& s);

/// A constrained min-max problem over [0,1]^d x [0,1]^d. For jointly convex
/// instances the joint set K is stored once and both slices derive from it
/// by substitution, so g1 and g2 cannot drift apart.
class MinMaxInstance {
 public:
  static MinMaxInstance jointly_convex(int d, QuadraticObjective obj, BilinearConstraintSet joint,
                                       double eps, double delta);
  static MinMaxInstance bilinear(int d, QuadraticObjective obj, BilinearConstraintSet g1,
                                 BilinearConstraintSet g2, double eps, double delta, double nu);
  static MinMaxInstance product(int d, QuadraticObjective obj, BilinearConstraintSet g1,
                                BilinearConstraintSet g2, double eps, double delta);
  /// Callable objective with declared (G, L); probed, never certified.
  static MinMaxInstance opaque_bilinear(int d, OpaqueObjective obj, BilinearConstraintSet g1,
                                        BilinearConstraintSet g2, double eps, double delta,
                                        double nu);

  int d() const { return d_; }
  ConstraintKind kind() const { return kind_; }
  double eps = 0.0;
  double delta = 0.0;
  double nu = 0.0;

  bool has_quadratic() const { return quad_.has_value(); }
  const QuadraticObjective& quadratic() const { return *quad_; }
  void set_opaque(OpaqueObjective obj) { opaque_ = std::move(obj); }
  bool has_opaque() const { return opaque_.has_value(); }

  double f(const Vec& x, const Vec& y) const;
  Vec grad(const Vec& x, const Vec& y) const;  // stacked (grad_x, grad_y)

  /// Declared Lipschitz / smoothness bounds. Reductions pin these to the
  /// gadget's certified constants; otherwise computed from the quadratic form.
  double G() const { return G_; }
  double L() const { return L_; }
  void set_bounds(double G, double L) {
    G_ = G;
    L_ = L;
  }

  bool local_regime() const;

  const BilinearConstraintSet& g1() const;
  const BilinearConstraintSet& g2() const;

  BoxPolytope k1_slice(const Vec& y, double nu_override) const;
  BoxPolytope k2_slice(const Vec& x, double nu_override) const;
  BoxPolytope k1_slice(const Vec& y) const { return k1_slice(y, nu); }
  BoxPolytope k2_slice(const Vec& x) const { return k2_slice(x, nu); }

  /// The joint polytope K over (x,y); jointly convex instances only.
  BoxPolytope joint_polytope(double nu_override) const;

  bool feasible_pair(const Vec& x, const Vec& y, double tol = 1e-9) const;

 private:
  MinMaxInstance() = default;
  int d_ = 0;
  ConstraintKind kind_ = ConstraintKind::Product;
  std::optional<QuadraticObjective> quad_;
  std::optional<OpaqueObjective> opaque_;
  std::shared_ptr<const BilinearConstraintSet> joint_;  // JointlyConvex only
  BilinearConstraintSet g1_, g2_;
  double G_ = 0.0, L_ = 0.0;
};

/// One row of a parametric polytope Q_nu(z); coefficients affine in z:
/// row(z, z') = z'^T B z + b1^T z' + b2^T z + c <= nu.
struct CorrRow {
  Mat B;
  Vec b1;
  Vec b2;
  double c = 0.0;
};

struct CorrespondenceSpec {
  int d = 0;
  std::vector<CorrRow> rows;
  double nu = 0.0;
  /// Lipschitz constant of z -> A(z), z -> b(z) (declared; the Hausdorff
  /// continuity bounds are checked against it).
  double lipschitz = 0.0;

  double row_value(std::size_t j, const Vec& z, const Vec& zp) const;
  /// max_j row_j(z, z') ; -inf with no rows.
  double max_row_value(const Vec& z, const Vec& zp) const;
  /// The polytope { z' : row_j(z, z') <= relax } (box-intersected).
  BoxPolytope slice(const Vec& z, double relax) const;
};

/// Best-effort probe of the declared non-emptiness promise: the fraction of
/// sampled z in the box whose unrelaxed slice Q_0(z) admits a feasibility
/// point. 1.0 means the promise held on every sample; the library probes
/// but never certifies it.
double nonempty_fraction(const CorrespondenceSpec& spec, int samples, std::uint64_t seed = 0);

/// Operator + correspondence + approximation targets for QuasiVI.
struct QVIInstance {
  CorrespondenceSpec correspondence;
  std::optional<std::pair<Mat, Vec>> affine;  // F(z) = Dz + c
  std::function<Vec(const Vec&)> opaque;
  double G = 0.0;  // operator Lipschitz bound
  double eps = 0.0;
  double L = 0.0;  // Lipschitz bound for A(.), b(.)

  int d() const { return correspondence.d; }
  Vec F(const Vec& z) const;
  static QVIInstance with_affine(CorrespondenceSpec corr, Mat D, Vec c, double eps);
  static QVIInstance with_opaque(CorrespondenceSpec corr, std::function<Vec(const Vec&)> F,
                                 double G, double eps);
};

struct EdgePayoffs {
  int i = 0, j = 0;                  // undirected edge, i < j
  Eigen::Matrix2d a_ij, a_ji;        // payoffs for i vs j and j vs i
};

struct PolymatrixGame {
  int n = 0;
  std::vector<EdgePayoffs> edges;
  double eps_star = 0.088;

  std::vector<int> degrees() const;
  bool degree_bounded(int k) const;
  /// Coefficient of x_i in U_i: sum over neighbours of (x_j alpha + beta),
  /// with the re-derived expansion alpha = a-b-c+d, beta = b-d.
  double own_coefficient(int i, const Vec& x) const;
  double utility(int i, const Vec& x) const;
  /// Best-response regret of player i at profile x (pure deviations, the
  /// utility is linear in x_i).
  double regret(int i, const Vec& x) const;
  double worst_regret(const Vec& x) const;
};

struct Certificate {
  std::string method;
  Vec point;
  double residual = 0.0;
  bool pass = false;
  std::map<std::string, double> params;   // echoed (eps, delta, nu, rho, ...)
  std::map<std::string, double> details;  // slack and auxiliary readings
};

// core operations

double eval_objective(const MinMaxInstance& inst, const Vec& x, const Vec& y);

/// (grad_x f, -grad_y f) stacked: the pseudo-gradient driving
/// descent-ascent dynamics.
Vec pseudo_gradient(const MinMaxInstance& inst, const Vec& x, const Vec& y);

double eval_constraint(const BilinearConstraintSet& gset, const Vec& x, const Vec& y);

BoxPolytope feasible_set(const BilinearConstraintSet& gset, const Vec& fixed, int player,
                         double nu);

}  // namespace minmax_lab
