#pragma once

#include <map>
#include <optional>
#include <string>
#include <vector>

#include "minmax_lab/core.hpp"

namespace minmax_lab {

struct ReductionTrace {
  std::string source;
  std::string target;
  std::map<std::string, double> constants;  // rho_star, Delta, gamma, delta, eps, nu, ...
  std::string pullback;                     // recipe tag
};

/// Embeds a two-action polymatrix game as an affine VI: d = n,
/// D_{ij} = -alpha_{ij}/6 on edges,
/// c_i = -sum_j beta_{ij}/6, rho = eps_star/6, with the re-derived expansion
/// alpha = a-b-c+d, beta = b-d. Degree <= 3 certifies the l1 norms.
std::pair<LinearVIInstance, ReductionTrace> polymatrix_to_linearvi(const PolymatrixGame& game);

/// Interprets z_i as the probability of playing the first action and checks
/// the eps_star-equilibrium exactly (pure deviations suffice). A failing
/// check yields a failed certificate, never an exception.
Certificate linearvi_solution_to_polymatrix(const Vec& z, const PolymatrixGame& game,
                                            const ReductionTrace& trace);

/// Approximate-imitation gadget (jointly convex): f(x,y) = (x-y)^T (Dx+c)
/// over
/// K = { ||x-y||_inf <= Delta }, Delta = rho/4, delta = gamma rho/15,
/// eps = gamma rho^2/60; records G = 5 sqrt(d), L = 7.
std::pair<MinMaxInstance, ReductionTrace> linearvi_to_jc_minmax(const LinearVIInstance& vi,
                                                                double gamma);

/// Perfect-imitation gadget (bilinear): f(x,y) = x^T (Dy+c), player 1
/// unconstrained,
/// g2 = ||x-y||_inf <= 0 with nu = rho delta / (4d); records G = 3 sqrt(d),
/// L = 1.
std::pair<MinMaxInstance, ReductionTrace> linearvi_to_bilinear_minmax(const LinearVIInstance& vi,
                                                                      double gamma);

/// Pull-back: x is the candidate VI point; the residual is the exact
/// single-component value min_i min_{b in {0,1}} (Dx+c)_i (b - x_i).
Certificate minmax_solution_to_linearvi(const Vec& x, const Vec& y, const LinearVIInstance& vi,
                                        const ReductionTrace& trace);

/// QVI form of a min-max instance: operator = pseudo-gradient, correspondence
/// Q_nu(x,y) = K1^nu(y) x K2^nu(x) as one 2d-dimensional spec. eps_override
/// < 0 keeps the instance's eps.
QVIInstance minmax_to_qvi(const MinMaxInstance& inst, double eps_override = -1.0);

/// The VI associated with a jointly convex instance: constant
/// correspondence equal to the joint polytope K over (x,y).
QVIInstance minmax_to_joint_vi(const MinMaxInstance& inst, double eps_override = -1.0);

/// GNEP building blocks. u_i(z) = z^T Q z + r^T z + s over the
/// stacked profile z in R^{nl}; constraint rows live over the player's own
/// variable with coefficients affine in z (own-block columns zero).
struct GnepUtility {
  Mat Q;
  Vec r;
  double s = 0.0;
};

struct GnepConstraintRow {
  Mat B;   // l x (n l)
  Vec b1;  // l
  Vec b2;  // n l
  double c = 0.0;
};

struct GnepPlayerSpec {
  GnepUtility utility;
  std::vector<GnepConstraintRow> gamma_rows;
};

/// F(z) = (-grad_1 u_1, ..., -grad_n u_n), Q_nu(z) = prod_i Gamma_i^nu(z_-i)
/// assembled block-diagonally; own-variable concavity is probed via the own
/// blocks of Q + Q^T.
QVIInstance gnep_to_qvi(int n, int l, const std::vector<GnepPlayerSpec>& players, double nu,
                        double eps);

struct Graph {
  int n = 0;
  std::vector<std::pair<int, int>> edges;
};

/// Independent-set local-min instance:
/// f(x) = 1/d^3 sum_{(i,j) in E} x_i x_j - sum_i x_i
/// over ||x||_1 <= k, probe x* = 0, delta = sqrt(k), eps = k - d^{-8}
/// (clamped at 0 for k = 0). The maximizer is trivial.
std::pair<MinMaxInstance, Vec> independent_set_localmin_instance(const Graph& graph, int k);

/// Desk-scale solution oracle for the imitation gadget instances: scans the
/// diagonal (x = y = z) over a uniform grid and returns the first pair
/// passing the exact single-component (eps, delta) checks of both players.
std::optional<std::pair<Vec, Vec>> find_gadget_solution_on_grid(const MinMaxInstance& inst,
                                                                int grid_steps);

}  // namespace minmax_lab
