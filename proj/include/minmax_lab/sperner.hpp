#pragma once

#include <vector>

#include "minmax_lab/core.hpp"

namespace minmax_lab {

/// Uniform cubelet grid on [0,1]^d; mu * grid = 1 exactly in the integer
/// index space.
struct SpernerGrid {
  int d = 1;
  long cells = 1;  // cubelets per side
  double mu() const { return 1.0 / static_cast<double>(cells); }
  Vec point(const std::vector<int>& lattice) const;
};

/// Solver parameters. mu is stored explicitly so that the reference regime
/// (mu = eta^9, far below any tractable grid) remains representable; when
/// grid_cells > 0 the invariant mu = 1/grid_cells holds. ell, kappa, omega
/// are recomputed on access.
struct SpernerSolverParams {
  int d = 1;
  double eta = 1.0;
  double gamma = 0.01;
  double mu = 1.0 / 64;
  long grid_cells = 64;
  double L = 0.0;  // correspondence Lipschitz bound

  double ell() const;
  double kappa() const;
  double omega() const;
};

SpernerSolverParams make_params(const QVIInstance& qvi, double eta, double gamma, long grid_cells);

struct ReferenceParams {
  SpernerSolverParams params;
  double eta_bound = 0.0;  // the min(...) value defining the regime
  bool tractable = false;  // d! * grid^d <= 1e8
};

/// Worst-case admissible regime: eta = the minimum of nine admissibility
/// terms, mu = eta^9, gamma = eta^2; the returned parameters satisfy
/// gamma + sqrt(d) omega <= nu and
/// (eta/2) omega^2 + sqrt(d)(1+eta) omega + d sqrt(d) omega / gamma <= eps.
ReferenceParams reference_params(int d, double eps, double nu, double L);

/// p_{gamma,eta}(z) = Pi_{Q_gamma(z)} ( z - F(z)/eta ).
Vec proximal_selector(const QVIInstance& qvi, const Vec& z, double gamma, double eta);

/// Coloring of a grid vertex from the selector displacement p - v:
/// all components >= 0 gives color 0 (rerouted to the smallest upper-face
/// coordinate when the vertex lies on a v_i = 1 face, where the displacement
/// is necessarily 0 in that coordinate); otherwise the smallest strictly
/// negative component. Satisfies the Sperner boundary rules by construction.
int sperner_color(const std::vector<int>& lattice, long cells, const Vec& v, const Vec& p);

/// The d! Kuhn simplices of one cubelet: base vertex plus unit steps
/// e_{pi(1)}, ..., e_{pi(d)} over permutations pi in lexicographic order.
std::vector<std::vector<std::vector<int>>> kuhn_simplices_of_cubelet(const std::vector<int>& base,
                                                                     int d);

/// Number of simplices of the full triangulation: d! * cells^d.
double kuhn_simplex_count(int d, long cells);

struct PanchromaticSimplex {
  bool found = false;
  std::vector<std::vector<int>> lattice;  // d+1 vertices, lattice coordinates
  std::vector<int> colors;
  std::vector<Vec> points;
  long cubelets_scanned = 0;
};

/// Lexicographic exhaustive scan (cubelet order, then permutation order) for
/// a panchromatic Kuhn simplex of the coloring induced by the proximal
/// selector. Vertices whose slice Q_gamma(v) is empty stay uncolored and
/// simplices touching them are skipped. Deterministic; threads partition the
/// cubelet range and the lexicographically first hit wins.
PanchromaticSimplex find_panchromatic(const QVIInstance& qvi, const SpernerSolverParams& params,
                                      int threads = 1, double scan_budget = 1e8);

/// Full pipeline: find a panchromatic simplex, return the color-0 vertex
/// v0 with its LP-verified residual min_{z in Q_nu(v0)} F(v0)^T (z - v0)
/// and the exact membership check, plus run-scale continuity readings.
/// out_simplex, when given, receives the panchromatic simplex.
Certificate solve_qvi(const QVIInstance& qvi, const SpernerSolverParams& params, int threads = 1,
                      PanchromaticSimplex* out_simplex = nullptr);

}  // namespace minmax_lab
