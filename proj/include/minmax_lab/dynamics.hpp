#pragma once

#include <string>
#include <utility>

#include "minmax_lab/core.hpp"

namespace minmax_lab {

enum class MapKind { Gda, Sgda };

std::string to_string(MapKind k);
MapKind map_kind_from_string(const std::string& s);

struct GdaResult {
  Vec x, y;
  double residual = 0.0;
  int iterations = 0;
  MapKind map_kind = MapKind::Gda;
  bool budget_exhausted = false;
};

/// F_GDA: per-player unit-step projected descent/ascent,
/// ( Pi_{K1^nu(y)}(x - grad_x f), Pi_{K2^nu(x)}(y + grad_y f) ).
/// Empty slices break the instance promise and raise PromiseViolation.
std::pair<Vec, Vec> gda_map(const MinMaxInstance& inst, const Vec& x, const Vec& y);

/// F_sGDA: one joint projection onto K; jointly convex instances only.
std::pair<Vec, Vec> sgda_map(const MinMaxInstance& inst, const Vec& x, const Vec& y);

/// || (x,y) - F(x,y) || for the chosen map.
double residual(const MinMaxInstance& inst, const Vec& x, const Vec& y, MapKind kind);

/// Damped fixed-point iteration z <- (1-lambda) z + lambda map(z); returns
/// the best-residual point seen. Heuristic driver, no convergence claim.
GdaResult iterate(const MinMaxInstance& inst, const Vec& x0, const Vec& y0, MapKind kind,
                  double lambda, int max_iters, double target_residual);

struct ExtragradientResult {
  Vec z;
  double vi_residual = 0.0;  // exact componentwise box-VI residual
  int iterations = 0;
  bool converged = false;
};

/// Korpelevich two-step extragradient for the affine VI F(z) = Dz + c on
/// [0,1]^d. step <= 0 picks 0.25 / max(1, ||D||_2 estimate).
ExtragradientResult extragradient_vi(const Mat& D, const Vec& c, double step, double tol,
                                     int max_iters);

/// alpha = 1/2 ( sqrt((G+delta)^2 + 4(eps - L delta^2 / 2)) - (G+delta) ).
double alpha_from_eps_delta(double G, double L, double delta, double eps);

/// (eps, delta) = ( alpha^2 L / (5L+2)^2, alpha / (5L+2) ).
std::pair<double, double> eps_delta_from_alpha(double L, double alpha);

/// The squared/8 variant: 1/8 ( sqrt(...) - (G+delta) )^2.
double qvi_alpha(double G, double L, double delta, double eps);

/// sqrt(d) (3 L delta + 2 eps / delta): magnitude of the guaranteed QVI
/// residual of a local min-max solution.
double qvi_reverse_bound(double L, double delta, double eps, int d);

}  // namespace minmax_lab
