#pragma once

#include "minmax_lab/core.hpp"

namespace minmax_lab {

/// Exact residual of z for the box VI (Dz+c)^T (z'-z) >= -rho: the linear
/// objective decomposes componentwise, so the residual is
/// sum_i min_{b in {0,1}} (Dz+c)_i (b - z_i). The certificate also reports
/// the single-component residual min_i min_b (...) used by the strengthened
/// hardness statement.
Certificate verify_linearvi(const LinearVIInstance& vi, const Vec& z);

/// Membership z in Q_nu(z) by exact row evaluation, then residual
/// lp_min(Q_nu(z), F(z)) - F(z)^T z; passes iff residual >= -eps.
Certificate verify_qvi(const QVIInstance& qvi, const Vec& z);

/// z in Q_nu(z) by exact row evaluation; residual = max row excess over nu.
Certificate verify_kakutani(const CorrespondenceSpec& spec, const Vec& z, double nu);

/// Exact per-coordinate deviation check for quadratic objectives on
/// interval-product slices (the single-coordinate deviation class).
/// Improvements are best single-coordinate gains within the delta-ball.
struct SingleComponentCheck {
  bool applicable = false;  // quadratic objective + interval-product slices
  double x_improvement = 0.0;
  double y_improvement = 0.0;
};

SingleComponentCheck exact_single_component_check(const MinMaxInstance& inst, const Vec& x,
                                                  const Vec& y, double eps, double delta);

/// Grid search over the delta-ball intersected with each player's feasible
/// slice; the certificate reports the worst improvement found, the
/// documented grid slack G * grid_step * sqrt(d), and the exact
/// single-component readings when the slices are interval products.
/// eps/delta <= 0 fall back to the instance parameters.
Certificate verify_local_minmax(const MinMaxInstance& inst, const Vec& x, const Vec& y,
                                double grid_step, double eps = -1.0, double delta = -1.0);

/// || (x,y) - F_GDA(x,y) || <= alpha.
Certificate verify_gda_fixed_point(const MinMaxInstance& inst, const Vec& x, const Vec& y,
                                   double alpha);

/// Prop. globalization: f(x*,y*) <= f(x',y*) + eps sqrt(d)/delta for all
/// x' in K_1^nu(y*). Exact via LP when f is linear in x, otherwise grid
/// search with documented slack. Requires convexity in x (exact PSD check
/// of the x block for quadratics).
Certificate verify_globalization(const MinMaxInstance& inst, const Vec& x, const Vec& y,
                                 double eps, double delta, double grid_step = 0.01);

}  // namespace minmax_lab
