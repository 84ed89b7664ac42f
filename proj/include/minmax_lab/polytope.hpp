#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include "minmax_lab/common.hpp"

namespace minmax_lab {

struct Halfspace {
  Vec a;        // coefficient vector, dimension d
  double beta;  // a^T z <= beta
};

/// A polytope { z : a_j^T z <= beta_j } always implicitly intersected with
/// the unit box [0,1]^d. Degenerate rows (a_j = 0) are normalized away at
/// construction: beta_j >= 0 drops the row, beta_j < 0 marks the whole set
/// trivially infeasible (this arises from substituting fixed variables into
/// bilinear constraint pieces).
class BoxPolytope {
 public:
  explicit BoxPolytope(int d) : d_(d) {}
  BoxPolytope(int d, std::vector<Halfspace> rows);

  int dim() const { return d_; }
  const std::vector<Halfspace>& rows() const { return rows_; }
  bool trivially_infeasible() const { return trivially_infeasible_; }

  /// Same rows with beta_j + nu (the nu-relaxed feasible sets).
  BoxPolytope relaxed(double nu) const;

  void add_row(Halfspace h);

  /// max_j (a_j^T z - beta_j); -inf when there are no rows. Box violation is
  /// not included.
  double max_row_excess(const Vec& z) const;

  bool contains(const Vec& z, double tol = 0.0) const;

  /// If every row constrains at most one coordinate, fills per-coordinate
  /// bounds (already intersected with [0,1]) and returns true.
  bool interval_product(Vec& lo, Vec& hi) const;

 private:
  int d_ = 0;
  std::vector<Halfspace> rows_;
  bool trivially_infeasible_ = false;
};

/// Componentwise clamp onto [0,1]^d.
Vec project_box(const Vec& p);

struct ProjectionOptions {
  double tol = 1e-9;
  int max_sweeps = 100000;
};

/// Euclidean projection onto P. Exact (closed form) when P is a product of
/// intervals; otherwise an active-set exact solve is attempted for up to two
/// violated rows, falling back to Dykstra's alternating projections over the
/// box and each half-space.
Vec project_polytope(const BoxPolytope& P, const Vec& p, const ProjectionOptions& opts = {});

struct LpResult {
  Vec point;
  double value;
};

/// Exact vertex minimizer of cost^T z over P (box-bounded, hence bounded).
/// Ties between optimal vertices break to the lexicographically smallest
/// point of the optimal face; a zero cost returns the feasibility point.
LpResult lp_min(const BoxPolytope& P, const Vec& cost);

/// A feasible point, or nullopt when P is empty.
std::optional<Vec> feasibility(const BoxPolytope& P);

/// max over sampled points of Pa of their distance to Pb: a lower bound on
/// the one-sided Hausdorff distance. Samples are projections of random box
/// points plus vertices from random-cost LPs.
double one_sided_hausdorff(const BoxPolytope& Pa, const BoxPolytope& Pb, int samples,
                           std::uint64_t seed = 0);

}  // namespace minmax_lab
