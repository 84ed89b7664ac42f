#include "minmax_lab/polytope.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace minmax_lab {

namespace {
constexpr double kZeroRowTol = 1e-14;
constexpr double kPivotTol = 1e-9;
constexpr double kFeasTol = 1e-7;
}  // namespace

BoxPolytope::BoxPolytope(int d, std::vector<Halfspace> rows) : d_(d) {
  rows_.reserve(rows.size());
  for (auto& h : rows) add_row(std::move(h));
}

void BoxPolytope::add_row(Halfspace h) {
  if (h.a.size() != d_) throw DimensionMismatch("BoxPolytope row dimension");
  if (h.a.lpNorm<Eigen::Infinity>() <= kZeroRowTol) {
    if (h.beta < -kZeroRowTol) trivially_infeasible_ = true;
    return;  // 0 <= beta holds everywhere, row dropped
  }
  rows_.push_back(std::move(h));
}

BoxPolytope BoxPolytope::relaxed(double nu) const {
  BoxPolytope out(d_);
  out.trivially_infeasible_ = trivially_infeasible_;
  for (const auto& h : rows_) out.rows_.push_back({h.a, h.beta + nu});
  return out;
}

double BoxPolytope::max_row_excess(const Vec& z) const {
  double worst = -std::numeric_limits<double>::infinity();
  for (const auto& h : rows_) worst = std::max(worst, h.a.dot(z) - h.beta);
  return worst;
}

bool BoxPolytope::contains(const Vec& z, double tol) const {
  if (trivially_infeasible_) return false;
  for (int i = 0; i < d_; ++i) {
    if (z[i] < -tol || z[i] > 1.0 + tol) return false;
  }
  return rows_.empty() || max_row_excess(z) <= tol;
}

bool BoxPolytope::interval_product(Vec& lo, Vec& hi) const {
  lo = Vec::Zero(d_);
  hi = Vec::Ones(d_);
  for (const auto& h : rows_) {
    int nz = -1;
    for (int i = 0; i < d_; ++i) {
      if (std::abs(h.a[i]) > kZeroRowTol) {
        if (nz >= 0) return false;
        nz = i;
      }
    }
    if (nz < 0) continue;
    const double bound = h.beta / h.a[nz];
    if (h.a[nz] > 0) {
      hi[nz] = std::min(hi[nz], bound);
    } else {
      lo[nz] = std::max(lo[nz], bound);
    }
  }
  return true;
}

Vec project_box(const Vec& p) {
  return p.cwiseMax(0.0).cwiseMin(1.0);
}

namespace {

void pivot(Mat& tab, std::vector<int>& basis, int prow, int pcol) {
  tab.row(prow) /= tab(prow, pcol);
  for (int i = 0; i < tab.rows(); ++i) {
    if (i == prow) continue;
    const double f = tab(i, pcol);
    if (f != 0.0) tab.row(i) -= f * tab.row(prow);
  }
  basis[prow] = pcol;
}

// Primal simplex with Bland's rule on an explicit tableau. Constraint rows
// are 0..m-1 with nonnegative rhs, obj_row holds reduced costs. Returns
// false iff unbounded.
bool simplex_core(Mat& tab, std::vector<int>& basis, const std::vector<char>& allowed,
                  int obj_row) {
  const int m = static_cast<int>(basis.size());
  const int n = static_cast<int>(tab.cols()) - 1;
  for (long iter = 0; iter < 500000; ++iter) {
    int enter = -1;
    for (int j = 0; j < n; ++j) {
      if (allowed[j] && tab(obj_row, j) < -kPivotTol) {
        enter = j;  // Bland: lowest eligible index
        break;
      }
    }
    if (enter < 0) return true;
    double min_ratio = std::numeric_limits<double>::infinity();
    for (int i = 0; i < m; ++i) {
      if (tab(i, enter) > kPivotTol) min_ratio = std::min(min_ratio, tab(i, n) / tab(i, enter));
    }
    if (!std::isfinite(min_ratio)) return false;
    int leave = -1;
    const double ratio_tol = 1e-9 * (1.0 + std::abs(min_ratio));
    for (int i = 0; i < m; ++i) {
      if (tab(i, enter) > kPivotTol && tab(i, n) / tab(i, enter) <= min_ratio + ratio_tol) {
        if (leave < 0 || basis[i] < basis[leave]) leave = i;  // Bland tie-break
      }
    }
    pivot(tab, basis, leave, enter);
  }
  throw std::runtime_error("simplex: iteration cap exceeded");
}

struct SimplexOutcome {
  bool feasible = false;
  Vec z;
  double value = 0.0;
};

// Two-phase dense simplex for min cost^T z over P (rows + unit box).
// Standard-form variables are (z, row slacks, upper-bound slacks) plus
// artificials on rows whose rhs is negative.
SimplexOutcome solve_lp(const BoxPolytope& P, const Vec& cost) {
  SimplexOutcome out;
  if (P.trivially_infeasible()) return out;
  const int d = P.dim();
  const int m = static_cast<int>(P.rows().size());
  const int meq = m + d;
  const int n_real = d + m + d;

  std::vector<int> art_of_row(m, -1);
  int n_art = 0;
  for (int j = 0; j < m; ++j) {
    if (P.rows()[j].beta < 0) art_of_row[j] = n_art++;
  }
  const int n = n_real + n_art;

  Mat tab = Mat::Zero(meq + 2, n + 1);
  std::vector<int> basis(meq);
  std::vector<char> is_art(n, 0);

  for (int j = 0; j < m; ++j) {
    const auto& h = P.rows()[j];
    const double sgn = (h.beta < 0) ? -1.0 : 1.0;
    for (int i = 0; i < d; ++i) tab(j, i) = sgn * h.a[i];
    tab(j, d + j) = sgn;  // row slack
    tab(j, n) = sgn * h.beta;
    if (art_of_row[j] >= 0) {
      const int col = n_real + art_of_row[j];
      tab(j, col) = 1.0;
      basis[j] = col;
      is_art[col] = 1;
    } else {
      basis[j] = d + j;
    }
  }
  for (int i = 0; i < d; ++i) {
    tab(m + i, i) = 1.0;
    tab(m + i, d + m + i) = 1.0;
    tab(m + i, n) = 1.0;
    basis[m + i] = d + m + i;
  }

  const int obj2 = meq, obj1 = meq + 1;
  for (int i = 0; i < d; ++i) tab(obj2, i) = cost[i];

  if (n_art > 0) {
    // Phase-1 reduced costs: 1 on artificials minus the rows they sit in.
    for (int col = 0; col <= n; ++col) {
      double s = (col < n && is_art[col]) ? 1.0 : 0.0;
      for (int j = 0; j < m; ++j) {
        if (art_of_row[j] >= 0) s -= tab(j, col);
      }
      tab(obj1, col) = s;
    }
    std::vector<char> all(n, 1);
    simplex_core(tab, basis, all, obj1);
    if (-tab(obj1, n) > kFeasTol) return out;  // infeasible
    // Drive remaining artificials out of the basis where possible.
    for (int i = 0; i < meq; ++i) {
      if (basis[i] >= n_real) {
        for (int j = 0; j < n_real; ++j) {
          if (std::abs(tab(i, j)) > kPivotTol) {
            pivot(tab, basis, i, j);
            break;
          }
        }
      }
    }
  }

  std::vector<char> allowed(n, 1);
  for (int j = 0; j < n; ++j) {
    if (is_art[j]) allowed[j] = 0;
  }
  if (!simplex_core(tab, basis, allowed, obj2)) {
    throw std::runtime_error("simplex: unbounded box-bounded LP");
  }

  Vec z = Vec::Zero(d);
  for (int i = 0; i < meq; ++i) {
    if (basis[i] < d) z[basis[i]] = tab(i, n);
  }
  out.feasible = true;
  out.z = project_box(z);  // shave roundoff
  out.value = cost.dot(out.z);
  return out;
}

}  // namespace

std::optional<Vec> feasibility(const BoxPolytope& P) {
  if (P.trivially_infeasible()) return std::nullopt;
  const int d = P.dim();
  if (P.rows().empty()) return Vec::Zero(d);

  Vec lo, hi;
  if (P.interval_product(lo, hi)) {
    for (int i = 0; i < d; ++i) {
      if (lo[i] > hi[i] + 1e-12) return std::nullopt;
    }
    return ((lo + hi) / 2.0).cwiseMax(lo).cwiseMin(hi);
  }

  // min t over { a_j^T z - U t <= beta_j, z in [0,1]^d, t in [0,1] };
  // U makes t = 1 feasible everywhere, so min t = 0 iff P is nonempty.
  double U = 1.0;
  for (const auto& h : P.rows()) {
    double pos = 0.0;
    for (int i = 0; i < d; ++i) pos += std::max(h.a[i], 0.0);
    U = std::max(U, pos - h.beta);
  }
  BoxPolytope lifted(d + 1);
  for (const auto& h : P.rows()) {
    Vec a = Vec::Zero(d + 1);
    a.head(d) = h.a;
    a[d] = -U;
    lifted.add_row({a, h.beta});
  }
  Vec c = Vec::Zero(d + 1);
  c[d] = 1.0;
  auto res = solve_lp(lifted, c);
  if (!res.feasible || res.value * U > 1e-8) return std::nullopt;
  Vec z = res.z.head(d);
  if (P.max_row_excess(z) > kFeasTol) return std::nullopt;
  return z;
}

Vec project_polytope(const BoxPolytope& P, const Vec& p, const ProjectionOptions& opts) {
  require_dim(p, P.dim(), "project_polytope point");
  if (P.trivially_infeasible()) throw InfeasibleSet("project_polytope: empty polytope");

  Vec lo, hi;
  if (P.interval_product(lo, hi)) {
    for (int i = 0; i < P.dim(); ++i) {
      if (lo[i] > hi[i] + 1e-12) throw InfeasibleSet("project_polytope: empty interval product");
    }
    return p.cwiseMax(lo).cwiseMin(hi);
  }

  const auto& rows = P.rows();
  Vec q = project_box(p);
  std::vector<int> violated;
  for (int j = 0; j < static_cast<int>(rows.size()); ++j) {
    if (rows[j].a.dot(q) > rows[j].beta + opts.tol) violated.push_back(j);
  }
  if (violated.empty()) return q;

  if (violated.size() <= 2) {
    // Active-set KKT attempt: q = p - sum lambda_j a_j with lambda >= 0,
    // assuming the box is inactive; verified before returning.
    std::vector<std::vector<int>> trials;
    for (int j : violated) trials.push_back({j});
    if (violated.size() == 2) trials.push_back(violated);
    for (const auto& S : trials) {
      const int k = static_cast<int>(S.size());
      Mat G(k, k);
      Vec rhs(k);
      for (int r = 0; r < k; ++r) {
        rhs[r] = rows[S[r]].a.dot(p) - rows[S[r]].beta;
        for (int c = 0; c < k; ++c) G(r, c) = rows[S[r]].a.dot(rows[S[c]].a);
      }
      Eigen::FullPivLU<Mat> lu(G);
      if (!lu.isInvertible()) continue;
      Vec lambda = lu.solve(rhs);
      if ((lambda.array() < -1e-12).any()) continue;
      Vec cand = p;
      for (int r = 0; r < k; ++r) cand -= lambda[r] * rows[S[r]].a;
      if (P.contains(cand, opts.tol)) return project_box(cand);
    }
  }

  if (!feasibility(P)) throw InfeasibleSet("project_polytope: empty polytope");

  // Dykstra over the half-spaces and the box (box last, so iterates end
  // inside it).
  const int K = static_cast<int>(rows.size()) + 1;
  std::vector<Vec> incr(K, Vec::Zero(P.dim()));
  Vec x = p;
  for (int sweep = 0; sweep < opts.max_sweeps; ++sweep) {
    const Vec x_prev = x;
    for (int k = 0; k < K; ++k) {
      const Vec y = x + incr[k];
      Vec px;
      if (k + 1 == K) {
        px = project_box(y);
      } else {
        const auto& h = rows[k];
        const double excess = h.a.dot(y) - h.beta;
        px = (excess > 0) ? Vec(y - (excess / h.a.squaredNorm()) * h.a) : y;
      }
      incr[k] = y - px;
      x = px;
    }
    if ((x - x_prev).lpNorm<Eigen::Infinity>() <= 0.01 * opts.tol &&
        P.max_row_excess(x) <= opts.tol) {
      return x;
    }
  }
  throw BudgetExhausted("project_polytope: Dykstra sweep cap reached");
}

LpResult lp_min(const BoxPolytope& P, const Vec& cost) {
  require_dim(cost, P.dim(), "lp_min cost");
  if (cost.lpNorm<Eigen::Infinity>() == 0.0) {
    auto z = feasibility(P);
    if (!z) throw InfeasibleSet("lp_min: infeasible polytope");
    return {*z, 0.0};
  }
  auto res = solve_lp(P, cost);
  if (!res.feasible) throw InfeasibleSet("lp_min: infeasible polytope");

  // Lexicographic tie-break: restrict to the optimal face, then minimize
  // coordinates in order. The lex-min point of a face is a vertex.
  const double vtol = 1e-9 * (1.0 + std::abs(res.value));
  BoxPolytope face = P;
  face.add_row({cost, res.value + vtol});
  Vec z = res.z;
  for (int i = 0; i < P.dim(); ++i) {
    Vec ei = Vec::Zero(P.dim());
    ei[i] = 1.0;
    auto ri = solve_lp(face, ei);
    if (!ri.feasible) break;  // numerical safety, keep phase-0 optimum
    z = ri.z;
    face.add_row({ei, ri.value + 1e-9});
  }
  return {z, res.value};  // the phase-0 optimum; the lex point sits on the relaxed face
}

double one_sided_hausdorff(const BoxPolytope& Pa, const BoxPolytope& Pb, int samples,
                           std::uint64_t seed) {
  if (!feasibility(Pa) || !feasibility(Pb)) {
    throw InfeasibleSet("one_sided_hausdorff: both polytopes must be feasible");
  }
  const int d = Pa.dim();
  Rng rng(seed ^ 0x9e3779b97f4a7c15ULL);
  double worst = 0.0;
  auto probe = [&](const Vec& pa) {
    const Vec pb = project_polytope(Pb, pa);
    worst = std::max(worst, (pa - pb).norm());
  };
  const int n_vertex = std::min(samples, 32);
  for (int s = 0; s < n_vertex; ++s) {
    Vec cost(d);
    for (int i = 0; i < d; ++i) cost[i] = rng.uniform(-1.0, 1.0);
    probe(lp_min(Pa, cost).point);
  }
  for (int s = 0; s < samples; ++s) {
    Vec p(d);
    for (int i = 0; i < d; ++i) p[i] = rng.uniform();
    probe(project_polytope(Pa, p));
  }
  return worst;
}

}  // namespace minmax_lab
