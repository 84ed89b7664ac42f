#include "minmax_lab/sperner.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <numeric>
#include <thread>

namespace minmax_lab {

Vec SpernerGrid::point(const std::vector<int>& lattice) const {
  Vec v(d);
  for (int i = 0; i < d; ++i) v[i] = static_cast<double>(lattice[i]) / static_cast<double>(cells);
  return v;
}

double SpernerSolverParams::ell() const {
  return 2.0 * d * mu * (4.0 * L * std::sqrt(static_cast<double>(d)) / gamma + L + eta);
}

double SpernerSolverParams::kappa() const { return 2.0 * L * d * mu / gamma; }

double SpernerSolverParams::omega() const {
  return std::sqrt(static_cast<double>(d)) * (mu + kappa() + std::sqrt(2.0 * ell() / eta));
}

SpernerSolverParams make_params(const QVIInstance& qvi, double eta, double gamma,
                                long grid_cells) {
  SpernerSolverParams p;
  p.d = qvi.d();
  p.eta = eta;
  p.gamma = gamma;
  p.grid_cells = grid_cells;
  p.mu = 1.0 / static_cast<double>(grid_cells);
  p.L = qvi.L;
  return p;
}

ReferenceParams reference_params(int d, double eps, double nu, double L) {
  if (eps <= 0 || nu <= 0 || L <= 0) {
    throw std::invalid_argument("reference_params: eps, nu, L must be positive");
  }
  const double dd = static_cast<double>(d);
  const double terms[] = {1.0,
                          L,
                          std::pow(dd, 0.25),
                          std::sqrt(nu / 2.0),
                          std::sqrt(2.0 * dd * L),
                          1.0 / std::pow(L, 1.0 / 8.0),
                          1.0 / (8.0 * dd * dd * std::sqrt(2.0 * L)),
                          1.0 / (2.0 * std::cbrt(dd * std::sqrt(2.0 * dd * L))),
                          eps / (24.0 * dd * dd * dd * std::sqrt(2.0 * dd * L))};
  double eta = terms[0];
  for (double t : terms) eta = std::min(eta, t);

  ReferenceParams out;
  out.eta_bound = eta;
  out.params.d = d;
  out.params.eta = eta;
  out.params.gamma = eta * eta;
  out.params.mu = std::pow(eta, 9);
  out.params.L = L;
  const double cells = 1.0 / out.params.mu;
  out.tractable = kuhn_simplex_count(d, 1) * std::pow(cells, d) <= 1e8;
  if (out.tractable) {
    out.params.grid_cells = static_cast<long>(std::ceil(cells));
    out.params.mu = 1.0 / static_cast<double>(out.params.grid_cells);  // a fortiori valid
  } else {
    out.params.grid_cells = 0;
  }
  return out;
}

Vec proximal_selector(const QVIInstance& qvi, const Vec& z, double gamma, double eta) {
  const BoxPolytope Q = qvi.correspondence.slice(z, gamma);
  try {
    return project_polytope(Q, z - qvi.F(z) / eta);
  } catch (const InfeasibleSet&) {
    throw PromiseViolation("proximal_selector: Q_gamma(z) is empty");
  }
}

int sperner_color(const std::vector<int>& lattice, long cells, const Vec& v, const Vec& p) {
  const int d = static_cast<int>(v.size());
  int neg = -1;
  for (int i = 0; i < d; ++i) {
    if (p[i] - v[i] < 0.0) {
      neg = i;
      break;
    }
  }
  if (neg >= 0) return neg + 1;
  for (int i = 0; i < d; ++i) {
    if (lattice[i] == cells) return i + 1;  // upper face: displacement is 0 there
  }
  return 0;
}

std::vector<std::vector<std::vector<int>>> kuhn_simplices_of_cubelet(const std::vector<int>& base,
                                                                     int d) {
  std::vector<int> perm(d);
  std::iota(perm.begin(), perm.end(), 0);
  std::vector<std::vector<std::vector<int>>> out;
  do {
    std::vector<std::vector<int>> simplex;
    simplex.reserve(d + 1);
    std::vector<int> v = base;
    simplex.push_back(v);
    for (int k = 0; k < d; ++k) {
      v[perm[k]] += 1;
      simplex.push_back(v);
    }
    out.push_back(std::move(simplex));
  } while (std::next_permutation(perm.begin(), perm.end()));
  return out;
}

double kuhn_simplex_count(int d, long cells) {
  double f = 1.0;
  for (int i = 2; i <= d; ++i) f *= i;
  return f * std::pow(static_cast<double>(cells), d);
}

namespace {

long flat_vertex_index(const std::vector<int>& lattice, long stride) {
  long idx = 0;
  for (auto it = lattice.rbegin(); it != lattice.rend(); ++it) idx = idx * stride + *it;
  return idx;
}

void cubelet_from_flat(long flat, long cells, std::vector<int>& base) {
  for (std::size_t i = 0; i < base.size(); ++i) {
    base[i] = static_cast<int>(flat % cells);
    flat /= cells;
  }
}

struct ColorCache {
  const QVIInstance* qvi;
  const SpernerSolverParams* params;
  SpernerGrid grid;
  std::vector<std::atomic<signed char>> colors;  // -2 unknown, -1 infeasible

  explicit ColorCache(const QVIInstance& q, const SpernerSolverParams& p)
      : qvi(&q), params(&p), grid{p.d, p.grid_cells},
        colors(static_cast<std::size_t>(std::pow(p.grid_cells + 1, p.d))) {
    for (auto& c : colors) c.store(-2, std::memory_order_relaxed);
  }

  int color(const std::vector<int>& lattice) {
    const long idx = flat_vertex_index(lattice, grid.cells + 1);
    signed char c = colors[idx].load(std::memory_order_relaxed);
    if (c != -2) return c;
    const Vec v = grid.point(lattice);
    signed char value;
    try {
      const Vec p = proximal_selector(*qvi, v, params->gamma, params->eta);
      value = static_cast<signed char>(sperner_color(lattice, grid.cells, v, p));
    } catch (const PromiseViolation&) {
      value = -1;
    }
    colors[idx].store(value, std::memory_order_relaxed);
    return value;
  }
};

// Scans cubelets [lo, hi) in lexicographic order; returns the first
// panchromatic (cubelet, permutation) pair or (-1, -1).
std::pair<long, long> scan_range(ColorCache& cache, long lo, long hi) {
  const int d = cache.grid.d;
  std::vector<int> base(d);
  for (long flat = lo; flat < hi; ++flat) {
    cubelet_from_flat(flat, cache.grid.cells, base);
    // Pre-filter on the cubelet's corner colors.
    unsigned corner_mask = 0;
    std::vector<int> v(d);
    for (unsigned corner = 0; corner < (1u << d); ++corner) {
      for (int i = 0; i < d; ++i) v[i] = base[i] + ((corner >> i) & 1u);
      const int c = cache.color(v);
      if (c >= 0) corner_mask |= 1u << c;
    }
    const unsigned want = (1u << (d + 1)) - 1;
    if ((corner_mask & want) != want) continue;
    const auto simplices = kuhn_simplices_of_cubelet(base, d);
    for (long s = 0; s < static_cast<long>(simplices.size()); ++s) {
      unsigned mask = 0;
      bool ok = true;
      for (const auto& vert : simplices[s]) {
        const int c = cache.color(vert);
        if (c < 0) {
          ok = false;
          break;
        }
        mask |= 1u << c;
      }
      if (ok && mask == want) return {flat, s};
    }
  }
  return {-1, -1};
}

}  // namespace

PanchromaticSimplex find_panchromatic(const QVIInstance& qvi, const SpernerSolverParams& params,
                                      int threads, double scan_budget) {
  const int d = params.d;
  if (params.grid_cells <= 0) throw std::invalid_argument("find_panchromatic: grid required");
  if (kuhn_simplex_count(d, params.grid_cells) > scan_budget) {
    throw BudgetExhausted("find_panchromatic: d! * grid^d exceeds the scan budget");
  }
  const double vertex_count = std::pow(params.grid_cells + 1, d);
  if (vertex_count > 2e8) throw BudgetExhausted("find_panchromatic: vertex cache too large");

  ColorCache cache(qvi, params);
  const long total = static_cast<long>(std::pow(params.grid_cells, d));

  std::pair<long, long> hit{-1, -1};
  threads = std::max(1, threads);
  if (threads == 1) {
    hit = scan_range(cache, 0, total);
  } else {
    std::vector<std::pair<long, long>> results(threads, {-1, -1});
    std::vector<std::thread> pool;
    const long chunk = (total + threads - 1) / threads;
    for (int t = 0; t < threads; ++t) {
      pool.emplace_back([&, t]() {
        const long lo = t * chunk;
        results[t] = scan_range(cache, lo, std::min(total, lo + chunk));
      });
    }
    for (auto& th : pool) th.join();
    for (const auto& r : results) {
      if (r.first >= 0 && (hit.first < 0 || r < hit)) hit = r;
    }
  }

  PanchromaticSimplex out;
  out.cubelets_scanned = total;
  if (hit.first < 0) return out;

  std::vector<int> base(d);
  cubelet_from_flat(hit.first, params.grid_cells, base);
  const auto simplices = kuhn_simplices_of_cubelet(base, d);
  out.found = true;
  out.lattice = simplices[hit.second];
  SpernerGrid grid{d, params.grid_cells};
  for (const auto& vert : out.lattice) {
    out.colors.push_back(cache.color(vert));
    out.points.push_back(grid.point(vert));
  }
  return out;
}

Certificate solve_qvi(const QVIInstance& qvi, const SpernerSolverParams& params, int threads,
                      PanchromaticSimplex* out_simplex) {
  Certificate cert;
  cert.method = "sperner";
  cert.params = {{"eps", qvi.eps},       {"nu", qvi.correspondence.nu},
                 {"eta", params.eta},    {"gamma", params.gamma},
                 {"grid", static_cast<double>(params.grid_cells)}};

  const auto simplex = find_panchromatic(qvi, params, threads);
  if (out_simplex) *out_simplex = simplex;
  if (!simplex.found) {
    cert.pass = false;
    cert.details["panchromatic_found"] = 0.0;
    return cert;
  }
  cert.details["panchromatic_found"] = 1.0;

  const int d = params.d;
  // Vertices ordered by color: v0 carries color 0.
  std::vector<Vec> by_color(d + 1);
  for (std::size_t i = 0; i < simplex.colors.size(); ++i) {
    by_color[simplex.colors[i]] = simplex.points[i];
  }
  const Vec v0 = by_color[0];
  cert.point = v0;

  // Run-scale selector-continuity readings.
  const Vec p0 = proximal_selector(qvi, v0, params.gamma, params.eta);
  double max_pdist = 0.0;
  for (int i = 1; i <= d; ++i) {
    const Vec pi = proximal_selector(qvi, by_color[i], params.gamma, params.eta);
    max_pdist = std::max(max_pdist, (p0 - pi).norm());
  }
  cert.details["selector_spread"] = max_pdist;
  cert.details["selector_spread_bound"] = params.kappa() + std::sqrt(2.0 * params.ell() / params.eta);
  cert.details["selector_displacement"] = (p0 - v0).norm();
  cert.details["omega"] = params.omega();
  cert.details["kappa"] = params.kappa();
  cert.details["ell"] = params.ell();

  const double nu = qvi.correspondence.nu;
  const double excess =
      qvi.correspondence.rows.empty() ? 0.0 : qvi.correspondence.max_row_value(v0, v0) - nu;
  cert.details["membership_excess"] = excess;
  const bool member = excess <= 1e-9;

  const Vec F0 = qvi.F(v0);
  const auto lp = lp_min(qvi.correspondence.slice(v0, nu), F0);
  cert.residual = lp.value - F0.dot(v0);
  cert.pass = member && cert.residual >= -qvi.eps - 1e-12;
  return cert;
}

}  // namespace minmax_lab
