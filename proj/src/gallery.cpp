#include "minmax_lab/gallery.hpp"

#include <algorithm>
#include <cmath>

namespace minmax_lab {
namespace gallery {

EqNotVi eq_not_vi() {
  // f = 4/5 x^2 - 8/5 x - 4/5 y^2 + 4/5 y + 4/5
  Mat M = Mat::Zero(2, 2);
  M(0, 0) = 4.0 / 5.0;
  M(1, 1) = -4.0 / 5.0;
  Vec h(2);
  h << -8.0 / 5.0, 4.0 / 5.0;
  QuadraticObjective obj(1, std::move(M), std::move(h), 4.0 / 5.0);
  obj.evaluator_tag = "eq-not-vi";

  BilinearPiece g;  // x + y - 1 <= 0
  g.B = Mat::Zero(1, 1);
  g.b1 = Vec::Ones(1);
  g.b2 = Vec::Ones(1);
  g.c = -1.0;

  EqNotVi out{MinMaxInstance::jointly_convex(1, std::move(obj),
                                             BilinearConstraintSet(1, 1, {g}), 1e-3, 0.3),
              Vec::Ones(1), Vec::Zero(1),
              {{"smoothness", 8.0 / 5.0},
               {"lipschitz", 4.0 * std::sqrt(5.0) / 5.0},
               {"beta_bar", 4.0 / 5.0},
               {"separation", -4.0 / 5.0}}};
  out.inst.set_bounds(4.0 * std::sqrt(5.0) / 5.0, 8.0 / 5.0);
  return out;
}

IrrationalKakutani irrational_kakutani() {
  IrrationalKakutani out;
  out.spec.d = 2;
  out.spec.nu = 0.0;
  auto row = [&](double b1x, double b2y, double Byx, double c) {
    CorrRow r;
    r.B = Mat::Zero(2, 2);
    r.B(1, 0) = Byx;  // y' * x coupling
    r.b1 = Vec::Zero(2);
    r.b1[0] = b1x;
    r.b2 = Vec::Zero(2);
    r.b2[1] = b2y;
    r.c = c;
    out.spec.rows.push_back(std::move(r));
  };
  row(+1.0, -1.0, 0.0, 0.0);   // x' <= y
  row(-1.0, +1.0, 0.0, 0.0);   // -x' <= -y
  row(0.0, 0.0, +1.0, -0.5);   // x y' <= 1/2
  row(0.0, 0.0, -1.0, +0.5);   // -x y' <= -1/2
  out.spec.lipschitz = std::sqrt(2.0);
  out.claims = {{"fixed_point_x", 1.0 / std::sqrt(2.0)}, {"fixed_point_y", 1.0 / std::sqrt(2.0)}};
  return out;
}

Nonexistence nonexistence_instance(double eps) {
  // f(x,y) = 1 - x^2/2
  Mat M = Mat::Zero(2, 2);
  M(0, 0) = -0.5;
  QuadraticObjective obj(1, std::move(M), Vec::Zero(2), 1.0);
  obj.evaluator_tag = "nonexistence";

  BilinearPiece g1;  // x y <= 0 (player 1 free whenever y = 0)
  g1.B = Mat::Ones(1, 1);
  g1.b1 = Vec::Zero(1);
  g1.b2 = Vec::Zero(1);
  g1.c = 0.0;

  const double delta = 5.0 * eps / 4.0;
  Nonexistence out{
      MinMaxInstance::bilinear(1, std::move(obj), BilinearConstraintSet(1, 1, {g1}),
                               BilinearConstraintSet::inf_norm_coupling(1, 2, 0.0), eps, delta,
                               0.0),
      Vec::Zero(1), Vec::Zero(1),
      {{"claimed_gain", delta},        // nominal reading recorded with the instance
       {"computed_gain", delta * delta / 2.0},
       {"claimed_reading_fails", delta > eps ? 1.0 : 0.0}}};
  out.inst.set_bounds(1.0, 1.0);
  return out;
}

PolymatrixGame random_polymatrix(int n, int max_degree, std::uint64_t seed, double eps_star) {
  if (n < 2) throw std::invalid_argument("random_polymatrix: n >= 2");
  PolymatrixGame game;
  game.n = n;
  game.eps_star = eps_star;
  Rng rng(seed);

  std::vector<std::pair<int, int>> candidates;
  for (int i = 0; i < n; ++i) {
    for (int j = i + 1; j < n; ++j) candidates.emplace_back(i, j);
  }
  // Fisher-Yates with the deterministic rng.
  for (std::size_t i = candidates.size(); i > 1; --i) {
    std::swap(candidates[i - 1], candidates[rng.below(i)]);
  }
  std::vector<int> deg(n, 0);
  for (const auto& [i, j] : candidates) {
    if (deg[i] >= max_degree || deg[j] >= max_degree) continue;
    EdgePayoffs e;
    e.i = i;
    e.j = j;
    for (int r = 0; r < 2; ++r) {
      for (int c = 0; c < 2; ++c) e.a_ij(r, c) = rng.uniform();
    }
    for (int r = 0; r < 2; ++r) {
      for (int c = 0; c < 2; ++c) e.a_ji(r, c) = rng.uniform();
    }
    game.edges.push_back(e);
    deg[i]++;
    deg[j]++;
  }
  return game;
}

LinearVIInstance random_linearvi(int d, std::uint64_t seed, bool monotone) {
  Rng rng(seed);
  Mat D(d, d);
  Vec c(d);
  if (monotone) {
    Mat A(d, d);
    for (int i = 0; i < d; ++i) {
      for (int j = 0; j < d; ++j) A(i, j) = rng.uniform(-1.0, 1.0);
    }
    D = 0.5 * (A - A.transpose());
    for (int i = 0; i < d; ++i) D(i, i) = rng.uniform();  // D + D^T = 2 diag >= 0
  } else {
    for (int i = 0; i < d; ++i) {
      for (int j = 0; j < d; ++j) D(i, j) = rng.uniform(-1.0, 1.0);
    }
  }
  for (int i = 0; i < d; ++i) c[i] = rng.uniform(-1.0, 1.0);

  double norm = 1.0;
  for (int i = 0; i < d; ++i) {
    norm = std::max({norm, D.row(i).cwiseAbs().sum(), D.col(i).cwiseAbs().sum()});
  }
  D /= norm;
  return LinearVIInstance(std::move(D), std::move(c), 0.05, true);
}

}  // namespace gallery
}  // namespace minmax_lab
