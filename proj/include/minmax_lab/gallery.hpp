#pragma once

#include <cstdint>
#include <map>
#include <string>

#include "minmax_lab/core.hpp"

namespace minmax_lab {
namespace gallery {

/// Separation instance: f(x,y) = 4/5 ((x-1)^2 - (y-1/2)^2 + 1/4) over
/// K = { x + y <= 1 }, probe (1,0): a local min-max solution and GDA fixed
/// point that misses the associated VI by 4/5. The source constants ride
/// along so tests read expectations from the instance, not from test code.
struct EqNotVi {
  MinMaxInstance inst;
  Vec probe_x, probe_y;
  std::map<std::string, double> claims;  // smoothness, lipschitz, beta_bar, separation
};
EqNotVi eq_not_vi();

/// Kakutani instance whose only fixed point is irrational:
/// A(x,y) = [+1 0; -1 0; 0 +x; 0 -x],
/// b = (+y, -y, +1/2, -1/2); the only fixed point is x = y = 1/sqrt(2).
struct IrrationalKakutani {
  CorrespondenceSpec spec;
  std::map<std::string, double> claims;  // fixed_point_x, fixed_point_y
};
IrrationalKakutani irrational_kakutani();

/// Non-existence instance: f(x,y) = 1 - x^2/2,
/// player 1 constrained by xy <= 0, player 2 by ||x-y||_inf <= 0; only
/// feasible point (0,0); delta = 5 eps / 4.
struct Nonexistence {
  MinMaxInstance inst;
  Vec probe_x, probe_y;
  std::map<std::string, double> claims;  // claimed_gain (paper), computed_gain
};
Nonexistence nonexistence_instance(double eps = 0.1);

/// Uniform payoffs on a random degree-bounded graph; byte-identical per
/// seed.
PolymatrixGame random_polymatrix(int n, int max_degree, std::uint64_t seed,
                                 double eps_star = 0.088);

/// Entries in [-1,1] with row/column l1 norms scaled to <= 1; the monotone
/// flag builds D = skew + nonnegative diagonal so D + D^T is PSD.
LinearVIInstance random_linearvi(int d, std::uint64_t seed, bool monotone);

}  // namespace gallery
}  // namespace minmax_lab
