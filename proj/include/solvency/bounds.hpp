#pragma once

#include <vector>

#include "solvency/model.hpp"

namespace solvency {

/// Per-state doomed bound L(M,s) and safe bound U(M,s). At or above U every
/// strategy wins almost surely; at or below L (when L < U) every strategy loses.
struct BoundsTable {
  std::vector<Rational> lower;
  std::vector<Rational> upper;
  Rational global_lower;  // min_s L(M,s)
  Rational global_upper;  // max_s U(M,s)
};

/// Exact L and U, the solutions of
///   U(s) = max_{a, t in Succ(s,a)} (U(t) - F(s,a)) / rho
///   L(s) = min_{a, t in Succ(s,a)} (L(t) - F(s,a)) / rho
/// computed by policy iteration over (action, successor) selectors.
BoundsTable compute_bounds(const SolvencyMdp& m);

/// (s, x) is a rentier configuration iff x >= U(M,s).
bool is_rentier(const BoundsTable& bounds, const Configuration& c);

}  // namespace solvency
