#pragma once

#include <vector>

#include "solvency/model.hpp"

namespace solvency {

/// Memoryless, wealth-independent strategy: one action per state.
struct ObliviousStrategy {
  std::vector<ActionId> choice;
};

struct QualitativeResult {
  std::vector<Rational> worst_case_value;  // V(s), the max-min discounted value
  std::vector<Rational> wr_one;            // WR(s,1) = -V(s)
  ObliviousStrategy strategy;
};

/// Exact WR(s,1) for all states with an almost-surely winning oblivious strategy.
///
/// Almost-sure winning from (s,x) means every run realisable under the strategy has
/// discounted reward >= -x, so V is the value of the max-min equation
///   V(s) = max_{a in A(s)} min_{t in Succ(s,a)} (F(s,a) + V(t)) / rho
/// solved by strategy iteration with exact policy evaluation. Ties go to the first
/// action in declaration order.
QualitativeResult solve_qualitative(const SolvencyMdp& m);

/// Floating-point value iteration of the same operator, started from 0 and stopped
/// once the sup-norm error bound drops below `tolerance`. Cross-check only.
std::vector<double> qualitative_value_iteration(const SolvencyMdp& m, double tolerance);

}  // namespace solvency
