#pragma once

// Brute-force ground truth on the exact (unrounded) wealth tree. Independent of the
// unfolding: nothing here classifies wealth into grid cells except to *replay* a
// layered strategy's own bookkeeping.

#include <cstddef>
#include <cstdint>
#include <utility>
#include <variant>

#include "solvency/bounds.hpp"
#include "solvency/model.hpp"
#include "solvency/qualitative.hpp"
#include "solvency/reach.hpp"

namespace solvency::oracle {

inline constexpr std::size_t default_horizon_cap = 14;

struct CoverQuery {
  Configuration start;
  Rational slack;        // z >= 0
  std::size_t horizon;   // n >= 1
};

/// max over strategies of P(reach (t,y) with y >= U(M,t) - z within n steps).
Rational cover_probability(const SolvencyMdp& m, const BoundsTable& bounds, const CoverQuery& q,
                           std::size_t horizon_cap = default_horizon_cap);

/// P^sigma(reach (t,y) with y >= U(M,t) - slack within `horizon` steps) from `start`.
Rational strategy_win_probability(const SolvencyMdp& m, const BoundsTable& bounds,
                                  const LayeredStrategy& sigma, const Configuration& start,
                                  const Rational& slack, std::size_t horizon,
                                  std::size_t horizon_cap = default_horizon_cap);

/// Bracket [low, high] on the worst realisable discounted reward of `sigma` from s:
/// the k-step minimum plus/minus the tail bound max|F| beta^(k+1) / (1 - beta).
std::pair<Rational, Rational> worst_case_discounted(const SolvencyMdp& m,
                                                    const ObliviousStrategy& sigma, StateId s,
                                                    std::size_t k);

using AnyStrategy = std::variant<ObliviousStrategy, LayeredStrategy>;

struct SimulationSpec {
  std::size_t steps = 100;
  std::size_t trials = 1000;
  std::uint64_t seed = 0;
  std::size_t threads = 1;  // result does not depend on this
};

/// Fraction of seeded Monte-Carlo runs that reach a rentier configuration within
/// `steps`. Per-trial generators are mt19937_64 seeded with splitmix64(seed + trial).
double simulate(const SolvencyMdp& m, const BoundsTable& bounds, const AnyStrategy& sigma,
                const Configuration& start, const SimulationSpec& spec);

/// splitmix64 finaliser, used to derive per-trial seeds.
std::uint64_t splitmix64(std::uint64_t x);

}  // namespace solvency::oracle
