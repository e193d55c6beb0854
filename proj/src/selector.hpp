#pragma once

// Exact policy iteration over deterministic selectors. A selector picks, per state,
// one candidate (offset c, successor t); the induced system x_s = factor * (c + x_t)
// is a functional graph and is solved in closed form.

#include <cstddef>
#include <span>
#include <vector>

#include "solvency/model.hpp"

namespace solvency::detail {

struct Candidate {
  StateId next;
  Rational offset;
};

/// x_s = factor * (offset_s + x_{next_s}); requires 0 < factor < 1.
std::vector<Rational> solve_functional_graph(std::span<const StateId> next,
                                             std::span<const Rational> offset,
                                             const Rational& factor);

struct SelectorSolution {
  std::vector<Rational> values;
  std::vector<std::size_t> choice;  // index into the state's candidate list
};

enum class Direction { maximize, minimize };

/// Optimal values of x_s = opt_c factor * (c.offset + x_{c.next}). Starts from
/// `initial` (or candidate 0 everywhere when empty), switches only on strict
/// improvement, and picks the first optimal candidate in list order.
SelectorSolution optimize_selector(const std::vector<std::vector<Candidate>>& candidates,
                                   const Rational& factor, Direction direction,
                                   std::vector<std::size_t> initial = {});

}  // namespace solvency::detail
