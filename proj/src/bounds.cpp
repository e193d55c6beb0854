#include "solvency/bounds.hpp"

#include <algorithm>

#include "selector.hpp"

namespace solvency {

BoundsTable compute_bounds(const SolvencyMdp& m) {
  std::vector<std::vector<detail::Candidate>> candidates(m.num_states());
  for (StateId s = 0; s < m.num_states(); ++s) {
    for (const auto& ea : m.enabled(s)) {
      for (const auto& o : ea.distribution) candidates[s].push_back({o.state, -ea.gain});
    }
  }
  const Rational factor = Rational(1) / m.rho();

  BoundsTable table;
  table.upper =
      detail::optimize_selector(candidates, factor, detail::Direction::maximize).values;
  table.lower =
      detail::optimize_selector(candidates, factor, detail::Direction::minimize).values;
  table.global_lower = *std::min_element(table.lower.begin(), table.lower.end());
  table.global_upper = *std::max_element(table.upper.begin(), table.upper.end());
  return table;
}

bool is_rentier(const BoundsTable& bounds, const Configuration& c) {
  return c.wealth >= bounds.upper.at(c.state);
}

}  // namespace solvency
