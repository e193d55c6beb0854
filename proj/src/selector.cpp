#include "selector.hpp"

#include <cassert>
#include <stdexcept>

namespace solvency::detail {

std::vector<Rational> solve_functional_graph(std::span<const StateId> next,
                                             std::span<const Rational> offset,
                                             const Rational& factor) {
  const std::size_t n = next.size();
  enum class Mark : unsigned char { fresh, on_path, done };
  std::vector<Mark> mark(n, Mark::fresh);
  std::vector<Rational> x(n);
  std::vector<StateId> path;

  for (StateId start = 0; start < n; ++start) {
    if (mark[start] != Mark::fresh) continue;
    path.clear();
    StateId cur = start;
    while (mark[cur] == Mark::fresh) {
      mark[cur] = Mark::on_path;
      path.push_back(cur);
      cur = next[cur];
    }
    std::size_t solved_from = path.size();  // path[solved_from..] already have values
    if (mark[cur] == Mark::on_path) {
      // path[k..] is a cycle through cur.
      std::size_t k = 0;
      while (path[k] != cur) ++k;
      Rational sum;
      Rational power(1);
      for (std::size_t j = k; j < path.size(); ++j) {
        power *= factor;
        sum += power * offset[path[j]];
      }
      x[cur] = sum / (Rational(1) - power);
      mark[cur] = Mark::done;
      for (std::size_t j = path.size() - 1; j > k; --j) {
        StateId s = path[j];
        x[s] = factor * (offset[s] + x[next[s]]);
        mark[s] = Mark::done;
      }
      solved_from = k;
    }
    for (std::size_t j = solved_from; j-- > 0;) {
      StateId s = path[j];
      x[s] = factor * (offset[s] + x[next[s]]);
      mark[s] = Mark::done;
    }
  }
  return x;
}

SelectorSolution optimize_selector(const std::vector<std::vector<Candidate>>& candidates,
                                   const Rational& factor, Direction direction,
                                   std::vector<std::size_t> initial) {
  const std::size_t n = candidates.size();
  std::vector<std::size_t> choice =
      initial.empty() ? std::vector<std::size_t>(n, 0) : std::move(initial);
  assert(choice.size() == n);
  auto better = [direction](const Rational& a, const Rational& b) {
    return direction == Direction::maximize ? a > b : a < b;
  };

  std::vector<StateId> next(n);
  std::vector<Rational> offset(n);
  for (;;) {
    for (StateId s = 0; s < n; ++s) {
      if (candidates[s].empty()) throw std::logic_error("state without candidates");
      next[s] = candidates[s][choice[s]].next;
      offset[s] = candidates[s][choice[s]].offset;
    }
    std::vector<Rational> x = solve_functional_graph(next, offset, factor);

    bool changed = false;
    for (StateId s = 0; s < n; ++s) {
      const auto& cands = candidates[s];
      std::size_t best = 0;
      Rational best_q = factor * (cands[0].offset + x[cands[0].next]);
      for (std::size_t c = 1; c < cands.size(); ++c) {
        Rational q = factor * (cands[c].offset + x[cands[c].next]);
        if (better(q, best_q)) {
          best = c;
          best_q = std::move(q);
        }
      }
      if (better(best_q, x[s])) {
        choice[s] = best;
        changed = true;
      }
    }
    if (!changed) {
      // Canonical tie-breaking: first optimal candidate in list order.
      for (StateId s = 0; s < n; ++s) {
        const auto& cands = candidates[s];
        for (std::size_t c = 0; c < cands.size(); ++c) {
          if (factor * (cands[c].offset + x[cands[c].next]) == x[s]) {
            choice[s] = c;
            break;
          }
        }
      }
      return {std::move(x), std::move(choice)};
    }
  }
}

}  // namespace solvency::detail
