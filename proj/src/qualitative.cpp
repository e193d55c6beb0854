#include "solvency/qualitative.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "selector.hpp"

namespace solvency {

namespace {

Rational worst_successor(const EnabledAction& ea, const std::vector<Rational>& v,
                         const Rational& factor) {
  Rational best = factor * (ea.gain + v[ea.distribution.front().state]);
  for (const auto& o : ea.distribution) best = min(best, factor * (ea.gain + v[o.state]));
  return best;
}

}  // namespace

QualitativeResult solve_qualitative(const SolvencyMdp& m) {
  const std::size_t n = m.num_states();
  const Rational factor = Rational(1) / m.rho();
  std::vector<std::size_t> player(n, 0);
  std::vector<Rational> v;

  for (;;) {
    std::vector<std::vector<detail::Candidate>> adversary(n);
    for (StateId s = 0; s < n; ++s) {
      const auto& ea = m.enabled(s)[player[s]];
      for (const auto& o : ea.distribution) adversary[s].push_back({o.state, ea.gain});
    }
    v = detail::optimize_selector(adversary, factor, detail::Direction::minimize).values;

    bool changed = false;
    for (StateId s = 0; s < n; ++s) {
      auto actions = m.enabled(s);
      std::size_t best = 0;
      Rational best_q = worst_successor(actions[0], v, factor);
      for (std::size_t i = 1; i < actions.size(); ++i) {
        Rational q = worst_successor(actions[i], v, factor);
        if (q > best_q) {
          best = i;
          best_q = std::move(q);
        }
      }
      if (best_q > v[s]) {
        player[s] = best;
        changed = true;
      }
    }
    if (!changed) break;
  }

  QualitativeResult result;
  result.strategy.choice.resize(n);
  for (StateId s = 0; s < n; ++s) {
    auto actions = m.enabled(s);
    for (const auto& ea : actions) {
      if (worst_successor(ea, v, factor) == v[s]) {
        result.strategy.choice[s] = ea.action;
        break;
      }
    }
    result.wr_one.push_back(-v[s]);
  }
  result.worst_case_value = std::move(v);
  return result;
}

std::vector<double> qualitative_value_iteration(const SolvencyMdp& m, double tolerance) {
  const std::size_t n = m.num_states();
  const double beta = 1.0 / m.rho().to_double();
  std::vector<double> v(n, 0.0), next(n);
  for (;;) {
    double change = 0.0;
    for (StateId s = 0; s < n; ++s) {
      double best = -std::numeric_limits<double>::infinity();
      for (const auto& ea : m.enabled(s)) {
        double worst = std::numeric_limits<double>::infinity();
        for (const auto& o : ea.distribution) {
          worst = std::min(worst, beta * (ea.gain.to_double() + v[o.state]));
        }
        best = std::max(best, worst);
      }
      next[s] = best;
      change = std::max(change, std::abs(next[s] - v[s]));
    }
    v.swap(next);
    // Contraction: |V - v_k| <= beta/(1-beta) * |v_k - v_{k-1}|.
    if (beta / (1.0 - beta) * change < tolerance) return v;
  }
}

}  // namespace solvency
