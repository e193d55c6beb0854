#pragma once

#include <cstddef>
#include <optional>
#include <unordered_map>
#include <vector>

#include "solvency/bounds.hpp"
#include "solvency/unfold.hpp"

namespace solvency {

/// Wealth-independent strategy in M obtained from an unfolded DAG. Once the initial
/// configuration `origin` is fixed, the strategy only looks at the sequence of states
/// and actions: it replays the class trajectory starting from the class of `origin`
/// and plays the recorded DAG action. Histories that leave the DAG (absorbed) fall
/// back to the first enabled action.
class LayeredStrategy {
 public:
  struct Key {
    std::size_t layer;
    WealthClass cls;
    friend bool operator==(const Key&, const Key&) = default;
  };
  struct KeyHash {
    std::size_t operator()(const Key& k) const;
  };

  /// Position of a history in the class trajectory.
  struct Cursor {
    std::size_t layer = 0;
    WealthClass cls;
    bool absorbed = false;
  };

  LayeredStrategy() = default;
  LayeredStrategy(Configuration origin, Rational lambda, std::size_t horizon, BoundsTable bounds);

  const Configuration& origin() const { return origin_; }
  const Rational& lambda() const { return lambda_; }
  std::size_t horizon() const { return horizon_; }
  const BoundsTable& bounds() const { return bounds_; }
  const std::unordered_map<Key, ActionId, KeyHash>& choices() const { return choice_; }
  /// Choices sorted by (layer, state, kind, upper) for stable output.
  std::vector<std::pair<Key, ActionId>> sorted_choices() const;

  void set_choice(Key key, ActionId action) { choice_[std::move(key)] = action; }

  Cursor start() const;
  /// Action prescribed at `state` for the history summarised by `cursor`. Throws
  /// std::logic_error if the cursor is live but the strategy has no entry for it.
  ActionId action(const SolvencyMdp& m, StateId state, const Cursor& cursor) const;
  Cursor advance(const SolvencyMdp& m, const Cursor& cursor, const EnabledAction& played,
                 StateId to) const;

 private:
  Configuration origin_{0, {}};
  Rational lambda_{1};
  std::size_t horizon_ = 0;
  BoundsTable bounds_;
  std::unordered_map<Key, ActionId, KeyHash> choice_;
};

enum class Arithmetic { automatic, exact, floating };

inline constexpr std::size_t default_exact_budget = 100'000;

struct ReachResult {
  bool exact = true;
  Rational value;                        // exact mode only
  double value_float = 0.0;              // both modes
  double float_error_bound = 0.0;        // 0 in exact mode
  std::vector<Rational> node_values;     // exact mode only
  std::vector<double> node_values_float;  // float mode only
  std::vector<std::optional<ActionId>> node_choice;  // argmax action per live node
};

/// Maximal probability of reaching a win class (Hit) in the DAG by backward
/// induction, with the argmax action per live node (ties: first in declaration order).
/// `automatic` uses exact rationals while depth * |nodes| <= exact_budget.
ReachResult max_hit_probability(const UnfoldedMdp& dag, Arithmetic arithmetic = Arithmetic::automatic,
                                std::size_t exact_budget = default_exact_budget);

/// Strategy in M that follows the DAG argmax along its own class trajectory, for the
/// history starting at `origin` (the configuration the DAG was built from).
LayeredStrategy lift_strategy(const ReachResult& result, const UnfoldedMdp& dag,
                              const BoundsTable& bounds, const Configuration& origin);

}  // namespace solvency
