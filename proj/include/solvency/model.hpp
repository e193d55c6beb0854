#pragma once

#include <cstddef>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include "solvency/rational.hpp"

namespace solvency {

using StateId = std::size_t;
using ActionId = std::size_t;

/// Raised for malformed or invalid model documents.
class ModelError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct Outcome {
  StateId state;
  Rational probability;

  friend bool operator==(const Outcome&, const Outcome&) = default;
};

/// One enabled action at a state: its gain F(s,a) and sparse distribution T(s,a).
struct EnabledAction {
  ActionId action;
  Rational gain;
  std::vector<Outcome> distribution;  // support only, in state declaration order

  friend bool operator==(const EnabledAction&, const EnabledAction&) = default;
};

/// The (S, A, T, F) part shared by solvency and discounted MDPs. Immutable once built;
/// the constructor validates every structural invariant and throws ModelError.
class MdpStructure {
 public:
  MdpStructure(std::vector<std::string> states, std::vector<std::string> actions,
               std::vector<std::vector<EnabledAction>> enabled);

  std::size_t num_states() const { return states_.size(); }
  std::size_t num_actions() const { return actions_.size(); }
  const std::string& state_name(StateId s) const { return states_.at(s); }
  const std::string& action_name(ActionId a) const { return actions_.at(a); }
  const std::vector<std::string>& state_names() const { return states_; }
  const std::vector<std::string>& action_names() const { return actions_; }

  std::optional<StateId> find_state(std::string_view name) const;
  std::optional<ActionId> find_action(std::string_view name) const;
  /// Throws ModelError naming the unknown state.
  StateId state_index(std::string_view name) const;

  std::span<const EnabledAction> enabled(StateId s) const { return enabled_.at(s); }
  /// nullptr when a is not enabled at s.
  const EnabledAction* find_enabled(StateId s, ActionId a) const;

  /// max over (s,a) of |F(s,a)|.
  Rational max_abs_gain() const;

  friend bool operator==(const MdpStructure&, const MdpStructure&) = default;

 private:
  std::vector<std::string> states_;
  std::vector<std::string> actions_;
  std::vector<std::vector<EnabledAction>> enabled_;
};

/// Solvency MDP (S, A, T, F, rho): wealth evolves as x' = rho * x + F(s,a).
class SolvencyMdp : public MdpStructure {
 public:
  SolvencyMdp(MdpStructure structure, Rational rho);
  const Rational& rho() const { return rho_; }

  friend bool operator==(const SolvencyMdp&, const SolvencyMdp&) = default;

 private:
  Rational rho_;
};

/// Discounted MDP (S, A, T, F, beta) with 0 < beta < 1.
class DiscountedMdp : public MdpStructure {
 public:
  DiscountedMdp(MdpStructure structure, Rational beta);
  const Rational& beta() const { return beta_; }

  friend bool operator==(const DiscountedMdp&, const DiscountedMdp&) = default;

 private:
  Rational beta_;
};

using AnyMdp = std::variant<SolvencyMdp, DiscountedMdp>;

struct Configuration {
  StateId state;
  Rational wealth;

  friend bool operator==(const Configuration&, const Configuration&) = default;
};

/// Parses the JSON model document. Throws ModelError.
AnyMdp parse_model(std::string_view document);
/// Parses and converts a discounted document with rho = 1/beta if needed.
SolvencyMdp parse_solvency_model(std::string_view document);
/// Inverse of parse_model; rationals written as "p/q", declaration order kept.
std::string format_model(const AnyMdp& model, int indent = 2);

DiscountedMdp to_discounted(const SolvencyMdp& m);
SolvencyMdp to_solvency(const DiscountedMdp& d);

/// Winning from wealth x is the discounted threshold objective Thr(-x).
inline Rational wealth_to_threshold(const Rational& x) { return -x; }

}  // namespace solvency
