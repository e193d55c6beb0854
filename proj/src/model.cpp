#include "solvency/model.hpp"

#include <algorithm>
#include <set>

namespace solvency {

MdpStructure::MdpStructure(std::vector<std::string> states, std::vector<std::string> actions,
                           std::vector<std::vector<EnabledAction>> enabled)
    : states_(std::move(states)), actions_(std::move(actions)), enabled_(std::move(enabled)) {
  if (states_.empty()) throw ModelError("model has no states");
  if (enabled_.size() != states_.size()) {
    throw ModelError("enabled-action table does not match the state list");
  }
  std::set<std::string_view> seen(states_.begin(), states_.end());
  if (seen.size() != states_.size()) throw ModelError("duplicate state id");
  std::set<std::string_view> seen_actions(actions_.begin(), actions_.end());
  if (seen_actions.size() != actions_.size()) throw ModelError("duplicate action id");

  for (StateId s = 0; s < states_.size(); ++s) {
    auto& here = enabled_[s];
    if (here.empty()) throw ModelError("state '" + states_[s] + "' has no enabled action");
    std::set<ActionId> used;
    for (auto& ea : here) {
      if (ea.action >= actions_.size()) throw ModelError("action index out of range");
      if (!used.insert(ea.action).second) {
        throw ModelError("action '" + actions_[ea.action] + "' enabled twice at '" +
                         states_[s] + "'");
      }
      const std::string where = "(" + states_[s] + ", " + actions_[ea.action] + ")";
      if (ea.distribution.empty()) throw ModelError("empty distribution at " + where);
      std::sort(ea.distribution.begin(), ea.distribution.end(),
                [](const Outcome& a, const Outcome& b) { return a.state < b.state; });
      Rational total;
      for (std::size_t i = 0; i < ea.distribution.size(); ++i) {
        const auto& o = ea.distribution[i];
        if (o.state >= states_.size()) throw ModelError("successor out of range at " + where);
        if (i > 0 && ea.distribution[i - 1].state == o.state) {
          throw ModelError("repeated successor at " + where);
        }
        if (o.probability.sign() <= 0 || o.probability > Rational(1)) {
          throw ModelError("probability outside (0,1] at " + where);
        }
        total += o.probability;
      }
      if (total != Rational(1)) {
        throw ModelError("distribution does not sum to 1 at " + where + " (sum " + total.str() +
                         ")");
      }
    }
  }
}

std::optional<StateId> MdpStructure::find_state(std::string_view name) const {
  auto it = std::find(states_.begin(), states_.end(), name);
  if (it == states_.end()) return std::nullopt;
  return static_cast<StateId>(it - states_.begin());
}

std::optional<ActionId> MdpStructure::find_action(std::string_view name) const {
  auto it = std::find(actions_.begin(), actions_.end(), name);
  if (it == actions_.end()) return std::nullopt;
  return static_cast<ActionId>(it - actions_.begin());
}

StateId MdpStructure::state_index(std::string_view name) const {
  if (auto s = find_state(name)) return *s;
  throw ModelError("unknown state '" + std::string(name) + "'");
}

const EnabledAction* MdpStructure::find_enabled(StateId s, ActionId a) const {
  for (const auto& ea : enabled(s)) {
    if (ea.action == a) return &ea;
  }
  return nullptr;
}

Rational MdpStructure::max_abs_gain() const {
  Rational best;
  for (const auto& here : enabled_) {
    for (const auto& ea : here) best = max(best, abs(ea.gain));
  }
  return best;
}

SolvencyMdp::SolvencyMdp(MdpStructure structure, Rational rho)
    : MdpStructure(std::move(structure)), rho_(std::move(rho)) {
  if (rho_ <= Rational(1)) throw ModelError("interest rate rho must exceed 1, got " + rho_.str());
}

DiscountedMdp::DiscountedMdp(MdpStructure structure, Rational beta)
    : MdpStructure(std::move(structure)), beta_(std::move(beta)) {
  if (beta_.sign() <= 0 || beta_ >= Rational(1)) {
    throw ModelError("discount beta must lie in (0,1), got " + beta_.str());
  }
}

DiscountedMdp to_discounted(const SolvencyMdp& m) {
  return DiscountedMdp(static_cast<const MdpStructure&>(m), Rational(1) / m.rho());
}

SolvencyMdp to_solvency(const DiscountedMdp& d) {
  return SolvencyMdp(static_cast<const MdpStructure&>(d), Rational(1) / d.beta());
}

}  // namespace solvency
