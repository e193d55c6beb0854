#include "solvency/unfold.hpp"

#include <string>
#include <unordered_map>

namespace solvency {

namespace {

struct ClassKey {
  StateId state;
  ClassKind kind;
  Rational upper;
  friend bool operator==(const ClassKey&, const ClassKey&) = default;
};

struct ClassKeyHash {
  std::size_t operator()(const ClassKey& k) const {
    std::size_t h = k.upper.hash();
    h ^= k.state * 0x9e3779b97f4a7c15ULL + (h << 6) + (h >> 2);
    return h ^ static_cast<std::size_t>(k.kind);
  }
};

}  // namespace

WealthClass classify(const BoundsTable& bounds, const Rational& lambda, const Configuration& c) {
  if (lambda.sign() <= 0) throw std::domain_error("grid step lambda must be positive");
  const Rational& upper = bounds.upper.at(c.state);
  if (c.wealth >= upper) return {c.state, ClassKind::win, {}};
  if (c.wealth <= bounds.lower.at(c.state)) return {c.state, ClassKind::lose, {}};
  return {c.state, ClassKind::interval, min(ceil_to_multiple(c.wealth, lambda), upper)};
}

WealthClass successor_class(const SolvencyMdp& m, const BoundsTable& bounds,
                            const Rational& lambda, const WealthClass& from,
                            const EnabledAction& ea, StateId to) {
  return classify(bounds, lambda, {to, m.rho() * from.upper + ea.gain});
}

UnfoldedMdp build_unfolded(const SolvencyMdp& m, const BoundsTable& bounds,
                           const Rational& lambda, std::size_t horizon,
                           const Configuration& start, std::size_t node_cap) {
  if (horizon == 0) throw std::invalid_argument("unfolding horizon must be at least 1");
  UnfoldedMdp dag;
  dag.lambda = lambda;
  dag.horizon = horizon;
  dag.nodes.push_back({classify(bounds, lambda, start), 0, {}});
  dag.layer_begin = {0, 1};

  for (std::size_t layer = 0; layer < horizon; ++layer) {
    const std::size_t begin = dag.layer_begin[layer];
    const std::size_t end = dag.layer_begin[layer + 1];
    std::unordered_map<ClassKey, NodeId, ClassKeyHash> next_layer;
    for (NodeId v = begin; v < end; ++v) {
      if (dag.nodes[v].cls.absorbing()) continue;
      const WealthClass from = dag.nodes[v].cls;
      std::vector<DagAction> actions;
      for (const auto& ea : m.enabled(from.state)) {
        DagAction da{ea.action, {}};
        for (const auto& o : ea.distribution) {
          WealthClass to = successor_class(m, bounds, lambda, from, ea, o.state);
          ClassKey key{to.state, to.kind, to.upper};
          auto [it, fresh] = next_layer.try_emplace(std::move(key), dag.nodes.size());
          if (fresh) {
            if (dag.nodes.size() >= node_cap) {
              throw ResourceError("unfolded MDP exceeds node cap " + std::to_string(node_cap) +
                                  " at layer " + std::to_string(layer + 1) + " (" +
                                  std::to_string(dag.nodes.size()) + " nodes built)");
            }
            dag.nodes.push_back({std::move(to), layer + 1, {}});
          }
          da.successors.push_back({it->second, o.probability});
        }
        actions.push_back(std::move(da));
      }
      dag.nodes[v].actions = std::move(actions);
    }
    if (dag.nodes.size() == end) break;  // frontier exhausted
    dag.layer_begin.push_back(dag.nodes.size());
  }
  return dag;
}

}  // namespace solvency
