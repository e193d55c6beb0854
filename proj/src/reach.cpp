#include "solvency/reach.hpp"

#include <algorithm>
#include <limits>
#include <stdexcept>

namespace solvency {

std::size_t LayeredStrategy::KeyHash::operator()(const Key& k) const {
  std::size_t h = k.cls.upper.hash();
  h ^= (k.layer * 0x100000001b3ULL + k.cls.state) * 0x9e3779b97f4a7c15ULL + (h << 6) + (h >> 2);
  return h ^ static_cast<std::size_t>(k.cls.kind);
}

LayeredStrategy::LayeredStrategy(Configuration origin, Rational lambda, std::size_t horizon,
                                 BoundsTable bounds)
    : origin_(std::move(origin)),
      lambda_(std::move(lambda)),
      horizon_(horizon),
      bounds_(std::move(bounds)) {}

std::vector<std::pair<LayeredStrategy::Key, ActionId>> LayeredStrategy::sorted_choices() const {
  std::vector<std::pair<Key, ActionId>> out(choice_.begin(), choice_.end());
  std::sort(out.begin(), out.end(), [](const auto& a, const auto& b) {
    const auto& x = a.first;
    const auto& y = b.first;
    if (x.layer != y.layer) return x.layer < y.layer;
    if (x.cls.state != y.cls.state) return x.cls.state < y.cls.state;
    if (x.cls.kind != y.cls.kind) return x.cls.kind < y.cls.kind;
    return x.cls.upper < y.cls.upper;
  });
  return out;
}

LayeredStrategy::Cursor LayeredStrategy::start() const {
  Cursor c;
  c.cls = classify(bounds_, lambda_, origin_);
  c.absorbed = c.cls.absorbing() || horizon_ == 0;
  return c;
}

ActionId LayeredStrategy::action(const SolvencyMdp& m, StateId state, const Cursor& cursor) const {
  if (cursor.absorbed) return m.enabled(state).front().action;
  auto it = choice_.find(Key{cursor.layer, cursor.cls});
  if (it == choice_.end()) {
    throw std::logic_error("strategy undefined at layer " + std::to_string(cursor.layer) +
                           " for state '" + m.state_name(state) + "'");
  }
  return it->second;
}

LayeredStrategy::Cursor LayeredStrategy::advance(const SolvencyMdp& m, const Cursor& cursor,
                                                 const EnabledAction& played, StateId to) const {
  if (cursor.absorbed) return cursor;
  Cursor next;
  next.layer = cursor.layer + 1;
  next.cls = successor_class(m, bounds_, lambda_, cursor.cls, played, to);
  next.absorbed = next.cls.absorbing() || next.layer >= horizon_;
  return next;
}

ReachResult max_hit_probability(const UnfoldedMdp& dag, Arithmetic arithmetic,
                                std::size_t exact_budget) {
  const std::size_t n = dag.nodes.size();
  ReachResult r;
  r.exact = arithmetic == Arithmetic::exact ||
            (arithmetic == Arithmetic::automatic && dag.num_layers() * n <= exact_budget);
  r.node_choice.assign(n, std::nullopt);

  auto terminal = [&](NodeId v) { return dag.nodes[v].cls.kind == ClassKind::win ? 1 : 0; };

  if (r.exact) {
    r.node_values.assign(n, Rational());
    for (NodeId v = n; v-- > 0;) {
      if (dag.absorbing(v)) {
        r.node_values[v] = Rational(terminal(v));
        continue;
      }
      bool first = true;
      for (const auto& da : dag.nodes[v].actions) {
        Rational expect;
        for (const auto& e : da.successors) expect += e.probability * r.node_values[e.target];
        if (first || expect > r.node_values[v]) {
          r.node_values[v] = std::move(expect);
          r.node_choice[v] = da.action;
          first = false;
        }
      }
    }
    r.value = r.node_values[dag.initial()];
    r.value_float = r.value.to_double();
    return r;
  }

  // Float mode: successor terms summed in declaration order, so results are
  // reproducible. Each layer adds at most (support size + 1) roundings.
  std::vector<std::vector<double>> probs(n);
  std::size_t max_terms = 1;
  for (NodeId v = 0; v < n; ++v) {
    for (const auto& da : dag.nodes[v].actions) {
      max_terms = std::max(max_terms, da.successors.size() + 1);
    }
  }
  r.node_values_float.assign(n, 0.0);
  for (NodeId v = n; v-- > 0;) {
    if (dag.absorbing(v)) {
      r.node_values_float[v] = terminal(v);
      continue;
    }
    bool first = true;
    for (const auto& da : dag.nodes[v].actions) {
      double expect = 0.0;
      for (const auto& e : da.successors) {
        expect += e.probability.to_double() * r.node_values_float[e.target];
      }
      if (first || expect > r.node_values_float[v]) {
        r.node_values_float[v] = expect;
        r.node_choice[v] = da.action;
        first = false;
      }
    }
  }
  r.value_float = r.node_values_float[dag.initial()];
  r.float_error_bound = static_cast<double>(dag.num_layers() * max_terms) *
                        std::numeric_limits<double>::epsilon();
  return r;
}

LayeredStrategy lift_strategy(const ReachResult& result, const UnfoldedMdp& dag,
                              const BoundsTable& bounds, const Configuration& origin) {
  LayeredStrategy sigma(origin, dag.lambda, dag.horizon, bounds);
  for (NodeId v = 0; v < dag.nodes.size(); ++v) {
    if (result.node_choice[v]) {
      sigma.set_choice({dag.nodes[v].layer, dag.nodes[v].cls}, *result.node_choice[v]);
    }
  }
  return sigma;
}

}  // namespace solvency
