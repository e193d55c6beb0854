#pragma once

#include <cstddef>
#include <stdexcept>
#include <vector>

#include "solvency/bounds.hpp"
#include "solvency/model.hpp"

namespace solvency {

/// Thrown when a construction would exceed its configured node budget.
class ResourceError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

enum class ClassKind { win, lose, interval };

/// A lambda-equivalence class of configurations of one state.
///   win:      wealth >= U(M,s)
///   lose:     wealth <= L(M,s)   (and below U)
///   interval: the grid cell (k*lambda, (k+1)*lambda] clipped to (L(M,s), U(M,s));
///             `upper` is its right endpoint min((k+1)*lambda, U(M,s)).
struct WealthClass {
  StateId state = 0;
  ClassKind kind = ClassKind::lose;
  Rational upper;  // meaningful for interval classes only

  bool absorbing() const { return kind != ClassKind::interval; }
  friend bool operator==(const WealthClass&, const WealthClass&) = default;
};

WealthClass classify(const BoundsTable& bounds, const Rational& lambda, const Configuration& c);

using NodeId = std::size_t;

struct DagEdge {
  NodeId target;
  Rational probability;
};

struct DagAction {
  ActionId action;
  std::vector<DagEdge> successors;
};

struct DagNode {
  WealthClass cls;
  std::size_t layer = 0;
  std::vector<DagAction> actions;  // empty exactly when the node is absorbing
};

/// Reachable part of the unfolded MDP M_{lambda,n}: a layered DAG whose nodes are
/// (class, layer) pairs. Nodes are stored layer by layer; node 0 is the initial node.
struct UnfoldedMdp {
  Rational lambda;
  std::size_t horizon = 0;
  std::vector<DagNode> nodes;
  std::vector<std::size_t> layer_begin;  // nodes of layer i are [layer_begin[i], layer_begin[i+1])

  NodeId initial() const { return 0; }
  std::size_t num_layers() const { return layer_begin.size() - 1; }
  bool absorbing(NodeId v) const {
    return nodes[v].cls.absorbing() || nodes[v].layer == horizon;
  }
};

inline constexpr std::size_t default_node_cap = 5'000'000;

/// Class reached from interval class `from` of state s after playing `ea` and moving
/// to `to`: the class of (to, rho * upper + F(s,a)).
WealthClass successor_class(const SolvencyMdp& m, const BoundsTable& bounds,
                            const Rational& lambda, const WealthClass& from,
                            const EnabledAction& ea, StateId to);

/// Forward BFS from the class of `start` through `horizon` layers. Throws
/// ResourceError when the node count would exceed `node_cap`.
UnfoldedMdp build_unfolded(const SolvencyMdp& m, const BoundsTable& bounds,
                           const Rational& lambda, std::size_t horizon,
                           const Configuration& start, std::size_t node_cap = default_node_cap);

}  // namespace solvency
