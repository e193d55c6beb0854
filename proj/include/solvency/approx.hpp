#pragma once

#include <cstddef>
#include <optional>
#include <stdexcept>

#include "solvency/bounds.hpp"
#include "solvency/model.hpp"
#include "solvency/reach.hpp"
#include "solvency/unfold.hpp"

namespace solvency {

/// Signals a query whose answer is degenerate rather than computable, e.g. WR(s,0).
class DegenerateQuery : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Horizon and grid for one value approximation.
///   horizon n:     least n >= 1 with rho^n >= 4 (U(M) - L(M)) / epsilon
///   grid lambda:   1 / ceil(64 n (U(M) - L(M))^2 / epsilon^3)
///   short_circuit: rho >= 4 (U(M) - L(M)) / epsilon, i.e. one step suffices
/// Construction checks n * lambda * rho^n <= epsilon / 2.
struct ApproxParams {
  Rational epsilon;
  std::size_t horizon = 1;
  Rational lambda;
  bool short_circuit = false;
};

/// `spread` is U(M) - L(M) > 0.
ApproxParams compute_params(const Rational& rho, const Rational& spread, const Rational& epsilon);
ApproxParams compute_params(const SolvencyMdp& m, const BoundsTable& bounds, const Rational& epsilon);

struct ApproxOptions {
  Arithmetic arithmetic = Arithmetic::automatic;
  std::size_t node_cap = default_node_cap;
  std::size_t exact_budget = default_exact_budget;
  /// Stop the bisection once (b - a) / 4 <= delta instead of b - a <= delta.
  bool legacy_guard = false;
};

struct ValueApproxResult {
  bool exact = true;
  Rational v;             // exact mode
  double v_float = 0.0;   // both modes
  double float_error_bound = 0.0;
  LayeredStrategy strategy;      // origin (s0, x0 + eps/2)
  Configuration execute_from;    // (s0, x0 + eps)
  std::optional<ApproxParams> params;  // empty when the origin class is absorbing
  std::size_t dag_nodes = 0;
};

/// v >= Val(s0, x0), and `strategy` executed from (s0, x0 + eps) wins with
/// probability >= v. Throws ResourceError if the unfolding exceeds the node cap.
ValueApproxResult value_approx(const SolvencyMdp& m, const BoundsTable& bounds, StateId s0,
                               const Rational& x0, const Rational& epsilon,
                               const ApproxOptions& options = {});

struct WrApproxResult {
  Rational a;  // approximation of WR(s,p); lower end of the final bracket
  Rational b;  // upper end of the final bracket
  LayeredStrategy strategy;
  Configuration execute_from;
  std::size_t iterations = 0;
  bool certified = true;  // every branch decided in exact arithmetic
};

/// Bisection for WR(s,p) with absolute error delta. Throws DegenerateQuery for p = 0
/// and std::invalid_argument for p outside [0,1] or delta <= 0.
WrApproxResult approx_wr(const SolvencyMdp& m, const BoundsTable& bounds, StateId s,
                         const Rational& p, const Rational& delta,
                         const ApproxOptions& options = {});

/// Value-at-risk threshold of a discounted MDP: -approx_wr(to_solvency(d), ...).a.
Rational var_approx(const DiscountedMdp& d, StateId s, const Rational& p, const Rational& delta,
                    const ApproxOptions& options = {});

}  // namespace solvency
