#include "solvency/approx.hpp"

#include <cmath>

namespace solvency {

namespace {

constexpr double float_guard_band = 0x1p-40;

/// Least k >= 1 with rho^k >= target, by doubling then bisection on k.
std::size_t least_power_reaching(const Rational& rho, const Rational& target) {
  if (rho >= target) return 1;
  std::size_t hi = 2;
  while (pow(rho, static_cast<long>(hi)) < target) hi *= 2;
  std::size_t lo = hi / 2;  // rho^lo < target <= rho^hi
  while (hi - lo > 1) {
    std::size_t mid = lo + (hi - lo) / 2;
    if (pow(rho, static_cast<long>(mid)) >= target) {
      hi = mid;
    } else {
      lo = mid;
    }
  }
  return hi;
}

Rational reciprocal_of_ceil(const Rational& x) {
  return Rational(1) / Rational(mpq_class(ceil(x)));
}

}  // namespace

ApproxParams compute_params(const Rational& rho, const Rational& spread, const Rational& epsilon) {
  if (epsilon.sign() <= 0) throw std::invalid_argument("epsilon must be positive");
  if (spread.sign() <= 0) {
    throw DegenerateQuery("U(M) = L(M): every configuration is winning or losing outright");
  }
  ApproxParams p;
  p.epsilon = epsilon;
  const Rational target = Rational(4) * spread / epsilon;
  p.short_circuit = rho >= target;
  p.horizon = least_power_reaching(rho, target);
  const Rational n(static_cast<long>(p.horizon));
  Rational denom = Rational(64) * n * spread * spread / (epsilon * epsilon * epsilon);
  if (p.short_circuit) {
    // One-step case: keep lambda * rho <= eps/2 even for very large rho.
    denom = max(denom, Rational(2) * rho / epsilon);
  }
  p.lambda = reciprocal_of_ceil(denom);
  if (n * p.lambda * pow(rho, static_cast<long>(p.horizon)) > epsilon / Rational(2)) {
    throw std::logic_error("approximation parameters violate n*lambda*rho^n <= eps/2");
  }
  return p;
}

ApproxParams compute_params(const SolvencyMdp& m, const BoundsTable& bounds,
                            const Rational& epsilon) {
  return compute_params(m.rho(), bounds.global_upper - bounds.global_lower, epsilon);
}

ValueApproxResult value_approx(const SolvencyMdp& m, const BoundsTable& bounds, StateId s0,
                               const Rational& x0, const Rational& epsilon,
                               const ApproxOptions& options) {
  if (epsilon.sign() <= 0) throw std::invalid_argument("epsilon must be positive");
  ValueApproxResult r;
  const Configuration origin{s0, x0 + epsilon / Rational(2)};
  r.execute_from = {s0, x0 + epsilon};

  if (origin.wealth >= bounds.upper.at(s0) || origin.wealth <= bounds.lower.at(s0)) {
    const bool win = origin.wealth >= bounds.upper[s0];
    r.v = Rational(win ? 1 : 0);
    r.v_float = win ? 1.0 : 0.0;
    r.strategy = LayeredStrategy(origin, Rational(1), 0, bounds);
    return r;
  }

  r.params = compute_params(m, bounds, epsilon);
  const ApproxParams& params = *r.params;

  if (params.short_circuit) {
    // Best one-step probability of landing on a rentier configuration.
    std::optional<ActionId> best;
    Rational best_p;
    for (const auto& ea : m.enabled(s0)) {
      Rational hit;
      for (const auto& o : ea.distribution) {
        if (m.rho() * origin.wealth + ea.gain >= bounds.upper[o.state]) hit += o.probability;
      }
      if (!best || hit > best_p) {
        best = ea.action;
        best_p = std::move(hit);
      }
    }
    r.strategy = LayeredStrategy(origin, params.lambda, 1, bounds);
    r.strategy.set_choice({0, classify(bounds, params.lambda, origin)}, *best);
    r.v = best_p;
    r.v_float = best_p.to_double();
    r.dag_nodes = 1;
    return r;
  }

  UnfoldedMdp dag = build_unfolded(m, bounds, params.lambda, params.horizon, origin,
                                   options.node_cap);
  ReachResult reach = max_hit_probability(dag, options.arithmetic, options.exact_budget);
  r.exact = reach.exact;
  r.v = reach.value;
  r.v_float = reach.value_float;
  r.float_error_bound = reach.float_error_bound;
  r.strategy = lift_strategy(reach, dag, bounds, origin);
  r.dag_nodes = dag.nodes.size();
  return r;
}

WrApproxResult approx_wr(const SolvencyMdp& m, const BoundsTable& bounds, StateId s,
                         const Rational& p, const Rational& delta, const ApproxOptions& options) {
  if (p.sign() < 0 || p > Rational(1)) throw std::invalid_argument("p must lie in [0,1]");
  if (p.is_zero()) throw DegenerateQuery("WR(s,0) = -inf: every wealth wins with probability >= 0");
  if (delta.sign() <= 0) throw std::invalid_argument("delta must be positive");

  WrApproxResult r;
  Rational a = bounds.lower.at(s);
  Rational b = bounds.upper.at(s);
  r.execute_from = {s, a};
  if (b - a <= delta) {
    r.a = a;
    r.b = b;
    r.strategy = LayeredStrategy({s, a}, Rational(1), 0, bounds);
    return r;
  }

  const double p_float = p.to_double();
  auto keep_going = [&] {
    return options.legacy_guard ? (b - a) / Rational(4) > delta : b - a > delta;
  };
  do {
    const Rational width = b - a;
    const Rational eps = width / Rational(4);
    const Rational y = a + width / Rational(2);
    ValueApproxResult va = value_approx(m, bounds, s, y, eps, options);
    // v < p certifies Val(s,y) < p, hence WR(s,p) >= y. Otherwise the strategy is
    // v-winning from y + eps, hence WR(s,p) <= y + eps.
    bool below;
    if (va.exact) {
      below = va.v < p;
    } else {
      below = va.v_float < p_float - float_guard_band;
      r.certified = false;
    }
    if (below) {
      a = y;
    } else {
      b = a + Rational(3) * width / Rational(4);
    }
    r.strategy = std::move(va.strategy);
    r.execute_from = va.execute_from;
    ++r.iterations;
  } while (keep_going());

  r.a = std::move(a);
  r.b = std::move(b);
  return r;
}

Rational var_approx(const DiscountedMdp& d, StateId s, const Rational& p, const Rational& delta,
                    const ApproxOptions& options) {
  const SolvencyMdp m = to_solvency(d);
  return -approx_wr(m, compute_bounds(m), s, p, delta, options).a;
}

}  // namespace solvency
