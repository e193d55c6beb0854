#pragma once

#include <cstdint>
#include <string_view>
#include <vector>

#include "solvency/approx.hpp"
#include "solvency/model.hpp"

namespace solvency::knapsack {

struct Item {
  std::int64_t weight;  // positive integer
  Rational value;       // positive
};

struct Instance {
  std::vector<Item> items;  // at least two
  std::int64_t weight_bound = 0;
  Rational value_bound;
};

/// Raised when the target probability exceeds 1, i.e. V > v_tot: no solution exists.
class Unsolvable : public DegenerateQuery {
 public:
  using DegenerateQuery::DegenerateQuery;
};

enum class GainScale {
  standard,           // gains as in the weight-encoding reduction
  divided_by_w_total  // every gain divided by w_tot (bounded-reward variant)
};

/// Solvency MDP with states s1, s1+, s1-, ..., sn, sn+, sn-, s{n+1}, t1, t2, t3
/// (in that order) and actions a1+, a1-, ..., an+, an-, b. Item values live in the
/// probabilities of reaching t1; item weights are paid out at s_i-.
struct Gadget {
  SolvencyMdp mdp;
  StateId start;        // s1
  Rational p;           // 1 + V - 1/n after rescaling
  Instance rescaled;    // the instance after value rescaling
};

/// Throws std::invalid_argument on n < 2 or non-positive weights/values, and
/// Unsolvable when p > 1.
Gadget gen_gadget(const Instance& instance, GainScale scale = GainScale::standard);

/// Brute force over all 2^n item subsets.
bool solvable_by_enumeration(const Instance& instance);

/// Decides the instance through the solver: approximates WR(s1, p) with delta = 1/8
/// and accepts iff the approximation is below 1/8 (solvable instances have WR <= 0,
/// unsolvable ones WR >= 1/4).
bool decide_via_solver(const Instance& instance, const ApproxOptions& options = {});

/// JSON {"items":[{"w":int,"v":"p/q"}], "W":int, "V":"p/q"}.
Instance parse_instance(std::string_view document);

}  // namespace solvency::knapsack
