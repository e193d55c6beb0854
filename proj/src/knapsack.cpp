#include "solvency/knapsack.hpp"

#include <optional>
#include <string>

#include <json.hpp>

#include "solvency/bounds.hpp"

namespace solvency::knapsack {

namespace {

Rational sum_values(const Instance& k) {
  Rational total;
  for (const auto& item : k.items) total += item.value;
  return total;
}

std::int64_t sum_weights(const Instance& k) {
  std::int64_t total = 0;
  for (const auto& item : k.items) total += item.weight;
  return total;
}

void validate(const Instance& k) {
  if (k.items.size() < 2) throw std::invalid_argument("knapsack gadget needs at least two items");
  if (k.items.size() > 62) throw std::invalid_argument("too many items for the gadget");
  for (const auto& item : k.items) {
    if (item.weight <= 0) throw std::invalid_argument("item weights must be positive integers");
    if (item.value.sign() <= 0) throw std::invalid_argument("item values must be positive");
  }
}

}  // namespace

Gadget gen_gadget(const Instance& instance, GainScale scale) {
  validate(instance);
  const long n = static_cast<long>(instance.items.size());
  const Rational n_sq(n * n);
  const Rational alpha = Rational(1) / n_sq;

  Instance k = instance;
  const Rational v_tot = sum_values(k);
  if (v_tot >= alpha) {
    const Rational divisor = v_tot * n_sq;
    for (auto& item : k.items) item.value /= divisor;
    k.value_bound /= divisor;
  }

  const Rational p = Rational(1) + k.value_bound - Rational(1) / Rational(n);
  if (p > Rational(1)) {
    throw Unsolvable("knapsack target p = " + p.str() + " exceeds 1: V > v_tot, no solution");
  }

  const Rational rho = Rational(1) + Rational(1) / (Rational(4) * n_sq);
  if (pow(rho, 2 * n) / Rational(4) > Rational(1, 2)) {
    throw std::logic_error("gadget interest rate violates rho^(2n)/4 <= 1/2");
  }
  const std::int64_t w_tot = sum_weights(k);
  const Rational gain_divisor =
      scale == GainScale::divided_by_w_total ? Rational(static_cast<long>(w_tot)) : Rational(1);

  // State layout: s_i, s_i+, s_i- at 3(i-1) .. 3(i-1)+2, then s_{n+1}, t1, t2, t3.
  auto s_plain = [](long i) { return static_cast<StateId>(3 * (i - 1)); };
  auto s_plus = [](long i) { return static_cast<StateId>(3 * (i - 1) + 1); };
  auto s_minus = [](long i) { return static_cast<StateId>(3 * (i - 1) + 2); };
  const StateId s_last = static_cast<StateId>(3 * n);
  const StateId t1 = s_last + 1, t2 = s_last + 2, t3 = s_last + 3;

  std::vector<std::string> states;
  std::vector<std::string> actions;
  for (long i = 1; i <= n; ++i) {
    states.push_back("s" + std::to_string(i));
    states.push_back("s" + std::to_string(i) + "+");
    states.push_back("s" + std::to_string(i) + "-");
    actions.push_back("a" + std::to_string(i) + "+");
    actions.push_back("a" + std::to_string(i) + "-");
  }
  states.push_back("s" + std::to_string(n + 1));
  states.insert(states.end(), {"t1", "t2", "t3"});
  actions.push_back("b");
  const ActionId b = actions.size() - 1;

  std::vector<std::vector<EnabledAction>> enabled(states.size());
  for (long i = 1; i <= n; ++i) {
    const auto& item = k.items[static_cast<std::size_t>(i - 1)];
    const ActionId plus = static_cast<ActionId>(2 * (i - 1));
    const ActionId minus = plus + 1;
    enabled[s_plain(i)] = {{plus, Rational(), {{s_plus(i), Rational(1)}}},
                           {minus, Rational(), {{s_minus(i), Rational(1)}}}};

    const Rational remaining = Rational(1) - Rational(i - 1) * alpha;
    const Rational onward = Rational(1) - alpha / remaining;
    const StateId next = i == n ? s_last : s_plain(i + 1);
    enabled[s_plus(i)] = {{b, Rational(),
                           {{t1, item.value / remaining},
                            {t2, (alpha - item.value) / remaining},
                            {next, onward}}}};
    const Rational pay = Rational(static_cast<long>(item.weight)) * pow(rho, -2 * (n - i));
    enabled[s_minus(i)] = {{b, pay / gain_divisor, {{t3, alpha / remaining}, {next, onward}}}};
  }
  const Rational penalty = Rational(-2) * Rational(static_cast<long>(w_tot + 1)) / gain_divisor;
  enabled[s_last] = {{b,
                      -Rational(static_cast<long>(w_tot - k.weight_bound)) /
                          (Rational(4) * n_sq) / gain_divisor,
                      {{s_last, Rational(1)}}}};
  enabled[t1] = {{b, Rational(1) / gain_divisor, {{t1, Rational(1)}}}};
  enabled[t2] = {{b, penalty, {{t2, Rational(1)}}}};
  enabled[t3] = {{b, penalty, {{t3, Rational(1)}}}};

  MdpStructure structure(std::move(states), std::move(actions), std::move(enabled));
  return Gadget{SolvencyMdp(std::move(structure), rho), s_plain(1), p, std::move(k)};
}

bool solvable_by_enumeration(const Instance& instance) {
  const std::size_t n = instance.items.size();
  if (n >= 63) throw std::invalid_argument("too many items to enumerate");
  for (std::uint64_t mask = 0; mask < (std::uint64_t{1} << n); ++mask) {
    std::int64_t weight = 0;
    Rational value;
    for (std::size_t i = 0; i < n; ++i) {
      if (mask >> i & 1U) {
        weight += instance.items[i].weight;
        value += instance.items[i].value;
      }
    }
    if (weight <= instance.weight_bound && value >= instance.value_bound) return true;
  }
  return false;
}

bool decide_via_solver(const Instance& instance, const ApproxOptions& options) {
  std::optional<Gadget> gadget;
  try {
    gadget.emplace(gen_gadget(instance));
  } catch (const Unsolvable&) {
    return false;
  }
  const Gadget& g = *gadget;
  const BoundsTable bounds = compute_bounds(g.mdp);
  const WrApproxResult wr = approx_wr(g.mdp, bounds, g.start, g.p, Rational(1, 8), options);
  return wr.a < Rational(1, 8);
}

Instance parse_instance(std::string_view document) {
  using nlohmann::json;
  json doc;
  try {
    doc = json::parse(document);
  } catch (const json::parse_error& e) {
    throw ModelError(std::string("malformed knapsack JSON: ") + e.what());
  }
  auto rational = [](const json& j, const char* what) {
    if (j.is_number_integer()) return Rational(j.get<long>());
    if (!j.is_string()) throw ModelError(std::string(what) + " must be an integer or \"p/q\"");
    try {
      return Rational::parse(j.get<std::string>());
    } catch (const std::invalid_argument& e) {
      throw ModelError(std::string(what) + ": " + e.what());
    }
  };
  auto integer = [](const json& j, const char* what) {
    if (!j.is_number_integer()) throw ModelError(std::string(what) + " must be an integer");
    return j.get<std::int64_t>();
  };
  if (!doc.is_object() || !doc.contains("items") || !doc.contains("W") || !doc.contains("V")) {
    throw ModelError("knapsack instance needs \"items\", \"W\" and \"V\"");
  }
  Instance k;
  for (const auto& item : doc.at("items")) {
    if (!item.is_object() || !item.contains("w") || !item.contains("v")) {
      throw ModelError("knapsack item needs \"w\" and \"v\"");
    }
    k.items.push_back({integer(item.at("w"), "item weight"), rational(item.at("v"), "item value")});
  }
  k.weight_bound = integer(doc.at("W"), "W");
  k.value_bound = rational(doc.at("V"), "V");
  return k;
}

}  // namespace solvency::knapsack
