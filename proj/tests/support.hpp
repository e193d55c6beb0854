#pragma once

#include <cstdint>
#include <random>
#include <string>
#include <vector>

#include "solvency/model.hpp"

namespace testing {

using solvency::Rational;

inline const char* const example22_json = R"({ "kind": "solvency",
  "rho": "2/1",
  "states": ["s0","s1","s2"],
  "actions": {
    "s0": [ {"name":"work","gain":"2/1","dist":{"s0":"1/1"}},
            {"name":"invest","gain":"-10/1","dist":{"s1":"1/10","s2":"9/10"}} ],
    "s1": [ {"name":"profit","gain":"60/1","dist":{"s0":"1/1"}} ],
    "s2": [ {"name":"loss","gain":"0/1","dist":{"s0":"1/1"}} ] } })";

inline solvency::SolvencyMdp example22() { return solvency::parse_solvency_model(example22_json); }

inline std::string data_path(const std::string& name) {
  return std::string(SOLVENCY_TEST_DATA) + "/" + name;
}

/// Seeded generator of small random solvency MDPs with rational parameters.
class ModelGenerator {
 public:
  explicit ModelGenerator(std::uint64_t seed) : rng_(seed) {}

  int uniform(int lo, int hi) { return std::uniform_int_distribution<int>(lo, hi)(rng_); }

  Rational rational(int lo, int hi, int max_den) {
    const int den = uniform(1, max_den);
    return Rational(uniform(lo * den, hi * den), den);
  }

  Rational pick(const std::vector<Rational>& options) {
    return options[static_cast<std::size_t>(uniform(0, static_cast<int>(options.size()) - 1))];
  }

  /// Probabilities with random positive integer weights over a random support.
  std::vector<solvency::Outcome> distribution(std::size_t num_states) {
    std::vector<solvency::StateId> support;
    while (support.empty()) {
      for (solvency::StateId t = 0; t < num_states; ++t) {
        if (uniform(0, 1) == 1) support.push_back(t);
      }
    }
    std::vector<long> weights;
    long total = 0;
    for (std::size_t i = 0; i < support.size(); ++i) {
      weights.push_back(uniform(1, 4));
      total += weights.back();
    }
    std::vector<solvency::Outcome> out;
    for (std::size_t i = 0; i < support.size(); ++i) {
      out.push_back({support[i], Rational(weights[i], total)});
    }
    return out;
  }

  /// At most `max_states` states and `max_actions` actions per state; the first state
  /// enables every action so each declared action is used.
  solvency::SolvencyMdp model(std::size_t max_states = 3, std::size_t max_actions = 2) {
    const auto n = static_cast<std::size_t>(uniform(1, static_cast<int>(max_states)));
    const auto k = static_cast<std::size_t>(uniform(1, static_cast<int>(max_actions)));
    std::vector<std::string> states, actions;
    for (std::size_t i = 0; i < n; ++i) states.push_back("q" + std::to_string(i));
    for (std::size_t i = 0; i < k; ++i) actions.push_back("a" + std::to_string(i));
    std::vector<std::vector<solvency::EnabledAction>> enabled(n);
    for (std::size_t s = 0; s < n; ++s) {
      for (std::size_t a = 0; a < k; ++a) {
        if (s > 0 && a > 0 && uniform(0, 2) == 0) continue;
        enabled[s].push_back({a, rational(-6, 6, 3), distribution(n)});
      }
    }
    const Rational rho = pick({Rational(3, 2), Rational(2), Rational(5, 2), Rational(3),
                               Rational(4, 3), Rational(7, 4)});
    return solvency::SolvencyMdp(
        solvency::MdpStructure(std::move(states), std::move(actions), std::move(enabled)), rho);
  }

  std::mt19937_64& engine() { return rng_; }

 private:
  std::mt19937_64 rng_;
};

}  // namespace testing
