#include "solvency/oracle.hpp"

#include <exception>
#include <random>
#include <string>
#include <thread>
#include <unordered_map>

#include "solvency/unfold.hpp"

namespace solvency::oracle {

namespace {

void check_horizon(std::size_t horizon, std::size_t cap) {
  if (horizon > cap) {
    throw ResourceError("oracle horizon " + std::to_string(horizon) + " exceeds cap " +
                        std::to_string(cap));
  }
}

struct TreeKey {
  StateId state;
  Rational wealth;
  std::size_t depth;
  friend bool operator==(const TreeKey&, const TreeKey&) = default;
};

struct TreeKeyHash {
  std::size_t operator()(const TreeKey& k) const {
    return k.wealth.hash() ^ ((k.state * 0x9e3779b97f4a7c15ULL) + (k.depth << 20));
  }
};

class CoverSolver {
 public:
  CoverSolver(const SolvencyMdp& m, const BoundsTable& bounds, const Rational& slack,
              std::size_t horizon)
      : m_(m), bounds_(bounds), slack_(slack), horizon_(horizon) {}

  Rational solve(StateId s, const Rational& x, std::size_t depth) {
    if (x >= bounds_.upper[s] - slack_) return Rational(1);
    if (depth == horizon_) return Rational(0);
    TreeKey key{s, x, depth};
    if (auto it = memo_.find(key); it != memo_.end()) return it->second;
    Rational best;
    for (const auto& ea : m_.enabled(s)) {
      const Rational next_wealth = m_.rho() * x + ea.gain;
      Rational expect;
      for (const auto& o : ea.distribution) {
        expect += o.probability * solve(o.state, next_wealth, depth + 1);
      }
      best = max(best, expect);
    }
    memo_.emplace(std::move(key), best);
    return best;
  }

 private:
  const SolvencyMdp& m_;
  const BoundsTable& bounds_;
  const Rational& slack_;
  std::size_t horizon_;
  std::unordered_map<TreeKey, Rational, TreeKeyHash> memo_;
};

Rational strategy_value(const SolvencyMdp& m, const BoundsTable& bounds,
                        const LayeredStrategy& sigma, StateId s, const Rational& x,
                        const LayeredStrategy::Cursor& cursor, const Rational& slack,
                        std::size_t depth, std::size_t horizon) {
  if (x >= bounds.upper[s] - slack) return Rational(1);
  if (depth == horizon) return Rational(0);
  const ActionId a = sigma.action(m, s, cursor);
  const EnabledAction* ea = m.find_enabled(s, a);
  if (ea == nullptr) throw std::logic_error("strategy plays a disabled action");
  const Rational next_wealth = m.rho() * x + ea->gain;
  Rational expect;
  for (const auto& o : ea->distribution) {
    expect += o.probability * strategy_value(m, bounds, sigma, o.state, next_wealth,
                                             sigma.advance(m, cursor, *ea, o.state), slack,
                                             depth + 1, horizon);
  }
  return expect;
}

/// Cumulative thresholds floor(P(first k outcomes) * 2^64) of one distribution.
std::vector<std::uint64_t> cumulative_thresholds(const EnabledAction& ea) {
  static const mpz_class two64 = mpz_class(1) << 64;
  std::vector<std::uint64_t> out;
  Rational cum;
  for (std::size_t i = 0; i + 1 < ea.distribution.size(); ++i) {
    cum += ea.distribution[i].probability;
    mpz_class t = floor(cum * Rational(mpq_class(two64)));
    out.push_back(t >= two64 ? UINT64_MAX : static_cast<std::uint64_t>(mpz_get_ui(t.get_mpz_t())));
  }
  return out;
}

}  // namespace

Rational cover_probability(const SolvencyMdp& m, const BoundsTable& bounds, const CoverQuery& q,
                           std::size_t horizon_cap) {
  check_horizon(q.horizon, horizon_cap);
  if (q.slack.sign() < 0) throw std::invalid_argument("cover slack must be nonnegative");
  CoverSolver solver(m, bounds, q.slack, q.horizon);
  return solver.solve(q.start.state, q.start.wealth, 0);
}

Rational strategy_win_probability(const SolvencyMdp& m, const BoundsTable& bounds,
                                  const LayeredStrategy& sigma, const Configuration& start,
                                  const Rational& slack, std::size_t horizon,
                                  std::size_t horizon_cap) {
  check_horizon(horizon, horizon_cap);
  return strategy_value(m, bounds, sigma, start.state, start.wealth, sigma.start(), slack, 0,
                        horizon);
}

std::pair<Rational, Rational> worst_case_discounted(const SolvencyMdp& m,
                                                    const ObliviousStrategy& sigma, StateId s,
                                                    std::size_t k) {
  const Rational beta = Rational(1) / m.rho();
  std::vector<Rational> w(m.num_states());
  for (std::size_t step = 0; step < k; ++step) {
    std::vector<Rational> next(m.num_states());
    for (StateId t = 0; t < m.num_states(); ++t) {
      const EnabledAction* ea = m.find_enabled(t, sigma.choice.at(t));
      if (ea == nullptr) throw std::invalid_argument("oblivious strategy plays a disabled action");
      Rational worst = beta * (ea->gain + w[ea->distribution.front().state]);
      for (const auto& o : ea->distribution) worst = min(worst, beta * (ea->gain + w[o.state]));
      next[t] = std::move(worst);
    }
    w.swap(next);
  }
  const Rational tail =
      m.max_abs_gain() * pow(beta, static_cast<long>(k + 1)) / (Rational(1) - beta);
  return {w[s] - tail, w[s] + tail};
}

std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

double simulate(const SolvencyMdp& m, const BoundsTable& bounds, const AnyStrategy& sigma,
                const Configuration& start, const SimulationSpec& spec) {
  if (spec.steps == 0 || spec.trials == 0) {
    throw std::invalid_argument("simulation needs at least one step and one trial");
  }
  std::vector<std::vector<std::vector<std::uint64_t>>> thresholds(m.num_states());
  for (StateId s = 0; s < m.num_states(); ++s) {
    for (const auto& ea : m.enabled(s)) thresholds[s].push_back(cumulative_thresholds(ea));
  }
  const auto* layered = std::get_if<LayeredStrategy>(&sigma);
  const auto* oblivious = std::get_if<ObliviousStrategy>(&sigma);

  auto run_trial = [&](std::size_t trial) -> bool {
    std::mt19937_64 rng(splitmix64(spec.seed + trial));
    StateId s = start.state;
    Rational x = start.wealth;
    LayeredStrategy::Cursor cursor;
    if (layered) cursor = layered->start();
    for (std::size_t step = 0;; ++step) {
      if (x >= bounds.upper[s]) return true;
      // Strictly below L no rentier configuration is reachable any more.
      if (x < bounds.lower[s] || step == spec.steps) return false;
      const ActionId a = layered ? layered->action(m, s, cursor) : oblivious->choice.at(s);
      auto actions = m.enabled(s);
      std::size_t idx = 0;
      while (idx < actions.size() && actions[idx].action != a) ++idx;
      if (idx == actions.size()) throw std::logic_error("strategy plays a disabled action");
      const EnabledAction& ea = actions[idx];
      const std::uint64_t u = rng();
      const auto& th = thresholds[s][idx];
      std::size_t k = 0;
      while (k < th.size() && u >= th[k]) ++k;
      const StateId to = ea.distribution[k].state;
      if (layered) cursor = layered->advance(m, cursor, ea, to);
      x = m.rho() * x + ea.gain;
      s = to;
    }
  };

  const std::size_t workers = std::max<std::size_t>(1, std::min(spec.threads, spec.trials));
  std::vector<std::size_t> hits(workers, 0);
  std::vector<std::exception_ptr> failures(workers);
  auto work = [&](std::size_t w) {
    try {
      for (std::size_t t = w; t < spec.trials; t += workers) hits[w] += run_trial(t) ? 1 : 0;
    } catch (...) {
      failures[w] = std::current_exception();
    }
  };
  if (workers == 1) {
    work(0);
  } else {
    std::vector<std::jthread> pool;
    for (std::size_t w = 0; w < workers; ++w) pool.emplace_back(work, w);
  }
  for (const auto& f : failures) {
    if (f) std::rethrow_exception(f);
  }
  std::size_t total = 0;
  for (auto h : hits) total += h;
  return static_cast<double>(total) / static_cast<double>(spec.trials);
}

}  // namespace solvency::oracle
