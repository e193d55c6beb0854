#include <doctest.h>

#include <cmath>

#include "solvency/approx.hpp"
#include "solvency/bounds.hpp"
#include "solvency/oracle.hpp"
#include "solvency/qualitative.hpp"
#include "support.hpp"

using namespace solvency;

TEST_SUITE("oracle") {
  TEST_CASE("invest example cover from (s0,-2) is 1/10 at several horizons") {
    const SolvencyMdp m = testing::example22();
    const BoundsTable b = compute_bounds(m);
    // invest reaches (s1,-14), already above U(s1) = -80/3; work stays at -2.
    for (std::size_t n : {1U, 2U, 5U, 10U}) {
      CHECK(oracle::cover_probability(m, b, {{0, Rational(-2)}, Rational(0), n}) == Rational(1, 10));
    }
  }

  TEST_CASE("rentier start covers at any horizon") {
    const SolvencyMdp m = testing::example22();
    const BoundsTable b = compute_bounds(m);
    for (std::size_t n : {1U, 4U}) {
      CHECK(oracle::cover_probability(m, b, {{0, Rational(20, 3)}, Rational(0), n}) == Rational(1));
    }
  }

  TEST_CASE("work compounds -3/2 upward past 20/3") {
    const SolvencyMdp m = testing::example22();
    const BoundsTable b = compute_bounds(m);
    const std::size_t n = compute_params(m, b, Rational(1)).horizon;
    CHECK(oracle::cover_probability(m, b, {{0, Rational(-3, 2)}, Rational(0), n}) == Rational(1));
  }

  TEST_CASE("horizon cap") {
    const SolvencyMdp m = testing::example22();
    const BoundsTable b = compute_bounds(m);
    CHECK_THROWS_AS(oracle::cover_probability(m, b, {{0, Rational(0)}, Rational(0), 15}),
                    ResourceError);
  }

  TEST_CASE("cover is monotone in slack, horizon and wealth") {
    testing::ModelGenerator gen(71);
    for (int i = 0; i < 100; ++i) {
      const SolvencyMdp m = gen.model();
      const BoundsTable b = compute_bounds(m);
      const Rational x = gen.rational(-10, 10, 4);
      const std::size_t n = static_cast<std::size_t>(gen.uniform(1, 4));
      const Rational base = oracle::cover_probability(m, b, {{0, x}, Rational(0), n});
      CHECK(oracle::cover_probability(m, b, {{0, x}, Rational(1, 2), n}) >= base);
      CHECK(oracle::cover_probability(m, b, {{0, x}, Rational(0), n + 1}) >= base);
      CHECK(oracle::cover_probability(m, b, {{0, x + Rational(1, 3)}, Rational(0), n}) >= base);
    }
  }

  TEST_CASE("strategy evaluation on invest example") {
    const SolvencyMdp m = testing::example22();
    const BoundsTable b = compute_bounds(m);
    const ValueApproxResult r = value_approx(m, b, 0, Rational(-10), Rational(1, 2));
    REQUIRE(r.params.has_value());
    const std::size_t n = r.params->horizon;
    const Rational slack = Rational(static_cast<long>(n)) * r.params->lambda *
                           pow(m.rho(), static_cast<long>(n));
    CHECK(oracle::strategy_win_probability(m, b, r.strategy, r.strategy.origin(), slack, n) >= r.v);
    CHECK(oracle::strategy_win_probability(m, b, r.strategy,
                                           {0, r.strategy.origin().wealth + Rational(1, 4)},
                                           Rational(0), n) >= r.v);
    CHECK(oracle::strategy_win_probability(m, b, r.strategy, {0, Rational(10)}, Rational(0), n) ==
          Rational(1));
  }

  TEST_CASE("worst-case discounted bracket") {
    const SolvencyMdp m = testing::example22();
    const ObliviousStrategy work{{0, 2, 3}};
    const auto [lo, hi] = oracle::worst_case_discounted(m, work, 0, 30);
    CHECK(lo <= Rational(2));
    CHECK(Rational(2) <= hi);
    const Rational beta(1, 2);
    CHECK(hi - lo == Rational(2) * m.max_abs_gain() * pow(beta, 31) / (Rational(1) - beta));

    const char* doc = R"({"kind":"solvency","rho":"2/1","states":["s"],
      "actions":{"s":[{"name":"a","gain":"0/1","dist":{"s":"1/1"}}]}})";
    const SolvencyMdp zero = parse_solvency_model(doc);
    const auto [zl, zh] = oracle::worst_case_discounted(zero, ObliviousStrategy{{0}}, 0, 10);
    CHECK(zl == -zh);
    CHECK(zl <= Rational(0));
  }

  TEST_CASE("qualitative strategy soundness: worst-case reward brackets V") {
    testing::ModelGenerator gen(73);
    for (int i = 0; i < 150; ++i) {
      const SolvencyMdp m = gen.model(6, 2);
      const QualitativeResult q = solve_qualitative(m);
      const std::size_t k = m.rho() < Rational(3, 2) ? 60 : 40;
      for (StateId s = 0; s < m.num_states(); ++s) {
        const auto [lo, hi] = oracle::worst_case_discounted(m, q.strategy, s, k);
        CHECK(lo <= q.worst_case_value[s]);
        CHECK(q.worst_case_value[s] <= hi);
      }
    }
  }

  TEST_CASE("Markov chains: qualitative value equals worst-case evaluation") {
    testing::ModelGenerator gen(79);
    for (int i = 0; i < 100; ++i) {
      const SolvencyMdp m = gen.model(6, 1);
      const QualitativeResult q = solve_qualitative(m);
      ObliviousStrategy only;
      for (StateId s = 0; s < m.num_states(); ++s) only.choice.push_back(m.enabled(s).front().action);
      for (StateId s = 0; s < m.num_states(); ++s) {
        const auto [lo, hi] = oracle::worst_case_discounted(m, only, s, 60);
        CHECK(lo <= q.worst_case_value[s]);
        CHECK(q.worst_case_value[s] <= hi);
      }
    }
  }

  TEST_CASE("simulation: win start, invest example rate, determinism and thread independence") {
    const SolvencyMdp m = testing::example22();
    const BoundsTable b = compute_bounds(m);
    const ObliviousStrategy work{{0, 2, 3}};
    CHECK(oracle::simulate(m, b, work, {0, Rational(10)}, {5, 100, 1, 1}) == 1.0);

    const ValueApproxResult r = value_approx(m, b, 0, Rational(-10), Rational(1, 2));
    const oracle::SimulationSpec spec{100, 10000, 42, 1};
    const double rate = oracle::simulate(m, b, r.strategy, r.execute_from, spec);
    const double exact = oracle::strategy_win_probability(m, b, r.strategy, r.execute_from,
                                                          Rational(0), 14)
                             .to_double();
    CHECK(exact == doctest::Approx(0.1));
    CHECK(std::abs(rate - exact) <= 3 * std::sqrt(exact * (1 - exact) / 10000));
    CHECK(oracle::simulate(m, b, r.strategy, r.execute_from, spec) == rate);
    CHECK(oracle::simulate(m, b, r.strategy, r.execute_from, {100, 10000, 42, 4}) == rate);
    CHECK_THROWS_AS(oracle::simulate(m, b, work, {0, Rational(0)}, {0, 1, 0, 1}),
                    std::invalid_argument);
  }

  TEST_CASE("splitmix64 reference values") {
    // First outputs of the reference splitmix64 stream seeded with 0.
    CHECK(oracle::splitmix64(0) == 0xe220a8397b1dcdafULL);
  }
}
