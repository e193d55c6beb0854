#include <doctest.h>

#include <set>

#include "solvency/bounds.hpp"
#include "solvency/oracle.hpp"
#include "solvency/reach.hpp"
#include "solvency/unfold.hpp"
#include "support.hpp"

using namespace solvency;

TEST_SUITE("unfold") {
  TEST_CASE("classify on invest example with lambda = 1") {
    const SolvencyMdp m = testing::example22();
    const BoundsTable b = compute_bounds(m);
    const WealthClass c = classify(b, Rational(1), {0, Rational(-2)});
    CHECK(c.kind == ClassKind::interval);
    CHECK(c.upper == Rational(-2));
    CHECK(classify(b, Rational(1), {0, Rational(7)}).kind == ClassKind::win);
    CHECK(classify(b, Rational(1), {0, Rational(-27, 2)}).kind == ClassKind::lose);
    CHECK(classify(b, Rational(1), {0, Rational(-40, 3)}).kind == ClassKind::lose);
    // Rentier boundary belongs to the win class.
    CHECK(classify(b, Rational(1), {0, Rational(20, 3)}).kind == ClassKind::win);
    // Top cell clipped at U.
    const WealthClass top = classify(b, Rational(1), {0, Rational(13, 2)});
    CHECK(top.kind == ClassKind::interval);
    CHECK(top.upper == Rational(20, 3));
    CHECK(classify(b, Rational(1, 3), {0, Rational(-1, 2)}).upper == Rational(-1, 3));
  }

  TEST_CASE("interval classes: L < upper <= U, cell of length <= lambda containing x") {
    testing::ModelGenerator gen(3);
    for (int i = 0; i < 300; ++i) {
      const SolvencyMdp m = gen.model();
      const BoundsTable b = compute_bounds(m);
      const Rational lambda = gen.pick({Rational(1), Rational(1, 3), Rational(2, 5), Rational(7)});
      const StateId s = static_cast<StateId>(gen.uniform(0, static_cast<int>(m.num_states()) - 1));
      const Rational x = gen.rational(-30, 30, 6);
      const WealthClass c = classify(b, lambda, {s, x});
      if (x >= b.upper[s]) {
        CHECK(c.kind == ClassKind::win);
      } else if (x <= b.lower[s]) {
        CHECK(c.kind == ClassKind::lose);
      } else {
        REQUIRE(c.kind == ClassKind::interval);
        CHECK(b.lower[s] < c.upper);
        CHECK(c.upper <= b.upper[s]);
        CHECK(x <= c.upper);
        CHECK(c.upper - x < lambda);
        CHECK(c.upper == min(ceil_to_multiple(x, lambda), b.upper[s]));
      }
    }
  }

  TEST_CASE("win start gives a single absorbing node") {
    const SolvencyMdp m = testing::example22();
    const BoundsTable b = compute_bounds(m);
    const UnfoldedMdp dag = build_unfolded(m, b, Rational(1), 6, {0, Rational(10)});
    CHECK(dag.nodes.size() == 1);
    CHECK(dag.absorbing(0));
    CHECK(dag.nodes[0].actions.empty());
  }

  TEST_CASE("invest example, lambda 1, n 2 from (s0,-2)") {
    const SolvencyMdp m = testing::example22();
    const BoundsTable b = compute_bounds(m);
    const UnfoldedMdp dag = build_unfolded(m, b, Rational(1), 2, {0, Rational(-2)});
    REQUIRE(dag.num_layers() == 3);
    const DagNode& root = dag.nodes[0];
    REQUIRE(root.actions.size() == 2);
    const DagAction& invest = root.actions[1];
    CHECK(m.action_name(invest.action) == "invest");
    REQUIRE(invest.successors.size() == 2);
    const DagNode& to_s1 = dag.nodes[invest.successors[0].target];
    const DagNode& to_s2 = dag.nodes[invest.successors[1].target];
    CHECK(to_s1.cls.state == 1);
    // -14 lies above U(s1) = -80/3, so the class is already winning.
    CHECK(to_s1.cls.kind == ClassKind::win);
    CHECK(invest.successors[0].probability == Rational(1, 10));
    CHECK(to_s2.cls.state == 2);
    CHECK(to_s2.cls.kind == ClassKind::lose);
    CHECK(invest.successors[1].probability == Rational(9, 10));
    // Work keeps the class at upper -2.
    const DagNode& work_next = dag.nodes[root.actions[0].successors[0].target];
    CHECK(work_next.cls.upper == Rational(-2));
    CHECK(work_next.layer == 1);
  }

  TEST_CASE("layer discipline, absorption and edge probabilities on random models") {
    testing::ModelGenerator gen(17);
    for (int i = 0; i < 150; ++i) {
      const SolvencyMdp m = gen.model();
      const BoundsTable b = compute_bounds(m);
      const Rational lambda = gen.pick({Rational(1), Rational(1, 4), Rational(3, 2)});
      const std::size_t n = static_cast<std::size_t>(gen.uniform(1, 5));
      const Configuration start{0, gen.rational(-15, 15, 4)};
      const UnfoldedMdp dag = build_unfolded(m, b, lambda, n, start);
      CHECK(dag.nodes[0].cls == classify(b, lambda, start));
      std::vector<bool> reached(dag.nodes.size(), false);
      reached[0] = true;
      for (NodeId v = 0; v < dag.nodes.size(); ++v) {
        const DagNode& node = dag.nodes[v];
        CHECK(v >= dag.layer_begin[node.layer]);
        CHECK(v < dag.layer_begin[node.layer + 1]);
        CHECK(node.actions.empty() == dag.absorbing(v));
        if (node.actions.empty()) continue;
        CHECK(node.actions.size() == m.enabled(node.cls.state).size());
        for (std::size_t k = 0; k < node.actions.size(); ++k) {
          const auto& ea = m.enabled(node.cls.state)[k];
          const auto& da = node.actions[k];
          CHECK(da.action == ea.action);
          REQUIRE(da.successors.size() == ea.distribution.size());
          for (std::size_t j = 0; j < da.successors.size(); ++j) {
            const DagNode& t = dag.nodes[da.successors[j].target];
            CHECK(t.layer == node.layer + 1);
            CHECK(da.successors[j].probability == ea.distribution[j].probability);
            CHECK(t.cls == successor_class(m, b, lambda, node.cls, ea, ea.distribution[j].state));
            reached[da.successors[j].target] = true;
          }
        }
      }
      for (bool r : reached) CHECK(r);
    }
  }

  TEST_CASE("rounding dominance: 0 <= upper - exact wealth <= (i+1) lambda rho^i") {
    testing::ModelGenerator gen(29);
    for (int run = 0; run < 300; ++run) {
      const SolvencyMdp m = gen.model();
      const BoundsTable b = compute_bounds(m);
      const Rational lambda = gen.pick({Rational(1), Rational(1, 5), Rational(2, 3)});
      StateId s = static_cast<StateId>(gen.uniform(0, static_cast<int>(m.num_states()) - 1));
      Rational x = gen.rational(-10, 10, 5);
      WealthClass c = classify(b, lambda, {s, x});
      for (long i = 0; i < 8 && c.kind == ClassKind::interval; ++i) {
        CHECK(c.upper >= x);
        CHECK(c.upper - x <= Rational(i + 1) * lambda * pow(m.rho(), i));
        auto acts = m.enabled(s);
        const auto& ea = acts[static_cast<std::size_t>(gen.uniform(0, static_cast<int>(acts.size()) - 1))];
        const StateId t = ea.distribution[static_cast<std::size_t>(
                                              gen.uniform(0, static_cast<int>(ea.distribution.size()) - 1))]
                              .state;
        c = successor_class(m, b, lambda, c, ea, t);
        x = m.rho() * x + ea.gain;
        s = t;
        // The exact run never sits in a better class than its shadow.
        if (c.kind == ClassKind::lose) CHECK(x <= b.lower[s]);
        if (x >= b.upper[s]) CHECK(c.kind == ClassKind::win);
      }
    }
  }

  TEST_CASE("node cap raises ResourceError naming the layer") {
    const SolvencyMdp m = testing::example22();
    const BoundsTable b = compute_bounds(m);
    try {
      build_unfolded(m, b, Rational(1, 1000000), 40, {0, Rational(-2)}, 10);
      FAIL("expected ResourceError");
    } catch (const ResourceError& e) {
      CHECK(std::string(e.what()).find("layer") != std::string::npos);
    }
  }

  TEST_CASE("dyadic probe: every depth n <= 20 reaches a fresh odd-numerator wealth in (0,1)") {
    const char* doc = R"({"kind":"solvency","rho":"3/2","states":["s"],
      "actions":{"s":[{"name":"up","gain":"1/2","dist":{"s":"1/1"}},
                      {"name":"down","gain":"-1/2","dist":{"s":"1/1"}}]}})";
    const SolvencyMdp m = parse_solvency_model(doc);
    const BoundsTable b = compute_bounds(m);
    CHECK(b.global_lower == Rational(-1));
    CHECK(b.global_upper == Rational(1));
    // Depth counts configurations on the path, the start (s,1/2) = 1/2^1 being depth 1.
    std::set<Rational> frontier{Rational(1, 2)};
    std::set<Rational> seen = frontier;
    for (long n = 1; n <= 20; ++n) {
      if (n > 1) {
        std::set<Rational> next;
        for (const auto& x : frontier) {
          for (const auto& ea : m.enabled(0)) next.insert(m.rho() * x + ea.gain);
        }
        frontier = std::move(next);
      }
      const mpz_class pow2 = mpz_class(1) << static_cast<unsigned>(n);
      bool found = false;
      for (const auto& x : frontier) {
        if (x.denominator() == pow2 && mpz_odd_p(x.numerator().get_mpz_t()) && x.sign() > 0 &&
            x < Rational(1) && (n == 1 || !seen.contains(x))) {
          found = true;
        }
      }
      CAPTURE(n);
      CHECK(found);
      seen.insert(frontier.begin(), frontier.end());
    }
  }
}

TEST_SUITE("reach") {
  TEST_CASE("absorbing initial nodes") {
    const SolvencyMdp m = testing::example22();
    const BoundsTable b = compute_bounds(m);
    const ReachResult win = max_hit_probability(build_unfolded(m, b, Rational(1), 3, {0, Rational(7)}));
    CHECK(win.value == Rational(1));
    CHECK_FALSE(win.node_choice[0].has_value());
    const ReachResult lose =
        max_hit_probability(build_unfolded(m, b, Rational(1), 3, {0, Rational(-14)}));
    CHECK(lose.value == Rational(0));
  }

  TEST_CASE("Bellman residual is zero at every node") {
    testing::ModelGenerator gen(41);
    for (int i = 0; i < 100; ++i) {
      const SolvencyMdp m = gen.model();
      const BoundsTable b = compute_bounds(m);
      const UnfoldedMdp dag =
          build_unfolded(m, b, Rational(1, 2), static_cast<std::size_t>(gen.uniform(1, 5)),
                         {0, gen.rational(-10, 10, 3)});
      const ReachResult r = max_hit_probability(dag, Arithmetic::exact);
      CHECK(r.exact);
      for (NodeId v = 0; v < dag.nodes.size(); ++v) {
        if (dag.absorbing(v)) {
          CHECK(r.node_values[v] == Rational(dag.nodes[v].cls.kind == ClassKind::win ? 1 : 0));
          continue;
        }
        Rational best;
        for (const auto& da : dag.nodes[v].actions) {
          Rational e;
          for (const auto& edge : da.successors) e += edge.probability * r.node_values[edge.target];
          best = max(best, e);
        }
        CHECK(best == r.node_values[v]);
        REQUIRE(r.node_choice[v].has_value());
      }
    }
  }

  TEST_CASE("float mode tracks exact mode within its error bound") {
    testing::ModelGenerator gen(43);
    for (int i = 0; i < 100; ++i) {
      const SolvencyMdp m = gen.model();
      const BoundsTable b = compute_bounds(m);
      const UnfoldedMdp dag = build_unfolded(m, b, Rational(1, 3), 5, {0, gen.rational(-10, 10, 3)});
      const ReachResult e = max_hit_probability(dag, Arithmetic::exact);
      const ReachResult f = max_hit_probability(dag, Arithmetic::floating);
      CHECK_FALSE(f.exact);
      CHECK(std::abs(e.value.to_double() - f.value_float) <= f.float_error_bound + 1e-15);
      const ReachResult f2 = max_hit_probability(dag, Arithmetic::floating);
      CHECK(f.value_float == f2.value_float);
    }
  }

  TEST_CASE("automatic mode switches on the exact budget") {
    const SolvencyMdp m = testing::example22();
    const BoundsTable b = compute_bounds(m);
    const UnfoldedMdp dag = build_unfolded(m, b, Rational(1, 4), 6, {0, Rational(-5)});
    CHECK(max_hit_probability(dag, Arithmetic::automatic).exact);
    CHECK_FALSE(max_hit_probability(dag, Arithmetic::automatic, 1).exact);
  }

  TEST_CASE("monotone in initial wealth") {
    testing::ModelGenerator gen(47);
    for (int i = 0; i < 60; ++i) {
      const SolvencyMdp m = gen.model();
      const BoundsTable b = compute_bounds(m);
      const Rational lambda = gen.pick({Rational(1), Rational(1, 2)});
      Rational prev = -1;
      for (int k = -12; k <= 12; ++k) {
        const Rational v = max_hit_probability(build_unfolded(m, b, lambda, 4, {0, Rational(k, 2)})).value;
        CHECK(v >= prev);
        prev = v;
      }
    }
  }

  TEST_CASE("deterministic chain: the lifted strategy is the unique action sequence") {
    const char* doc = R"({"kind":"solvency","rho":"2/1","states":["a","b"],
      "actions":{"a":[{"name":"go","gain":"1/1","dist":{"b":"1/1"}}],
                 "b":[{"name":"back","gain":"-1/1","dist":{"a":"1/1"}}]}})";
    const SolvencyMdp m = parse_solvency_model(doc);
    const BoundsTable b = compute_bounds(m);
    const Configuration origin{0, Rational(0)};
    const UnfoldedMdp dag = build_unfolded(m, b, Rational(1, 8), 4, origin);
    const ReachResult r = max_hit_probability(dag);
    const LayeredStrategy sigma = lift_strategy(r, dag, b, origin);
    for (const auto& [key, action] : sigma.sorted_choices()) {
      CHECK(action == m.enabled(key.cls.state).front().action);
    }
  }

  TEST_CASE("cover-hit sandwich on invest example from (s0,-2)") {
    const SolvencyMdp m = testing::example22();
    const BoundsTable b = compute_bounds(m);
    for (std::size_t n = 1; n <= 5; ++n) {
      const Rational lambda(1, 4);
      const Configuration start{0, Rational(-2)};
      const Rational hit = max_hit_probability(build_unfolded(m, b, lambda, n, start)).value;
      const Rational lo = oracle::cover_probability(m, b, {start, Rational(0), n});
      const Rational slack = Rational(static_cast<long>(n)) * lambda * pow(m.rho(), static_cast<long>(n));
      const Rational hi = oracle::cover_probability(m, b, {start, slack, n});
      CHECK(lo <= hit);
      CHECK(hit <= hi);
    }
  }
}
