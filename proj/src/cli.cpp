#include "solvency/cli.hpp"

#include <chrono>
#include <cstdlib>
#include <fstream>
#include <iomanip>
#include <ostream>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <openssl/evp.h>

#include "solvency/approx.hpp"
#include "solvency/bounds.hpp"
#include "solvency/knapsack.hpp"
#include "solvency/oracle.hpp"
#include "solvency/qualitative.hpp"
#include "solvency/serialize.hpp"

namespace solvency {

namespace {

class UsageError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ModelError("cannot read '" + path + "'");
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

void write_file(const std::string& path, const std::string& content) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw UsageError("cannot write '" + path + "'");
  out << content;
  if (!out) throw UsageError("failed writing '" + path + "'");
}

std::string sha256_hex(const std::vector<std::string>& parts) {
  EVP_MD_CTX* ctx = EVP_MD_CTX_new();
  if (ctx == nullptr) throw std::runtime_error("EVP_MD_CTX_new failed");
  EVP_DigestInit_ex(ctx, EVP_sha256(), nullptr);
  for (const auto& p : parts) EVP_DigestUpdate(ctx, p.data(), p.size());
  unsigned char digest[EVP_MAX_MD_SIZE];
  unsigned int len = 0;
  EVP_DigestFinal_ex(ctx, digest, &len);
  EVP_MD_CTX_free(ctx);
  std::ostringstream hex;
  for (unsigned int i = 0; i < len; ++i) {
    hex << std::hex << std::setw(2) << std::setfill('0') << static_cast<int>(digest[i]);
  }
  return hex.str();
}

Rational rational_arg(const std::string& text, const char* flag) {
  try {
    return Rational::parse(text);
  } catch (const std::invalid_argument& e) {
    throw UsageError(std::string(flag) + ": " + e.what());
  }
}

Rational probability_arg(const std::string& text) {
  Rational p = rational_arg(text, "--prob");
  if (p.sign() < 0 || p > Rational(1)) throw UsageError("--prob must lie in [0,1]");
  return p;
}

Rational positive_arg(const std::string& text, const char* flag) {
  Rational r = rational_arg(text, flag);
  if (r.sign() <= 0) throw UsageError(std::string(flag) + " must be positive");
  return r;
}

// Everything the subcommands parse into.
struct Args {
  std::string model_path;
  std::string state;
  std::string prob;
  std::string delta;
  std::string wealth;
  std::string eps;
  std::string lambda;
  std::size_t horizon = 0;
  bool exact = false;
  bool floating = false;
  bool legacy_guard = false;
  std::size_t max_nodes = default_node_cap;
  std::size_t exact_budget = default_exact_budget;
  std::string strategy_out;
  std::string strategy_in;
  bool value_iteration = false;
  bool dump = false;
  std::size_t steps = 100;
  std::size_t trials = 1000;
  std::uint64_t seed = 0;
  std::string output;
  bool scaled_rewards = false;
};

struct CommandOutput {
  Json result;
  bool certified = true;
  std::vector<std::string> inputs;  // contents hashed into input_sha256
};

ApproxOptions approx_options(const Args& args) {
  if (args.exact && args.floating) throw UsageError("--exact and --float are exclusive");
  ApproxOptions opt;
  opt.arithmetic = args.exact      ? Arithmetic::exact
                   : args.floating ? Arithmetic::floating
                                   : Arithmetic::automatic;
  opt.node_cap = args.max_nodes;
  opt.exact_budget = args.exact_budget;
  opt.legacy_guard = args.legacy_guard;
  return opt;
}

std::size_t thread_count() {
  const char* env = std::getenv("SOLVENCY_THREADS");
  if (env == nullptr || *env == '\0') return 1;
  try {
    const long n = std::stol(env);
    if (n < 1) throw UsageError("SOLVENCY_THREADS must be a positive integer");
    return static_cast<std::size_t>(n);
  } catch (const std::logic_error&) {
    throw UsageError("SOLVENCY_THREADS must be a positive integer");
  }
}

CommandOutput cmd_validate(const Args& args) {
  CommandOutput o;
  o.inputs.push_back(read_file(args.model_path));
  const AnyMdp model = parse_model(o.inputs.back());
  std::visit(
      [&](const auto& m) {
        using T = std::decay_t<decltype(m)>;
        std::size_t pairs = 0;
        for (StateId s = 0; s < m.num_states(); ++s) pairs += m.enabled(s).size();
        o.result = Json{{"valid", true}, {"states", m.num_states()},
                        {"actions", m.num_actions()}, {"state_action_pairs", pairs}};
        if constexpr (std::is_same_v<T, SolvencyMdp>) {
          o.result["kind"] = "solvency";
          o.result["rho"] = m.rho().str();
        } else {
          o.result["kind"] = "discounted";
          o.result["beta"] = m.beta().str();
        }
      },
      model);
  return o;
}

CommandOutput cmd_bounds(const Args& args) {
  CommandOutput o;
  o.inputs.push_back(read_file(args.model_path));
  const SolvencyMdp m = parse_solvency_model(o.inputs.back());
  o.result = to_json(m, compute_bounds(m));
  return o;
}

CommandOutput cmd_qualitative(const Args& args) {
  CommandOutput o;
  o.inputs.push_back(read_file(args.model_path));
  const SolvencyMdp m = parse_solvency_model(o.inputs.back());
  const QualitativeResult q = solve_qualitative(m);
  o.result = to_json(m, q);
  if (args.value_iteration) {
    const auto v = qualitative_value_iteration(m, 1e-9);
    Json check = Json::object();
    for (StateId s = 0; s < m.num_states(); ++s) check[m.state_name(s)] = -v[s];
    o.result = Json{{"exact", o.result}, {"value_iteration_wr1", check}};
  }
  return o;
}

void emit_strategy(CommandOutput& o, const Args& args, const SolvencyMdp& m,
                   const LayeredStrategy& sigma) {
  Json doc = to_json(m, sigma);
  if (args.strategy_out.empty()) {
    o.result["strategy"] = std::move(doc);
  } else {
    write_file(args.strategy_out, doc.dump(2) + "\n");
    o.result["strategy_file"] = args.strategy_out;
  }
}

CommandOutput cmd_wr(const Args& args) {
  CommandOutput o;
  o.inputs.push_back(read_file(args.model_path));
  const SolvencyMdp m = parse_solvency_model(o.inputs.back());
  const StateId s = m.state_index(args.state);
  const Rational p = probability_arg(args.prob);
  const Rational delta = positive_arg(args.delta, "--delta");
  const ApproxOptions opt = approx_options(args);
  const BoundsTable bounds = compute_bounds(m);
  const WrApproxResult r = approx_wr(m, bounds, s, p, delta, opt);
  o.certified = r.certified;
  o.result = Json{{"state", args.state},
                  {"p", p.str()},
                  {"delta", delta.str()},
                  {"wr", r.a.str()},
                  {"bracket", Json::array({r.a.str(), r.b.str()})},
                  {"iterations", r.iterations},
                  {"execute_from", to_json(m, r.execute_from)}};
  emit_strategy(o, args, m, r.strategy);
  return o;
}

CommandOutput cmd_value(const Args& args) {
  CommandOutput o;
  o.inputs.push_back(read_file(args.model_path));
  const SolvencyMdp m = parse_solvency_model(o.inputs.back());
  const StateId s = m.state_index(args.state);
  const Rational x0 = rational_arg(args.wealth, "--wealth");
  const Rational eps = positive_arg(args.eps, "--eps");
  const BoundsTable bounds = compute_bounds(m);
  const ValueApproxResult r = value_approx(m, bounds, s, x0, eps, approx_options(args));
  o.certified = r.exact;
  o.result = Json{{"state", args.state}, {"wealth", x0.str()}, {"eps", eps.str()}};
  if (r.exact) {
    o.result["v"] = r.v.str();
  } else {
    o.result["v_float"] = r.v_float;
    o.result["float_error_bound"] = r.float_error_bound;
  }
  o.result["execute_from"] = to_json(m, r.execute_from);
  o.result["params"] = r.params ? to_json(*r.params) : Json(nullptr);
  o.result["dag_nodes"] = r.dag_nodes;
  emit_strategy(o, args, m, r.strategy);
  return o;
}

CommandOutput cmd_var(const Args& args) {
  CommandOutput o;
  o.inputs.push_back(read_file(args.model_path));
  const AnyMdp model = parse_model(o.inputs.back());
  const SolvencyMdp m = std::holds_alternative<SolvencyMdp>(model)
                            ? std::get<SolvencyMdp>(model)
                            : to_solvency(std::get<DiscountedMdp>(model));
  const StateId s = m.state_index(args.state);
  const Rational p = probability_arg(args.prob);
  const Rational delta = positive_arg(args.delta, "--delta");
  const WrApproxResult r = approx_wr(m, compute_bounds(m), s, p, delta, approx_options(args));
  o.certified = r.certified;
  o.result = Json{{"state", args.state},
                  {"p", p.str()},
                  {"delta", delta.str()},
                  {"var", wealth_to_threshold(r.a).str()},
                  {"iterations", r.iterations}};
  return o;
}

CommandOutput cmd_unfold(const Args& args) {
  CommandOutput o;
  o.inputs.push_back(read_file(args.model_path));
  const SolvencyMdp m = parse_solvency_model(o.inputs.back());
  const Configuration start{m.state_index(args.state), rational_arg(args.wealth, "--wealth")};
  const BoundsTable bounds = compute_bounds(m);
  Rational lambda;
  std::size_t horizon = args.horizon;
  if (!args.eps.empty()) {
    if (!args.lambda.empty() || args.horizon != 0) {
      throw UsageError("give either --eps or --lambda/--horizon");
    }
    const ApproxParams params = compute_params(m, bounds, positive_arg(args.eps, "--eps"));
    lambda = params.lambda;
    horizon = params.horizon;
  } else {
    if (args.lambda.empty() || args.horizon == 0) {
      throw UsageError("unfold needs --eps, or --lambda together with --horizon");
    }
    lambda = positive_arg(args.lambda, "--lambda");
  }
  const UnfoldedMdp dag = build_unfolded(m, bounds, lambda, horizon, start, args.max_nodes);
  Json summary = unfold_summary(dag);
  if (!args.dump) summary.erase("layers");
  const ReachResult hit = max_hit_probability(dag, approx_options(args).arithmetic,
                                              args.exact_budget);
  o.certified = hit.exact;
  o.result = std::move(summary);
  if (hit.exact) {
    o.result["hit"] = hit.value.str();
  } else {
    o.result["hit_float"] = hit.value_float;
  }
  return o;
}

CommandOutput cmd_simulate(const Args& args) {
  CommandOutput o;
  o.inputs.push_back(read_file(args.model_path));
  const SolvencyMdp m = parse_solvency_model(o.inputs.back());
  const BoundsTable bounds = compute_bounds(m);
  oracle::SimulationSpec spec{args.steps, args.trials, args.seed, thread_count()};
  o.certified = false;
  double rate = 0.0;
  std::string strategy_kind;
  if (!args.strategy_in.empty()) {
    o.inputs.push_back(read_file(args.strategy_in));
    Json doc;
    try {
      doc = Json::parse(o.inputs.back());
    } catch (const Json::parse_error& e) {
      throw ModelError(std::string("malformed strategy JSON: ") + e.what());
    }
    const LayeredStrategy sigma = strategy_from_json(m, bounds, doc);
    rate = oracle::simulate(m, bounds, sigma, sigma.origin(), spec);
    o.result["start"] = to_json(m, sigma.origin());
    strategy_kind = "layered";
  } else {
    const Configuration start{m.state_index(args.state), rational_arg(args.wealth, "--wealth")};
    rate = oracle::simulate(m, bounds, solve_qualitative(m).strategy, start, spec);
    o.result["start"] = to_json(m, start);
    strategy_kind = "qualitative";
  }
  o.result["strategy"] = strategy_kind;
  o.result["steps"] = args.steps;
  o.result["trials"] = args.trials;
  o.result["seed"] = args.seed;
  o.result["win_rate"] = rate;
  return o;
}

CommandOutput cmd_gen_knapsack(const Args& args) {
  CommandOutput o;
  o.inputs.push_back(read_file(args.model_path));
  const knapsack::Instance instance = knapsack::parse_instance(o.inputs.back());
  const auto scale = args.scaled_rewards ? knapsack::GainScale::divided_by_w_total
                                         : knapsack::GainScale::standard;
  const knapsack::Gadget g = [&] {
    try {
      return knapsack::gen_gadget(instance, scale);
    } catch (const knapsack::Unsolvable&) {
      throw;
    } catch (const std::invalid_argument& e) {
      throw ModelError(e.what());
    }
  }();
  const std::string model = format_model(g.mdp);
  o.result = Json{{"p", g.p.str()}, {"rho", g.mdp.rho().str()}, {"start", g.mdp.state_name(g.start)}};
  if (args.output.empty()) {
    o.result["model"] = Json::parse(model);
  } else {
    write_file(args.output, model + "\n");
    o.result["model_file"] = args.output;
  }
  return o;
}

}  // namespace

int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Solver for solvency MDPs with interest", "solvency"};
  app.require_subcommand(1);
  Args args;

  auto model_arg = [&](CLI::App* sub, const char* what = "model JSON file") {
    sub->add_option("MODEL", args.model_path, what)->required();
  };
  auto arithmetic_flags = [&](CLI::App* sub) {
    sub->add_flag("--exact", args.exact, "exact rational arithmetic throughout");
    sub->add_flag("--float", args.floating, "double-precision backward induction");
    sub->add_option("--max-nodes", args.max_nodes, "unfolding node cap")
        ->capture_default_str();
    sub->add_option("--exact-budget", args.exact_budget,
                    "automatic mode stays exact while depth * nodes <= budget")
        ->capture_default_str();
  };

  auto* validate = app.add_subcommand("validate", "check a model document");
  model_arg(validate);

  auto* bounds = app.add_subcommand("bounds", "exact L(M,s) and U(M,s)");
  model_arg(bounds);

  auto* qualitative = app.add_subcommand("qualitative", "exact WR(s,1) and an oblivious strategy");
  model_arg(qualitative);
  qualitative->add_flag("--value-iteration", args.value_iteration,
                        "add a floating-point value-iteration cross-check");

  auto* wr = app.add_subcommand("wr", "approximate WR(s,p)");
  model_arg(wr);
  wr->add_option("--state", args.state)->required();
  wr->add_option("--prob", args.prob, "p/q")->required();
  wr->add_option("--delta", args.delta, "p/q")->required();
  wr->add_flag("--legacy-guard", args.legacy_guard, "stop once (b - a)/4 <= delta");
  wr->add_option("--strategy-out", args.strategy_out, "write the strategy JSON here");
  arithmetic_flags(wr);

  auto* value = app.add_subcommand("value", "approximate Val(s,x)");
  model_arg(value);
  value->add_option("--state", args.state)->required();
  value->add_option("--wealth", args.wealth, "p/q")->required();
  value->add_option("--eps", args.eps, "p/q")->required();
  value->add_option("--strategy-out", args.strategy_out, "write the strategy JSON here");
  arithmetic_flags(value);

  auto* var = app.add_subcommand("var", "value-at-risk threshold of a discounted MDP");
  model_arg(var);
  var->add_option("--state", args.state)->required();
  var->add_option("--prob", args.prob, "p/q")->required();
  var->add_option("--delta", args.delta, "p/q")->required();
  var->add_flag("--legacy-guard", args.legacy_guard, "stop once (b - a)/4 <= delta");
  arithmetic_flags(var);

  auto* unfold = app.add_subcommand("unfold", "build the unfolded MDP and report its shape");
  model_arg(unfold);
  unfold->add_option("--state", args.state)->required();
  unfold->add_option("--wealth", args.wealth, "p/q")->required();
  unfold->add_option("--eps", args.eps, "derive lambda and horizon from epsilon");
  unfold->add_option("--lambda", args.lambda, "p/q");
  unfold->add_option("--horizon", args.horizon);
  unfold->add_flag("--dump", args.dump, "per-layer node and class counts");
  arithmetic_flags(unfold);

  auto* simulate = app.add_subcommand("simulate", "Monte-Carlo win rate of a strategy");
  model_arg(simulate);
  simulate->add_option("--state", args.state);
  simulate->add_option("--wealth", args.wealth, "p/q");
  simulate->add_option("--strategy", args.strategy_in,
                       "layered strategy JSON (default: the qualitative strategy)");
  simulate->add_option("--steps", args.steps)->capture_default_str();
  simulate->add_option("--trials", args.trials)->capture_default_str();
  simulate->add_option("--seed", args.seed)->capture_default_str();

  auto* gen = app.add_subcommand("gen-knapsack", "knapsack reduction gadget");
  model_arg(gen, "knapsack instance JSON");
  gen->add_option("-o,--output", args.output, "write the gadget model here");
  gen->add_flag("--scaled-rewards", args.scaled_rewards, "divide every gain by w_tot");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? exit_ok : exit_usage;
  }

  CLI::App* sub = app.get_subcommands().front();
  const std::string name = sub->get_name();
  if (name == "simulate" && args.strategy_in.empty() && (args.state.empty() || args.wealth.empty())) {
    err << "simulate needs --strategy, or --state with --wealth\n";
    return exit_usage;
  }

  const auto started = std::chrono::steady_clock::now();
  CommandOutput result;
  try {
    if (name == "validate") result = cmd_validate(args);
    else if (name == "bounds") result = cmd_bounds(args);
    else if (name == "qualitative") result = cmd_qualitative(args);
    else if (name == "wr") result = cmd_wr(args);
    else if (name == "value") result = cmd_value(args);
    else if (name == "var") result = cmd_var(args);
    else if (name == "unfold") result = cmd_unfold(args);
    else if (name == "simulate") result = cmd_simulate(args);
    else result = cmd_gen_knapsack(args);
  } catch (const UsageError& e) {
    err << "error: " << e.what() << "\n";
    return exit_usage;
  } catch (const ModelError& e) {
    err << "model error: " << e.what() << "\n";
    return exit_model;
  } catch (const ResourceError& e) {
    err << "resource cap: " << e.what() << "\n";
    return exit_resource;
  } catch (const DegenerateQuery& e) {
    err << e.what() << "\n";
    return exit_degenerate;
  } catch (const std::invalid_argument& e) {
    err << "error: " << e.what() << "\n";
    return exit_usage;
  }
  const auto elapsed = std::chrono::duration<double>(std::chrono::steady_clock::now() - started);

  Json argv_echo = Json::array();
  for (int i = 1; i < argc; ++i) argv_echo.push_back(argv[i]);
  const Json envelope{{"command", name},
                      {"argv", std::move(argv_echo)},
                      {"input_sha256", sha256_hex(result.inputs)},
                      {"certified", result.certified},
                      {"result", std::move(result.result)}};
  out << envelope.dump(2) << "\n";
  err << "time: " << std::fixed << std::setprecision(3) << elapsed.count() << " s\n";
  return exit_ok;
}

}  // namespace solvency
