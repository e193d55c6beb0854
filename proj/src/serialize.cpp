#include "solvency/serialize.hpp"

namespace solvency {

namespace {

std::string class_label(const WealthClass& c) {
  switch (c.kind) {
    case ClassKind::win:
      return "WIN";
    case ClassKind::lose:
      return "LOSE";
    case ClassKind::interval:
      break;
  }
  return c.upper.str();
}

ActionId action_index(const MdpStructure& m, const std::string& name) {
  if (auto a = m.find_action(name)) return *a;
  throw ModelError("unknown action '" + name + "' in strategy");
}

}  // namespace

Json to_json(const MdpStructure& m, const Configuration& c) {
  return Json{{"state", m.state_name(c.state)}, {"wealth", c.wealth.str()}};
}

Json to_json(const MdpStructure& m, const BoundsTable& bounds) {
  Json out = Json::object();
  for (StateId s = 0; s < m.num_states(); ++s) {
    out[m.state_name(s)] = Json{{"L", bounds.lower[s].str()}, {"U", bounds.upper[s].str()}};
  }
  return out;
}

Json to_json(const MdpStructure& m, const QualitativeResult& result) {
  Json out = Json::object();
  for (StateId s = 0; s < m.num_states(); ++s) {
    out[m.state_name(s)] = Json{{"wr1", result.wr_one[s].str()},
                                {"action", m.action_name(result.strategy.choice[s])}};
  }
  return out;
}

Json to_json(const ApproxParams& params) {
  return Json{{"epsilon", params.epsilon.str()},
              {"horizon", params.horizon},
              {"lambda", params.lambda.str()},
              {"short_circuit", params.short_circuit}};
}

Json to_json(const MdpStructure& m, const LayeredStrategy& sigma) {
  Json choices = Json::array();
  for (const auto& [key, action] : sigma.sorted_choices()) {
    choices.push_back(Json{{"layer", key.layer},
                           {"state", m.state_name(key.cls.state)},
                           {"class", class_label(key.cls)},
                           {"action", m.action_name(action)}});
  }
  return Json{{"origin", to_json(m, sigma.origin())},
              {"lambda", sigma.lambda().str()},
              {"horizon", sigma.horizon()},
              {"choices", std::move(choices)}};
}

LayeredStrategy strategy_from_json(const MdpStructure& m, const BoundsTable& bounds, const Json& j) {
  try {
    const Json& origin = j.at("origin");
    Configuration c{m.state_index(origin.at("state").get<std::string>()),
                    Rational::parse(origin.at("wealth").get<std::string>())};
    LayeredStrategy sigma(std::move(c), Rational::parse(j.at("lambda").get<std::string>()),
                          j.at("horizon").get<std::size_t>(), bounds);
    for (const auto& entry : j.at("choices")) {
      WealthClass cls;
      cls.state = m.state_index(entry.at("state").get<std::string>());
      const auto label = entry.at("class").get<std::string>();
      if (label == "WIN") {
        cls.kind = ClassKind::win;
      } else if (label == "LOSE") {
        cls.kind = ClassKind::lose;
      } else {
        cls.kind = ClassKind::interval;
        cls.upper = Rational::parse(label);
      }
      sigma.set_choice({entry.at("layer").get<std::size_t>(), std::move(cls)},
                       action_index(m, entry.at("action").get<std::string>()));
    }
    return sigma;
  } catch (const Json::exception& e) {
    throw ModelError(std::string("malformed strategy document: ") + e.what());
  } catch (const std::invalid_argument& e) {
    throw ModelError(std::string("malformed strategy document: ") + e.what());
  }
}

Json unfold_summary(const UnfoldedMdp& dag) {
  Json layers = Json::array();
  std::size_t edges = 0;
  for (std::size_t i = 0; i < dag.num_layers(); ++i) {
    std::size_t win = 0, lose = 0, interval = 0;
    for (NodeId v = dag.layer_begin[i]; v < dag.layer_begin[i + 1]; ++v) {
      switch (dag.nodes[v].cls.kind) {
        case ClassKind::win: ++win; break;
        case ClassKind::lose: ++lose; break;
        case ClassKind::interval: ++interval; break;
      }
      for (const auto& da : dag.nodes[v].actions) edges += da.successors.size();
    }
    layers.push_back(Json{{"layer", i},
                          {"nodes", dag.layer_begin[i + 1] - dag.layer_begin[i]},
                          {"win", win},
                          {"lose", lose},
                          {"interval", interval}});
  }
  return Json{{"lambda", dag.lambda.str()},
              {"horizon", dag.horizon},
              {"nodes", dag.nodes.size()},
              {"edges", edges},
              {"layers", std::move(layers)}};
}

}  // namespace solvency
