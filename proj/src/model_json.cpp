#include <map>

#include <json.hpp>

#include "solvency/model.hpp"

namespace solvency {

using nlohmann::json;
using nlohmann::ordered_json;

namespace {

Rational rational_field(const json& j, const std::string& what) {
  if (!j.is_string()) throw ModelError(what + " must be a rational string \"p/q\"");
  try {
    return Rational::parse(j.get<std::string>());
  } catch (const std::exception& e) {
    throw ModelError(what + ": " + e.what());
  }
}

const json& member(const json& obj, const char* key, const std::string& where) {
  auto it = obj.find(key);
  if (it == obj.end()) throw ModelError(where + " is missing \"" + key + "\"");
  return *it;
}

MdpStructure parse_structure(const json& doc) {
  const json& states_json = member(doc, "states", "model");
  if (!states_json.is_array()) throw ModelError("\"states\" must be an array");
  std::vector<std::string> states;
  for (const auto& s : states_json) {
    if (!s.is_string()) throw ModelError("state ids must be strings");
    states.push_back(s.get<std::string>());
  }
  std::map<std::string, StateId> index;
  for (StateId i = 0; i < states.size(); ++i) index.emplace(states[i], i);

  const json& actions_json = member(doc, "actions", "model");
  if (!actions_json.is_object()) throw ModelError("\"actions\" must be an object");
  for (const auto& [key, _] : actions_json.items()) {
    if (!index.contains(key)) throw ModelError("actions given for unknown state '" + key + "'");
  }

  std::vector<std::string> actions;
  std::map<std::string, ActionId> action_index;
  std::vector<std::vector<EnabledAction>> enabled(states.size());
  for (StateId s = 0; s < states.size(); ++s) {
    auto it = actions_json.find(states[s]);
    if (it == actions_json.end()) {
      throw ModelError("state '" + states[s] + "' has no enabled action");
    }
    if (!it->is_array()) throw ModelError("actions of '" + states[s] + "' must be an array");
    for (const auto& entry : *it) {
      const std::string where = "action entry of state '" + states[s] + "'";
      if (!entry.is_object()) throw ModelError(where + " must be an object");
      const json& name = member(entry, "name", where);
      if (!name.is_string()) throw ModelError(where + ": name must be a string");
      auto [pos, fresh] = action_index.emplace(name.get<std::string>(), actions.size());
      if (fresh) actions.push_back(name.get<std::string>());
      EnabledAction ea{pos->second, rational_field(member(entry, "gain", where), where + " gain"),
                       {}};
      const json& dist = member(entry, "dist", where);
      if (!dist.is_object()) throw ModelError(where + ": dist must be an object");
      for (const auto& [target, prob] : dist.items()) {
        auto t = index.find(target);
        if (t == index.end()) throw ModelError(where + ": unknown successor '" + target + "'");
        ea.distribution.push_back({t->second, rational_field(prob, where + " probability")});
      }
      enabled[s].push_back(std::move(ea));
    }
  }
  return MdpStructure(std::move(states), std::move(actions), std::move(enabled));
}

}  // namespace

AnyMdp parse_model(std::string_view document) {
  json doc;
  try {
    doc = json::parse(document);
  } catch (const json::parse_error& e) {
    throw ModelError(std::string("malformed JSON: ") + e.what());
  }
  if (!doc.is_object()) throw ModelError("model document must be a JSON object");
  const json& kind = member(doc, "kind", "model");
  if (kind == "solvency") {
    Rational rho = rational_field(member(doc, "rho", "solvency model"), "rho");
    return SolvencyMdp(parse_structure(doc), std::move(rho));
  }
  if (kind == "discounted") {
    Rational beta = rational_field(member(doc, "beta", "discounted model"), "beta");
    return DiscountedMdp(parse_structure(doc), std::move(beta));
  }
  throw ModelError("\"kind\" must be \"solvency\" or \"discounted\"");
}

SolvencyMdp parse_solvency_model(std::string_view document) {
  AnyMdp m = parse_model(document);
  if (auto* d = std::get_if<DiscountedMdp>(&m)) return to_solvency(*d);
  return std::get<SolvencyMdp>(std::move(m));
}

std::string format_model(const AnyMdp& model, int indent) {
  ordered_json doc;
  const MdpStructure& st = std::visit([](const auto& m) -> const MdpStructure& { return m; }, model);
  if (const auto* m = std::get_if<SolvencyMdp>(&model)) {
    doc["kind"] = "solvency";
    doc["rho"] = m->rho().str();
  } else {
    doc["kind"] = "discounted";
    doc["beta"] = std::get<DiscountedMdp>(model).beta().str();
  }
  doc["states"] = st.state_names();
  ordered_json actions = ordered_json::object();
  for (StateId s = 0; s < st.num_states(); ++s) {
    ordered_json list = ordered_json::array();
    for (const auto& ea : st.enabled(s)) {
      ordered_json dist = ordered_json::object();
      for (const auto& o : ea.distribution) dist[st.state_name(o.state)] = o.probability.str();
      list.push_back({{"name", st.action_name(ea.action)}, {"gain", ea.gain.str()}, {"dist", dist}});
    }
    actions[st.state_name(s)] = std::move(list);
  }
  doc["actions"] = std::move(actions);
  return doc.dump(indent);
}

}  // namespace solvency
