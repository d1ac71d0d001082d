#include "khsat/model_io.hpp"

#include <sstream>

namespace khsat {

namespace {

using Json = nlohmann::ordered_json;

std::string stripComments(std::string_view text) {
  std::string out;
  std::istringstream in{std::string(text)};
  std::string line;
  while (std::getline(in, line)) {
    auto first = line.find_first_not_of(" \t\r");
    if (first != std::string::npos && line[first] == '#') {
      out += '\n';  // keep line numbers for JSON diagnostics
      continue;
    }
    out += line;
    out += '\n';
  }
  return out;
}

std::string asString(const Json& j, const std::string& where) {
  if (!j.is_string()) throw ModelError(where + ": expected a string, got " + j.dump());
  return j.get<std::string>();
}

StateId stateRef(const Lts& m, const Json& j, const std::string& where) {
  std::string id = asString(j, where);
  auto s = m.findState(id);
  if (!s) throw ModelError(where + ": undeclared state '" + id + "'");
  return *s;
}

}  // namespace

ModelFile parseModel(std::string_view text) {
  Json doc;
  try {
    doc = Json::parse(stripComments(text));
  } catch (const nlohmann::json::parse_error& e) {
    throw ModelError(std::string("malformed model file: ") + e.what());
  }
  if (!doc.is_object()) throw ModelError("model file must be a JSON object");
  if (!doc.contains("states") || !doc["states"].is_array())
    throw ModelError("model file needs a \"states\" array");

  std::vector<std::string> names;
  for (const auto& s : doc["states"]) names.push_back(asString(s, "states"));
  ModelFile out{Lts(std::move(names)), std::nullopt, {}};
  Lts& m = out.model;

  if (doc.contains("props")) {
    const auto& props = doc["props"];
    if (!props.is_object()) throw ModelError("\"props\" must map states to atom lists");
    for (const auto& [state, list] : props.items()) {
      auto s = m.findState(state);
      if (!s) throw ModelError("props: undeclared state '" + state + "'");
      if (!list.is_array()) throw ModelError("props." + state + ": expected a list of atoms");
      for (const auto& a : list) {
        std::string atom = asString(a, "props." + state);
        if (atom.empty()) throw ModelError("props." + state + ": empty atom name");
        m.addAtomAt(atom, *s);
      }
    }
  }

  if (doc.contains("rel")) {
    const auto& rel = doc["rel"];
    if (!rel.is_object()) throw ModelError("\"rel\" must map actions to edge lists");
    for (const auto& [action, edges] : rel.items()) {
      std::size_t a = m.addAction(action);
      if (!edges.is_array()) throw ModelError("rel." + action + ": expected a list of [src, dst] pairs");
      for (const auto& e : edges) {
        if (!e.is_array() || e.size() != 2) throw ModelError("rel." + action + ": edge must be [src, dst], got " + e.dump());
        m.addTransition(a, stateRef(m, e[0], "rel." + action), stateRef(m, e[1], "rel." + action));
      }
    }
  }

  if (doc.contains("witness_state")) out.witnessState = stateRef(m, doc["witness_state"], "witness_state");
  if (doc.contains("active_actions")) {
    for (const auto& a : doc["active_actions"]) {
      std::string name = asString(a, "active_actions");
      if (!m.findAction(name)) throw ModelError("active_actions: undeclared action '" + name + "'");
      out.activeActions.push_back(name);
    }
  }
  return out;
}

Lts loadModel(std::string_view text) { return parseModel(text).model; }

nlohmann::ordered_json modelToJson(const Lts& m) {
  Json j;
  j["states"] = Json::array();
  for (StateId s = 0; s < m.size(); ++s) j["states"].push_back(m.stateName(s));
  j["props"] = Json::object();
  for (StateId s = 0; s < m.size(); ++s) {
    Json list = Json::array();
    for (const auto& a : m.atomsAt(s)) list.push_back(a);
    j["props"][m.stateName(s)] = list;
  }
  j["rel"] = Json::object();
  for (std::size_t a = 0; a < m.actionCount(); ++a) {
    Json edges = Json::array();
    for (auto [s, t] : m.transitions(a)) edges.push_back(Json::array({m.stateName(s), m.stateName(t)}));
    j["rel"][m.actionName(a)] = edges;
  }
  return j;
}

std::string saveModel(const Lts& m) { return modelToJson(m).dump(2) + "\n"; }

}  // namespace khsat
