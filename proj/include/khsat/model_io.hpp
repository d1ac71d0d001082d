#pragma once

#include <json.hpp>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "khsat/semantics.hpp"

namespace khsat {

// Model files: {"states": [...], "props": {state: [atom...]}, "rel": {action: [[src, dst]...]}}.
// Certificates add "witness_state" and "active_actions". Lines starting with '#' are comments.
struct ModelFile {
  Lts model;
  std::optional<StateId> witnessState;
  std::vector<std::string> activeActions;
};

ModelFile parseModel(std::string_view text);
Lts loadModel(std::string_view text);

nlohmann::ordered_json modelToJson(const Lts& m);
std::string saveModel(const Lts& m);

}  // namespace khsat
