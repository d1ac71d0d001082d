#pragma once

#include <json.hpp>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "khsat/compat.hpp"
#include "khsat/semantics.hpp"

namespace khsat {

class CapacityError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct CertificateOptions {
  // The model has one state per valuation, so it grows as 2^atoms.
  std::size_t atomCap = 12;
};

struct Certificate {
  Lts model;
  StateId witnessState = 0;
  std::vector<std::size_t> activeConjuncts;  // positive conjuncts that got an action, 0-based
  std::vector<std::string> activeActions;
};

// States are the valuations satisfying ctx.background() over the atoms involved. Conjunct k with
// a non-global, satisfiable pre gets action a<k+1> relating every pre-state to every post-state.
Certificate buildModel(const PositiveSpec& p, const NegativeSpec& q, const GlobalContext& ctx, SatOracle& oracle,
                       const std::optional<Formula>& witnessCondition = std::nullopt,
                       const CertificateOptions& options = {});

// True when the formula holds in some state of the model.
bool verifyCertificate(const Certificate& c, const Formula& original);

nlohmann::ordered_json certificateToJson(const Certificate& c);
std::string saveCertificate(const Certificate& c);

}  // namespace khsat
