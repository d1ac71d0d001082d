#include "khsat/certificate.hpp"

#include <limits>

#include "khsat/model_io.hpp"

namespace khsat {

Certificate buildModel(const PositiveSpec& p, const NegativeSpec& q, const GlobalContext& ctx, SatOracle& oracle,
                       const std::optional<Formula>& witnessCondition, const CertificateOptions& options) {
  Formula background = ctx.background();
  PropSet relevant = atoms(background);
  for (const auto& c : p) {
    relevant.merge(atoms(c.pre));
    relevant.merge(atoms(c.post));
  }
  for (const auto& c : q) {
    relevant.merge(atoms(c.pre));
    relevant.merge(atoms(c.post));
  }
  if (witnessCondition) relevant.merge(atoms(*witnessCondition));
  if (relevant.size() > options.atomCap)
    throw CapacityError("certificate needs " + std::to_string(relevant.size()) + " atoms, cap is " +
                        std::to_string(options.atomCap));

  auto valuations = enumerateModels(oracle, background, relevant, std::numeric_limits<std::size_t>::max());
  if (valuations.empty()) throw std::logic_error("buildModel: the global constraints are unsatisfiable");

  Certificate cert{Lts(valuations.size()), 0, {}, {}};
  Lts& m = cert.model;
  for (const auto& atom : relevant) {
    StateSet set(m.size());
    for (StateId s = 0; s < valuations.size(); ++s)
      if (valuations[s].at(atom)) set.insert(s);
    m.setValuation(atom, std::move(set));
  }

  for (std::size_t k = 0; k < p.size(); ++k) {
    if (ctx.contains(k)) continue;
    StateSet pre = evalFormula(m, p[k].pre);
    if (pre.empty()) continue;
    StateSet post = evalFormula(m, p[k].post);
    std::string name = "a" + std::to_string(k + 1);
    std::size_t a = m.addAction(name);
    pre.forEach([&](StateId s) { m.setSuccessors(a, s, post); });
    cert.activeConjuncts.push_back(k);
    cert.activeActions.push_back(name);
  }

  if (witnessCondition) {
    StateSet w = evalFormula(m, *witnessCondition);
    if (w.empty()) throw std::logic_error("buildModel: no state satisfies " + render(*witnessCondition));
    cert.witnessState = w.members().front();
  }
  return cert;
}

bool verifyCertificate(const Certificate& c, const Formula& original) {
  return !evalFormula(c.model, desugar(original)).empty();
}

nlohmann::ordered_json certificateToJson(const Certificate& c) {
  auto j = modelToJson(c.model);
  j["witness_state"] = c.model.stateName(c.witnessState);
  j["active_actions"] = c.activeActions;
  return j;
}

std::string saveCertificate(const Certificate& c) { return certificateToJson(c).dump(2) + "\n"; }

}  // namespace khsat
