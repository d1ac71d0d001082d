#include "khsat/decide.hpp"

#include <stdexcept>

namespace khsat {

std::string_view modeName(Mode m) { return m == Mode::Paper ? "paper" : "augmented"; }

std::optional<Mode> parseMode(std::string_view s) {
  if (s == "paper") return Mode::Paper;
  if (s == "augmented") return Mode::Augmented;
  return std::nullopt;
}

std::string_view certificateStatusName(CertificateStatus s) {
  switch (s) {
    case CertificateStatus::None: return "none";
    case CertificateStatus::Verified: return "verified";
    case CertificateStatus::Rejected: return "rejected";
    case CertificateStatus::CapacityExceeded: return "capacity_exceeded";
  }
  return "none";
}

GuessPartition partitionOf(const Flattened& flat, const Assignment& guess) {
  GuessPartition g;
  g.values = guess;
  for (std::size_t i = 0; i < flat.defs.size(); ++i) {
    bool v = guess.at(flat.defs[i].atom);
    (v ? g.positive : g.negative).push_back(i);
  }
  return g;
}

GuessSpecs guessSpecs(const Flattened& flat, const GuessPartition& guess, Mode mode) {
  GuessSpecs s;
  for (auto i : guess.positive) s.positive.push_back({flat.defs[i].leaf.pre(), flat.defs[i].leaf.post()});
  for (auto i : guess.negative) s.negative.push_back({flat.defs[i].leaf.pre(), flat.defs[i].leaf.post()});
  Formula witness = flat.phi0;
  if (mode == Mode::Augmented) {
    std::vector<Formula> lits{flat.phi0};
    for (const auto& d : flat.defs) {
      Formula k = Formula::atom(d.atom);
      bool v = guess.values.at(d.atom);
      lits.push_back(v ? k : Formula::negation(k));
      // A k is Kh(~k, false); A ~k is Kh(k, false).
      s.positive.push_back({v ? Formula::negation(k) : k, Formula::bottom()});
    }
    witness = conjoin(lits);
  }
  // E phi0 is the negation of Kh(phi0, false).
  s.negative.push_back({witness, Formula::bottom()});
  return s;
}

Verdict decide(const Formula& f, SatOracle& oracle, const DecideOptions& options) {
  Verdict v;
  v.mode = options.mode;
  v.flat = flatten(f);
  if (options.trace) v.trace.emplace();
  std::size_t start = oracle.calls();

  ModelEnumerator guesses(oracle, v.flat.phi0, v.flat.freshAtoms());
  for (;;) {
    std::size_t before = oracle.calls();
    auto guess = guesses.next();
    v.enumerationCalls += oracle.calls() - before;
    if (!guess) break;
    ++v.guessesTried;

    GuessPartition part = partitionOf(v.flat, *guess);
    GuessSpecs specs = guessSpecs(v.flat, part, options.mode);
    CompatReport rep = checkCompatible(specs.positive, specs.negative, oracle);
    if (v.trace)
      v.trace->push_back({part, rep.compatible, rep.failure, rep.oracleCalls, specs.positive.size(),
                          specs.negative.size()});
    if (!rep.compatible) continue;

    v.satisfiable = true;
    v.partition = part;
    if (options.buildCertificate) {
      std::size_t certStart = oracle.calls();
      try {
        Certificate cert = buildModel(specs.positive, specs.negative, rep.context, oracle,
                                      specs.negative.back().pre, options.certificate);
        StateSet truth = evalFormula(cert.model, f);
        if (!truth.empty() && !truth.contains(cert.witnessState)) cert.witnessState = truth.members().front();
        if (verifyCertificate(cert, f)) {
          v.certificate = std::move(cert);
          v.certificateStatus = CertificateStatus::Verified;
        } else {
          v.certificateStatus = CertificateStatus::Rejected;
          v.certificateNote = "constructed model does not satisfy the input formula";
        }
      } catch (const CapacityError& e) {
        v.certificateStatus = CertificateStatus::CapacityExceeded;
        v.certificateNote = e.what();
      }
      v.certificateCalls = oracle.calls() - certStart;
    }
    break;
  }
  v.oracleCalls = oracle.calls() - start;
  return v;
}

Verdict decide(const Formula& f, const DecideOptions& options) {
  SatOracle oracle;
  return decide(f, oracle, options);
}

std::size_t oracleCallCount(const Verdict& v, std::size_t guess) {
  if (!v.trace) throw std::logic_error("oracle call counts need a traced verdict");
  return v.trace->at(guess).oracleCalls;
}

}  // namespace khsat
