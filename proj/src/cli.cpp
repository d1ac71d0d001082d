#include "khsat/cli.hpp"

#include <CLI11.hpp>
#include <chrono>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iomanip>
#include <iostream>
#include <sstream>

#include "khsat/model_io.hpp"
#include "khsat/oracle.hpp"

namespace khsat {

namespace {

using Json = nlohmann::ordered_json;

class UsageError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

std::string readFile(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw UsageError("cannot read '" + path + "'");
  std::ostringstream os;
  os << in.rdbuf();
  return os.str();
}

struct FormulaInput {
  std::string text;
  std::string file;

  void add(CLI::App* app) {
    app->add_option("formula", text, "formula text");
    app->add_option("-f,--file", file, "read the formula from a file");
  }

  Formula get() const {
    if (!text.empty() && !file.empty()) throw UsageError("give either a formula or --file, not both");
    if (text.empty() && file.empty()) throw UsageError("no formula given");
    return parse(file.empty() ? text : readFile(file));
  }
};

std::optional<std::string> resolveSolver(const std::string& flag) {
  std::string path = flag;
  if (path.empty())
    if (const char* env = std::getenv(kSolverEnv)) path = env;
  if (path.empty()) return std::nullopt;
  if (!std::filesystem::exists(path)) throw UsageError("external solver '" + path + "' does not exist");
  return path;
}

Json partitionJson(const Flattened& flat, const GuessPartition& g) {
  Json pos = Json::array(), neg = Json::array();
  for (auto i : g.positive) pos.push_back(flat.defs[i].atom);
  for (auto i : g.negative) neg.push_back(flat.defs[i].atom);
  return Json{{"positive", pos}, {"negative", neg}};
}

std::string partitionText(const GuessPartition& g) {
  std::string out;
  for (const auto& [k, v] : g.values) out += (out.empty() ? "" : " ") + k + "=" + (v ? "true" : "false");
  return out.empty() ? "(no definitions)" : out;
}

Json flattenJson(const Flattened& flat) {
  Json defs = Json::array();
  for (const auto& d : flat.defs) defs.push_back(Json{{"atom", d.atom}, {"leaf", render(d.leaf)}});
  return Json{{"phi0", render(flat.phi0)}, {"defs", defs}};
}

struct SearchFlags {
  std::size_t maxStates = 3;
  std::size_t trials = 200;
  std::uint64_t seed = 0;

  void add(CLI::App* app) {
    app->add_option("--max-states", maxStates, "state bound for the model search oracle")->check(CLI::Range(1, 8));
    app->add_option("--trials", trials, "random models tried by the search oracle");
    app->add_option("--seed", seed, "seed");
  }

  SearchBounds bounds() const {
    SearchBounds b;
    b.maxStates = maxStates;
    b.randomTrials = trials;
    b.seed = seed;
    return b;
  }
};

}  // namespace

Json verdictToJson(const Verdict& v, bool includeTrace) {
  Json j;
  j["result"] = v.satisfiable ? "SAT" : "UNSAT";
  j["mode"] = std::string(modeName(v.mode));
  j["guesses_tried"] = v.guessesTried;
  j["partition"] = v.partition ? partitionJson(v.flat, *v.partition) : Json();
  j["witness_state"] = v.certificate ? Json(v.certificate->model.stateName(v.certificate->witnessState)) : Json();
  j["oracle_calls"] = v.oracleCalls;
  j["certificate_status"] = std::string(certificateStatusName(v.certificateStatus));
  if (!v.certificateNote.empty()) j["certificate_note"] = v.certificateNote;
  j["certificate"] = v.certificate ? certificateToJson(*v.certificate) : Json();
  j["flatten"] = flattenJson(v.flat);
  if (includeTrace && v.trace) {
    Json guesses = Json::array();
    for (const auto& g : *v.trace) {
      Json values = Json::object();
      for (const auto& [k, b] : g.partition.values) values[k] = b;
      guesses.push_back(Json{{"assignment", values},
                             {"compatible", g.compatible},
                             {"oracle_calls", g.oracleCalls},
                             {"call_bound", oracleCallBound(g.positiveCount, g.negativeCount)},
                             {"positive_conjuncts", g.positiveCount},
                             {"negative_conjuncts", g.negativeCount}});
    }
    j["trace"] = Json{{"enumeration_calls", v.enumerationCalls},
                      {"certificate_calls", v.certificateCalls},
                      {"guesses", guesses}};
  }
  return j;
}

namespace {

void printVerdictText(const Verdict& v, bool trace, std::ostream& out, const std::string& prefix = "") {
  out << prefix << "result: " << (v.satisfiable ? "SAT" : "UNSAT") << "\n";
  out << prefix << "mode: " << modeName(v.mode) << "\n";
  out << prefix << "guesses tried: " << v.guessesTried << "\n";
  if (v.partition) out << prefix << "partition: " << partitionText(*v.partition) << "\n";
  if (v.certificate)
    out << prefix << "witness state: " << v.certificate->model.stateName(v.certificate->witnessState) << "\n";
  out << prefix << "oracle calls: " << v.oracleCalls << "\n";
  if (v.satisfiable) {
    out << prefix << "certificate: " << certificateStatusName(v.certificateStatus);
    if (!v.certificateNote.empty()) out << " (" << v.certificateNote << ")";
    out << "\n";
  }
  if (trace && v.trace) {
    out << prefix << "enumeration calls: " << v.enumerationCalls << "\n";
    out << prefix << "certificate calls: " << v.certificateCalls << "\n";
    for (std::size_t i = 0; i < v.trace->size(); ++i) {
      const auto& g = (*v.trace)[i];
      out << prefix << "guess " << i + 1 << ": " << partitionText(g.partition) << " -> "
          << (g.compatible ? "compatible" : "incompatible") << ", " << g.oracleCalls << " calls (bound "
          << oracleCallBound(g.positiveCount, g.negativeCount) << ")\n";
    }
  }
}

struct OracleCheck {
  bool found = false;
  bool exhaustive = false;
};

OracleCheck crossCheck(const Formula& f, const SearchBounds& b) {
  auto o = searchModels(f, b);
  return {o.model.has_value(), o.exhaustiveRan};
}

int runCheck(const FormulaInput& input, const std::string& modeText, const std::string& solverFlag,
             const SearchFlags& search, const std::string& format, bool trace, const std::string& certOut,
             std::size_t atomCap, std::ostream& out, std::ostream& err) {
  Formula f = input.get();
  SatOracle oracle(resolveSolver(solverFlag));
  DecideOptions opts;
  opts.trace = trace;
  opts.certificate.atomCap = atomCap;
  bool differential = modeText == "differential";
  opts.mode = differential ? Mode::Paper : *parseMode(modeText);

  Verdict v = decide(f, oracle, opts);
  std::optional<Verdict> other;
  std::optional<OracleCheck> check;
  if (differential) {
    DecideOptions alt = opts;
    alt.mode = Mode::Augmented;
    other = decide(f, oracle, alt);
    check = crossCheck(f, search.bounds());
  }

  if (!certOut.empty()) {
    const Verdict& src = v.certificate || !other ? v : *other;
    if (src.certificate) {
      std::ofstream o(certOut);
      if (!o) throw UsageError("cannot write '" + certOut + "'");
      o << saveCertificate(*src.certificate);
    } else {
      err << "no certificate to write\n";
    }
  }

  if (format == "structured") {
    Json j;
    j["formula"] = render(f);
    if (differential) {
      j["result"] = v.satisfiable ? "SAT" : "UNSAT";
      j["mode"] = "differential";
      j["paper"] = verdictToJson(v, trace);
      j["augmented"] = verdictToJson(*other, trace);
      j["modes_agree"] = v.satisfiable == other->satisfiable;
      j["oracle"] = Json{{"found_model", check->found},
                         {"exhaustive", check->exhaustive},
                         {"paper_consistent", !check->found || v.satisfiable},
                         {"augmented_consistent", !check->found || other->satisfiable}};
    } else {
      Json body = verdictToJson(v, trace);
      for (auto& [k, val] : body.items()) j[k] = val;
    }
    out << j.dump(2) << "\n";
  } else if (differential) {
    out << "result: " << (v.satisfiable ? "SAT" : "UNSAT") << "\n";
    printVerdictText(v, trace, out, "paper.");
    printVerdictText(*other, trace, out, "augmented.");
    out << "modes agree: " << (v.satisfiable == other->satisfiable ? "yes" : "no") << "\n";
    out << "oracle: " << (check->found ? "model found" : "no model found")
        << (check->exhaustive ? " (exhaustive tier ran)" : "") << "\n";
  } else {
    printVerdictText(v, trace, out);
  }
  return v.satisfiable ? kExitSat : kExitUnsat;
}

int runFlatten(const FormulaInput& input, const std::string& format, std::ostream& out) {
  Flattened flat = flatten(input.get());
  if (format == "structured") {
    out << flattenJson(flat).dump(2) << "\n";
  } else {
    out << "phi0: " << render(flat.phi0) << "\n";
    for (const auto& d : flat.defs) out << d.atom << " := " << render(d.leaf) << "\n";
  }
  return 0;
}

std::string setText(const Lts& m, const StateSet& s) {
  std::string out = "{";
  bool first = true;
  s.forEach([&](StateId id) {
    out += (first ? "" : ", ") + m.stateName(id);
    first = false;
  });
  return out + "}";
}

int runModelCheck(const std::string& modelPath, const FormulaInput& input, const std::string& format,
                  std::ostream& out) {
  Lts m = loadModel(readFile(modelPath));
  Formula f = input.get();
  StateSet truth = evalFormula(m, f);
  auto ws = topLevelWitnesses(m, f);
  if (format == "structured") {
    Json states = Json::array();
    truth.forEach([&](StateId s) { states.push_back(m.stateName(s)); });
    Json wl = Json::array();
    for (const auto& w : ws)
      wl.push_back(Json{{"formula", render(w.formula)}, {"plan", w.plan ? Json(w.plan->toString()) : Json()}});
    out << Json{{"formula", render(f)}, {"truth_set", states}, {"witnesses", wl}}.dump(2) << "\n";
  } else {
    out << "truth set: " << setText(m, truth) << "\n";
    for (const auto& w : ws) out << render(w.formula) << ": " << (w.plan ? w.plan->toString() : "none") << "\n";
  }
  return 0;
}

PropSet atomList(const std::string& csv) {
  PropSet out;
  std::stringstream ss(csv);
  std::string a;
  while (std::getline(ss, a, ','))
    if (!a.empty()) out.insert(parse(a).name());
  return out;
}

struct GenFlags {
  std::string kind = "formula";
  std::uint64_t seed = 0;
  std::size_t depth = 2, leaves = 3, states = 3, actions = 2;
  std::string atoms = "p,q,r";
  double density = 0.3;
};

int runGen(const GenFlags& g, std::ostream& out) {
  out << "# seed: " << g.seed << "\n";
  if (g.kind == "formula") {
    out << render(randomFormula(g.depth, g.leaves, atomList(g.atoms), g.seed)) << "\n";
  } else {
    out << saveModel(randomLts(g.states, g.actions, atomList(g.atoms), g.density, g.seed));
  }
  return 0;
}

struct BenchFlags {
  std::size_t count = 20;
  std::uint64_t seed = 0;
  std::size_t depth = 2, leaves = 3;
  std::string atoms = "p,q,r";
  std::string mode = "differential";
  std::vector<std::string> extra;
};

int runBench(const BenchFlags& b, const std::string& solverFlag, const SearchFlags& search, const std::string& format,
             std::ostream& out) {
  std::vector<Formula> suite;
  for (std::size_t i = 0; i < b.count; ++i)
    suite.push_back(randomFormula(b.depth, b.leaves, atomList(b.atoms), deriveSeed(b.seed, i)));
  for (const auto& e : b.extra) suite.push_back(parse(e));

  SatOracle oracle(resolveSolver(solverFlag));
  bool differential = b.mode == "differential";
  Mode primary = differential ? Mode::Paper : *parseMode(b.mode);
  Json rows = Json::array();
  std::size_t sat = 0, disagreements = 0, oracleConflicts = 0;
  if (format != "structured")
    out << "#    verdict  guesses  calls     ms  agree  oracle  certificate        formula\n";
  for (std::size_t i = 0; i < suite.size(); ++i) {
    const Formula& f = suite[i];
    auto t0 = std::chrono::steady_clock::now();
    DecideOptions opts;
    opts.mode = primary;
    Verdict v = decide(f, oracle, opts);
    double ms = std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - t0).count();
    std::optional<bool> agree, oracleOk;
    if (differential) {
      DecideOptions alt = opts;
      alt.mode = Mode::Augmented;
      agree = decide(f, oracle, alt).satisfiable == v.satisfiable;
      oracleOk = !crossCheck(f, search.bounds()).found || v.satisfiable;
      if (!*agree) ++disagreements;
      if (!*oracleOk) ++oracleConflicts;
    }
    if (v.satisfiable) ++sat;
    auto flag = [](const std::optional<bool>& x) { return x ? (*x ? "yes" : "no") : "-"; };
    if (format == "structured") {
      rows.push_back(Json{{"index", i},
                          {"formula", render(f)},
                          {"result", v.satisfiable ? "SAT" : "UNSAT"},
                          {"guesses_tried", v.guessesTried},
                          {"oracle_calls", v.oracleCalls},
                          {"time_ms", ms},
                          {"modes_agree", agree ? Json(*agree) : Json()},
                          {"oracle_consistent", oracleOk ? Json(*oracleOk) : Json()},
                          {"certificate_status", std::string(certificateStatusName(v.certificateStatus))}});
    } else {
      out << std::left << std::setw(5) << i << std::setw(9) << (v.satisfiable ? "SAT" : "UNSAT") << std::setw(9)
          << v.guessesTried << std::setw(6) << v.oracleCalls << std::right << std::setw(7) << std::fixed
          << std::setprecision(2) << ms << "  " << std::left << std::setw(7) << flag(agree) << std::setw(8)
          << flag(oracleOk) << std::setw(19) << certificateStatusName(v.certificateStatus) << render(f) << "\n";
    }
  }
  if (format == "structured") {
    out << Json{{"instances", rows},
                {"summary", Json{{"count", suite.size()},
                                 {"sat", sat},
                                 {"mode_disagreements", disagreements},
                                 {"oracle_conflicts", oracleConflicts}}}}
               .dump(2)
        << "\n";
  } else {
    out << "instances: " << suite.size() << ", SAT: " << sat << ", mode disagreements: " << disagreements
        << ", oracle conflicts: " << oracleConflicts << "\n";
  }
  return 0;
}

}  // namespace

int runCli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Satisfiability checker for the logic of knowing how", "khsat"};
  app.require_subcommand(1);
  app.set_help_all_flag("--help-all", "print help for every subcommand");

  std::string format = "text";
  auto addFormat = [&](CLI::App* sub) {
    sub->add_option("--format", format, "text or structured (JSON)")->check(CLI::IsMember({"text", "structured"}));
  };

  auto* check = app.add_subcommand("check", "decide satisfiability");
  FormulaInput checkIn;
  checkIn.add(check);
  std::string mode = "paper", solver, certOut;
  bool trace = false;
  std::size_t atomCap = CertificateOptions{}.atomCap;
  SearchFlags search;
  check->add_option("--mode", mode, "paper, augmented or differential")
      ->check(CLI::IsMember({"paper", "augmented", "differential"}));
  check->add_option("--solver", solver, std::string("external DIMACS solver (default from ") + kSolverEnv + ")");
  search.add(check);
  addFormat(check);
  check->add_flag("--trace", trace, "report per-guess oracle calls");
  check->add_option("--certificate-out", certOut, "write the certificate model to a file");
  check->add_option("--atom-cap", atomCap, "largest atom count for certificate construction");

  auto* flat = app.add_subcommand("flatten", "replace Kh subformulas by fresh atoms");
  FormulaInput flatIn;
  flatIn.add(flat);
  addFormat(flat);

  auto* mc = app.add_subcommand("modelcheck", "evaluate a formula on a model file");
  std::string modelPath;
  mc->add_option("model", modelPath, "model file")->required();
  FormulaInput mcIn;
  mcIn.add(mc);
  addFormat(mc);

  auto* gen = app.add_subcommand("gen", "generate a random formula or model");
  GenFlags g;
  gen->add_option("kind", g.kind, "formula or model")->check(CLI::IsMember({"formula", "model"}));
  gen->add_option("--seed", g.seed, "seed");
  gen->add_option("--depth", g.depth, "modal depth bound");
  gen->add_option("--leaves", g.leaves, "Kh occurrence bound");
  gen->add_option("--atoms", g.atoms, "comma-separated atoms");
  gen->add_option("--states", g.states, "states")->check(CLI::PositiveNumber);
  gen->add_option("--actions", g.actions, "actions");
  gen->add_option("--density", g.density, "edge probability")->check(CLI::Range(0.0, 1.0));

  auto* bench = app.add_subcommand("bench", "run decide over a random suite");
  BenchFlags b;
  std::string benchSolver;
  SearchFlags benchSearch;
  bench->add_option("--count", b.count, "random formulas");
  bench->add_option("--seed", b.seed, "suite seed");
  bench->add_option("--depth", b.depth, "modal depth bound");
  bench->add_option("--leaves", b.leaves, "Kh occurrence bound");
  bench->add_option("--atoms", b.atoms, "comma-separated atoms");
  bench->add_option("--mode", b.mode, "paper, augmented or differential")
      ->check(CLI::IsMember({"paper", "augmented", "differential"}));
  bench->add_option("--extra", b.extra, "additional formula (repeatable)");
  bench->add_option("--solver", benchSolver, "external DIMACS solver");
  bench->add_option("--max-states", benchSearch.maxStates, "state bound for the model search oracle")
      ->check(CLI::Range(1, 8));
  bench->add_option("--trials", benchSearch.trials, "random models tried by the search oracle");
  addFormat(bench);

  try {
    std::vector<std::string> rev(args.rbegin(), args.rend());
    app.parse(rev);
  } catch (const CLI::ParseError& e) {
    int code = app.exit(e, out, err);
    return code == 0 ? 0 : kExitError;
  }

  try {
    if (*check) return runCheck(checkIn, mode, solver, search, format, trace, certOut, atomCap, out, err);
    if (*flat) return runFlatten(flatIn, format, out);
    if (*mc) return runModelCheck(modelPath, mcIn, format, out);
    if (*gen) return runGen(g, out);
    if (*bench) return runBench(b, benchSolver, benchSearch, format, out);
  } catch (const ParseError& e) {
    err << "parse error: " << e.what() << "\n";
    return kExitError;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return kExitError;
  }
  return kExitError;
}

}  // namespace khsat
