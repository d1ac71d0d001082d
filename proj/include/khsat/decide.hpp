#pragma once

#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "khsat/certificate.hpp"
#include "khsat/compat.hpp"
#include "khsat/normalform.hpp"

namespace khsat {

// Paper: the guess only fixes which leaves hold. Augmented: the fresh atoms are also forced to be
// global (A k for true guesses, A ~k for false ones) and the witness state must match the guess.
enum class Mode { Paper, Augmented };

std::string_view modeName(Mode m);
std::optional<Mode> parseMode(std::string_view s);

struct GuessPartition {
  Assignment values;                  // fresh atom -> guessed truth value
  std::vector<std::size_t> positive;  // definition indices guessed true, 0-based
  std::vector<std::size_t> negative;
};

GuessPartition partitionOf(const Flattened& flat, const Assignment& guess);

struct GuessSpecs {
  PositiveSpec positive;
  NegativeSpec negative;  // the last conjunct is the one that places the input formula in some state
};

GuessSpecs guessSpecs(const Flattened& flat, const GuessPartition& guess, Mode mode);

struct GuessRecord {
  GuessPartition partition;
  bool compatible = false;
  CompatFailure failure = CompatFailure::None;
  std::size_t oracleCalls = 0;
  std::size_t positiveCount = 0;
  std::size_t negativeCount = 0;
};

enum class CertificateStatus { None, Verified, Rejected, CapacityExceeded };
std::string_view certificateStatusName(CertificateStatus s);

struct DecideOptions {
  Mode mode = Mode::Paper;
  bool trace = false;
  bool buildCertificate = true;
  CertificateOptions certificate;
};

struct Verdict {
  bool satisfiable = false;
  Mode mode = Mode::Paper;
  Flattened flat;
  std::optional<GuessPartition> partition;
  // Only present when it model-checks the input.
  std::optional<Certificate> certificate;
  CertificateStatus certificateStatus = CertificateStatus::None;
  std::string certificateNote;
  std::size_t guessesTried = 0;
  std::size_t oracleCalls = 0;
  std::size_t enumerationCalls = 0;
  std::size_t certificateCalls = 0;
  std::optional<std::vector<GuessRecord>> trace;
};

// Tries the projections of phi0's models onto the fresh atoms in lexicographic order and stops
// at the first compatible one.
Verdict decide(const Formula& f, SatOracle& oracle, const DecideOptions& options = {});
Verdict decide(const Formula& f, const DecideOptions& options = {});

// Oracle calls spent on guess i; throws std::logic_error unless the verdict was traced.
std::size_t oracleCallCount(const Verdict& v, std::size_t guess);

}  // namespace khsat
