#pragma once

// The full analysis pipeline, the conclusion tiers, and the JSON report.

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "crncert/certificates.hpp"
#include "crncert/dynamics.hpp"
#include "crncert/nondegen.hpp"
#include "crncert/persistence.hpp"
#include "crncert/structure.hpp"

namespace crncert {

enum class Tier { Star, Conditional, StableOnly, None };

/// star, conditional, stable_only, none.
const char* tier_name(Tier t);

struct TierInputs {
  /// AS1 and AS2. The certificate results are stated under them, so the
  /// tier is none when they fail.
  bool assumptions = true;
  bool certificate = false;
  bool lasalle = false;
  bool nondegenerate = false;
  bool persistent = false;
  bool conservative = false;
};

Tier decide_tier(const TierInputs& in);

/// SoC: always. Max-Min: conservative, or every pair of reactions shares an
/// ancestor.
bool lasalle_check(const Network& net, const Certificate& cert);

struct AnalysisOptions {
  std::uint64_t seed = 0;
  SiphonOptions siphons;
  NondegenOptions nondegen;
  ReduceOptions reduce;
};

struct CertificationReport {
  Network network;
  std::vector<std::string> warnings;
  std::uint64_t seed = 0;
  Assumptions assumptions;
  std::optional<Certificate> soc;
  std::optional<Certificate> maxmin;
  Conservativity conservativity;
  std::vector<ConservationLaw> laws;
  bool lasalle = false;
  NondegeneracyResult nondegeneracy;
  PersistenceResult persistence;
  Tier tier = Tier::None;
  std::vector<std::string> explanations;
  /// Some search or enumeration budget ran out and the verdict may be weaker
  /// than a larger budget would give.
  bool budget_exhausted = false;

  /// SoC when present, else Max-Min.
  const Certificate* primary() const;
};

CertificationReport analyze(const Network& net, const AnalysisOptions& options = {});

nlohmann::ordered_json report_json(const CertificationReport& report);

/// report_json, indented, with a trailing newline.
std::string emit_report(const CertificationReport& report);

/// Short human-readable summary.
std::string report_text(const CertificationReport& report);

nlohmann::ordered_json certificate_json(const Certificate& cert);
nlohmann::ordered_json trace_json(const ReductionTrace& trace);
nlohmann::ordered_json validation_json(const ValidationReport& report);

}  // namespace crncert
