#pragma once

// Siphons, their classification against conservation laws, and graphical
// persistence, either by direct enumeration or carried along a trace.

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "crncert/certificates.hpp"
#include "crncert/graphmods.hpp"
#include "crncert/network.hpp"
#include "crncert/structure.hpp"

namespace crncert {

/// Every reaction producing a member also consumes a member. Empty sets are
/// not siphons.
bool is_siphon(const Network& net, const std::vector<std::size_t>& members);

struct SiphonOptions {
  /// Networks with more species are not enumerated.
  std::size_t species_cap = 24;
  /// Branch-and-bound nodes before the result is flagged incomplete.
  std::size_t node_budget = 2'000'000;
};

struct SiphonEnumeration {
  /// Sorted members, sets in lexicographic order.
  std::vector<std::vector<std::size_t>> minimal;
  bool complete = true;
  std::string note;
};

SiphonEnumeration enumerate_minimal_siphons(const Network& net, const SiphonOptions& options = {});

enum class SiphonClass { Trivial, Critical };

const char* siphon_class_name(SiphonClass c);

struct Siphon {
  std::vector<std::size_t> members;
  bool minimal = true;
  SiphonClass classification = SiphonClass::Critical;
  /// For trivial siphons: an extreme law whose support the siphon contains.
  std::optional<ConservationLaw> witness_law;
};

std::vector<Siphon> classify_siphons(const Network& net,
                                     const std::vector<std::vector<std::size_t>>& siphons,
                                     const std::vector<ConservationLaw>& laws);

/// Scans all 2^n subsets (n <= 16) for a siphon containing no law support.
/// Throws std::invalid_argument for larger networks.
std::optional<std::vector<std::size_t>> exhaustive_critical_siphon(
    const Network& net, const std::vector<ConservationLaw>& laws);

enum class Persistence { Yes, No, Incomplete };

const char* persistence_name(Persistence p);

struct PersistenceResult {
  Persistence verdict = Persistence::Incomplete;
  /// direct, theorem20, theorem21_part1 or theorem21_part2.
  std::string method = "direct";
  std::vector<Siphon> siphons;
  std::optional<std::vector<std::size_t>> witness;
  bool enumeration_complete = false;
  /// The 2^n scan agreed with the minimal-siphon verdict.
  bool exhaustive_checked = false;
  std::vector<std::string> notes;
};

PersistenceResult graphically_persistent(const Network& net, const SiphonOptions& options = {});

/// Name of the propagation result that covers the network reached by
/// `trace`, or nothing. `cert` is the certificate of that network, if any.
std::optional<std::string> propagate_persistence(const ReductionTrace& trace, bool base_persistent,
                                                 const Certificate* cert);

/// Direct enumeration combined with propagation along the certificate
/// traces. A critical siphon found directly always wins.
PersistenceResult persistence_verdict(const Network& net, const std::vector<const Certificate*>& certs,
                                      const SiphonOptions& options = {});

}  // namespace crncert
