#pragma once

// Elementary graph modifications, the enzymatic and processive composites,
// and the reduction search that peels modifications off a network until a
// tractable base remains.

#include <functional>
#include <optional>
#include <stdexcept>
#include <string>
#include <utility>
#include <variant>
#include <vector>

#include "crncert/network.hpp"

namespace crncert {

class ModificationError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

namespace mod {

/// Appends the reverse of reaction `reaction`.
struct Reversal {
  std::size_t reaction;
};
/// Splits `reaction` into reactants -> X* and X* -> products.
struct AddIntermediate {
  std::size_t reaction;
  std::string intermediate;
};
/// Appends X -> 0 and 0 -> X.
struct ExternalRegulation {
  std::size_t species;
};
/// Appends X <-> X' for a new species X'.
struct ConservedRegulation {
  std::size_t species;
  std::string partner;
};
/// X* becomes an extra product of `producer` and an extra reactant of `consumer`.
struct AddFeedbackSpecies {
  std::size_t producer;
  std::size_t consumer;
  std::string feedback;
};
/// New species that is a product wherever `species` is a reactant and vice
/// versa, with the same coefficients.
struct AddCatalyst {
  std::size_t species;
  std::string catalyst;
};
/// New species with exactly the memberships of `species`.
struct AddDimer {
  std::size_t species;
  std::string dimer;
};
/// reactants + E <-> C -> products + E.
struct Enzymatic {
  std::size_t reaction;
  std::string enzyme;
  std::string complex;
};
/// reactants + E <-> C0 <-> ... <-> Cm -> products + E, m >= 1.
struct Processive {
  std::size_t reaction;
  std::string enzyme;
  std::vector<std::string> complexes;
};

}  // namespace mod

using Modification =
    std::variant<mod::Reversal, mod::AddIntermediate, mod::ExternalRegulation,
                 mod::ConservedRegulation, mod::AddFeedbackSpecies, mod::AddCatalyst,
                 mod::AddDimer, mod::Enzymatic, mod::Processive>;

enum class ModKind {
  Reversal,
  Intermediate,
  ExternalRegulation,
  ConservedRegulation,
  FeedbackSpecies,
  Catalyst,
  Dimer,
  Enzymatic,
  Processive,
};

ModKind kind_of(const Modification& m);
const char* kind_name(ModKind k);
bool is_elementary(ModKind k);

/// Throws ModificationError when the modification is not valid for `net`.
/// Reverse links that no longer mirror are dropped afterwards.
Network apply_modification(const Network& net, const Modification& m);

Network apply_enzymatic(const Network& net, std::size_t j, const std::string& enzyme,
                        const std::string& complex);
Network apply_processive(const Network& net, std::size_t j, const std::string& enzyme,
                         const std::vector<std::string>& complexes);
/// Names the m+1 complexes `<enzyme>_C0 .. <enzyme>_Cm`.
Network apply_processive(const Network& net, std::size_t j, const std::string& enzyme,
                         std::size_t m);

/// Which family of certificate a search is aiming at; decides peel priority
/// and the license recorded on each step.
enum class Target { Linear, MaxMinBase };

struct TraceStep {
  /// Ids refer to the network right before this step.
  Modification mod;
  /// Human-readable parameters (names, reactions written out).
  std::vector<std::pair<std::string, std::string>> params;
  /// Name of the result allowing this step for the target family; empty when
  /// no result covers it.
  std::string licensed_by;
  /// For reversals: every product of the reversed reaction is produced by no
  /// other original reaction.
  bool maxmin_reversal_eligible = false;
  /// For catalyst/dimer steps: the species being mirrored or copied.
  std::string target_species;

  ModKind kind() const { return kind_of(mod); }
};

struct ReductionTrace {
  Network base;
  std::vector<TraceStep> steps;
  /// Replay of the steps from the base; isomorphic to the reduced network.
  Network final_network;
};

/// Re-applies the steps to the base.
Network replay(const ReductionTrace& trace);

using Goal = std::function<bool(const Network&)>;

struct ReduceStats {
  std::size_t nodes = 0;
  bool budget_exhausted = false;
};

struct ReduceOptions {
  /// Peel candidates tried at each search node.
  std::size_t max_alternatives = 3;
  /// Total search nodes before giving up.
  std::size_t node_budget = 20000;
  /// Optional: nodes for which this returns true are not expanded.
  Goal prune;
  /// Optional: filled in by the search.
  ReduceStats* stats = nullptr;
};

std::optional<ReductionTrace> reduce(const Network& net, Target target,
                                     const ReduceOptions& options = {});

/// Search with a caller-supplied goal and peel order. `license_target`
/// selects the license names recorded on the steps.
std::optional<ReductionTrace> reduce_to(const Network& net, const Goal& goal,
                                        const std::vector<ModKind>& peel_order,
                                        Target license_target, const ReduceOptions& options);

/// Peel priorities used by `reduce`.
const std::vector<ModKind>& peel_order(Target target);

/// License name for a step of kind `k` under a family, or "" when the family
/// does not allow it. Reversals under Max-Min need the eligibility flag.
std::string license_for(ModKind k, Target target, bool maxmin_reversal_eligible);

}  // namespace crncert
