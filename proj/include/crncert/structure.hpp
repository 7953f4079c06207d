#pragma once

// Structural predicates on a network: conservation laws, fluxes, linearity,
// reaction ancestry. All answers are exact.

#include <optional>
#include <vector>

#include "crncert/exact.hpp"
#include "crncert/network.hpp"

namespace crncert {

/// Extreme rays of the cone {x >= 0 : x^T a = 0} (x indexes the rows of a),
/// computed by double description with constraints inserted in column order.
/// Rays are coprime integer vectors, sorted lexicographically descending.
std::vector<std::vector<Integer>> nonnegative_kernel_rays(const IntMatrix& a);

struct ConservationLaw {
  std::vector<Integer> d;
  std::vector<std::size_t> support;

  static ConservationLaw from_vector(std::vector<Integer> d);
};

struct Flux {
  std::vector<Integer> v;
};

/// Extreme rays of {d >= 0 : d^T Gamma = 0}.
std::vector<ConservationLaw> conservation_laws(const Network& net);

struct Conservativity {
  bool conservative = false;
  std::optional<ConservationLaw> witness;
};

Conservativity is_conservative(const Network& net);
Conservativity is_conservative(const Network& net, const std::vector<ConservationLaw>& laws);

struct FluxResult {
  std::optional<Flux> positive;
  /// Positive flux exists and ker Gamma is one-dimensional.
  bool unique = false;
  /// Extreme rays of {v >= 0 : Gamma v = 0}.
  std::vector<std::vector<Integer>> rays;
};

FluxResult positive_flux(const Network& net);

struct Assumptions {
  bool as1 = false;
  bool as2 = false;
  std::vector<std::size_t> catalytic_reactions;
  /// Set for the empty network, where AS1 is vacuous.
  bool degenerate = false;
};

Assumptions check_assumptions(const Network& net);

bool is_catalytic(const Reaction& r);

/// Every reaction is one of X -> Y, X -> 0, 0 -> Y with unit coefficients.
bool is_linear(const Network& net);

/// Reaction reachability closure (reflexive): reach[k][j] iff a directed
/// path R_k -> ... -> R_j exists, where R_k -> R_j when a product of R_k is
/// a reactant of R_j.
std::vector<std::vector<bool>> reaction_reachability(const Network& net);

/// True iff every pair of reactions has a common ancestor.
bool ancestor_pairs(const Network& net);

/// Conditions under which max-min of the flux-weighted rates is a Lyapunov
/// function: a unique (up to scaling) positive flux, and no species is a
/// reactant of more than one reaction.
struct MaxMinConditions {
  bool unique_positive_flux = false;
  bool single_reactant_use = false;
  /// Species that are a reactant of no reaction (allowed, but reported).
  std::vector<std::size_t> unconsumed_species;
  std::optional<Flux> flux;

  bool holds() const { return unique_positive_flux && single_reactant_use; }
};

MaxMinConditions maxmin_conditions(const Network& net);

std::size_t rank(const Network& net);

/// Rank by floating-point SVD with the usual max(n,m)*eps*sigma_max cutoff.
std::size_t numeric_rank(const IntMatrix& m);

}  // namespace crncert
