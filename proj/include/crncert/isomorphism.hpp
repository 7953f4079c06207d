#pragma once

// Structural isomorphism of reaction networks (names ignored).

#include <optional>
#include <string>
#include <vector>

#include "crncert/network.hpp"

namespace crncert {

struct NetworkIsomorphism {
  std::vector<std::size_t> species;    // species i of a -> species[i] of b
  std::vector<std::size_t> reactions;  // reaction j of a -> reactions[j] of b
};

/// Colour refinement on the weighted bipartite Petri net, run jointly on
/// both graphs, then individualization-refinement with backtracking. The
/// mapping returned is verified arc by arc.
std::optional<NetworkIsomorphism> find_isomorphism(const Network& a, const Network& b);

inline bool isomorphic(const Network& a, const Network& b) {
  return find_isomorphism(a, b).has_value();
}

/// Name-level identity: same species names and the same multiset of
/// reactions written with names. Stronger than isomorphism.
bool same_content(const Network& a, const Network& b);

/// Reaction written with species names in name order; used to locate a
/// reaction in another network with the same species names.
std::string reaction_key(const Network& net, std::size_t j);

}  // namespace crncert
