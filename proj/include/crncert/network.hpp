#pragma once

// Immutable reaction network: species, directed reactions, stoichiometry.

#include <cstddef>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

#include "crncert/exact.hpp"

namespace crncert {

class NetworkError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// One stoichiometric term `coeff * species`.
struct Term {
  std::size_t species = 0;
  int coeff = 1;

  friend bool operator==(const Term&, const Term&) = default;
  friend auto operator<=>(const Term&, const Term&) = default;
};

/// A reaction side, sorted by species id, one term per species.
using Side = std::vector<Term>;

/// Sorts by species and merges repeated species.
Side canonical_side(Side side);

struct Reaction {
  Side reactants;
  Side products;
  /// Id of the reaction that is the exact reverse of this one, if the pair
  /// was declared (or built) as reversible.
  std::optional<std::size_t> reverse_of;

  bool is_reverse_of(const Reaction& other) const {
    return reactants == other.products && products == other.reactants;
  }
};

int coefficient(const Side& side, std::size_t species);

class Network {
 public:
  Network() = default;

  /// Validates and caches Gamma. Throws NetworkError on malformed input.
  Network(std::vector<std::string> species, std::vector<Reaction> reactions);

  std::size_t num_species() const { return species_.size(); }
  std::size_t num_reactions() const { return reactions_.size(); }

  const std::vector<std::string>& species_names() const { return species_; }
  const std::string& species_name(std::size_t i) const { return species_.at(i); }
  std::optional<std::size_t> find_species(std::string_view name) const;

  const std::vector<Reaction>& reactions() const { return reactions_; }
  const Reaction& reaction(std::size_t j) const { return reactions_.at(j); }

  /// n x nu matrix, gamma(i, j) = beta_ij - alpha_ij.
  const IntMatrix& gamma() const { return gamma_; }

  int reactant_coeff(std::size_t i, std::size_t j) const {
    return coefficient(reactions_[j].reactants, i);
  }
  int product_coeff(std::size_t i, std::size_t j) const {
    return coefficient(reactions_[j].products, i);
  }

  /// Human readable `A + 2 B -> C`.
  std::string describe(std::size_t j) const;
  std::string describe_side(const Side& side) const;

 private:
  std::vector<std::string> species_;
  std::vector<Reaction> reactions_;
  std::unordered_map<std::string, std::size_t> index_;
  IntMatrix gamma_;
};

/// Gamma of the network (the cached matrix).
inline const IntMatrix& stoichiometry(const Network& net) { return net.gamma(); }

/// Weighted bipartite species/reaction graph.
struct PetriNet {
  struct Arc {
    std::size_t species;
    std::size_t reaction;
    int weight;
  };
  std::size_t num_species = 0;
  std::size_t num_reactions = 0;
  std::vector<Arc> input_arcs;   // species -> reaction, weight alpha
  std::vector<Arc> output_arcs;  // reaction -> species, weight beta

  /// Incidence matrix rebuilt from the arcs alone.
  IntMatrix incidence() const;
};

PetriNet petri_net(const Network& net);

}  // namespace crncert
