#include "crncert/network.hpp"

#include <algorithm>

namespace crncert {

Side canonical_side(Side side) {
  std::sort(side.begin(), side.end(),
            [](const Term& a, const Term& b) { return a.species < b.species; });
  Side out;
  for (const auto& t : side) {
    if (!out.empty() && out.back().species == t.species)
      out.back().coeff += t.coeff;
    else
      out.push_back(t);
  }
  return out;
}

int coefficient(const Side& side, std::size_t species) {
  auto it = std::lower_bound(
      side.begin(), side.end(), species,
      [](const Term& t, std::size_t s) { return t.species < s; });
  return (it != side.end() && it->species == species) ? it->coeff : 0;
}

Network::Network(std::vector<std::string> species, std::vector<Reaction> reactions)
    : species_(std::move(species)), reactions_(std::move(reactions)) {
  for (std::size_t i = 0; i < species_.size(); ++i) {
    if (species_[i].empty()) throw NetworkError("empty species name");
    if (!index_.emplace(species_[i], i).second)
      throw NetworkError("duplicate species name '" + species_[i] + "'");
  }
  const std::size_t n = species_.size();
  const std::size_t nu = reactions_.size();
  for (std::size_t j = 0; j < nu; ++j) {
    auto& r = reactions_[j];
    for (const Side* side : {&r.reactants, &r.products}) {
      for (const auto& t : *side) {
        if (t.species >= n)
          throw NetworkError("reaction " + std::to_string(j) + " references unknown species");
        if (t.coeff <= 0)
          throw NetworkError("reaction " + std::to_string(j) + " has a non-positive coefficient");
      }
    }
    r.reactants = canonical_side(std::move(r.reactants));
    r.products = canonical_side(std::move(r.products));
    if (r.reactants.empty() && r.products.empty())
      throw NetworkError("reaction " + std::to_string(j) + " has two empty sides");
  }
  for (std::size_t j = 0; j < nu; ++j) {
    const auto& r = reactions_[j];
    if (!r.reverse_of) continue;
    const std::size_t k = *r.reverse_of;
    if (k >= nu || k == j)
      throw NetworkError("reaction " + std::to_string(j) + " has an invalid reverse link");
    if (!r.is_reverse_of(reactions_[k]) || reactions_[k].reverse_of != j)
      throw NetworkError("reactions " + std::to_string(j) + " and " + std::to_string(k) +
                         " are linked as reverses but do not mirror each other");
  }

  gamma_ = IntMatrix(n, nu, 0);
  for (std::size_t j = 0; j < nu; ++j) {
    for (const auto& t : reactions_[j].reactants) gamma_(t.species, j) -= t.coeff;
    for (const auto& t : reactions_[j].products) gamma_(t.species, j) += t.coeff;
  }
}

std::optional<std::size_t> Network::find_species(std::string_view name) const {
  auto it = index_.find(std::string(name));
  if (it == index_.end()) return std::nullopt;
  return it->second;
}

std::string Network::describe_side(const Side& side) const {
  if (side.empty()) return "0";
  std::string s;
  for (std::size_t k = 0; k < side.size(); ++k) {
    if (k) s += " + ";
    if (side[k].coeff != 1) s += std::to_string(side[k].coeff) + " ";
    s += species_[side[k].species];
  }
  return s;
}

std::string Network::describe(std::size_t j) const {
  const auto& r = reactions_.at(j);
  return describe_side(r.reactants) + " -> " + describe_side(r.products);
}

IntMatrix PetriNet::incidence() const {
  IntMatrix m(num_species, num_reactions, 0);
  for (const auto& a : input_arcs) m(a.species, a.reaction) -= a.weight;
  for (const auto& a : output_arcs) m(a.species, a.reaction) += a.weight;
  return m;
}

PetriNet petri_net(const Network& net) {
  PetriNet p;
  p.num_species = net.num_species();
  p.num_reactions = net.num_reactions();
  for (std::size_t j = 0; j < net.num_reactions(); ++j) {
    for (const auto& t : net.reaction(j).reactants)
      p.input_arcs.push_back({t.species, j, t.coeff});
    for (const auto& t : net.reaction(j).products)
      p.output_arcs.push_back({t.species, j, t.coeff});
  }
  return p;
}

}  // namespace crncert
