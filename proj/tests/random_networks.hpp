#pragma once

// Random linear base networks and random elementary modification sequences,
// shared by the unit and acceptance tests.

#include <random>
#include <set>
#include <string>
#include <vector>

#include "crncert/graphmods.hpp"
#include "crncert/isomorphism.hpp"

namespace crncert::testing {

struct RoundTripCase {
  Network base;
  std::vector<Modification> mods;
  Network modified;
};

inline std::size_t draw(std::mt19937_64& rng, std::size_t lo, std::size_t hi) {
  return std::uniform_int_distribution<std::size_t>(lo, hi)(rng);
}

// Linear network on 2..4 species where every species takes part.
inline Network random_linear_base(std::mt19937_64& rng) {
  static const char* names[] = {"A", "B", "C", "D"};
  while (true) {
    const std::size_t n = draw(rng, 2, 4);
    const std::size_t m = draw(rng, 2, 5);
    std::set<std::pair<int, int>> seen;  // -1 is the empty side
    std::vector<Reaction> rs;
    while (rs.size() < m) {
      const int from = static_cast<int>(draw(rng, 0, n)) - 1;
      const int to = static_cast<int>(draw(rng, 0, n)) - 1;
      if (from == to || !seen.insert({from, to}).second) continue;
      Reaction r;
      if (from >= 0) r.reactants = {{static_cast<std::size_t>(from), 1}};
      if (to >= 0) r.products = {{static_cast<std::size_t>(to), 1}};
      rs.push_back(r);
    }
    std::set<int> used;
    for (auto [a, b] : seen) used.insert({a, b});
    used.erase(-1);
    if (used.size() != n) continue;
    return Network(std::vector<std::string>(names, names + n), rs);
  }
}

// One elementary modification with valid ids and a fresh name, or nothing if
// the drawn parameters are rejected.
inline std::optional<std::pair<Modification, Network>> random_step(std::mt19937_64& rng,
                                                                   const Network& net,
                                                                   const std::string& fresh) {
  const std::size_t ns = net.num_species(), nr = net.num_reactions();
  const std::size_t j = draw(rng, 0, nr - 1), k = draw(rng, 0, nr - 1);
  const std::size_t i = draw(rng, 0, ns - 1);
  Modification m;
  switch (draw(rng, 0, 6)) {
    case 0: m = mod::Reversal{j}; break;
    case 1: m = mod::AddIntermediate{j, fresh}; break;
    case 2: m = mod::ExternalRegulation{i}; break;
    case 3: m = mod::ConservedRegulation{i, fresh}; break;
    case 4: m = mod::AddFeedbackSpecies{j, k, fresh}; break;
    case 5: m = mod::AddCatalyst{i, fresh}; break;
    default: m = mod::AddDimer{i, fresh}; break;
  }
  try {
    return std::make_pair(m, apply_modification(net, m));
  } catch (const ModificationError&) {
    return std::nullopt;
  }
}

inline RoundTripCase random_round_trip_case(std::mt19937_64& rng, std::size_t max_steps = 3) {
  RoundTripCase c{random_linear_base(rng), {}, Network()};
  c.modified = c.base;
  const std::size_t steps = draw(rng, 1, max_steps);
  while (c.mods.size() < steps) {
    const std::string fresh = "M" + std::to_string(c.mods.size() + 1);
    if (auto s = random_step(rng, c.modified, fresh)) {
      c.mods.push_back(s->first);
      c.modified = std::move(s->second);
    }
  }
  return c;
}

// Search for any sequence of inverse rewrites from `modified` back to a
// network isomorphic to `base`.
inline std::optional<ReductionTrace> recover_base(const Network& modified, const Network& base,
                                                  std::size_t node_budget = 200000) {
  ReduceOptions opt;
  opt.max_alternatives = static_cast<std::size_t>(-1);
  opt.node_budget = node_budget;
  opt.prune = [&base](const Network& n) {
    return n.num_species() < base.num_species() || n.num_reactions() < base.num_reactions();
  };
  const std::vector<ModKind> kinds{ModKind::Reversal,          ModKind::Intermediate,
                                   ModKind::ExternalRegulation, ModKind::ConservedRegulation,
                                   ModKind::FeedbackSpecies,    ModKind::Catalyst,
                                   ModKind::Dimer};
  return reduce_to(
      modified, [&base](const Network& n) { return isomorphic(n, base); }, kinds, Target::Linear,
      opt);
}

}  // namespace crncert::testing
