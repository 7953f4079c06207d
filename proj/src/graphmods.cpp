#include "crncert/graphmods.hpp"

#include <algorithm>
#include <map>
#include <set>
#include <unordered_set>

#include "crncert/isomorphism.hpp"
#include "crncert/structure.hpp"

namespace crncert {

ModKind kind_of(const Modification& m) {
  return std::visit(
      [](const auto& x) -> ModKind {
        using T = std::decay_t<decltype(x)>;
        if constexpr (std::is_same_v<T, mod::Reversal>) return ModKind::Reversal;
        else if constexpr (std::is_same_v<T, mod::AddIntermediate>) return ModKind::Intermediate;
        else if constexpr (std::is_same_v<T, mod::ExternalRegulation>) return ModKind::ExternalRegulation;
        else if constexpr (std::is_same_v<T, mod::ConservedRegulation>) return ModKind::ConservedRegulation;
        else if constexpr (std::is_same_v<T, mod::AddFeedbackSpecies>) return ModKind::FeedbackSpecies;
        else if constexpr (std::is_same_v<T, mod::AddCatalyst>) return ModKind::Catalyst;
        else if constexpr (std::is_same_v<T, mod::AddDimer>) return ModKind::Dimer;
        else if constexpr (std::is_same_v<T, mod::Enzymatic>) return ModKind::Enzymatic;
        else return ModKind::Processive;
      },
      m);
}

const char* kind_name(ModKind k) {
  switch (k) {
    case ModKind::Reversal: return "reversal";
    case ModKind::Intermediate: return "intermediate";
    case ModKind::ExternalRegulation: return "external_regulation";
    case ModKind::ConservedRegulation: return "conserved_regulation";
    case ModKind::FeedbackSpecies: return "feedback_species";
    case ModKind::Catalyst: return "catalyst";
    case ModKind::Dimer: return "dimer";
    case ModKind::Enzymatic: return "enzymatic";
    case ModKind::Processive: return "processive";
  }
  return "?";
}

bool is_elementary(ModKind k) { return k != ModKind::Enzymatic && k != ModKind::Processive; }

namespace {

bool valid_species_name(const std::string& s) {
  if (s.empty()) return false;
  auto start = [](char c) { return (c >= 'A' && c <= 'Z') || (c >= 'a' && c <= 'z') || c == '_'; };
  auto body = [&](char c) { return start(c) || (c >= '0' && c <= '9'); };
  auto suffix = [](char c) { return c == '+' || c == '-' || c == '\''; };
  if (!start(s[0])) return false;
  std::size_t p = 1;
  while (p < s.size() && body(s[p])) ++p;
  while (p < s.size() && suffix(s[p])) ++p;
  return p == s.size();
}

// Mutable copy of a network used to build modified networks.
struct Draft {
  std::vector<std::string> species;
  std::vector<Reaction> reactions;

  explicit Draft(const Network& net)
      : species(net.species_names()), reactions(net.reactions()) {}

  std::size_t add_species(const std::string& name) {
    if (!valid_species_name(name))
      throw ModificationError("invalid species name '" + name + "'");
    if (std::find(species.begin(), species.end(), name) != species.end())
      throw ModificationError("species name '" + name + "' already in use");
    species.push_back(name);
    return species.size() - 1;
  }

  void erase_reactions(const std::set<std::size_t>& drop) {
    std::vector<std::optional<std::size_t>> remap(reactions.size());
    std::vector<Reaction> kept;
    for (std::size_t j = 0; j < reactions.size(); ++j) {
      if (drop.count(j)) continue;
      remap[j] = kept.size();
      kept.push_back(reactions[j]);
    }
    for (auto& r : kept)
      if (r.reverse_of) r.reverse_of = remap[*r.reverse_of];
    reactions = std::move(kept);
  }

  void erase_species(const std::set<std::size_t>& drop) {
    std::vector<std::size_t> remap(species.size(), 0);
    std::vector<std::string> kept;
    for (std::size_t i = 0; i < species.size(); ++i) {
      if (drop.count(i)) continue;
      remap[i] = kept.size();
      kept.push_back(species[i]);
    }
    for (auto& r : reactions) {
      for (Side* s : {&r.reactants, &r.products}) {
        Side out;
        for (const auto& t : *s)
          if (!drop.count(t.species)) out.push_back({remap[t.species], t.coeff});
        *s = std::move(out);
      }
    }
    species = std::move(kept);
  }

  Network build() {
    for (auto& r : reactions) {
      r.reactants = canonical_side(std::move(r.reactants));
      r.products = canonical_side(std::move(r.products));
      if (r.reactants.empty() && r.products.empty())
        throw ModificationError("modification would create a reaction with two empty sides");
    }
    std::vector<bool> valid(reactions.size(), false);
    for (std::size_t j = 0; j < reactions.size(); ++j) {
      const auto& k = reactions[j].reverse_of;
      valid[j] = k && *k < reactions.size() && *k != j &&
                 reactions[j].is_reverse_of(reactions[*k]) && reactions[*k].reverse_of == j;
    }
    for (std::size_t j = 0; j < reactions.size(); ++j)
      if (!valid[j]) reactions[j].reverse_of.reset();
    try {
      return Network(species, reactions);
    } catch (const NetworkError& e) {
      throw ModificationError(e.what());
    }
  }
};

void check_reaction(const Network& net, std::size_t j) {
  if (j >= net.num_reactions())
    throw ModificationError("reaction id " + std::to_string(j) + " out of range");
}

void check_species(const Network& net, std::size_t i) {
  if (i >= net.num_species())
    throw ModificationError("species id " + std::to_string(i) + " out of range");
}

Network apply_one(const Network& net, const mod::Reversal& m) {
  check_reaction(net, m.reaction);
  Draft d(net);
  const auto& r = net.reaction(m.reaction);
  Reaction rev{r.products, r.reactants, std::nullopt};
  // A reaction can have at most one linked reverse; an extra copy stays unlinked.
  if (!r.reverse_of) {
    rev.reverse_of = m.reaction;
    d.reactions[m.reaction].reverse_of = d.reactions.size();
  }
  d.reactions.push_back(std::move(rev));
  return d.build();
}

Network apply_one(const Network& net, const mod::AddIntermediate& m) {
  check_reaction(net, m.reaction);
  const auto& r = net.reaction(m.reaction);
  if (r.products.empty())
    throw ModificationError("cannot add an intermediate to a reaction with no products");
  Draft d(net);
  const std::size_t x = d.add_species(m.intermediate);
  d.reactions[m.reaction] = Reaction{r.reactants, {{x, 1}}, std::nullopt};
  d.reactions.push_back(Reaction{{{x, 1}}, r.products, std::nullopt});
  return d.build();
}

Network apply_one(const Network& net, const mod::ExternalRegulation& m) {
  check_species(net, m.species);
  Draft d(net);
  const std::size_t j = d.reactions.size();
  d.reactions.push_back(Reaction{{{m.species, 1}}, {}, j + 1});
  d.reactions.push_back(Reaction{{}, {{m.species, 1}}, j});
  return d.build();
}

Network apply_one(const Network& net, const mod::ConservedRegulation& m) {
  check_species(net, m.species);
  Draft d(net);
  const std::size_t x = d.add_species(m.partner);
  const std::size_t j = d.reactions.size();
  d.reactions.push_back(Reaction{{{m.species, 1}}, {{x, 1}}, j + 1});
  d.reactions.push_back(Reaction{{{x, 1}}, {{m.species, 1}}, j});
  return d.build();
}

Network apply_one(const Network& net, const mod::AddFeedbackSpecies& m) {
  check_reaction(net, m.producer);
  check_reaction(net, m.consumer);
  if (m.producer == m.consumer)
    throw ModificationError("feedback species needs two distinct reactions");
  Draft d(net);
  const std::size_t x = d.add_species(m.feedback);
  d.reactions[m.producer].products.push_back({x, 1});
  d.reactions[m.consumer].reactants.push_back({x, 1});
  return d.build();
}

Network apply_one(const Network& net, const mod::AddCatalyst& m) {
  check_species(net, m.species);
  Draft d(net);
  const std::size_t x = d.add_species(m.catalyst);
  for (std::size_t j = 0; j < net.num_reactions(); ++j) {
    if (int a = net.reactant_coeff(m.species, j)) d.reactions[j].products.push_back({x, a});
    if (int b = net.product_coeff(m.species, j)) d.reactions[j].reactants.push_back({x, b});
  }
  return d.build();
}

Network apply_one(const Network& net, const mod::AddDimer& m) {
  check_species(net, m.species);
  Draft d(net);
  const std::size_t x = d.add_species(m.dimer);
  for (std::size_t j = 0; j < net.num_reactions(); ++j) {
    if (int a = net.reactant_coeff(m.species, j)) d.reactions[j].reactants.push_back({x, a});
    if (int b = net.product_coeff(m.species, j)) d.reactions[j].products.push_back({x, b});
  }
  return d.build();
}

Network apply_one(const Network& net, const mod::Enzymatic& m) {
  return apply_enzymatic(net, m.reaction, m.enzyme, m.complex);
}

Network apply_one(const Network& net, const mod::Processive& m) {
  return apply_processive(net, m.reaction, m.enzyme, m.complexes);
}

}  // namespace

Network apply_modification(const Network& net, const Modification& m) {
  return std::visit([&net](const auto& x) { return apply_one(net, x); }, m);
}

Network apply_enzymatic(const Network& net, std::size_t j, const std::string& enzyme,
                        const std::string& complex) {
  check_reaction(net, j);
  Network n1 = apply_one(net, mod::AddIntermediate{j, complex});
  Network n2 = apply_one(n1, mod::Reversal{j});
  const std::size_t c = *n2.find_species(complex);
  return apply_one(n2, mod::AddCatalyst{c, enzyme});
}

Network apply_processive(const Network& net, std::size_t j, const std::string& enzyme,
                         const std::vector<std::string>& complexes) {
  if (complexes.size() < 2)
    throw ModificationError("processive rewrite needs m >= 1 (at least two complexes)");
  check_reaction(net, j);
  Network cur = apply_enzymatic(net, j, enzyme, complexes[0]);
  // apply_enzymatic leaves C0 -> products + E at the old end of the list.
  std::size_t last = net.num_reactions();
  for (std::size_t k = 1; k < complexes.size(); ++k) {
    cur = apply_one(cur, mod::AddIntermediate{last, complexes[k]});
    const std::size_t tail = cur.num_reactions() - 1;
    cur = apply_one(cur, mod::Reversal{last});
    last = tail;
  }
  return cur;
}

Network apply_processive(const Network& net, std::size_t j, const std::string& enzyme,
                         std::size_t m) {
  if (m == 0) throw ModificationError("processive rewrite needs m >= 1");
  std::vector<std::string> names;
  for (std::size_t k = 0; k <= m; ++k) names.push_back(enzyme + "_C" + std::to_string(k));
  return apply_processive(net, j, enzyme, names);
}

// ---------------------------------------------------------------------------
// Reduction search

const std::vector<ModKind>& peel_order(Target target) {
  static const std::vector<ModKind> linear{
      ModKind::Enzymatic,    ModKind::Catalyst,           ModKind::Dimer,
      ModKind::Reversal,     ModKind::Intermediate,       ModKind::ExternalRegulation,
      ModKind::ConservedRegulation};
  static const std::vector<ModKind> maxmin{
      ModKind::Processive, ModKind::Enzymatic, ModKind::Reversal,       ModKind::Intermediate,
      ModKind::Catalyst,   ModKind::Dimer,     ModKind::FeedbackSpecies};
  return target == Target::Linear ? linear : maxmin;
}

std::string license_for(ModKind k, Target target, bool maxmin_reversal_eligible) {
  if (target == Target::Linear) {
    switch (k) {
      case ModKind::Reversal:
      case ModKind::Intermediate:
      case ModKind::ExternalRegulation:
      case ModKind::ConservedRegulation: return "soc_linear_rewrite";
      case ModKind::Catalyst:
      case ModKind::Dimer: return "soc_catalyst_dimer";
      case ModKind::Enzymatic: return "soc_enzymatic";
      default: return "";
    }
  }
  switch (k) {
    case ModKind::Intermediate:
    case ModKind::FeedbackSpecies:
    case ModKind::Catalyst:
    case ModKind::Dimer: return "maxmin_rewrite";
    case ModKind::Reversal: return maxmin_reversal_eligible ? "maxmin_reversal" : "";
    case ModKind::Enzymatic:
    case ModKind::Processive: return "maxmin_processive";
    default: return "";
  }
}

namespace {

// Id-free description of a peeled step, resolved against whichever network
// (with the same species names) it is replayed on.
struct StepSpec {
  ModKind kind;
  std::string reaction;   // reaction key in the smaller network
  std::string reaction2;  // feedback consumer
  std::string species;
  std::string fresh;
  std::string enzyme;
  std::vector<std::string> complexes;
};

std::size_t species_by_name(const Network& net, const std::string& name) {
  auto i = net.find_species(name);
  if (!i) throw ModificationError("species '" + name + "' not found during replay");
  return *i;
}

std::size_t reaction_by_key(const Network& net, const std::string& key,
                            std::optional<std::size_t> avoid = std::nullopt,
                            bool prefer_unlinked = false) {
  std::optional<std::size_t> found;
  for (std::size_t j = 0; j < net.num_reactions(); ++j) {
    if (avoid && j == *avoid) continue;
    if (reaction_key(net, j) != key) continue;
    if (!prefer_unlinked || !net.reaction(j).reverse_of) return j;
    if (!found) found = j;
  }
  if (!found) throw ModificationError("reaction not found during replay");
  return *found;
}

Modification resolve(const StepSpec& s, const Network& net) {
  switch (s.kind) {
    case ModKind::Reversal:
      return mod::Reversal{reaction_by_key(net, s.reaction, std::nullopt, true)};
    case ModKind::Intermediate:
      return mod::AddIntermediate{reaction_by_key(net, s.reaction), s.fresh};
    case ModKind::ExternalRegulation:
      return mod::ExternalRegulation{species_by_name(net, s.species)};
    case ModKind::ConservedRegulation:
      return mod::ConservedRegulation{species_by_name(net, s.species), s.fresh};
    case ModKind::FeedbackSpecies: {
      const std::size_t p = reaction_by_key(net, s.reaction);
      return mod::AddFeedbackSpecies{p, reaction_by_key(net, s.reaction2, p), s.fresh};
    }
    case ModKind::Catalyst: return mod::AddCatalyst{species_by_name(net, s.species), s.fresh};
    case ModKind::Dimer: return mod::AddDimer{species_by_name(net, s.species), s.fresh};
    case ModKind::Enzymatic:
      return mod::Enzymatic{reaction_by_key(net, s.reaction), s.enzyme, s.fresh};
    case ModKind::Processive:
      return mod::Processive{reaction_by_key(net, s.reaction), s.enzyme, s.complexes};
  }
  throw ModificationError("unknown step kind");
}

struct Peel {
  Network smaller;
  StepSpec spec;
};

// Species membership: for species i, (reaction, alpha, beta) for each
// reaction it takes part in.
struct Membership {
  struct Entry {
    std::size_t reaction;
    int alpha;
    int beta;
  };
  std::vector<std::vector<Entry>> of;

  explicit Membership(const Network& net) : of(net.num_species()) {
    for (std::size_t j = 0; j < net.num_reactions(); ++j) {
      std::map<std::size_t, std::pair<int, int>> ab;
      for (const auto& t : net.reaction(j).reactants) ab[t.species].first = t.coeff;
      for (const auto& t : net.reaction(j).products) ab[t.species].second = t.coeff;
      for (const auto& [i, p] : ab) of[i].push_back({j, p.first, p.second});
    }
  }
};

bool is_unit_side(const Side& s, std::size_t species) {
  return s.size() == 1 && s[0].species == species && s[0].coeff == 1;
}

bool sides_overlap(const Side& a, const Side& b) {
  for (const auto& t : a)
    if (coefficient(b, t.species) > 0) return true;
  return false;
}

Side without(const Side& s, std::size_t species) {
  Side out;
  for (const auto& t : s)
    if (t.species != species) out.push_back(t);
  return out;
}

class PeelFinder {
 public:
  explicit PeelFinder(const Network& net) : net_(net), mem_(net) {}

  // Appends verified candidates of kind k until `out` holds `limit` entries.
  void find(ModKind k, std::vector<Peel>& out, std::size_t limit) {
    out_ = &out;
    limit_ = limit;
    switch (k) {
      case ModKind::Reversal: reversals(); break;
      case ModKind::Intermediate: intermediates(); break;
      case ModKind::ExternalRegulation: external_regulations(); break;
      case ModKind::ConservedRegulation: conserved_regulations(); break;
      case ModKind::FeedbackSpecies: feedback(); break;
      case ModKind::Catalyst: mirrors(true); break;
      case ModKind::Dimer: mirrors(false); break;
      case ModKind::Enzymatic: enzymatic(); break;
      case ModKind::Processive: processive(); break;
    }
  }

 private:
  bool full() const { return out_->size() >= limit_; }

  // Accepts a candidate only if re-applying the step reproduces the current
  // network exactly (by names), which makes the replay sound.
  void offer(Draft d, StepSpec spec) {
    try {
      Network smaller = d.build();
      Network back = apply_modification(smaller, resolve(spec, smaller));
      if (!same_content(back, net_)) return;
      for (const auto& p : *out_)
        if (same_content(p.smaller, smaller)) return;
      out_->push_back({std::move(smaller), std::move(spec)});
    } catch (const ModificationError&) {
    }
  }

  bool appears_elsewhere(std::size_t i, const std::set<std::size_t>& except) const {
    for (const auto& e : mem_.of[i])
      if (!except.count(e.reaction)) return true;
    return false;
  }

  void reversals() {
    std::set<std::string> seen;
    for (std::size_t k = 0; k < net_.num_reactions() && !full(); ++k) {
      for (std::size_t j = 0; j < k; ++j) {
        if (!net_.reaction(k).is_reverse_of(net_.reaction(j))) continue;
        const std::string key = reaction_key(net_, j);
        if (!seen.insert(key).second) break;
        Draft d(net_);
        d.erase_reactions({k});
        offer(std::move(d), {ModKind::Reversal, key, "", "", "", "", {}});
        break;
      }
    }
  }

  void intermediates() {
    for (std::size_t x = 0; x < net_.num_species() && !full(); ++x) {
      const auto& m = mem_.of[x];
      if (m.size() != 2) continue;
      const auto* prod = m[0].beta ? &m[0] : &m[1];
      const auto* cons = m[0].beta ? &m[1] : &m[0];
      if (prod->alpha || cons->beta || prod->beta != 1 || cons->alpha != 1) continue;
      const auto& p = net_.reaction(prod->reaction);
      const auto& q = net_.reaction(cons->reaction);
      if (!is_unit_side(p.products, x) || !is_unit_side(q.reactants, x)) continue;
      if (p.reactants.empty() && q.products.empty()) continue;
      if (sides_overlap(p.reactants, q.products)) continue;
      Draft d(net_);
      d.reactions[prod->reaction] = Reaction{p.reactants, q.products, std::nullopt};
      d.erase_reactions({cons->reaction});
      d.erase_species({x});
      // Key of the merged reaction, written with names.
      Network tmp = Draft(d).build();
      const std::size_t merged = prod->reaction - (cons->reaction < prod->reaction ? 1 : 0);
      offer(std::move(d), {ModKind::Intermediate, reaction_key(tmp, merged), "", "",
                           net_.species_name(x), "", {}});
    }
  }

  void external_regulations() {
    for (std::size_t k = 0; k < net_.num_species() && !full(); ++k) {
      std::optional<std::size_t> out, in;
      for (const auto& e : mem_.of[k]) {
        const auto& r = net_.reaction(e.reaction);
        if (!out && is_unit_side(r.reactants, k) && r.products.empty()) out = e.reaction;
        if (!in && r.reactants.empty() && is_unit_side(r.products, k)) in = e.reaction;
      }
      if (!out || !in || !appears_elsewhere(k, {*out, *in})) continue;
      Draft d(net_);
      d.erase_reactions({*out, *in});
      offer(std::move(d), {ModKind::ExternalRegulation, "", "", net_.species_name(k), "", "", {}});
    }
  }

  void conserved_regulations() {
    for (std::size_t x = 0; x < net_.num_species() && !full(); ++x) {
      const auto& m = mem_.of[x];
      if (m.size() != 2) continue;
      const auto& r0 = net_.reaction(m[0].reaction);
      const auto& r1 = net_.reaction(m[1].reaction);
      if (!r0.is_reverse_of(r1)) continue;
      const auto& fwd = is_unit_side(r0.products, x) ? r0 : r1;
      if (!is_unit_side(fwd.products, x) || fwd.reactants.size() != 1 ||
          fwd.reactants[0].coeff != 1)
        continue;
      const std::size_t k = fwd.reactants[0].species;
      if (k == x || !appears_elsewhere(k, {m[0].reaction, m[1].reaction})) continue;
      Draft d(net_);
      d.erase_reactions({m[0].reaction, m[1].reaction});
      d.erase_species({x});
      offer(std::move(d), {ModKind::ConservedRegulation, "", "", net_.species_name(k),
                           net_.species_name(x), "", {}});
    }
  }

  void feedback() {
    for (std::size_t x = 0; x < net_.num_species() && !full(); ++x) {
      const auto& m = mem_.of[x];
      if (m.size() != 2) continue;
      const auto* prod = m[0].beta ? &m[0] : &m[1];
      const auto* cons = m[0].beta ? &m[1] : &m[0];
      if (prod->alpha || cons->beta || prod->beta != 1 || cons->alpha != 1) continue;
      Draft d(net_);
      d.erase_species({x});
      Network tmp;
      try {
        tmp = Draft(d).build();
      } catch (const ModificationError&) {
        continue;
      }
      offer(std::move(d), {ModKind::FeedbackSpecies, reaction_key(tmp, prod->reaction),
                           reaction_key(tmp, cons->reaction), "", net_.species_name(x), "", {}});
    }
  }

  void mirrors(bool catalyst) {
    for (std::size_t c = 0; c < net_.num_species() && !full(); ++c) {
      if (mem_.of[c].empty()) continue;
      for (std::size_t i = 0; i < net_.num_species(); ++i) {
        if (i == c) continue;
        bool match = true;
        for (std::size_t j = 0; j < net_.num_reactions() && match; ++j) {
          const int ac = net_.reactant_coeff(c, j), bc = net_.product_coeff(c, j);
          const int ai = net_.reactant_coeff(i, j), bi = net_.product_coeff(i, j);
          match = catalyst ? (ac == bi && bc == ai) : (ac == ai && bc == bi);
        }
        if (!match) continue;
        Draft d(net_);
        d.erase_species({c});
        offer(std::move(d), {catalyst ? ModKind::Catalyst : ModKind::Dimer, "", "",
                             net_.species_name(i), net_.species_name(c), "", {}});
        break;
      }
    }
  }

  // Locates A + E -> C0 and its mirror C0 -> A + E, with C0 the exact sole
  // product. Returns (a, b, E) candidates.
  std::vector<std::tuple<std::size_t, std::size_t, std::size_t>> binding_steps(std::size_t c0) {
    std::vector<std::tuple<std::size_t, std::size_t, std::size_t>> out;
    for (const auto& ea : mem_.of[c0]) {
      const auto& a = net_.reaction(ea.reaction);
      if (!is_unit_side(a.products, c0)) continue;
      for (const auto& eb : mem_.of[c0]) {
        if (eb.reaction == ea.reaction || !net_.reaction(eb.reaction).is_reverse_of(a)) continue;
        for (const auto& t : a.reactants)
          if (t.coeff == 1 && t.species != c0) out.emplace_back(ea.reaction, eb.reaction, t.species);
        break;
      }
    }
    return out;
  }

  void enzymatic() {
    for (std::size_t c = 0; c < net_.num_species() && !full(); ++c) {
      if (mem_.of[c].size() != 3) continue;
      for (auto [a, b, e] : binding_steps(c)) {
        if (mem_.of[e].size() != 3) continue;
        std::optional<std::size_t> last;
        for (const auto& en : mem_.of[c])
          if (en.reaction != a && en.reaction != b) last = en.reaction;
        if (!last || !is_unit_side(net_.reaction(*last).reactants, c)) continue;
        if (net_.product_coeff(e, *last) != 1) continue;
        const Side lhs = without(net_.reaction(a).reactants, e);
        const Side rhs = without(net_.reaction(*last).products, e);
        if ((lhs.empty() && rhs.empty()) || sides_overlap(lhs, rhs)) continue;
        Draft d(net_);
        d.reactions[a] = Reaction{lhs, rhs, std::nullopt};
        d.erase_reactions({b, *last});
        d.erase_species({c, e});
        Network tmp = Draft(d).build();
        const std::size_t merged = a - (b < a ? 1 : 0) - (*last < a ? 1 : 0);
        StepSpec s{ModKind::Enzymatic, reaction_key(tmp, merged), "", "", net_.species_name(c),
                   net_.species_name(e), {}};
        offer(std::move(d), std::move(s));
        break;
      }
    }
  }

  void processive() {
    for (std::size_t c0 = 0; c0 < net_.num_species() && !full(); ++c0) {
      for (auto [a, b, e] : binding_steps(c0)) {
        if (mem_.of[e].size() != 3) continue;
        std::vector<std::size_t> chain{c0};
        std::set<std::size_t> used{a, b};
        std::optional<std::size_t> final_step;
        bool ok = true;
        while (ok && !final_step) {
          const std::size_t cur = chain.back();
          // Forward reaction out of cur: sole reactant cur, not yet used.
          std::optional<std::size_t> fwd;
          for (const auto& en : mem_.of[cur]) {
            if (used.count(en.reaction)) continue;
            if (is_unit_side(net_.reaction(en.reaction).reactants, cur) &&
                !net_.reaction(en.reaction).products.empty()) {
              const auto& pr = net_.reaction(en.reaction).products;
              if (pr.size() == 1 && pr[0].coeff == 1 && pr[0].species != e) {
                // Step to the next complex needs its mirror as well.
                const std::size_t nxt = pr[0].species;
                if (std::find(chain.begin(), chain.end(), nxt) != chain.end()) continue;
                std::optional<std::size_t> back;
                for (const auto& eb : mem_.of[nxt])
                  if (!used.count(eb.reaction) && eb.reaction != en.reaction &&
                      net_.reaction(eb.reaction).is_reverse_of(net_.reaction(en.reaction)))
                    back = eb.reaction;
                if (!back) continue;
                used.insert(en.reaction);
                used.insert(*back);
                chain.push_back(nxt);
                fwd = en.reaction;
                break;
              }
              if (net_.product_coeff(e, en.reaction) == 1) {
                final_step = en.reaction;
                used.insert(en.reaction);
                fwd = en.reaction;
                break;
              }
            }
          }
          if (!fwd) ok = false;
        }
        if (!ok || chain.size() < 2) continue;
        const Side lhs = without(net_.reaction(a).reactants, e);
        const Side rhs = without(net_.reaction(*final_step).products, e);
        if ((lhs.empty() && rhs.empty()) || sides_overlap(lhs, rhs)) continue;
        Draft d(net_);
        d.reactions[a] = Reaction{lhs, rhs, std::nullopt};
        std::set<std::size_t> drop = used;
        drop.erase(a);
        std::size_t merged = a;
        for (auto r : drop)
          if (r < a) --merged;
        d.erase_reactions(drop);
        std::set<std::size_t> gone(chain.begin(), chain.end());
        gone.insert(e);
        d.erase_species(gone);
        Network tmp;
        try {
          tmp = Draft(d).build();
        } catch (const ModificationError&) {
          continue;
        }
        StepSpec s{ModKind::Processive, reaction_key(tmp, merged), "", "", "",
                   net_.species_name(e), {}};
        for (auto x : chain) s.complexes.push_back(net_.species_name(x));
        offer(std::move(d), std::move(s));
        break;
      }
    }
  }

  const Network& net_;
  Membership mem_;
  std::vector<Peel>* out_ = nullptr;
  std::size_t limit_ = 0;
};

std::string content_fingerprint(const Network& net) {
  std::vector<std::string> keys;
  for (std::size_t j = 0; j < net.num_reactions(); ++j) keys.push_back(reaction_key(net, j));
  std::sort(keys.begin(), keys.end());
  auto names = net.species_names();
  std::sort(names.begin(), names.end());
  std::string s;
  for (const auto& n : names) s += n + ",";
  s += "|";
  for (const auto& k : keys) s += k + ";";
  return s;
}

class Search {
 public:
  Search(const Goal& goal, const std::vector<ModKind>& order, const ReduceOptions& opt)
      : goal_(goal), order_(order), opt_(opt) {}

  bool run(const Network& net) {
    if (++nodes_ > opt_.node_budget) return false;
    if (opt_.prune && opt_.prune(net)) return false;
    if (goal_(net)) {
      base_ = net;
      return true;
    }
    const std::string fp = content_fingerprint(net);
    if (dead_.count(fp)) return false;

    std::vector<Peel> peels;
    PeelFinder finder(net);
    for (auto k : order_) {
      if (peels.size() >= opt_.max_alternatives) break;
      finder.find(k, peels, opt_.max_alternatives);
    }
    for (auto& p : peels) {
      path_.push_back(p.spec);
      if (run(p.smaller)) return true;
      path_.pop_back();
      if (nodes_ > opt_.node_budget) return false;
    }
    dead_.insert(fp);
    return false;
  }

  const std::vector<StepSpec>& path() const { return path_; }
  const Network& base() const { return *base_; }
  std::size_t nodes() const { return nodes_; }

 private:
  const Goal& goal_;
  const std::vector<ModKind>& order_;
  const ReduceOptions& opt_;
  std::size_t nodes_ = 0;
  std::vector<StepSpec> path_;
  std::optional<Network> base_;
  std::unordered_set<std::string> dead_;
};

// Products of reaction j are produced by no other reaction, ignoring
// reactions that were added as linked reverses (the higher id of a pair).
bool reversal_eligible(const Network& net, std::size_t j) {
  for (const auto& t : net.reaction(j).products) {
    for (std::size_t k = 0; k < net.num_reactions(); ++k) {
      if (k == j) continue;
      const auto& r = net.reaction(k);
      if (r.reverse_of && *r.reverse_of < k) continue;
      if (coefficient(r.products, t.species) > 0) return false;
    }
  }
  return true;
}

std::vector<std::pair<std::string, std::string>> describe_step(const Network& net,
                                                               const Modification& m) {
  using P = std::vector<std::pair<std::string, std::string>>;
  return std::visit(
      [&net](const auto& x) -> P {
        using T = std::decay_t<decltype(x)>;
        if constexpr (std::is_same_v<T, mod::Reversal>) {
          return {{"reaction", net.describe(x.reaction)}};
        } else if constexpr (std::is_same_v<T, mod::AddIntermediate>) {
          return {{"reaction", net.describe(x.reaction)}, {"intermediate", x.intermediate}};
        } else if constexpr (std::is_same_v<T, mod::ExternalRegulation>) {
          return {{"species", net.species_name(x.species)}};
        } else if constexpr (std::is_same_v<T, mod::ConservedRegulation>) {
          return {{"species", net.species_name(x.species)}, {"partner", x.partner}};
        } else if constexpr (std::is_same_v<T, mod::AddFeedbackSpecies>) {
          return {{"producer", net.describe(x.producer)},
                  {"consumer", net.describe(x.consumer)},
                  {"feedback", x.feedback}};
        } else if constexpr (std::is_same_v<T, mod::AddCatalyst>) {
          return {{"species", net.species_name(x.species)}, {"catalyst", x.catalyst}};
        } else if constexpr (std::is_same_v<T, mod::AddDimer>) {
          return {{"species", net.species_name(x.species)}, {"dimer", x.dimer}};
        } else if constexpr (std::is_same_v<T, mod::Enzymatic>) {
          return {{"reaction", net.describe(x.reaction)},
                  {"enzyme", x.enzyme},
                  {"complex", x.complex}};
        } else {
          std::string cs;
          for (const auto& c : x.complexes) cs += (cs.empty() ? "" : ",") + c;
          return {{"reaction", net.describe(x.reaction)}, {"enzyme", x.enzyme}, {"complexes", cs}};
        }
      },
      m);
}

}  // namespace

Network replay(const ReductionTrace& trace) {
  Network cur = trace.base;
  for (const auto& s : trace.steps) cur = apply_modification(cur, s.mod);
  return cur;
}

std::optional<ReductionTrace> reduce_to(const Network& net, const Goal& goal,
                                        const std::vector<ModKind>& order, Target license_target,
                                        const ReduceOptions& options) {
  Search search(goal, order, options);
  const bool found = search.run(net);
  if (options.stats) {
    options.stats->nodes += search.nodes();
    options.stats->budget_exhausted = options.stats->budget_exhausted ||
                                      (!found && search.nodes() > options.node_budget);
  }
  if (!found) return std::nullopt;

  ReductionTrace trace;
  trace.base = search.base();
  Network cur = trace.base;
  const auto& path = search.path();
  for (auto it = path.rbegin(); it != path.rend(); ++it) {
    TraceStep step{resolve(*it, cur), {}, "", false, ""};
    step.params = describe_step(cur, step.mod);
    if (auto* r = std::get_if<mod::Reversal>(&step.mod))
      step.maxmin_reversal_eligible = reversal_eligible(cur, r->reaction);
    if (auto* c = std::get_if<mod::AddCatalyst>(&step.mod)) step.target_species = cur.species_name(c->species);
    if (auto* d = std::get_if<mod::AddDimer>(&step.mod)) step.target_species = cur.species_name(d->species);
    step.licensed_by = license_for(step.kind(), license_target, step.maxmin_reversal_eligible);
    cur = apply_modification(cur, step.mod);
    trace.steps.push_back(std::move(step));
  }
  if (!isomorphic(cur, net)) return std::nullopt;
  trace.final_network = std::move(cur);
  return trace;
}

std::optional<ReductionTrace> reduce(const Network& net, Target target,
                                     const ReduceOptions& options) {
  Goal goal;
  if (target == Target::Linear) {
    goal = [](const Network& n) { return is_linear(n); };
  } else {
    goal = [](const Network& n) { return is_linear(n) && maxmin_conditions(n).holds(); };
  }
  return reduce_to(net, goal, peel_order(target), target, options);
}

}  // namespace crncert
