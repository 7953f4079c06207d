#include "crncert/persistence.hpp"

#include <algorithm>
#include <bit>
#include <stdexcept>

namespace crncert {

namespace {

using Mask = std::uint64_t;

struct ReactionMasks {
  std::vector<Mask> reactants, products;
};

ReactionMasks masks_of(const Network& net) {
  ReactionMasks m;
  for (std::size_t j = 0; j < net.num_reactions(); ++j) {
    Mask r = 0, p = 0;
    for (const auto& t : net.reaction(j).reactants) r |= Mask{1} << t.species;
    for (const auto& t : net.reaction(j).products) p |= Mask{1} << t.species;
    m.reactants.push_back(r);
    m.products.push_back(p);
  }
  return m;
}

Mask to_mask(const std::vector<std::size_t>& members) {
  Mask m = 0;
  for (auto i : members) m |= Mask{1} << i;
  return m;
}

std::vector<std::size_t> to_members(Mask m) {
  std::vector<std::size_t> v;
  for (std::size_t i = 0; m; ++i, m >>= 1)
    if (m & 1) v.push_back(i);
  return v;
}

bool mask_is_siphon(const ReactionMasks& rm, Mask x) {
  if (!x) return false;
  for (std::size_t j = 0; j < rm.reactants.size(); ++j)
    if ((rm.products[j] & x) && !(rm.reactants[j] & x)) return false;
  return true;
}

class Enumerator {
 public:
  Enumerator(const Network& net, std::size_t budget) : rm_(masks_of(net)), budget_(budget) {}

  // Every siphon containing x and disjoint from `excluded` contains one found here.
  void search(Mask x, Mask excluded) {
    if (exhausted_) return;
    if (++nodes_ > budget_) {
      exhausted_ = true;
      return;
    }
    for (Mask s : found_)
      if ((s & x) == s) return;
    // Branch on the violated reaction with the fewest ways to repair it.
    std::optional<Mask> best;
    for (std::size_t j = 0; j < rm_.reactants.size(); ++j) {
      if (!(rm_.products[j] & x) || (rm_.reactants[j] & x)) continue;
      const Mask cand = rm_.reactants[j] & ~excluded;
      if (!best || std::popcount(cand) < std::popcount(*best)) best = cand;
      if (!cand) return;
    }
    if (!best) {
      found_.push_back(x);
      return;
    }
    Mask ex = excluded;
    for (Mask c = *best; c; c &= c - 1) {
      const Mask bit = c & (~c + 1);
      search(x | bit, ex);
      ex |= bit;
    }
  }

  const std::vector<Mask>& found() const { return found_; }
  bool exhausted() const { return exhausted_; }

 private:
  ReactionMasks rm_;
  std::size_t budget_;
  std::size_t nodes_ = 0;
  bool exhausted_ = false;
  std::vector<Mask> found_;
};

bool contains_support(const std::vector<std::size_t>& members, const ConservationLaw& law) {
  return std::includes(members.begin(), members.end(), law.support.begin(), law.support.end());
}

bool is_step_in(ModKind k, std::initializer_list<ModKind> allowed) {
  return std::find(allowed.begin(), allowed.end(), k) != allowed.end();
}

}  // namespace

bool is_siphon(const Network& net, const std::vector<std::size_t>& members) {
  if (members.empty()) return false;
  std::vector<bool> in(net.num_species(), false);
  for (auto i : members) in.at(i) = true;
  for (const auto& r : net.reactions()) {
    bool produces = false, consumes = false;
    for (const auto& t : r.products) produces = produces || in[t.species];
    for (const auto& t : r.reactants) consumes = consumes || in[t.species];
    if (produces && !consumes) return false;
  }
  return true;
}

SiphonEnumeration enumerate_minimal_siphons(const Network& net, const SiphonOptions& options) {
  SiphonEnumeration out;
  const std::size_t n = net.num_species();
  if (n > options.species_cap || n > 64) {
    out.complete = false;
    out.note = std::to_string(n) + " species exceed the siphon cap of " +
               std::to_string(options.species_cap);
    return out;
  }
  Enumerator e(net, options.node_budget);
  for (std::size_t s = 0; s < n; ++s) e.search(Mask{1} << s, (Mask{1} << s) - 1);
  if (e.exhausted()) {
    out.complete = false;
    out.note = "siphon search stopped after " + std::to_string(options.node_budget) + " nodes";
  }
  std::vector<Mask> found = e.found();
  std::sort(found.begin(), found.end());
  found.erase(std::unique(found.begin(), found.end()), found.end());
  for (Mask a : found) {
    bool minimal = true;
    for (Mask b : found)
      if (b != a && (a & b) == b) minimal = false;
    if (minimal) out.minimal.push_back(to_members(a));
  }
  std::sort(out.minimal.begin(), out.minimal.end());
  return out;
}

const char* siphon_class_name(SiphonClass c) {
  return c == SiphonClass::Trivial ? "trivial" : "critical";
}

std::vector<Siphon> classify_siphons(const Network&,
                                     const std::vector<std::vector<std::size_t>>& siphons,
                                     const std::vector<ConservationLaw>& laws) {
  std::vector<Siphon> out;
  for (const auto& members : siphons) {
    Siphon s;
    s.members = members;
    std::sort(s.members.begin(), s.members.end());
    for (const auto& law : laws)
      if (contains_support(s.members, law)) {
        s.classification = SiphonClass::Trivial;
        s.witness_law = law;
        break;
      }
    out.push_back(std::move(s));
  }
  return out;
}

std::optional<std::vector<std::size_t>> exhaustive_critical_siphon(
    const Network& net, const std::vector<ConservationLaw>& laws) {
  const std::size_t n = net.num_species();
  if (n > 16) throw std::invalid_argument("exhaustive siphon scan needs at most 16 species");
  const ReactionMasks rm = masks_of(net);
  std::vector<Mask> supports;
  for (const auto& l : laws) supports.push_back(to_mask(l.support));
  for (Mask x = 1; x < (Mask{1} << n); ++x) {
    if (!mask_is_siphon(rm, x)) continue;
    const bool trivial =
        std::any_of(supports.begin(), supports.end(), [x](Mask s) { return (s & x) == s; });
    if (!trivial) return to_members(x);
  }
  return std::nullopt;
}

const char* persistence_name(Persistence p) {
  switch (p) {
    case Persistence::Yes: return "yes";
    case Persistence::No: return "no";
    case Persistence::Incomplete: return "incomplete";
  }
  return "?";
}

PersistenceResult graphically_persistent(const Network& net, const SiphonOptions& options) {
  PersistenceResult res;
  const auto en = enumerate_minimal_siphons(net, options);
  res.enumeration_complete = en.complete;
  if (!en.note.empty()) res.notes.push_back(en.note);
  const auto laws = conservation_laws(net);
  res.siphons = classify_siphons(net, en.minimal, laws);
  for (const auto& s : res.siphons)
    if (s.classification == SiphonClass::Critical) {
      res.verdict = Persistence::No;
      res.witness = s.members;
      return res;
    }
  if (!en.complete) return res;
  res.verdict = Persistence::Yes;
  if (net.num_species() <= 16) {
    res.exhaustive_checked = true;
    if (auto w = exhaustive_critical_siphon(net, laws)) {
      res.verdict = Persistence::No;
      res.witness = *w;
      res.notes.push_back("exhaustive scan found a critical siphon missed by the minimal search");
    }
  } else {
    res.notes.push_back("verdict from minimal siphons only (more than 16 species)");
  }
  return res;
}

std::optional<std::string> propagate_persistence(const ReductionTrace& trace, bool base_persistent,
                                                 const Certificate* cert) {
  if (cert && cert->certified && cert->family == Family::MaxMin &&
      is_conservative(cert->network).conservative)
    return "theorem21_part2";
  if (!base_persistent || trace.steps.empty()) return std::nullopt;
  const bool structural = std::all_of(trace.steps.begin(), trace.steps.end(), [](const TraceStep& s) {
    return is_step_in(s.kind(), {ModKind::Reversal, ModKind::ExternalRegulation,
                                 ModKind::ConservedRegulation, ModKind::Intermediate, ModKind::Dimer});
  });
  if (structural) return "theorem20";
  const bool linear_licensed =
      is_linear(trace.base) && std::all_of(trace.steps.begin(), trace.steps.end(), [](const TraceStep& s) {
        return !license_for(s.kind(), Target::Linear, s.maxmin_reversal_eligible).empty();
      });
  if (linear_licensed) return "theorem21_part1";
  return std::nullopt;
}

PersistenceResult persistence_verdict(const Network& net, const std::vector<const Certificate*>& certs,
                                      const SiphonOptions& options) {
  PersistenceResult res = graphically_persistent(net, options);
  if (res.verdict == Persistence::No) return res;
  for (const Certificate* c : certs) {
    if (!c) continue;
    const bool base_persistent =
        !c->trace.steps.empty() &&
        graphically_persistent(c->base(), options).verdict == Persistence::Yes;
    auto method = propagate_persistence(c->trace, base_persistent, c);
    if (!method) continue;
    if (res.verdict == Persistence::Incomplete)
      res.notes.push_back("enumeration incomplete; verdict carried by the certificate");
    res.verdict = Persistence::Yes;
    res.method = *method;
    return res;
  }
  return res;
}

}  // namespace crncert
