#include "crncert/conclude.hpp"

#include <cmath>
#include <sstream>

#include "crncert/netio.hpp"

namespace crncert {

namespace {

using nlohmann::ordered_json;

ordered_json integer_json(const Integer& z) {
  if (z.fits_slong_p()) return z.get_si();
  return z.get_str();
}

ordered_json integers_json(const std::vector<Integer>& v) {
  ordered_json a = ordered_json::array();
  for (const auto& z : v) a.push_back(integer_json(z));
  return a;
}

ordered_json names_json(const Network& net, const std::vector<std::size_t>& ids) {
  ordered_json a = ordered_json::array();
  for (auto i : ids) a.push_back(net.species_name(i));
  return a;
}

ordered_json law_json(const Network& net, const ConservationLaw& law) {
  ordered_json o;
  for (std::size_t i = 0; i < law.d.size(); ++i)
    if (law.d[i] != 0) o[net.species_name(i)] = integer_json(law.d[i]);
  return o;
}

ordered_json strings_json(const std::vector<std::string>& v) {
  ordered_json a = ordered_json::array();
  for (const auto& s : v) a.push_back(s);
  return a;
}

double finite_or_zero(double v) { return std::isfinite(v) ? v : 0.0; }

}  // namespace

const char* tier_name(Tier t) {
  switch (t) {
    case Tier::Star: return "star";
    case Tier::Conditional: return "conditional";
    case Tier::StableOnly: return "stable_only";
    case Tier::None: return "none";
  }
  return "?";
}

Tier decide_tier(const TierInputs& in) {
  if (!in.assumptions || !in.certificate || !in.lasalle) return Tier::None;
  if (!in.nondegenerate || !in.persistent) return Tier::StableOnly;
  return in.conservative ? Tier::Star : Tier::Conditional;
}

bool lasalle_check(const Network& net, const Certificate& cert) {
  if (cert.family == Family::SoC) return true;
  return is_conservative(net).conservative || ancestor_pairs(net);
}

const Certificate* CertificationReport::primary() const {
  if (soc) return &*soc;
  if (maxmin) return &*maxmin;
  return nullptr;
}

CertificationReport analyze(const Network& net, const AnalysisOptions& options) {
  CertificationReport rep;
  rep.network = net;
  rep.seed = options.seed;
  rep.assumptions = check_assumptions(net);
  rep.laws = conservation_laws(net);
  rep.conservativity = is_conservative(net, rep.laws);

  ReduceStats stats;
  ReduceOptions ro = options.reduce;
  ro.stats = &stats;
  rep.soc = certify_soc(net, ro);
  rep.maxmin = certify_maxmin(net, ro);
  const Certificate* primary = rep.primary();

  std::vector<const Certificate*> certs;
  if (rep.soc) certs.push_back(&*rep.soc);
  if (rep.maxmin) certs.push_back(&*rep.maxmin);

  for (const Certificate* c : certs) rep.lasalle = rep.lasalle || lasalle_check(net, *c);

  // Non-degeneracy: carried along a trace when possible, otherwise tested
  // directly on the network.
  bool decided = false;
  for (const Certificate* c : certs) {
    if (c->trace.steps.empty()) continue;
    const auto base = robust_nondegenerate(c->base(), true, options.seed, options.nondegen);
    if (auto prop = propagate_nondegeneracy(c->trace, base, true)) {
      prop->notes.push_back(std::string("base network of the ") + family_name(c->family) +
                            " certificate");
      rep.nondegeneracy = *prop;
      decided = true;
      break;
    }
  }
  if (!decided)
    rep.nondegeneracy = robust_nondegenerate(net, primary != nullptr, options.seed, options.nondegen);

  rep.persistence = persistence_verdict(net, certs, options.siphons);

  const bool assumptions = rep.assumptions.as1 && rep.assumptions.as2;
  const TierInputs in{assumptions, primary != nullptr, rep.lasalle,
                      rep.nondegeneracy.verdict == Nondegeneracy::RobustlyNondegenerate,
                      rep.persistence.verdict == Persistence::Yes, rep.conservativity.conservative};
  rep.tier = decide_tier(in);

  auto& ex = rep.explanations;
  if (!rep.assumptions.as1) ex.push_back("AS1 fails: no positive flux, so no positive steady state exists");
  if (!rep.assumptions.as2) ex.push_back("AS2 fails: the network has catalytic reactions");
  if (rep.soc)
    ex.push_back(rep.soc->trace.steps.empty()
                     ? "sum-of-currents RLF: the network is linear"
                     : "sum-of-currents RLF: linear base plus " +
                           std::to_string(rep.soc->trace.steps.size()) + " licensed modifications");
  if (rep.maxmin)
    ex.push_back("max-min RLF: unique positive flux and single reactant use after folding mirrors");
  if (!primary) ex.push_back("no robust Lyapunov function found by reduction");
  if (primary) {
    if (rep.soc) ex.push_back("LaSalle principle holds for the sum-of-currents family");
    else if (rep.lasalle)
      ex.push_back(rep.conservativity.conservative
                       ? "LaSalle principle holds: max-min RLF on a conservative network"
                       : "LaSalle principle holds: every pair of reactions shares an ancestor");
    else ex.push_back("LaSalle condition not established for the max-min RLF");
  }
  if (rep.nondegeneracy.method == "theorem15_single_sample")
    ex.push_back("robust non-degeneracy: RLF implies robust P0, one positive essential determinant suffices");
  else if (rep.nondegeneracy.method == "theorem16_propagation")
    ex.push_back("robust non-degeneracy: carried from a non-degenerate base through the modifications");
  if (rep.persistence.verdict == Persistence::Yes)
    ex.push_back(rep.persistence.method == "direct"
                     ? "graphical persistence: every minimal siphon contains a conservation-law support"
                     : "graphical persistence: preserved along the certificate (" +
                           rep.persistence.method + ")");
  else if (rep.persistence.verdict == Persistence::No)
    ex.push_back("critical siphon found; persistence not established");
  if (rep.tier == Tier::Star)
    ex.push_back("each proper stoichiometric class contains a unique globally exponentially stable "
                 "positive steady state");
  else if (rep.tier == Tier::Conditional)
    ex.push_back("not conservative: a proper stoichiometric class that contains a steady state "
                 "contains a unique globally exponentially stable positive one");
  else if (rep.tier == Tier::StableOnly)
    ex.push_back("steady states are globally stable relative to their class; uniqueness or "
                 "persistence not established");

  rep.budget_exhausted = (!primary && stats.budget_exhausted) ||
                         rep.persistence.verdict == Persistence::Incomplete ||
                         (rep.nondegeneracy.over_cap &&
                          rep.nondegeneracy.verdict == Nondegeneracy::Unknown);
  return rep;
}

ordered_json trace_json(const ReductionTrace& trace) {
  ordered_json steps = ordered_json::array();
  for (const auto& s : trace.steps) {
    ordered_json params;
    for (const auto& [k, v] : s.params) params[k] = v;
    if (!s.target_species.empty()) params["target"] = s.target_species;
    steps.push_back({{"kind", kind_name(s.kind())}, {"params", params}, {"licensed_by", s.licensed_by}});
  }
  return steps;
}

ordered_json certificate_json(const Certificate& cert) {
  const Network& n = cert.network;
  ordered_json o;
  o["family"] = family_name(cert.family);
  o["base_network"] = serialize_network(cert.base());
  o["trace"] = trace_json(cert.trace);
  if (cert.family == Family::SoC) {
    o["summed_species"] = names_json(n, cert.summed_species);
    o["mirror_species"] = names_json(n, cert.mirror_species);
  } else {
    ordered_json rs = ordered_json::array();
    for (const auto& e : cert.rate_set) {
      ordered_json entry;
      entry["forward"] = n.describe(e.forward);
      entry["backward"] = e.backward ? ordered_json(n.describe(*e.backward)) : ordered_json(nullptr);
      entry["weight"] = integer_json(e.weight);
      rs.push_back(entry);
    }
    o["rate_set"] = rs;
    o["flux_weights"] = integers_json(cert.flux_weights());
  }
  o["flags"] = strings_json(cert.flags);
  return o;
}

ordered_json validation_json(const ValidationReport& r) {
  ordered_json o;
  o["trajectories"] = r.trajectories;
  o["steps_checked"] = r.steps_checked;
  o["violations"] = r.violation_count;
  o["converged"] = r.converged;
  o["slow"] = r.slow;
  o["max_relative_increase"] = finite_or_zero(r.max_relative_increase);
  o["max_conservation_drift"] = r.max_conservation_drift;
  o["min_state"] = finite_or_zero(r.min_state);
  o["min_tail_state"] = finite_or_zero(r.min_tail_state);
  o["dini_min"] = finite_or_zero(r.dini_min);
  o["dini_max"] = finite_or_zero(r.dini_max);
  ordered_json list = ordered_json::array();
  for (const auto& v : r.violations)
    list.push_back({{"kind", v.kind},
                    {"kinetics", family_name(v.family)},
                    {"trial", v.trial},
                    {"initial_condition", v.initial_condition},
                    {"seed", v.seed},
                    {"t", v.t},
                    {"magnitude", v.magnitude}});
  o["violation_records"] = list;
  return o;
}

ordered_json report_json(const CertificationReport& rep) {
  const Network& n = rep.network;
  ordered_json o;
  o["schema"] = 1;
  o["seed"] = rep.seed;
  o["network"] = {{"species", n.species_names()},
                  {"num_species", n.num_species()},
                  {"num_reactions", n.num_reactions()},
                  {"rank", rank(n)},
                  {"text", serialize_network(n)}};
  o["warnings"] = strings_json(rep.warnings);

  ordered_json cat = ordered_json::array();
  for (auto j : rep.assumptions.catalytic_reactions) cat.push_back(n.describe(j));
  o["assumptions"] = {{"AS1", rep.assumptions.as1}, {"AS2", rep.assumptions.as2}, {"catalytic_reactions", cat}};

  const Certificate* primary = rep.primary();
  o["certificate"] = primary ? certificate_json(*primary) : ordered_json(nullptr);
  ordered_json others = ordered_json::array();
  if (rep.soc && rep.maxmin) others.push_back(certificate_json(*rep.maxmin));
  o["other_certificates"] = others;

  ordered_json laws = ordered_json::array();
  for (const auto& l : rep.laws) laws.push_back(law_json(n, l));
  o["conservativity"] = {{"conservative", rep.conservativity.conservative},
                         {"witness", rep.conservativity.witness
                                         ? law_json(n, *rep.conservativity.witness)
                                         : ordered_json(nullptr)},
                         {"extreme_laws", laws}};
  o["lasalle"] = rep.lasalle;

  const auto& nd = rep.nondegeneracy;
  o["nondegeneracy"] = {{"verdict", verdict_name(nd.verdict)},
                        {"method", nd.method},
                        {"seed", nd.seed},
                        {"det_ess_value", nd.det_ess},
                        {"over_cap", nd.over_cap},
                        {"notes", strings_json(nd.notes)}};

  const auto& ps = rep.persistence;
  ordered_json siphons = ordered_json::array();
  for (const auto& s : ps.siphons)
    siphons.push_back({{"members", names_json(n, s.members)},
                       {"classification", siphon_class_name(s.classification)},
                       {"witness_law", s.witness_law ? law_json(n, *s.witness_law) : ordered_json(nullptr)}});
  o["persistence"] = {{"verdict", persistence_name(ps.verdict)},
                      {"method", ps.method},
                      {"enumeration_complete", ps.enumeration_complete},
                      {"exhaustive_checked", ps.exhaustive_checked},
                      {"siphons", siphons},
                      {"critical_witness", ps.witness ? names_json(n, *ps.witness) : ordered_json(nullptr)},
                      {"notes", strings_json(ps.notes)}};
  o["tier"] = tier_name(rep.tier);
  o["explanations"] = strings_json(rep.explanations);
  o["budget_exhausted"] = rep.budget_exhausted;
  return o;
}

std::string emit_report(const CertificationReport& report) { return report_json(report).dump(2) + "\n"; }

std::string report_text(const CertificationReport& rep) {
  std::ostringstream s;
  s << "species " << rep.network.num_species() << ", reactions " << rep.network.num_reactions()
    << ", rank " << rank(rep.network) << "\n";
  s << "AS1 " << (rep.assumptions.as1 ? "yes" : "no") << ", AS2 " << (rep.assumptions.as2 ? "yes" : "no")
    << "\n";
  const Certificate* c = rep.primary();
  s << "certificate: " << (c ? family_name(c->family) : "none");
  if (c) s << " (" << c->trace.steps.size() << " steps from base)";
  s << "\n";
  s << "conservative: " << (rep.conservativity.conservative ? "yes" : "no") << "\n";
  s << "lasalle: " << (rep.lasalle ? "yes" : "no") << "\n";
  s << "nondegeneracy: " << verdict_name(rep.nondegeneracy.verdict) << " [" << rep.nondegeneracy.method
    << "]\n";
  s << "persistence: " << persistence_name(rep.persistence.verdict) << " [" << rep.persistence.method
    << "]\n";
  s << "tier: " << tier_name(rep.tier) << "\n";
  return s.str();
}

}  // namespace crncert
