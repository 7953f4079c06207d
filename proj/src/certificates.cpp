#include "crncert/certificates.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <set>
#include <stdexcept>

#include "crncert/structure.hpp"

namespace crncert {

const char* family_name(Family f) { return f == Family::SoC ? "SoC" : "MaxMin"; }

std::vector<Integer> Certificate::flux_weights() const {
  std::vector<Integer> w;
  for (const auto& e : rate_set) w.push_back(e.weight);
  return w;
}

namespace {

ReductionTrace empty_trace(const Network& net) { return ReductionTrace{net, {}, net}; }

bool mirrors(const Network& net, std::size_t d, std::size_t s) {
  for (std::size_t j = 0; j < net.num_reactions(); ++j)
    if (net.reactant_coeff(d, j) != net.product_coeff(s, j) ||
        net.product_coeff(d, j) != net.reactant_coeff(s, j))
      return false;
  return true;
}

bool copies(const Network& net, std::size_t d, std::size_t s) {
  for (std::size_t j = 0; j < net.num_reactions(); ++j)
    if (net.reactant_coeff(d, j) != net.reactant_coeff(s, j) ||
        net.product_coeff(d, j) != net.product_coeff(s, j))
      return false;
  return true;
}

// Every reaction restricted to the kept species is X -> Y, X -> 0 or 0 -> Y.
bool linear_skeleton(const Network& net, const std::vector<bool>& kept) {
  auto unit = [&kept](const Side& s) {
    std::size_t count = 0;
    for (const auto& t : s) {
      if (!kept[t.species]) continue;
      if (t.coeff != 1) return false;
      ++count;
    }
    return count <= 1;
  };
  auto empty = [&kept](const Side& s) {
    return std::none_of(s.begin(), s.end(), [&kept](const Term& t) { return kept[t.species]; });
  };
  for (const auto& r : net.reactions()) {
    if (!unit(r.reactants) || !unit(r.products)) return false;
    if (empty(r.reactants) && empty(r.products)) return false;
  }
  return true;
}

Network without_reactions(const Network& net, const std::set<std::size_t>& drop) {
  std::vector<Reaction> kept;
  for (std::size_t j = 0; j < net.num_reactions(); ++j) {
    if (drop.count(j)) continue;
    Reaction r = net.reaction(j);
    r.reverse_of.reset();
    kept.push_back(std::move(r));
  }
  return Network(net.species_names(), kept);
}

bool products_unshared(const Network& net, std::size_t j) {
  for (const auto& t : net.reaction(j).products)
    for (std::size_t k = 0; k < net.num_reactions(); ++k)
      if (k != j && coefficient(net.reaction(k).products, t.species) > 0) return false;
  return true;
}

void flag_unconsumed(Certificate& c, const Network& pre, const MaxMinConditions& cond) {
  for (auto i : cond.unconsumed_species)
    c.flags.push_back("species " + pre.species_name(i) + " is a reactant of no reaction");
}

}  // namespace

std::optional<Certificate> certify_soc(const Network& net, const ReduceOptions& options) {
  Certificate c;
  c.family = Family::SoC;
  c.network = net;
  if (is_linear(net)) {
    c.trace = empty_trace(net);
    for (std::size_t i = 0; i < net.num_species(); ++i) c.summed_species.push_back(i);
    return c;
  }
  auto trace = reduce(net, Target::Linear, options);
  if (!trace) return std::nullopt;
  std::set<std::string> mirror_names;
  for (const auto& s : trace->steps) {
    if (license_for(s.kind(), Target::Linear, false).empty()) return std::nullopt;
    if (auto* m = std::get_if<mod::AddCatalyst>(&s.mod)) mirror_names.insert(m->catalyst);
    if (auto* m = std::get_if<mod::AddDimer>(&s.mod)) mirror_names.insert(m->dimer);
    if (auto* m = std::get_if<mod::Enzymatic>(&s.mod)) mirror_names.insert(m->enzyme);
  }

  // The trace names the mirror species; the network itself must then be a
  // linear skeleton plus species mirroring or copying skeleton species.
  std::vector<bool> kept(net.num_species(), true);
  for (const auto& name : mirror_names) {
    auto i = net.find_species(name);
    if (!i) return std::nullopt;
    kept[*i] = false;
    c.mirror_species.push_back(*i);
  }
  std::sort(c.mirror_species.begin(), c.mirror_species.end());
  if (!linear_skeleton(net, kept)) return std::nullopt;
  std::map<std::size_t, std::size_t> per_target;
  for (auto d : c.mirror_species) {
    std::optional<std::size_t> target;
    for (std::size_t s = 0; s < net.num_species() && !target; ++s)
      if (kept[s] && (mirrors(net, d, s) || copies(net, d, s))) target = s;
    if (!target) return std::nullopt;
    ++per_target[*target];
  }
  for (auto [s, count] : per_target)
    if (count > 1)
      c.flags.push_back("species " + net.species_name(s) + " has " + std::to_string(count) +
                        " catalysts or dimers");
  for (std::size_t i = 0; i < net.num_species(); ++i)
    if (kept[i]) c.summed_species.push_back(i);
  c.trace = std::move(*trace);
  return c;
}

std::optional<Certificate> certify_maxmin(const Network& net, const ReduceOptions& options) {
  Certificate c;
  c.family = Family::MaxMin;
  c.network = net;

  std::optional<Network> pre;
  std::vector<std::pair<std::size_t, std::size_t>> folded;  // (kept, dropped)
  MaxMinConditions cond = maxmin_conditions(net);
  if (cond.holds()) {
    pre = net;
  } else {
    // Fold mirror pairs: one member is an original reaction, the other a
    // reversal of it whose products nothing else produces.
    std::vector<std::pair<std::size_t, std::size_t>> pairs;
    std::vector<bool> paired(net.num_reactions(), false);
    for (std::size_t j = 0; j < net.num_reactions(); ++j) {
      if (paired[j]) continue;
      for (std::size_t k = j + 1; k < net.num_reactions(); ++k) {
        if (paired[k] || !net.reaction(k).is_reverse_of(net.reaction(j))) continue;
        pairs.emplace_back(j, k);
        paired[j] = paired[k] = true;
        break;
      }
    }
    if (pairs.empty()) return std::nullopt;
    if (pairs.size() > 12)
      c.flags.push_back("more than 12 reversible pairs; only one folding tried");
    const std::size_t masks = pairs.size() > 12 ? 1 : (std::size_t{1} << pairs.size());
    for (std::size_t mask = 0; mask < masks && !pre; ++mask) {
      std::set<std::size_t> drop;
      std::vector<std::pair<std::size_t, std::size_t>> choice;
      for (std::size_t p = 0; p < pairs.size(); ++p) {
        auto [a, b] = pairs[p];
        if (mask >> p & 1) std::swap(a, b);
        drop.insert(b);
        choice.emplace_back(a, b);
      }
      Network candidate = without_reactions(net, drop);
      auto cc = maxmin_conditions(candidate);
      if (!cc.holds()) continue;
      // Ids in the candidate: kept reactions in order.
      auto local = [&drop](std::size_t j) {
        std::size_t below = 0;
        for (auto d : drop)
          if (d < j) ++below;
        return j - below;
      };
      bool eligible = true;
      for (auto [a, b] : choice) eligible = eligible && products_unshared(candidate, local(a));
      if (!eligible) continue;
      pre = std::move(candidate);
      cond = std::move(cc);
      folded = std::move(choice);
    }
    if (!pre) return std::nullopt;
  }

  std::map<std::size_t, std::size_t> backward_of;
  std::set<std::size_t> dropped;
  for (auto [a, b] : folded) {
    backward_of[a] = b;
    dropped.insert(b);
  }
  std::size_t local = 0;
  for (std::size_t j = 0; j < net.num_reactions(); ++j) {
    if (dropped.count(j)) continue;
    RateEntry e{j, std::nullopt, cond.flux->v[local++]};
    if (auto it = backward_of.find(j); it != backward_of.end()) e.backward = it->second;
    c.rate_set.push_back(std::move(e));
  }
  flag_unconsumed(c, *pre, cond);

  auto trace = reduce(net, Target::MaxMinBase, options);
  bool licensed = trace.has_value();
  if (trace)
    for (const auto& s : trace->steps)
      licensed = licensed && !s.licensed_by.empty();
  if (licensed) {
    c.trace = std::move(*trace);
  } else {
    c.trace = empty_trace(net);
    if (!folded.empty() || !is_linear(net))
      c.flags.push_back("no licensed modification trace; conditions checked on the network itself");
  }
  return c;
}

Certificate candidate_soc(const Network& net) {
  Certificate c;
  c.family = Family::SoC;
  c.network = net;
  c.trace = empty_trace(net);
  for (std::size_t i = 0; i < net.num_species(); ++i) c.summed_species.push_back(i);
  c.certified = false;
  return c;
}

namespace {

void check_dims(const Certificate& cert, const RateModel& model, const Eigen::VectorXd& x) {
  if (model.num_species() != cert.network.num_species() ||
      model.num_reactions() != cert.network.num_reactions() ||
      static_cast<std::size_t>(x.size()) != cert.network.num_species())
    throw std::invalid_argument("dimension mismatch between certificate, kinetics and state");
}

double soc_value(const Certificate& cert, const Eigen::VectorXd& xdot) {
  double v = 0.0;
  for (auto i : cert.summed_species) v += std::abs(xdot(i));
  return v;
}

Eigen::VectorXd rate_set_values(const Certificate& cert, const Eigen::VectorXd& r) {
  Eigen::VectorXd q(cert.rate_set.size());
  for (std::size_t k = 0; k < cert.rate_set.size(); ++k) {
    const auto& e = cert.rate_set[k];
    double v = r(e.forward);
    if (e.backward) v -= r(*e.backward);
    q(k) = v / e.weight.get_d();
  }
  return q;
}

double maxmin_value(const Eigen::VectorXd& q) {
  if (q.size() == 0) return 0.0;
  return q.maxCoeff() - q.minCoeff();
}

// Relative tie threshold for sign patterns and argmax sets.
double tie_tol(double scale) { return 1e-12 * (1.0 + scale); }

}  // namespace

double lyapunov_value(const Certificate& cert, const RateModel& model, const Eigen::VectorXd& x) {
  check_dims(cert, model, x);
  if (cert.family == Family::SoC) return soc_value(cert, model.velocity(x));
  return maxmin_value(rate_set_values(cert, model.rates(x)));
}

LyapunovEvaluation eval_soc(const Certificate& cert, const RateModel& model,
                            const Eigen::VectorXd& x) {
  check_dims(cert, model, x);
  if (cert.family != Family::SoC) throw std::invalid_argument("not an SoC certificate");
  LyapunovEvaluation ev;
  const Eigen::VectorXd r = model.rates(x);
  const Eigen::VectorXd xdot = model.gamma() * r;
  ev.value = soc_value(cert, xdot);
  // Time derivative of xdot along the flow.
  const Eigen::VectorXd w = model.gamma() * (model.jacobian(x) * xdot);
  const double tol = tie_tol(xdot.cwiseAbs().maxCoeff());
  for (auto i : cert.summed_species) {
    if (std::abs(xdot(i)) <= tol) {
      ev.active_pattern.push_back(0);
      ev.dini += std::abs(w(i));
    } else {
      const int s = xdot(i) > 0 ? 1 : -1;
      ev.active_pattern.push_back(s);
      ev.dini += s * w(i);
    }
  }
  ev.dini_fd = dini_finite_difference(cert, model, x);
  return ev;
}

LyapunovEvaluation eval_maxmin(const Certificate& cert, const RateModel& model,
                               const Eigen::VectorXd& x) {
  check_dims(cert, model, x);
  if (cert.family != Family::MaxMin) throw std::invalid_argument("not a Max-Min certificate");
  LyapunovEvaluation ev;
  const Eigen::VectorXd r = model.rates(x);
  const Eigen::VectorXd q = rate_set_values(cert, r);
  ev.value = maxmin_value(q);
  if (q.size() == 0) return ev;
  const Eigen::VectorXd rdot = model.jacobian(x) * (model.gamma() * r);
  const Eigen::VectorXd qdot = rate_set_values(cert, rdot);
  const double hi = q.maxCoeff(), lo = q.minCoeff();
  const double tol = tie_tol(q.cwiseAbs().maxCoeff());
  double up = -INFINITY, down = INFINITY;
  for (Eigen::Index k = 0; k < q.size(); ++k) {
    if (hi - q(k) <= tol) {
      ev.argmax.push_back(static_cast<std::size_t>(k));
      up = std::max(up, qdot(k));
    }
    if (q(k) - lo <= tol) {
      ev.argmin.push_back(static_cast<std::size_t>(k));
      down = std::min(down, qdot(k));
    }
  }
  ev.dini = up - down;
  ev.dini_fd = dini_finite_difference(cert, model, x);
  return ev;
}

LyapunovEvaluation evaluate(const Certificate& cert, const RateModel& model,
                            const Eigen::VectorXd& x) {
  return cert.family == Family::SoC ? eval_soc(cert, model, x) : eval_maxmin(cert, model, x);
}

double dini_analytic(const Certificate& cert, const RateModel& model, const Eigen::VectorXd& x) {
  return evaluate(cert, model, x).dini;
}

double dini_finite_difference(const Certificate& cert, const RateModel& model,
                              const Eigen::VectorXd& x) {
  check_dims(cert, model, x);
  const Eigen::VectorXd xdot = model.velocity(x);
  const double speed = xdot.cwiseAbs().maxCoeff();
  if (speed == 0.0) return 0.0;
  const double h = 1e-6 * std::max(1.0, x.cwiseAbs().maxCoeff()) / std::max(1.0, speed);
  const Eigen::VectorXd y = (x + h * xdot).cwiseMax(0.0);
  return (lyapunov_value(cert, model, y) - lyapunov_value(cert, model, x)) / h;
}

}  // namespace crncert
