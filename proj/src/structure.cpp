#include "crncert/structure.hpp"

#include <Eigen/Dense>
#include <algorithm>
#include <boost/dynamic_bitset.hpp>
#include <deque>

namespace crncert {

namespace {

struct Ray {
  std::vector<Integer> x;
  boost::dynamic_bitset<> support;
};

Ray unit_ray(std::size_t n, std::size_t i) {
  Ray r{std::vector<Integer>(n, 0), boost::dynamic_bitset<>(n)};
  r.x[i] = 1;
  r.support.set(i);
  return r;
}

Integer constraint_value(const Ray& r, const IntMatrix& a, std::size_t col) {
  Integer s = 0;
  for (std::size_t i = r.support.find_first(); i != boost::dynamic_bitset<>::npos;
       i = r.support.find_next(i))
    s += r.x[i] * Integer(static_cast<long>(a(i, col)));
  return s;
}

}  // namespace

std::vector<std::vector<Integer>> nonnegative_kernel_rays(const IntMatrix& a) {
  const std::size_t n = a.rows();
  std::vector<Ray> rays;
  rays.reserve(n);
  for (std::size_t i = 0; i < n; ++i) rays.push_back(unit_ray(n, i));

  for (std::size_t c = 0; c < a.cols() && !rays.empty(); ++c) {
    std::vector<Integer> val(rays.size());
    std::vector<std::size_t> pos, neg;
    std::vector<Ray> next;
    for (std::size_t k = 0; k < rays.size(); ++k) {
      val[k] = constraint_value(rays[k], a, c);
      const int s = sgn(val[k]);
      if (s > 0) pos.push_back(k);
      else if (s < 0) neg.push_back(k);
    }
    if (pos.empty() && neg.empty()) continue;

    for (std::size_t k = 0; k < rays.size(); ++k)
      if (sgn(val[k]) == 0) next.push_back(rays[k]);

    for (auto p : pos) {
      for (auto q : neg) {
        const auto u = rays[p].support | rays[q].support;
        bool adjacent = true;
        for (std::size_t k = 0; k < rays.size() && adjacent; ++k) {
          if (k == p || k == q) continue;
          if (rays[k].support.is_subset_of(u)) adjacent = false;
        }
        if (!adjacent) continue;
        // (-val q) * p + (val p) * q has zero value on column c.
        const Integer wp = -val[q];
        const Integer wq = val[p];
        Ray r{std::vector<Integer>(n, 0), boost::dynamic_bitset<>(n)};
        for (std::size_t i = 0; i < n; ++i) {
          r.x[i] = wp * rays[p].x[i] + wq * rays[q].x[i];
          if (sgn(r.x[i]) != 0) r.support.set(i);
        }
        normalize_coprime(r.x);
        next.push_back(std::move(r));
      }
    }
    rays = std::move(next);
  }

  std::vector<std::vector<Integer>> out;
  out.reserve(rays.size());
  for (auto& r : rays) out.push_back(std::move(r.x));
  std::sort(out.begin(), out.end(), [](const auto& l, const auto& r) {
    return std::lexicographical_compare(r.begin(), r.end(), l.begin(), l.end());
  });
  out.erase(std::unique(out.begin(), out.end()), out.end());
  return out;
}

ConservationLaw ConservationLaw::from_vector(std::vector<Integer> d) {
  ConservationLaw law;
  for (std::size_t i = 0; i < d.size(); ++i)
    if (sgn(d[i]) != 0) law.support.push_back(i);
  law.d = std::move(d);
  return law;
}

std::vector<ConservationLaw> conservation_laws(const Network& net) {
  std::vector<ConservationLaw> laws;
  for (auto& d : nonnegative_kernel_rays(net.gamma()))
    laws.push_back(ConservationLaw::from_vector(std::move(d)));
  return laws;
}

namespace {

// Sum of rays when their supports cover every coordinate.
std::optional<std::vector<Integer>> covering_sum(const std::vector<std::vector<Integer>>& rays,
                                                 std::size_t dim) {
  if (dim == 0) return std::nullopt;
  std::vector<Integer> sum(dim, 0);
  for (const auto& r : rays)
    for (std::size_t i = 0; i < dim; ++i) sum[i] += r[i];
  for (const auto& s : sum)
    if (sgn(s) <= 0) return std::nullopt;
  normalize_coprime(sum);
  return sum;
}

}  // namespace

Conservativity is_conservative(const Network& net, const std::vector<ConservationLaw>& laws) {
  std::vector<std::vector<Integer>> rays;
  for (const auto& l : laws) rays.push_back(l.d);
  Conservativity c;
  if (auto s = covering_sum(rays, net.num_species())) {
    c.conservative = true;
    c.witness = ConservationLaw::from_vector(std::move(*s));
  }
  return c;
}

Conservativity is_conservative(const Network& net) {
  return is_conservative(net, conservation_laws(net));
}

FluxResult positive_flux(const Network& net) {
  FluxResult f;
  f.rays = nonnegative_kernel_rays(net.gamma().transposed());
  if (auto s = covering_sum(f.rays, net.num_reactions())) {
    f.positive = Flux{std::move(*s)};
    f.unique = net.num_reactions() - rank(net) == 1;
  }
  return f;
}

bool is_catalytic(const Reaction& r) {
  for (const auto& t : r.reactants)
    if (coefficient(r.products, t.species) > 0) return true;
  return false;
}

Assumptions check_assumptions(const Network& net) {
  Assumptions a;
  a.degenerate = net.num_reactions() == 0;
  a.as1 = positive_flux(net).positive.has_value();
  for (std::size_t j = 0; j < net.num_reactions(); ++j)
    if (is_catalytic(net.reaction(j))) a.catalytic_reactions.push_back(j);
  a.as2 = a.catalytic_reactions.empty();
  return a;
}

bool is_linear(const Network& net) {
  for (const auto& r : net.reactions()) {
    if (r.reactants.size() > 1 || r.products.size() > 1) return false;
    if (r.reactants.empty() && r.products.empty()) return false;
    for (const Side* s : {&r.reactants, &r.products})
      for (const auto& t : *s)
        if (t.coeff != 1) return false;
  }
  return true;
}

std::vector<std::vector<bool>> reaction_reachability(const Network& net) {
  const std::size_t nu = net.num_reactions();
  std::vector<std::vector<std::size_t>> consumers(net.num_species());
  for (std::size_t j = 0; j < nu; ++j)
    for (const auto& t : net.reaction(j).reactants) consumers[t.species].push_back(j);

  std::vector<std::vector<bool>> reach(nu, std::vector<bool>(nu, false));
  for (std::size_t s = 0; s < nu; ++s) {
    std::deque<std::size_t> queue{s};
    reach[s][s] = true;
    while (!queue.empty()) {
      const std::size_t k = queue.front();
      queue.pop_front();
      for (const auto& t : net.reaction(k).products)
        for (auto j : consumers[t.species])
          if (!reach[s][j]) {
            reach[s][j] = true;
            queue.push_back(j);
          }
    }
  }
  return reach;
}

bool ancestor_pairs(const Network& net) {
  const auto reach = reaction_reachability(net);
  const std::size_t nu = net.num_reactions();
  for (std::size_t j = 0; j < nu; ++j)
    for (std::size_t k = j + 1; k < nu; ++k) {
      bool shared = false;
      for (std::size_t l = 0; l < nu && !shared; ++l) shared = reach[l][j] && reach[l][k];
      if (!shared) return false;
    }
  return true;
}

MaxMinConditions maxmin_conditions(const Network& net) {
  MaxMinConditions c;
  std::vector<int> uses(net.num_species(), 0);
  for (const auto& r : net.reactions())
    for (const auto& t : r.reactants) ++uses[t.species];
  c.single_reactant_use = true;
  for (std::size_t i = 0; i < uses.size(); ++i) {
    if (uses[i] > 1) c.single_reactant_use = false;
    if (uses[i] == 0) c.unconsumed_species.push_back(i);
  }
  // Cheap rejection before the cone computation.
  if (!c.single_reactant_use) return c;
  auto f = positive_flux(net);
  c.unique_positive_flux = f.positive.has_value() && f.unique;
  c.flux = std::move(f.positive);
  return c;
}

std::size_t rank(const Network& net) { return exact_rank(net.gamma()); }

std::size_t numeric_rank(const IntMatrix& m) {
  if (m.rows() == 0 || m.cols() == 0) return 0;
  Eigen::MatrixXd a(m.rows(), m.cols());
  for (std::size_t i = 0; i < m.rows(); ++i)
    for (std::size_t j = 0; j < m.cols(); ++j) a(i, j) = static_cast<double>(m(i, j));
  Eigen::JacobiSVD<Eigen::MatrixXd> svd(a);
  const auto& s = svd.singularValues();
  const double tol = static_cast<double>(std::max(m.rows(), m.cols())) *
                     std::numeric_limits<double>::epsilon() * s(0);
  std::size_t r = 0;
  for (Eigen::Index i = 0; i < s.size(); ++i)
    if (s(i) > tol) ++r;
  return r;
}

}  // namespace crncert
