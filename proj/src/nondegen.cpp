#include "crncert/nondegen.hpp"

#include <algorithm>
#include <cmath>
#include <complex>
#include <functional>
#include <numeric>

#include "crncert/kinetics.hpp"
#include "crncert/structure.hpp"

namespace crncert {

namespace {

constexpr std::uint64_t kLicensingStream = 0x6e6f6e64;  // "nond"
constexpr std::uint64_t kP0Stream = 0x70307030;

bool next_combination(std::vector<std::size_t>& c, std::size_t n) {
  const std::size_t k = c.size();
  for (std::size_t i = k; i-- > 0;) {
    if (c[i] < n - k + i) {
      ++c[i];
      for (std::size_t j = i + 1; j < k; ++j) c[j] = c[j - 1] + 1;
      return true;
    }
  }
  return false;
}

std::vector<std::size_t> first_combination(std::size_t k) {
  std::vector<std::size_t> c(k);
  std::iota(c.begin(), c.end(), 0);
  return c;
}

double binomial(std::size_t n, std::size_t k) {
  if (k > n) return 0.0;
  double b = 1.0;
  for (std::size_t i = 1; i <= k; ++i) b = b * static_cast<double>(n - k + i) / static_cast<double>(i);
  return std::round(b);
}

Eigen::MatrixXd submatrix(const Eigen::MatrixXd& m, const std::vector<std::size_t>& rows,
                          const std::vector<std::size_t>& cols) {
  Eigen::MatrixXd s(rows.size(), cols.size());
  for (std::size_t a = 0; a < rows.size(); ++a)
    for (std::size_t b = 0; b < cols.size(); ++b) s(a, b) = m(rows[a], cols[b]);
  return s;
}

double det(const Eigen::MatrixXd& m) {
  if (m.rows() == 0) return 1.0;
  return m.partialPivLu().determinant();
}

bool perfect_matching(const Network& net, const std::vector<std::size_t>& reactions,
                      const std::vector<std::size_t>& species) {
  const std::size_t r = reactions.size();
  std::vector<int> match(r, -1);  // species slot -> reaction slot
  std::function<bool(std::size_t, std::vector<bool>&)> augment = [&](std::size_t a,
                                                                   std::vector<bool>& seen) {
    for (std::size_t b = 0; b < r; ++b) {
      if (seen[b] || net.reactant_coeff(species[b], reactions[a]) == 0) continue;
      seen[b] = true;
      if (match[b] < 0 || augment(static_cast<std::size_t>(match[b]), seen)) {
        match[b] = static_cast<int>(a);
        return true;
      }
    }
    return false;
  };
  for (std::size_t a = 0; a < r; ++a) {
    std::vector<bool> seen(r, false);
    if (!augment(a, seen)) return false;
  }
  return true;
}

}  // namespace

JacobianSample::JacobianSample(const Network& net, Eigen::MatrixXd v) : v_(std::move(v)) {
  if (static_cast<std::size_t>(v_.rows()) != net.num_reactions() ||
      static_cast<std::size_t>(v_.cols()) != net.num_species())
    throw std::invalid_argument("Jacobian sample has the wrong shape");
  for (std::size_t j = 0; j < net.num_reactions(); ++j)
    for (std::size_t i = 0; i < net.num_species(); ++i) {
      const bool reactant = net.reactant_coeff(i, j) > 0;
      const double e = v_(j, i);
      if (reactant ? !(e > 0.0) : e != 0.0)
        throw std::invalid_argument("Jacobian sample violates the reactant sign pattern");
    }
}

JacobianSample sample_jacobian(const Network& net, Rng& rng) {
  Eigen::MatrixXd v = Eigen::MatrixXd::Zero(net.num_reactions(), net.num_species());
  for (std::size_t j = 0; j < net.num_reactions(); ++j)
    for (const auto& t : net.reaction(j).reactants) v(j, t.species) = rng.log_uniform(0.1, 10.0);
  return JacobianSample(net, std::move(v));
}

Eigen::MatrixXd negative_jacobian(const Network& net, const JacobianSample& v) {
  return -stoichiometry_matrix(net) * v.matrix();
}

ReducedJacobianMap::ReducedJacobianMap(const Network& net, Completion completion)
    : gamma_(stoichiometry_matrix(net)) {
  const std::size_t n = net.num_species();
  const RationalMatrix kernel = left_kernel_basis(to_rational(net.gamma()));
  rank_ = n - kernel.rows();

  // Kernel rows first, then unit vectors that raise the rank.
  std::vector<std::vector<Rational>> rows;
  for (std::size_t a = 0; a < kernel.rows(); ++a)
    rows.emplace_back(kernel.row(a).begin(), kernel.row(a).end());
  std::vector<std::size_t> units;
  auto current_rank = [&rows, n]() {
    RationalMatrix m(rows.size(), n);
    for (std::size_t a = 0; a < rows.size(); ++a)
      for (std::size_t b = 0; b < n; ++b) m(a, b) = rows[a][b];
    return exact_rank(m);
  };
  for (std::size_t step = 0; step < n && units.size() < rank_; ++step) {
    const std::size_t i = completion == Completion::Forward ? step : n - 1 - step;
    std::vector<Rational> e(n, 0);
    e[i] = 1;
    rows.push_back(e);
    if (current_rank() == rows.size()) units.push_back(i);
    else rows.pop_back();
  }

  t_ = Eigen::MatrixXd::Zero(n, n);
  for (std::size_t a = 0; a < units.size(); ++a) t_(a, units[a]) = 1.0;
  for (std::size_t a = 0; a < kernel.rows(); ++a)
    for (std::size_t b = 0; b < n; ++b) t_(rank_ + a, b) = kernel(a, b).get_d();
  t_inv_ = t_.fullPivLu().inverse();
}

Eigen::MatrixXd ReducedJacobianMap::operator()(const JacobianSample& v) const {
  const Eigen::MatrixXd m = t_ * (-gamma_ * v.matrix()) * t_inv_;
  return m.topLeftCorner(rank_, rank_);
}

Eigen::MatrixXd reduced_jacobian(const Network& net, const JacobianSample& v,
                                 Completion completion) {
  return ReducedJacobianMap(net, completion)(v);
}

GammaMinors::GammaMinors(const Network& net, double cap) {
  const std::size_t n = net.num_species(), nu = net.num_reactions();
  rank_ = crncert::rank(net);
  pairs_ = binomial(n, rank_) * binomial(nu, rank_);
  if (pairs_ > cap)
    throw BudgetExceeded("Cauchy-Binet expansion needs " + std::to_string(static_cast<long long>(pairs_)) +
                         " minor pairs (cap " + std::to_string(static_cast<long long>(cap)) +
                         "); use the reduced Jacobian determinant instead");
  const auto& g = net.gamma();
  const bool flip = rank_ % 2 == 1;
  auto species = first_combination(rank_);
  do {
    IntMatrix rows(rank_, nu);
    for (std::size_t a = 0; a < rank_; ++a)
      for (std::size_t j = 0; j < nu; ++j) rows(a, j) = g(species[a], j);
    if (exact_rank(rows) < rank_) continue;
    auto reactions = first_combination(rank_);
    do {
      Integer d = sub_determinant(g, species, reactions);
      if (d == 0) continue;
      terms_.push_back({species, reactions, flip ? Integer(-d) : d, 0.0});
    } while (next_combination(reactions, nu));
  } while (next_combination(species, n));
}

EssentialDeterminant essential_determinant(const GammaMinors& minors, const JacobianSample& v) {
  EssentialDeterminant ed;
  for (const auto& t : minors.terms()) {
    const double vm = det(submatrix(v.matrix(), t.reactions, t.species));
    const double term = t.gamma_minor.get_d() * vm;
    if (term == 0.0) continue;
    ed.value += term;
    ed.scale += std::abs(term);
    MinorTerm copy = t;
    copy.v_minor = vm;
    ed.terms.push_back(std::move(copy));
  }
  return ed;
}

EssentialDeterminant essential_determinant(const Network& net, const JacobianSample& v,
                                           double cap) {
  return essential_determinant(GammaMinors(net, cap), v);
}

double principal_minor_sum(const Eigen::MatrixXd& m, std::size_t r) {
  const std::size_t n = m.rows();
  if (r > n) return 0.0;
  double s = 0.0;
  auto idx = first_combination(r);
  do {
    s += det(submatrix(m, idx, idx));
  } while (next_combination(idx, n));
  return s;
}

double eigen_minor_sum(const Eigen::MatrixXd& m, std::size_t r) {
  const std::size_t n = m.rows();
  if (r > n) return 0.0;
  if (n == 0) return 1.0;
  Eigen::EigenSolver<Eigen::MatrixXd> es(m, false);
  std::vector<std::complex<double>> c(n + 1, 0.0);
  c[0] = 1.0;
  for (std::size_t i = 0; i < n; ++i) {
    const auto lambda = es.eigenvalues()(i);
    for (std::size_t k = i + 1; k >= 1; --k) c[k] += lambda * c[k - 1];
  }
  return c[r].real();
}

double hadamard_bound(const Eigen::MatrixXd& m) {
  double b = 1.0;
  for (Eigen::Index i = 0; i < m.rows(); ++i) b *= m.row(i).norm();
  return b;
}

bool negligible(double value, double scale, double tol) {
  if (scale == 0.0) return value == 0.0;
  return std::abs(value) <= tol * scale;
}

bool structurally_degenerate(const Network& net, const GammaMinors& minors) {
  for (const auto& t : minors.terms())
    if (perfect_matching(net, t.reactions, t.species)) return false;
  return true;
}

const char* verdict_name(Nondegeneracy v) {
  switch (v) {
    case Nondegeneracy::RobustlyNondegenerate: return "robustly_nondegenerate";
    case Nondegeneracy::Degenerate: return "degenerate";
    case Nondegeneracy::Unknown: return "unknown";
  }
  return "?";
}

JacobianSample licensing_sample(const Network& net, std::uint64_t seed) {
  Rng rng(derive_seed(seed, kLicensingStream));
  return sample_jacobian(net, rng);
}

NondegeneracyResult robust_nondegenerate(const Network& net, bool cert_present, std::uint64_t seed,
                                         const NondegenOptions& options) {
  NondegeneracyResult res;
  res.seed = seed;
  std::optional<GammaMinors> minors;
  std::optional<ReducedJacobianMap> reduced;
  try {
    minors.emplace(net, options.minor_cap);
  } catch (const BudgetExceeded& e) {
    res.over_cap = true;
    res.notes.push_back(e.what());
    reduced.emplace(net);
  }
  auto evaluate = [&](const JacobianSample& v) -> std::pair<double, double> {
    if (minors) {
      auto ed = essential_determinant(*minors, v);
      return {ed.value, ed.scale};
    }
    const Eigen::MatrixXd l = (*reduced)(v);
    return {det(l), hadamard_bound(l)};
  };

  Rng rng(derive_seed(seed, kLicensingStream));
  auto [d, scale] = evaluate(sample_jacobian(net, rng));
  res.det_ess = d;
  if (negligible(d, scale, options.tol)) {
    bool recovered = false;
    for (std::size_t k = 0; k < options.retries && !recovered; ++k) {
      auto [d2, s2] = evaluate(sample_jacobian(net, rng));
      if (negligible(d2, s2, options.tol)) continue;
      res.notes.push_back("first sample numerically singular; retry " + std::to_string(k + 1) +
                          " used");
      d = d2;
      res.det_ess = d2;
      recovered = true;
    }
    if (!recovered) {
      if (minors && structurally_degenerate(net, *minors)) {
        res.verdict = Nondegeneracy::Degenerate;
        res.notes.push_back("essential determinant vanishes identically: no nonzero minor pair "
                            "admits a reactant matching");
      } else {
        res.notes.push_back("essential determinant numerically zero at all samples");
      }
      return res;
    }
  }
  if (d < 0.0) {
    res.notes.push_back(cert_present
                            ? "negative essential determinant contradicts the certificate"
                            : "negative essential determinant at the sample");
    return res;
  }
  if (!cert_present) {
    res.notes.push_back("no certificate: positive essential determinant is sampled evidence only");
    return res;
  }
  if (res.over_cap) {
    res.notes.push_back("reduced Jacobian determinant positive at the sample; verdict not licensed");
    return res;
  }
  res.verdict = Nondegeneracy::RobustlyNondegenerate;
  res.method = "theorem15_single_sample";
  return res;
}

std::optional<NondegeneracyResult> propagate_nondegeneracy(const ReductionTrace& trace,
                                                           const NondegeneracyResult& base,
                                                           bool cert_present) {
  if (!cert_present || base.verdict != Nondegeneracy::RobustlyNondegenerate) return std::nullopt;
  for (const auto& s : trace.steps)
    if (s.kind() == ModKind::FeedbackSpecies) return std::nullopt;
  NondegeneracyResult res = base;
  res.method = "theorem16_propagation";
  res.notes.push_back("base network verdict carried through " + std::to_string(trace.steps.size()) +
                      " modification steps");
  return res;
}

P0Report p0_sample_check(const Network& net, std::size_t trials, std::uint64_t seed) {
  const std::size_t n = net.num_species();
  P0Report rep;
  rep.exhaustive = n <= 12;
  rep.min_minor = INFINITY;
  Rng rng(derive_seed(seed, kP0Stream));
  auto check = [&rep](const Eigen::MatrixXd& a, const std::vector<std::size_t>& idx) {
    const Eigen::MatrixXd sub = submatrix(a, idx, idx);
    const double raw = det(sub);
    const double bound = hadamard_bound(sub);
    const double normalized = bound == 0.0 ? 0.0 : raw / bound;
    ++rep.minors_checked;
    if (normalized < rep.min_minor) {
      rep.min_minor = normalized;
      rep.min_minor_raw = raw;
      rep.worst_set = idx;
    }
  };
  for (std::size_t t = 0; t < trials; ++t) {
    const Eigen::MatrixXd a = negative_jacobian(net, sample_jacobian(net, rng));
    if (rep.exhaustive) {
      for (std::uint64_t mask = 1; mask < (std::uint64_t{1} << n); ++mask) {
        std::vector<std::size_t> idx;
        for (std::size_t i = 0; i < n; ++i)
          if (mask >> i & 1) idx.push_back(i);
        check(a, idx);
      }
    } else {
      std::vector<std::size_t> all(n);
      std::iota(all.begin(), all.end(), 0);
      for (int s = 0; s < 500; ++s) {
        const std::size_t size = 1 + rng.below(n);
        for (std::size_t i = 0; i < size; ++i) std::swap(all[i], all[i + rng.below(n - i)]);
        std::vector<std::size_t> idx(all.begin(), all.begin() + size);
        std::sort(idx.begin(), idx.end());
        check(a, idx);
      }
    }
  }
  if (rep.minors_checked == 0) rep.min_minor = 0.0;
  return rep;
}

}  // namespace crncert
