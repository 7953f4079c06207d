#include "crncert/kinetics.hpp"

#include <cmath>
#include <stdexcept>

#include "crncert/random.hpp"

namespace crncert {

const char* family_name(KineticsFamily f) {
  return f == KineticsFamily::MassAction ? "mass_action" : "hill";
}

KineticsSample sample_kinetics(const Network& net, KineticsFamily family, std::uint64_t seed) {
  Rng rng(seed);
  KineticsSample s;
  s.family = family;
  s.seed = seed;
  for (std::size_t j = 0; j < net.num_reactions(); ++j) {
    s.k.push_back(rng.log_uniform(0.1, 10.0));
    std::vector<double> th;
    std::vector<int> h;
    if (family == KineticsFamily::Hill) {
      for (std::size_t t = 0; t < net.reaction(j).reactants.size(); ++t) {
        th.push_back(rng.log_uniform(0.1, 10.0));
        h.push_back(1 + static_cast<int>(rng.below(2)));
      }
    }
    s.theta.push_back(std::move(th));
    s.hill.push_back(std::move(h));
  }
  return s;
}

Eigen::MatrixXd stoichiometry_matrix(const Network& net) {
  const auto& g = net.gamma();
  Eigen::MatrixXd m(g.rows(), g.cols());
  for (std::size_t i = 0; i < g.rows(); ++i)
    for (std::size_t j = 0; j < g.cols(); ++j) m(i, j) = static_cast<double>(g(i, j));
  return m;
}

RateModel::RateModel(const Network& net, KineticsSample kinetics)
    : gamma_(stoichiometry_matrix(net)), kin_(std::move(kinetics)) {
  if (kin_.k.size() != net.num_reactions())
    throw std::invalid_argument("kinetics sample does not match the network");
  for (std::size_t j = 0; j < net.num_reactions(); ++j) {
    std::vector<Factor> fs;
    const auto& side = net.reaction(j).reactants;
    for (std::size_t t = 0; t < side.size(); ++t) {
      Factor f{side[t].species, side[t].coeff, 1.0, 1};
      if (kin_.family == KineticsFamily::Hill) {
        f.theta = kin_.theta[j][t];
        f.hill = kin_.hill[j][t];
      }
      fs.push_back(f);
    }
    factors_.push_back(std::move(fs));
  }
}

double RateModel::factor(const Factor& f, double x) const {
  x = std::max(x, 0.0);
  if (kin_.family == KineticsFamily::MassAction) return std::pow(x, f.alpha);
  const double xh = std::pow(x, f.hill);
  return xh / (std::pow(f.theta, f.hill) + xh);
}

double RateModel::factor_derivative(const Factor& f, double x) const {
  x = std::max(x, 0.0);
  if (kin_.family == KineticsFamily::MassAction)
    return f.alpha == 1 ? 1.0 : f.alpha * std::pow(x, f.alpha - 1);
  const double th = std::pow(f.theta, f.hill);
  const double xh = std::pow(x, f.hill);
  const double dxh = f.hill == 1 ? 1.0 : f.hill * std::pow(x, f.hill - 1);
  return th * dxh / ((th + xh) * (th + xh));
}

Eigen::VectorXd RateModel::rates(const Eigen::VectorXd& x) const {
  if (static_cast<std::size_t>(x.size()) != num_species())
    throw std::invalid_argument("state dimension mismatch");
  Eigen::VectorXd r(num_reactions());
  for (std::size_t j = 0; j < num_reactions(); ++j) {
    double v = kin_.k[j];
    for (const auto& f : factors_[j]) v *= factor(f, x(f.species));
    r(j) = v;
  }
  return r;
}

Eigen::MatrixXd RateModel::jacobian(const Eigen::VectorXd& x) const {
  if (static_cast<std::size_t>(x.size()) != num_species())
    throw std::invalid_argument("state dimension mismatch");
  Eigen::MatrixXd jac = Eigen::MatrixXd::Zero(num_reactions(), num_species());
  for (std::size_t j = 0; j < num_reactions(); ++j) {
    const auto& fs = factors_[j];
    for (std::size_t a = 0; a < fs.size(); ++a) {
      double v = kin_.k[j] * factor_derivative(fs[a], x(fs[a].species));
      for (std::size_t b = 0; b < fs.size(); ++b)
        if (b != a) v *= factor(fs[b], x(fs[b].species));
      jac(j, fs[a].species) += v;
    }
  }
  return jac;
}

}  // namespace crncert
