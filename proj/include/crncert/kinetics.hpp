#pragma once

// Admissible kinetics: mass action and saturating Hill rates, with their
// Jacobians.

#include <Eigen/Dense>
#include <cstdint>
#include <vector>

#include "crncert/network.hpp"

namespace crncert {

enum class KineticsFamily { MassAction, Hill };

const char* family_name(KineticsFamily f);

struct KineticsSample {
  KineticsFamily family = KineticsFamily::MassAction;
  std::uint64_t seed = 0;
  /// Rate constant per reaction.
  std::vector<double> k;
  /// Hill only: half-saturation and exponent per reactant term, in the
  /// order of the reaction's reactant side.
  std::vector<std::vector<double>> theta;
  std::vector<std::vector<int>> hill;
};

/// Parameters log-uniform in [0.1, 10]; Hill exponents uniform in {1, 2}.
KineticsSample sample_kinetics(const Network& net, KineticsFamily family, std::uint64_t seed);

Eigen::MatrixXd stoichiometry_matrix(const Network& net);

/// Rates, velocity and rate Jacobian for one network and kinetics sample.
/// Negative concentrations are read as zero.
class RateModel {
 public:
  RateModel(const Network& net, KineticsSample kinetics);

  std::size_t num_species() const { return gamma_.rows(); }
  std::size_t num_reactions() const { return gamma_.cols(); }
  const Eigen::MatrixXd& gamma() const { return gamma_; }
  const KineticsSample& kinetics() const { return kin_; }

  Eigen::VectorXd rates(const Eigen::VectorXd& x) const;
  Eigen::VectorXd velocity(const Eigen::VectorXd& x) const { return gamma_ * rates(x); }
  /// dR/dx, reactions by species.
  Eigen::MatrixXd jacobian(const Eigen::VectorXd& x) const;

 private:
  struct Factor {
    std::size_t species;
    int alpha;
    double theta;
    int hill;
  };
  double factor(const Factor& f, double x) const;
  double factor_derivative(const Factor& f, double x) const;

  Eigen::MatrixXd gamma_;
  KineticsSample kin_;
  std::vector<std::vector<Factor>> factors_;
};

}  // namespace crncert
