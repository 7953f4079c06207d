#pragma once

// Robust non-degeneracy: reduced Jacobian, essential determinant by
// Cauchy-Binet, principal-minor sampling, and propagation along traces.
// Everything is stated for -Gamma V.

#include <Eigen/Dense>
#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "crncert/exact.hpp"
#include "crncert/graphmods.hpp"
#include "crncert/network.hpp"
#include "crncert/random.hpp"

namespace crncert {

class BudgetExceeded : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// A reaction-by-species matrix positive exactly on the reactant pattern.
class JacobianSample {
 public:
  /// Throws std::invalid_argument when v violates the pattern.
  JacobianSample(const Network& net, Eigen::MatrixXd v);
  const Eigen::MatrixXd& matrix() const { return v_; }

 private:
  Eigen::MatrixXd v_;
};

/// Entries log-uniform in [0.1, 10] on the pattern.
JacobianSample sample_jacobian(const Network& net, Rng& rng);

/// -Gamma V, species by species.
Eigen::MatrixXd negative_jacobian(const Network& net, const JacobianSample& v);

/// Order in which standard basis vectors complete the left-kernel basis.
enum class Completion { Forward, Backward };

/// Top-left r x r block of T (-Gamma V) T^-1, where T stacks r completing
/// standard basis vectors above a left-kernel basis of Gamma.
Eigen::MatrixXd reduced_jacobian(const Network& net, const JacobianSample& v,
                                 Completion completion = Completion::Forward);

/// reduced_jacobian with T computed once, for repeated samples.
class ReducedJacobianMap {
 public:
  explicit ReducedJacobianMap(const Network& net, Completion completion = Completion::Forward);
  Eigen::MatrixXd operator()(const JacobianSample& v) const;
  std::size_t rank() const { return rank_; }
  const Eigen::MatrixXd& transform() const { return t_; }

 private:
  Eigen::MatrixXd gamma_;
  Eigen::MatrixXd t_;
  Eigen::MatrixXd t_inv_;
  std::size_t rank_ = 0;
};

struct MinorTerm {
  std::vector<std::size_t> species;    // I
  std::vector<std::size_t> reactions;  // J
  Integer gamma_minor;                 // det(-Gamma_IJ), exact
  double v_minor = 0.0;                // det(V_JI)
};

/// The nonzero r x r minors of -Gamma, enumerated once per network.
class GammaMinors {
 public:
  /// Throws BudgetExceeded when C(n,r) * C(nu,r) exceeds `cap`.
  GammaMinors(const Network& net, double cap = 2e6);

  std::size_t rank() const { return rank_; }
  const std::vector<MinorTerm>& terms() const { return terms_; }
  /// C(n,r) * C(nu,r).
  double pairs() const { return pairs_; }

 private:
  std::size_t rank_ = 0;
  double pairs_ = 0;
  std::vector<MinorTerm> terms_;
};

struct EssentialDeterminant {
  double value = 0.0;
  /// Sum of |term| magnitudes; the reference for "numerically zero".
  double scale = 0.0;
  std::vector<MinorTerm> terms;  // nonzero terms only
};

EssentialDeterminant essential_determinant(const GammaMinors& minors, const JacobianSample& v);
EssentialDeterminant essential_determinant(const Network& net, const JacobianSample& v,
                                           double cap = 2e6);

/// Sum of all r x r principal minors of m, computed directly.
double principal_minor_sum(const Eigen::MatrixXd& m, std::size_t r);

/// r-th elementary symmetric function of the eigenvalues of m (the same
/// quantity as principal_minor_sum, by a spectral route).
double eigen_minor_sum(const Eigen::MatrixXd& m, std::size_t r);

/// Product of the row norms of m (Hadamard bound on |det m|).
double hadamard_bound(const Eigen::MatrixXd& m);

/// |value| <= tol * scale, with zero scale meaning exact zero.
bool negligible(double value, double scale, double tol = 1e-9);

/// True iff det_ess(-Gamma V) vanishes identically on the pattern: no pair
/// (I, J) with a nonzero Gamma minor admits a perfect reactant matching.
bool structurally_degenerate(const Network& net, const GammaMinors& minors);

enum class Nondegeneracy { RobustlyNondegenerate, Degenerate, Unknown };

const char* verdict_name(Nondegeneracy v);

struct NondegenOptions {
  double minor_cap = 2e6;
  double tol = 1e-9;
  std::size_t retries = 10;
};

struct NondegeneracyResult {
  Nondegeneracy verdict = Nondegeneracy::Unknown;
  /// theorem15_single_sample, theorem16_propagation or sampled_only.
  std::string method = "sampled_only";
  std::uint64_t seed = 0;
  double det_ess = 0.0;
  bool over_cap = false;
  std::vector<std::string> notes;
};

/// The sample the single-sample test uses for `seed`.
JacobianSample licensing_sample(const Network& net, std::uint64_t seed);

NondegeneracyResult robust_nondegenerate(const Network& net, bool cert_present, std::uint64_t seed,
                                         const NondegenOptions& options = {});

/// Carries a non-degenerate base verdict to the traced network when every
/// step is a reversal, intermediate, regulation, catalyst or dimer (or a
/// composite of those). Returns nothing when the trace is not covered.
std::optional<NondegeneracyResult> propagate_nondegeneracy(const ReductionTrace& trace,
                                                           const NondegeneracyResult& base,
                                                           bool cert_present);

struct P0Report {
  /// Smallest principal minor, divided by the product of its row norms.
  double min_minor = 0.0;
  double min_minor_raw = 0.0;
  std::vector<std::size_t> worst_set;
  std::size_t minors_checked = 0;
  bool exhaustive = false;
};

/// Principal minors of -Gamma V over `trials` samples: all of them when
/// n <= 12, otherwise 500 random index sets per sample.
P0Report p0_sample_check(const Network& net, std::size_t trials, std::uint64_t seed);

}  // namespace crncert
