#pragma once

// Robust Lyapunov function certificates: sum-of-currents (SoC) and Max-Min.
// A certificate names the function precisely enough to evaluate it.

#include <Eigen/Dense>
#include <optional>
#include <string>
#include <vector>

#include "crncert/exact.hpp"
#include "crncert/graphmods.hpp"
#include "crncert/kinetics.hpp"
#include "crncert/network.hpp"

namespace crncert {

enum class Family { SoC, MaxMin };

const char* family_name(Family f);

/// One entry of the Max-Min rate set: (R_forward - R_backward) / weight.
struct RateEntry {
  std::size_t forward;
  std::optional<std::size_t> backward;
  Integer weight;
};

struct Certificate {
  Family family = Family::SoC;
  /// The certified network; species and reaction ids below refer to it.
  Network network;
  /// Reduction from a base network; empty steps when certified directly.
  ReductionTrace trace;
  /// SoC: species whose |dx_i/dt| are summed.
  std::vector<std::size_t> summed_species;
  /// SoC: catalyst, dimer and enzyme species left out of the sum.
  std::vector<std::size_t> mirror_species;
  /// Max-Min.
  std::vector<RateEntry> rate_set;
  /// Caveats worth reporting (multiple catalysts on one species, species
  /// consumed by no reaction, no licensed trace).
  std::vector<std::string> flags;
  /// False for candidate functions built only to be falsified.
  bool certified = true;

  const Network& base() const { return trace.base; }
  std::vector<Integer> flux_weights() const;
};

std::optional<Certificate> certify_soc(const Network& net, const ReduceOptions& options = {});
std::optional<Certificate> certify_maxmin(const Network& net, const ReduceOptions& options = {});

/// Sum of |dx_i/dt| over all species, not claimed to be a Lyapunov function.
Certificate candidate_soc(const Network& net);

struct LyapunovEvaluation {
  double value = 0.0;
  /// SoC: sign of dx_i/dt per summed species (0 on ties).
  std::vector<int> active_pattern;
  /// Max-Min: rate-set entries attaining the max and the min.
  std::vector<std::size_t> argmax;
  std::vector<std::size_t> argmin;
  /// Upper right Dini derivative along the flow, from the piecewise form.
  double dini = 0.0;
  /// Forward-difference estimate of the same derivative.
  double dini_fd = 0.0;
};

/// Value only; the cheap path used along trajectories.
double lyapunov_value(const Certificate& cert, const RateModel& model, const Eigen::VectorXd& x);

LyapunovEvaluation eval_soc(const Certificate& cert, const RateModel& model,
                            const Eigen::VectorXd& x);
LyapunovEvaluation eval_maxmin(const Certificate& cert, const RateModel& model,
                               const Eigen::VectorXd& x);
LyapunovEvaluation evaluate(const Certificate& cert, const RateModel& model,
                            const Eigen::VectorXd& x);

double dini_analytic(const Certificate& cert, const RateModel& model, const Eigen::VectorXd& x);
double dini_finite_difference(const Certificate& cert, const RateModel& model,
                              const Eigen::VectorXd& x);

}  // namespace crncert
