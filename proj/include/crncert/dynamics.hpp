#pragma once

// ODE integration of x' = Gamma R(x) and numerical validation of
// certificates against sampled kinetics.

#include <Eigen/Dense>
#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "crncert/certificates.hpp"
#include "crncert/kinetics.hpp"
#include "crncert/network.hpp"
#include "crncert/random.hpp"

namespace crncert {

enum class Termination { Horizon, SteadyState, Blowup };

const char* termination_name(Termination t);

struct IntegrateOptions {
  double horizon = 200.0;
  double atol = 1e-9;
  double rtol = 1e-7;
  std::size_t max_steps = 200000;
  /// Stop once ||Gamma R(x)||_inf falls below this.
  double steady_tol = 1e-10;
  /// A step is rejected if a state drops below -positivity_tol * max(1, |x|_inf).
  double positivity_tol = 1e-12;
};

struct Trajectory {
  std::vector<double> t;
  std::vector<Eigen::VectorXd> x;
  /// Step size that led to each state (0 for the initial one).
  std::vector<double> h;
  Termination reason = Termination::Horizon;
  std::size_t rejected = 0;
};

/// Dormand-Prince 5(4) with adaptive steps. Requires x0 >= 0.
Trajectory integrate(const RateModel& model, const Eigen::VectorXd& x0,
                     const IntegrateOptions& options = {});

/// Random walk inside the stoichiometric class of `reference`, staying in
/// the positive orthant.
Eigen::VectorXd sample_in_class(const Network& net, const Eigen::VectorXd& reference, Rng& rng,
                                std::size_t moves = 30);

/// Species concentrations log-uniform in [0.5, 5].
Eigen::VectorXd sample_reference_point(const Network& net, Rng& rng);

struct ValidationOptions {
  std::size_t trials = 100;
  std::size_t initial_conditions = 5;
  std::vector<KineticsFamily> families{KineticsFamily::MassAction, KineticsFamily::Hill};
  bool expect_convergence = false;
  /// Mass-action runs only: the minimum over the last 10% stays above 1e-6.
  bool check_persistence = false;
  /// With expect_convergence, a run still moving at the horizon continues up
  /// to this multiple of it before it counts as not converged.
  double convergence_extension = 10.0;
  std::uint64_t seed = 0;
  /// 0 reads CRNCERT_THREADS, defaulting to 1.
  std::size_t threads = 0;
  /// Tighter than the integration defaults: the monotonicity tolerance is
  /// 1e-7 (1 + V), which the default relative error would already exhaust.
  IntegrateOptions integrate{200.0, 1e-12, 1e-10};
};

struct Violation {
  /// lyapunov_increase, conservation_drift, negative_state, no_convergence
  /// (moving at the end with V stalled), persistence_tail or blowup.
  std::string kind;
  KineticsFamily family = KineticsFamily::MassAction;
  std::size_t trial = 0;
  std::size_t initial_condition = 0;
  /// Kinetics seed; with the initial-condition index it reproduces the run.
  std::uint64_t seed = 0;
  double t = 0.0;
  double magnitude = 0.0;
};

struct ValidationReport {
  std::size_t trajectories = 0;
  std::size_t steps_checked = 0;
  std::size_t violation_count = 0;
  /// At most 50, in (family, trial, initial condition) order.
  std::vector<Violation> violations;
  /// Largest V(t_k+1) - V(t_k) relative to 1 + V(t_k); <= 0 means monotone.
  double max_relative_increase = -INFINITY;
  double max_conservation_drift = 0.0;
  double min_state = INFINITY;
  /// Smallest state over the last 10% of each trajectory.
  double min_tail_state = INFINITY;
  double dini_min = INFINITY;
  double dini_max = -INFINITY;
  std::size_t converged = 0;
  /// Still moving at the end but with V still decreasing over the last 10%
  /// of the run: slow, not a counterexample.
  std::size_t slow = 0;
};

ValidationReport validate_certificate(const Network& net, const Certificate& cert,
                                      const ValidationOptions& options = {});

/// Columns t and the species names.
void write_trajectory_csv(const std::filesystem::path& path, const Network& net,
                          const Trajectory& traj);

std::size_t default_threads();

}  // namespace crncert
