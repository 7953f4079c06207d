#include "crncert/dynamics.hpp"

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <fstream>
#include <iomanip>
#include <mutex>
#include <stdexcept>
#include <thread>

#include "crncert/structure.hpp"

namespace crncert {

namespace {

// Dormand-Prince 5(4) tableau.
constexpr double c2 = 1.0 / 5, c3 = 3.0 / 10, c4 = 4.0 / 5, c5 = 8.0 / 9;
constexpr double a21 = 1.0 / 5;
constexpr double a31 = 3.0 / 40, a32 = 9.0 / 40;
constexpr double a41 = 44.0 / 45, a42 = -56.0 / 15, a43 = 32.0 / 9;
constexpr double a51 = 19372.0 / 6561, a52 = -25360.0 / 2187, a53 = 64448.0 / 6561,
                 a54 = -212.0 / 729;
constexpr double a61 = 9017.0 / 3168, a62 = -355.0 / 33, a63 = 46732.0 / 5247, a64 = 49.0 / 176,
                 a65 = -5103.0 / 18656;
constexpr double b1 = 35.0 / 384, b3 = 500.0 / 1113, b4 = 125.0 / 192, b5 = -2187.0 / 6784,
                 b6 = 11.0 / 84;
constexpr double e1 = 71.0 / 57600, e3 = -71.0 / 16695, e4 = 71.0 / 1920, e5 = -17253.0 / 339200,
                 e6 = 22.0 / 525, e7 = -1.0 / 40;

constexpr std::uint64_t kKineticsStream = 0x6b696e;
constexpr std::uint64_t kInitialStream = 0x696331;
constexpr std::size_t kMaxRecorded = 50;

double inf_norm(const Eigen::VectorXd& v) { return v.size() ? v.cwiseAbs().maxCoeff() : 0.0; }

struct RunResult {
  std::vector<Violation> violations;
  std::size_t steps = 0;
  double max_increase = -INFINITY;
  double max_drift = 0.0;
  double min_state = INFINITY;
  double min_tail = INFINITY;
  double dini_min = INFINITY;
  double dini_max = -INFINITY;
  bool converged = false;
  bool slow = false;
};

RunResult check_run(const Certificate& cert, const RateModel& model, const Trajectory& traj,
                    const std::vector<ConservationLaw>& laws, const ValidationOptions& opt,
                    Violation tag) {
  RunResult r;
  auto flag = [&](const char* kind, double t, double magnitude) {
    Violation v = tag;
    v.kind = kind;
    v.t = t;
    v.magnitude = magnitude;
    r.violations.push_back(v);
  };

  std::vector<double> totals0;
  for (const auto& l : laws) {
    double s = 0.0;
    for (std::size_t i = 0; i < l.d.size(); ++i) s += l.d[i].get_d() * traj.x[0](i);
    totals0.push_back(s);
  }

  const std::size_t steps = traj.x.size();
  const double tail_from = traj.t.back() * 0.9;
  double prev = lyapunov_value(cert, model, traj.x[0]);
  double v_tail_start = NAN;
  bool increase_flagged = false, drift_flagged = false;
  for (std::size_t k = 0; k < steps; ++k) {
    const Eigen::VectorXd& x = traj.x[k];
    const double xmin = x.size() ? x.minCoeff() : 0.0;
    r.min_state = std::min(r.min_state, xmin);
    if (traj.t[k] >= tail_from) r.min_tail = std::min(r.min_tail, xmin);
    if (k > 0) {
      const double v = lyapunov_value(cert, model, x);
      if (std::isnan(v_tail_start) && traj.t[k] >= tail_from) v_tail_start = v;
      const double rel = (v - prev) / (1.0 + prev);
      r.max_increase = std::max(r.max_increase, rel);
      if (rel > 1e-7 && !increase_flagged) {
        flag("lyapunov_increase", traj.t[k], rel);
        increase_flagged = true;
      }
      prev = v;
      ++r.steps;
    }
    for (std::size_t l = 0; l < laws.size(); ++l) {
      if (totals0[l] <= 0.0) continue;
      double s = 0.0;
      for (std::size_t i = 0; i < laws[l].d.size(); ++i) s += laws[l].d[i].get_d() * x(i);
      const double drift = std::abs(s - totals0[l]) / totals0[l];
      r.max_drift = std::max(r.max_drift, drift);
      if (drift > 1e-8 && !drift_flagged) {
        flag("conservation_drift", traj.t[k], drift);
        drift_flagged = true;
      }
    }
    if (k % 10 == 0) {
      const double d = dini_analytic(cert, model, x);
      r.dini_min = std::min(r.dini_min, d);
      r.dini_max = std::max(r.dini_max, d);
    }
  }
  if (r.min_state < -1e-12) flag("negative_state", 0.0, r.min_state);
  if (traj.reason == Termination::Blowup) flag("blowup", traj.t.back(), inf_norm(traj.x.back()));
  const double speed = inf_norm(model.velocity(traj.x.back()));
  r.converged = traj.reason != Termination::Blowup && speed < 1e-6;
  if (!r.converged && traj.reason != Termination::Blowup) {
    const double v_end = lyapunov_value(cert, model, traj.x.back());
    r.slow = !std::isnan(v_tail_start) && v_end < (1.0 - 1e-6) * v_tail_start;
  }
  if (opt.expect_convergence && !r.converged && !r.slow)
    flag("no_convergence", traj.t.back(), speed);
  // Saturating rates can place interior steady states arbitrarily close to
  // the boundary, so the tail proxy is only asserted under mass action.
  if (opt.check_persistence && tag.family == KineticsFamily::MassAction && !(r.min_tail > 1e-6))
    flag("persistence_tail", traj.t.back(), r.min_tail);
  return r;
}

}  // namespace

const char* termination_name(Termination t) {
  switch (t) {
    case Termination::Horizon: return "horizon";
    case Termination::SteadyState: return "steady_state";
    case Termination::Blowup: return "blowup";
  }
  return "?";
}

Trajectory integrate(const RateModel& model, const Eigen::VectorXd& x0,
                     const IntegrateOptions& opt) {
  if (static_cast<std::size_t>(x0.size()) != model.num_species())
    throw std::invalid_argument("initial condition has the wrong dimension");
  if (x0.size() && x0.minCoeff() < 0.0)
    throw std::invalid_argument("initial condition must be nonnegative");
  Trajectory tr;
  Eigen::VectorXd x = x0;
  double t = 0.0;
  tr.t.push_back(t);
  tr.x.push_back(x);
  tr.h.push_back(0.0);

  Eigen::VectorXd k1 = model.velocity(x);
  if (inf_norm(k1) < opt.steady_tol) {
    tr.reason = Termination::SteadyState;
    return tr;
  }
  double h = std::min(opt.horizon, 0.01 * std::max(1.0, inf_norm(x)) / std::max(1e-12, inf_norm(k1)));
  h = std::max(h, 1e-8);

  std::size_t steps = 0;
  while (t < opt.horizon) {
    if (++steps > opt.max_steps) {
      tr.reason = Termination::Blowup;
      return tr;
    }
    h = std::min(h, opt.horizon - t);
    const Eigen::VectorXd k2 = model.velocity(x + h * a21 * k1);
    const Eigen::VectorXd k3 = model.velocity(x + h * (a31 * k1 + a32 * k2));
    const Eigen::VectorXd k4 = model.velocity(x + h * (a41 * k1 + a42 * k2 + a43 * k3));
    const Eigen::VectorXd k5 = model.velocity(x + h * (a51 * k1 + a52 * k2 + a53 * k3 + a54 * k4));
    const Eigen::VectorXd k6 =
        model.velocity(x + h * (a61 * k1 + a62 * k2 + a63 * k3 + a64 * k4 + a65 * k5));
    Eigen::VectorXd xn = x + h * (b1 * k1 + b3 * k3 + b4 * k4 + b5 * k5 + b6 * k6);
    const Eigen::VectorXd k7 = model.velocity(xn);
    const Eigen::VectorXd err = h * (e1 * k1 + e3 * k3 + e4 * k4 + e5 * k5 + e6 * k6 + e7 * k7);

    double en = 0.0;
    for (Eigen::Index i = 0; i < x.size(); ++i) {
      const double sc = opt.atol + opt.rtol * std::max(std::abs(x(i)), std::abs(xn(i)));
      en = std::max(en, std::abs(err(i)) / sc);
    }
    const double scale = std::max(1.0, inf_norm(x));
    const bool finite = xn.allFinite() && std::isfinite(en);
    const bool negative = finite && xn.size() && xn.minCoeff() < -opt.positivity_tol * scale;
    if (!finite || en > 1.0 || negative) {
      ++tr.rejected;
      if (negative && finite && en <= 1.0) h *= 0.5;
      else h *= finite ? std::max(0.1, 0.9 * std::pow(en, -0.2)) : 0.1;
      if (h < 1e-14 * std::max(1.0, t)) {
        tr.reason = Termination::Blowup;
        return tr;
      }
      continue;
    }
    xn = xn.cwiseMax(0.0);
    t += h;
    x = xn;
    k1 = k7;
    tr.t.push_back(t);
    tr.x.push_back(x);
    tr.h.push_back(h);
    if (inf_norm(x) > 1e12) {
      tr.reason = Termination::Blowup;
      return tr;
    }
    if (inf_norm(k1) < opt.steady_tol) {
      tr.reason = Termination::SteadyState;
      return tr;
    }
    h *= en > 0.0 ? std::min(5.0, std::max(0.2, 0.9 * std::pow(en, -0.2))) : 5.0;
  }
  tr.reason = Termination::Horizon;
  return tr;
}

Eigen::VectorXd sample_reference_point(const Network& net, Rng& rng) {
  Eigen::VectorXd p(net.num_species());
  for (Eigen::Index i = 0; i < p.size(); ++i) p(i) = rng.log_uniform(0.5, 5.0);
  return p;
}

Eigen::VectorXd sample_in_class(const Network& net, const Eigen::VectorXd& reference, Rng& rng,
                                std::size_t moves) {
  const Eigen::MatrixXd gamma = stoichiometry_matrix(net);
  Eigen::VectorXd x = reference;
  for (std::size_t m = 0; m < moves && gamma.cols() > 0; ++m) {
    Eigen::VectorXd g(gamma.cols());
    for (Eigen::Index j = 0; j < g.size(); ++j) g(j) = rng.normal();
    Eigen::VectorXd d = gamma * g;
    const double dn = inf_norm(d);
    if (dn == 0.0) continue;
    d /= dn;
    double lo = -5.0, hi = 5.0;
    for (Eigen::Index i = 0; i < x.size(); ++i) {
      if (d(i) < 0.0) hi = std::min(hi, x(i) / -d(i));
      if (d(i) > 0.0) lo = std::max(lo, -x(i) / d(i));
    }
    const double step = rng.uniform(0.98 * lo, 0.98 * hi);
    x += step * d;
    x = x.cwiseMax(0.0);
  }
  return x;
}

std::size_t default_threads() {
  if (const char* env = std::getenv("CRNCERT_THREADS")) {
    const long v = std::strtol(env, nullptr, 10);
    if (v > 0) return static_cast<std::size_t>(v);
  }
  return 1;
}

ValidationReport validate_certificate(const Network& net, const Certificate& cert,
                                      const ValidationOptions& opt) {
  const auto laws = conservation_laws(net);
  struct Job {
    std::size_t family_index, trial;
  };
  std::vector<Job> jobs;
  for (std::size_t f = 0; f < opt.families.size(); ++f)
    for (std::size_t t = 0; t < opt.trials; ++t) jobs.push_back({f, t});
  std::vector<std::vector<RunResult>> results(jobs.size());

  auto run_job = [&](std::size_t index) {
    const Job& job = jobs[index];
    const KineticsFamily family = opt.families[job.family_index];
    const std::uint64_t kin_seed =
        derive_seed(derive_seed(opt.seed, kKineticsStream + job.family_index), job.trial);
    const RateModel model(net, sample_kinetics(net, family, kin_seed));
    Rng rng(derive_seed(kin_seed, kInitialStream));
    for (std::size_t ic = 0; ic < opt.initial_conditions; ++ic) {
      const Eigen::VectorXd x0 = sample_in_class(net, sample_reference_point(net, rng), rng);
      Trajectory traj = integrate(model, x0, opt.integrate);
      if (opt.expect_convergence && traj.reason == Termination::Horizon &&
          opt.convergence_extension > 1.0 && inf_norm(model.velocity(traj.x.back())) >= 1e-6) {
        IntegrateOptions more = opt.integrate;
        more.horizon = opt.integrate.horizon * (opt.convergence_extension - 1.0);
        const Trajectory tail = integrate(model, traj.x.back(), more);
        const double offset = traj.t.back();
        for (std::size_t k = 1; k < tail.t.size(); ++k) {
          traj.t.push_back(offset + tail.t[k]);
          traj.x.push_back(tail.x[k]);
          traj.h.push_back(tail.h[k]);
        }
        traj.reason = tail.reason;
        traj.rejected += tail.rejected;
      }
      Violation tag;
      tag.family = family;
      tag.trial = job.trial;
      tag.initial_condition = ic;
      tag.seed = kin_seed;
      results[index].push_back(check_run(cert, model, traj, laws, opt, tag));
    }
  };

  const std::size_t threads = std::max<std::size_t>(1, opt.threads ? opt.threads : default_threads());
  if (threads == 1) {
    for (std::size_t i = 0; i < jobs.size(); ++i) run_job(i);
  } else {
    std::mutex m;
    std::size_t next = 0;
    std::vector<std::thread> pool;
    for (std::size_t w = 0; w < threads; ++w)
      pool.emplace_back([&] {
        for (;;) {
          std::size_t i;
          {
            std::lock_guard<std::mutex> lock(m);
            if (next >= jobs.size()) return;
            i = next++;
          }
          run_job(i);
        }
      });
    for (auto& th : pool) th.join();
  }

  ValidationReport rep;
  for (const auto& per_job : results)
    for (const auto& r : per_job) {
      ++rep.trajectories;
      rep.steps_checked += r.steps;
      rep.violation_count += r.violations.size();
      for (const auto& v : r.violations)
        if (rep.violations.size() < kMaxRecorded) rep.violations.push_back(v);
      rep.max_relative_increase = std::max(rep.max_relative_increase, r.max_increase);
      rep.max_conservation_drift = std::max(rep.max_conservation_drift, r.max_drift);
      rep.min_state = std::min(rep.min_state, r.min_state);
      rep.min_tail_state = std::min(rep.min_tail_state, r.min_tail);
      rep.dini_min = std::min(rep.dini_min, r.dini_min);
      rep.dini_max = std::max(rep.dini_max, r.dini_max);
      if (r.converged) ++rep.converged;
      if (r.slow) ++rep.slow;
    }
  return rep;
}

void write_trajectory_csv(const std::filesystem::path& path, const Network& net,
                          const Trajectory& traj) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot write " + path.string());
  out << "t";
  for (const auto& name : net.species_names()) out << ',' << name;
  out << '\n' << std::setprecision(12);
  for (std::size_t k = 0; k < traj.t.size(); ++k) {
    out << traj.t[k];
    for (Eigen::Index i = 0; i < traj.x[k].size(); ++i) out << ',' << traj.x[k](i);
    out << '\n';
  }
}

}  // namespace crncert
