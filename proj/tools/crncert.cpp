#include <CLI11.hpp>

#include <fstream>
#include <future>
#include <iostream>
#include <sstream>

#include "crncert/conclude.hpp"
#include "crncert/dynamics.hpp"
#include "crncert/netio.hpp"

using namespace crncert;

namespace {

constexpr int kParseError = 1;
constexpr int kBudget = 2;
constexpr int kNoReduction = 3;
constexpr int kInternal = 4;

struct Loaded {
  std::optional<NetworkDocument> doc;
  std::string error;
};

Loaded load(const std::string& path) {
  Loaded l;
  try {
    l.doc = load_network(path);
  } catch (const ParseError& e) {
    l.error = path + ":" + std::to_string(e.line()) + ":" + std::to_string(e.column()) +
              ": error: " + e.detail();
  } catch (const std::exception& e) {
    l.error = path + ": error: " + e.what();
  }
  return l;
}

void write_output(const std::string& text, const std::string& output) {
  if (output.empty()) {
    std::cout << text;
    return;
  }
  std::ofstream out(output);
  if (!out) throw std::runtime_error("cannot write " + output);
  out << text;
}

int cmd_analyze(const std::vector<std::string>& paths, const AnalysisOptions& opt,
                const std::string& format, const std::string& output) {
  std::vector<Loaded> docs;
  for (const auto& p : paths) docs.push_back(load(p));
  for (const auto& d : docs)
    if (!d.doc) {
      std::cerr << d.error << "\n";
      return kParseError;
    }

  std::vector<std::future<CertificationReport>> jobs;
  const std::size_t threads = default_threads();
  std::vector<CertificationReport> reports;
  for (std::size_t i = 0; i < docs.size(); ++i) {
    auto work = [&, i] {
      CertificationReport r = analyze(docs[i].doc->network, opt);
      r.warnings = docs[i].doc->warnings;
      return r;
    };
    if (threads > 1) jobs.push_back(std::async(std::launch::async, work));
    else reports.push_back(work());
  }
  for (auto& j : jobs) reports.push_back(j.get());

  bool budget = false;
  std::string text;
  if (format == "text") {
    for (std::size_t i = 0; i < reports.size(); ++i)
      text += (reports.size() > 1 ? paths[i] + "\n" : "") + report_text(reports[i]);
  } else if (reports.size() == 1) {
    text = emit_report(reports[0]);
  } else {
    nlohmann::ordered_json all = nlohmann::ordered_json::array();
    for (const auto& r : reports) all.push_back(report_json(r));
    text = all.dump(2) + "\n";
  }
  for (std::size_t i = 0; i < reports.size(); ++i) {
    budget = budget || reports[i].budget_exhausted;
    std::cerr << paths[i] << ": tier " << tier_name(reports[i].tier) << "\n";
    for (const auto& w : reports[i].warnings) std::cerr << paths[i] << ": warning: " << w << "\n";
  }
  write_output(text, output);
  return budget ? kBudget : 0;
}

int cmd_reduce(const std::string& path, const std::string& target, std::size_t budget) {
  auto l = load(path);
  if (!l.doc) {
    std::cerr << l.error << "\n";
    return kParseError;
  }
  ReduceStats stats;
  ReduceOptions ro;
  ro.node_budget = budget;
  ro.stats = &stats;
  const Target t = target == "maxmin" ? Target::MaxMinBase : Target::Linear;
  const auto trace = reduce(l.doc->network, t, ro);
  if (!trace) {
    std::cerr << path << ": no reduction to a " << target << " base found";
    if (stats.budget_exhausted) std::cerr << " (search budget of " << budget << " nodes exhausted)";
    std::cerr << "\n";
    return stats.budget_exhausted ? kBudget : kNoReduction;
  }
  std::cout << "base:\n" << serialize_network(trace->base);
  std::cout << "steps: " << trace->steps.size() << "\n";
  for (std::size_t i = 0; i < trace->steps.size(); ++i) {
    const auto& s = trace->steps[i];
    std::cout << "  " << i + 1 << ". " << kind_name(s.kind());
    for (const auto& [k, v] : s.params) std::cout << " " << k << "=" << v;
    std::cout << " [" << (s.licensed_by.empty() ? "unlicensed" : s.licensed_by) << "]\n";
  }
  return 0;
}

int cmd_simulate(const std::string& path, std::size_t trials, std::uint64_t seed,
                 const std::string& dump, const std::string& format, const std::string& output) {
  auto l = load(path);
  if (!l.doc) {
    std::cerr << l.error << "\n";
    return kParseError;
  }
  const Network& net = l.doc->network;
  auto cert = certify_soc(net);
  if (!cert) cert = certify_maxmin(net);
  const Certificate used = cert ? *cert : candidate_soc(net);

  ValidationOptions vo;
  vo.trials = trials;
  vo.seed = seed;
  vo.check_persistence = cert && graphically_persistent(net).verdict == Persistence::Yes &&
                         is_conservative(net).conservative;
  const ValidationReport rep = validate_certificate(net, used, vo);

  if (!dump.empty()) {
    const RateModel model(net, sample_kinetics(net, KineticsFamily::MassAction, seed));
    Rng rng(derive_seed(seed, 0x64756d70));
    const auto x0 = sample_in_class(net, sample_reference_point(net, rng), rng);
    write_trajectory_csv(dump, net, integrate(model, x0));
  }

  if (format == "text") {
    std::ostringstream s;
    s << "function: " << family_name(used.family) << (cert ? "" : " (candidate, not certified)") << "\n";
    s << "trajectories: " << rep.trajectories << "\n";
    s << "violations: " << rep.violation_count << "\n";
    s << "max relative increase of V: " << rep.max_relative_increase << "\n";
    s << "max conservation drift: " << rep.max_conservation_drift << "\n";
    write_output(s.str(), output);
  } else {
    nlohmann::ordered_json j;
    j["schema"] = 1;
    j["seed"] = seed;
    j["function"] = family_name(used.family);
    j["certified"] = cert.has_value();
    j["validation"] = validation_json(rep);
    write_output(j.dump(2) + "\n", output);
  }
  std::cerr << path << ": " << rep.violation_count << " violations in " << rep.trajectories
            << " trajectories\n";
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Robust Lyapunov certification of reaction networks"};
  app.require_subcommand(1);

  std::vector<std::string> paths;
  std::string path, format = "json", output, target = "linear", dump;
  std::uint64_t seed = 0;
  std::size_t trials = 100, siphon_cap = 24, budget = 20000;
  double minor_cap = 2e6;

  auto* analyze_cmd = app.add_subcommand("analyze", "Certify one or more .crn files");
  analyze_cmd->add_option("paths", paths, "Network files")->required()->check(CLI::ExistingFile);
  analyze_cmd->add_option("--seed", seed, "Random seed");
  analyze_cmd->add_option("--siphon-cap", siphon_cap, "Largest network for siphon enumeration")
      ->check(CLI::PositiveNumber);
  analyze_cmd->add_option("--minor-cap", minor_cap, "Largest Cauchy-Binet expansion (minor pairs)")
      ->check(CLI::PositiveNumber);
  analyze_cmd->add_option("--format", format, "json or text")->check(CLI::IsMember({"json", "text"}));
  analyze_cmd->add_option("--output", output, "Write the report here instead of stdout");

  auto* reduce_cmd = app.add_subcommand("reduce", "Peel modifications down to a base network");
  reduce_cmd->add_option("path", path, "Network file")->required()->check(CLI::ExistingFile);
  reduce_cmd->add_option("--target", target, "linear or maxmin")
      ->check(CLI::IsMember({"linear", "maxmin"}));
  reduce_cmd->add_option("--budget", budget, "Search nodes")->check(CLI::PositiveNumber);

  auto* sim_cmd = app.add_subcommand("simulate", "Validate the certificate on sampled kinetics");
  sim_cmd->add_option("path", path, "Network file")->required()->check(CLI::ExistingFile);
  sim_cmd->add_option("--trials", trials, "Kinetics samples per family")->check(CLI::PositiveNumber);
  sim_cmd->add_option("--seed", seed, "Random seed");
  sim_cmd->add_option("--dump-traj", dump, "Write one mass-action trajectory as CSV");
  sim_cmd->add_option("--format", format, "json or text")->check(CLI::IsMember({"json", "text"}));
  sim_cmd->add_option("--output", output, "Write the report here instead of stdout");

  CLI11_PARSE(app, argc, argv);

  try {
    if (analyze_cmd->parsed()) {
      AnalysisOptions opt;
      opt.seed = seed;
      opt.siphons.species_cap = siphon_cap;
      opt.nondegen.minor_cap = minor_cap;
      return cmd_analyze(paths, opt, format, output);
    }
    if (reduce_cmd->parsed()) return cmd_reduce(path, target, budget);
    return cmd_simulate(path, trials, seed, dump, format, output);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kInternal;
  }
}
