#include <doctest.h>

#include <filesystem>

#include "crncert/conclude.hpp"
#include "crncert/netio.hpp"

using namespace crncert;

namespace {

const std::filesystem::path corpus{CRNCERT_CORPUS_DIR};

Network net_of(const char* text) { return parse_network(text).network; }
Network corpus_net(const std::string& name) { return load_network(corpus / (name + ".crn")).network; }

int rank_of(Tier t) {
  switch (t) {
    case Tier::None: return 0;
    case Tier::StableOnly: return 1;
    case Tier::Conditional: return 2;
    case Tier::Star: return 3;
  }
  return -1;
}

}  // namespace

TEST_CASE("tiers of small networks") {
  const auto sp = analyze(net_of("S <-> P\n"));
  CHECK(sp.tier == Tier::Star);
  CHECK(report_json(sp)["tier"] == "star");
  CHECK(analyze(corpus_net("disconnected")).tier == Tier::None);
  CHECK(analyze(corpus_net("bistable")).tier == Tier::None);
  const auto deg = analyze(corpus_net("degenerate"));
  CHECK(deg.tier == Tier::None);
  CHECK(deg.nondegeneracy.verdict == Nondegeneracy::Degenerate);
}

TEST_CASE("tiers of paper networks") {
  for (const char* name : {"ptm_star_3", "mckeithan_4", "rfm_3", "processive", "rfm_pool"}) {
    const auto rep = analyze(corpus_net(name));
    CHECK_MESSAGE(rep.tier == Tier::Star, name);
  }
  const auto open = analyze(corpus_net("ptm_star_open"));
  CHECK(open.tier == Tier::Conditional);
  CHECK_FALSE(open.conservativity.conservative);
  const auto rfm = report_json(analyze(corpus_net("rfm_3")));
  CHECK(rfm["certificate"]["family"] == "SoC");
  CHECK(rfm["conservativity"]["conservative"] == true);
}

TEST_CASE("incomplete persistence gives stable_only") {
  AnalysisOptions opt;
  opt.siphons.species_cap = 1;
  const Network chain = net_of("0 -> A\nA -> B\nB -> 0\n");
  const auto rep = analyze(chain, opt);
  CHECK(rep.persistence.verdict == Persistence::Incomplete);
  CHECK(rep.nondegeneracy.verdict == Nondegeneracy::RobustlyNondegenerate);
  CHECK(rep.tier == Tier::StableOnly);
  CHECK(rep.budget_exhausted);
  CHECK(analyze(chain).tier == Tier::Conditional);

  TierInputs in{true, true, true, true, false, true};
  CHECK(decide_tier(in) == Tier::StableOnly);
}

TEST_CASE("LaSalle check") {
  const Network mk = corpus_net("mckeithan_2");
  const auto soc = certify_soc(mk);
  REQUIRE(soc);
  CHECK(lasalle_check(mk, *soc));
  const Network proc = corpus_net("processive");
  const auto mm = certify_maxmin(proc);
  REQUIRE(mm);
  CHECK(lasalle_check(proc, *mm));

  const Network split = net_of("0 -> A\nA -> 0\n0 -> B\nB -> 0\n");
  Certificate fake;
  fake.family = Family::MaxMin;
  fake.network = split;
  CHECK_FALSE(lasalle_check(split, fake));
}

TEST_CASE("tier is monotone in every verdict") {
  for (unsigned m = 0; m < 32; ++m) {
    const auto make = [](unsigned bits) {
      return TierInputs{true, bool(bits & 1), bool(bits & 2), bool(bits & 4), bool(bits & 8), bool(bits & 16)};
    };
    const Tier t = decide_tier(make(m));
    for (unsigned b = 0; b < 5; ++b) {
      const Tier up = decide_tier(make(m | (1u << b)));
      CHECK(rank_of(up) >= rank_of(t));
    }
    const TierInputs in = make(m);
    if (t == Tier::Star)
      CHECK((in.certificate && in.lasalle && in.nondegenerate && in.persistent && in.conservative));
    TierInputs failing = in;
    failing.assumptions = false;
    CHECK(decide_tier(failing) == Tier::None);
  }
}

TEST_CASE("report contents") {
  const auto rep = analyze(corpus_net("mckeithan_1"));
  const auto j = report_json(rep);
  CHECK(j["schema"] == 1);
  CHECK(j.begin().key() == "schema");
  CHECK(j["nondegeneracy"]["verdict"] == "robustly_nondegenerate");
  CHECK(j["persistence"]["verdict"] == "yes");
  CHECK(j["persistence"]["siphons"].size() == 2);
  for (const auto& s : j["persistence"]["siphons"]) {
    CHECK(s["classification"] == "trivial");
    CHECK_FALSE(s["witness_law"].is_null());
  }
  CHECK(j["certificate"]["trace"].size() >= 1);
  for (const auto& step : j["certificate"]["trace"]) {
    CHECK(step.contains("kind"));
    CHECK(step.contains("params"));
    CHECK(step.contains("licensed_by"));
  }
  CHECK(j["lasalle"] == true);
  CHECK_FALSE(rep.explanations.empty());
}

TEST_CASE("reports are deterministic") {
  const Network n = corpus_net("ptm_cycle");
  AnalysisOptions a;
  a.seed = 12345;
  CHECK(emit_report(analyze(n, a)) == emit_report(analyze(n, a)));
  AnalysisOptions b;
  b.seed = 6;
  CHECK(emit_report(analyze(n, a)) != emit_report(analyze(n, b)));
}
