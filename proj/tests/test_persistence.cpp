#include <doctest.h>

#include <filesystem>
#include <set>

#include "crncert/certificates.hpp"
#include "crncert/netio.hpp"
#include "crncert/persistence.hpp"

using namespace crncert;

namespace {

const std::filesystem::path corpus{CRNCERT_CORPUS_DIR};

Network net_of(const char* text) { return parse_network(text).network; }
Network corpus_net(const std::string& name) { return load_network(corpus / (name + ".crn")).network; }

using NameSet = std::set<std::string>;

NameSet names_of(const Network& n, const std::vector<std::size_t>& ids) {
  NameSet s;
  for (auto i : ids) s.insert(n.species_name(i));
  return s;
}

// Naive siphon test straight from the definition, on name sets.
bool naive_siphon(const Network& n, const NameSet& p) {
  if (p.empty()) return false;
  for (const auto& r : n.reactions()) {
    bool out = false, in = false;
    for (const auto& t : r.products) out = out || p.count(n.species_name(t.species));
    for (const auto& t : r.reactants) in = in || p.count(n.species_name(t.species));
    if (out && !in) return false;
  }
  return true;
}

std::set<NameSet> oracle_minimal_siphons(const Network& n) {
  const std::size_t k = n.num_species();
  std::vector<NameSet> all;
  for (std::uint32_t m = 1; m < (1u << k); ++m) {
    NameSet p;
    for (std::size_t i = 0; i < k; ++i)
      if (m >> i & 1) p.insert(n.species_name(i));
    if (naive_siphon(n, p)) all.push_back(p);
  }
  std::set<NameSet> minimal;
  for (const auto& a : all) {
    bool is_min = true;
    for (const auto& b : all)
      if (b.size() < a.size() && std::includes(a.begin(), a.end(), b.begin(), b.end())) is_min = false;
    if (is_min) minimal.insert(a);
  }
  return minimal;
}

std::set<NameSet> enumerated(const Network& n) {
  std::set<NameSet> s;
  for (const auto& m : enumerate_minimal_siphons(n).minimal) s.insert(names_of(n, m));
  return s;
}

}  // namespace

TEST_CASE("small siphon examples") {
  const Network sp = net_of("S <-> P\n");
  CHECK(enumerated(sp) == std::set<NameSet>{{"S", "P"}});

  const Network mk = corpus_net("mckeithan_1");
  CHECK(enumerated(mk) == std::set<NameSet>{{"R", "C0", "C1"}, {"L", "C0", "C1"}});
  const auto cls = classify_siphons(mk, enumerate_minimal_siphons(mk).minimal, conservation_laws(mk));
  for (const auto& s : cls) {
    CHECK(s.classification == SiphonClass::Trivial);
    REQUIRE(s.witness_law);
  }

  CHECK(enumerated(net_of("0 -> X\nX -> 0\n")).empty());
  CHECK_FALSE(is_siphon(net_of("0 -> X\nX -> 0\n"), {0}));
}

TEST_CASE("critical siphon witness") {
  const Network n = net_of("A + B -> 2 B\nB -> A\n");
  CHECK(enumerated(n) == std::set<NameSet>{{"B"}});
  const auto res = graphically_persistent(n);
  CHECK(res.verdict == Persistence::No);
  REQUIRE(res.witness);
  CHECK(names_of(n, *res.witness) == NameSet{"B"});
}

TEST_CASE("PTM cycle siphons are trivial") {
  const Network n = corpus_net("ptm_cycle");
  const auto res = graphically_persistent(n);
  CHECK(res.verdict == Persistence::Yes);
  CHECK(res.exhaustive_checked);
  std::set<NameSet> got;
  for (const auto& s : res.siphons) {
    CHECK(s.classification == SiphonClass::Trivial);
    got.insert(names_of(n, s.members));
  }
  CHECK(got == std::set<NameSet>{{"E", "C"}, {"F", "D"}, {"S", "C", "P", "D"}});
}

TEST_CASE("RFM and corpus verdicts") {
  CHECK(graphically_persistent(corpus_net("rfm_3")).verdict == Persistence::Yes);
  CHECK(graphically_persistent(corpus_net("bistable")).verdict == Persistence::No);
  CHECK(graphically_persistent(corpus_net("ptm_star_4")).verdict == Persistence::Yes);
}

TEST_CASE("species cap gives an incomplete verdict") {
  std::string text;
  for (int i = 0; i < 30; ++i) text += "X" + std::to_string(i) + " -> X" + std::to_string((i + 1) % 30) + "\n";
  const Network big = parse_network(text).network;
  const auto en = enumerate_minimal_siphons(big);
  CHECK_FALSE(en.complete);
  CHECK(graphically_persistent(big).verdict == Persistence::Incomplete);

  SiphonOptions tiny;
  tiny.node_budget = 2;
  CHECK_FALSE(enumerate_minimal_siphons(corpus_net("ptm_star_2"), tiny).complete);
}

TEST_CASE("optimized enumeration matches the exhaustive oracle on the corpus") {
  std::size_t checked = 0;
  for (const auto& entry : std::filesystem::directory_iterator(corpus)) {
    const Network n = load_network(entry.path()).network;
    if (n.num_species() > 16) continue;
    ++checked;
    const auto got = enumerated(n);
    CHECK_MESSAGE(got == oracle_minimal_siphons(n), entry.path().filename().string());
    for (const auto& s : enumerate_minimal_siphons(n).minimal) {
      CHECK(is_siphon(n, s));
      CHECK(naive_siphon(n, names_of(n, s)));
    }
  }
  CHECK(checked >= 15);
}

TEST_CASE("propagation paths") {
  const Network star = corpus_net("ptm_star_4");
  const auto soc = certify_soc(star);
  REQUIRE(soc);
  const auto res = persistence_verdict(star, {&*soc});
  CHECK(res.verdict == Persistence::Yes);
  CHECK(res.method == "theorem21_part1");

  const Network proc = corpus_net("processive");
  const auto mm = certify_maxmin(proc);
  REQUIRE(mm);
  CHECK(propagate_persistence(mm->trace, false, &*mm) == std::string("theorem21_part2"));

  const Network mk = corpus_net("mckeithan_2");
  const auto mks = certify_soc(mk);
  REQUIRE(mks);
  CHECK(propagate_persistence(mks->trace, true, nullptr) == std::string("theorem20"));

  ReductionTrace fb;
  fb.base = net_of("X <-> Y\n");
  fb.steps.push_back(TraceStep{mod::AddFeedbackSpecies{0, 1, "Z"}, {}, "", false, ""});
  CHECK_FALSE(propagate_persistence(fb, true, nullptr));
}

TEST_CASE("allowed modifications preserve the absence of critical siphons") {
  for (const char* name : {"ptm_cycle", "ptm_chain_2", "mckeithan_3", "rfm_4", "rfm_pool"}) {
    const Network n = corpus_net(name);
    const auto c = certify_soc(n);
    if (!c) continue;
    const bool base_ok = graphically_persistent(c->base()).verdict == Persistence::Yes;
    const bool covered = propagate_persistence(c->trace, base_ok, nullptr).has_value();
    if (base_ok && covered)
      CHECK_MESSAGE(graphically_persistent(n).verdict == Persistence::Yes, name);
  }
}
