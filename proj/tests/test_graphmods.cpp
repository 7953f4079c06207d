#include <doctest.h>

#include <filesystem>
#include <random>

#include "crncert/graphmods.hpp"
#include "crncert/isomorphism.hpp"
#include "crncert/netio.hpp"
#include "crncert/structure.hpp"
#include "random_networks.hpp"

using namespace crncert;

namespace {

const std::filesystem::path corpus{CRNCERT_CORPUS_DIR};

Network net_of(const char* text) { return parse_network(text).network; }
Network corpus_net(const char* name) { return load_network(corpus / name).network; }

std::size_t count_kind(const ReductionTrace& t, ModKind k) {
  std::size_t c = 0;
  for (const auto& s : t.steps) c += s.kind() == k;
  return c;
}

}  // namespace

TEST_CASE("Michaelis-Menten built step by step") {
  auto n0 = net_of("S -> P");
  auto n1 = apply_modification(n0, mod::AddIntermediate{0, "C"});
  CHECK(same_content(n1, net_of("S -> C\nC -> P")));
  auto n2 = apply_modification(n1, mod::Reversal{0});
  CHECK(same_content(n2, net_of("S <-> C\nC -> P")));
  CHECK(n2.reaction(2).reverse_of == std::optional<std::size_t>(0));
  // The enzyme mirrors the complex: consumed where C is formed.
  auto n3 = apply_modification(n2, mod::AddCatalyst{*n2.find_species("C"), "E"});
  CHECK(same_content(n3, net_of("S + E <-> C\nC -> P + E")));
  CHECK(same_content(apply_enzymatic(n0, 0, "E", "C"), n3));
}

TEST_CASE("adding a dimer to the proofreading base") {
  auto base = net_of("RL <-> C0\nC0 -> C1\nC1 -> RL");
  auto d = apply_modification(base, mod::AddDimer{0, "L"});
  CHECK(same_content(d, net_of("RL + L <-> C0\nC0 -> C1\nC1 -> RL + L")));
  CHECK(isomorphic(d, corpus_net("mckeithan_1.crn")));
}

TEST_CASE("regulation and feedback modifications") {
  auto n = net_of("A -> B");
  auto e = apply_modification(n, mod::ExternalRegulation{1});
  CHECK(same_content(e, net_of("A -> B\nB <-> 0")));
  CHECK(e.reaction(1).reverse_of == std::optional<std::size_t>(2));
  auto c = apply_modification(n, mod::ConservedRegulation{0, "A2"});
  CHECK(same_content(c, net_of("A -> B\nA <-> A2")));
  auto f = apply_modification(net_of("A -> B\nB -> A"), mod::AddFeedbackSpecies{0, 1, "X"});
  CHECK(same_content(f, net_of("A -> B + X\nB + X -> A")));
}

TEST_CASE("enzymatic composite on a star edge and on both directions") {
  auto star = net_of("S -> P1");
  CHECK(same_content(apply_enzymatic(star, 0, "E1", "C1"), net_of("S + E1 <-> C1\nC1 -> P1 + E1")));
  auto sp = net_of("S -> P\nP -> S");
  auto cycle = apply_enzymatic(apply_enzymatic(sp, 0, "E", "C"), 1, "F", "D");
  CHECK(isomorphic(cycle, corpus_net("ptm_cycle.crn")));
}

TEST_CASE("processive composite") {
  auto n = net_of("S0 -> S1");
  auto p = apply_processive(n, 0, "E1", std::vector<std::string>{"C11", "C12", "C13"});
  CHECK(same_content(p, net_of("S0 + E1 <-> C11\nC11 <-> C12\nC12 <-> C13\nC13 -> S1 + E1")));
  auto q = apply_processive(n, 0, "E", 2);
  CHECK(same_content(q, net_of("S0 + E <-> E_C0\nE_C0 <-> E_C1\nE_C1 <-> E_C2\nE_C2 -> S1 + E")));
  CHECK_THROWS_AS(apply_processive(n, 0, "E", 0), ModificationError);
  auto cycle = net_of("S0 -> S1\nS1 -> S2\nS2 -> S0");
  for (std::size_t j = 0; j < 3; ++j) {
    const std::string k = std::to_string(j + 1);
    cycle = apply_processive(cycle, j, "E" + k, std::vector<std::string>{"C" + k + "1", "C" + k + "2"});
  }
  CHECK(isomorphic(cycle, corpus_net("processive.crn")));
}

TEST_CASE("invalid modifications are rejected") {
  auto n = net_of("A -> B\nB -> 0");
  CHECK_THROWS_AS(apply_modification(n, mod::Reversal{5}), ModificationError);
  CHECK_THROWS_AS(apply_modification(n, mod::AddCatalyst{9, "E"}), ModificationError);
  CHECK_THROWS_AS(apply_modification(n, mod::AddCatalyst{0, "B"}), ModificationError);
  CHECK_THROWS_AS(apply_modification(n, mod::AddDimer{0, ""}), ModificationError);
  CHECK_THROWS_AS(apply_modification(n, mod::AddDimer{0, "2x"}), ModificationError);
  CHECK_THROWS_AS(apply_modification(n, mod::AddIntermediate{1, "X"}), ModificationError);
  CHECK_THROWS_AS(apply_modification(n, mod::AddFeedbackSpecies{0, 0, "X"}), ModificationError);
}

TEST_CASE("reversal of an already reversible reaction appends an unlinked copy") {
  auto n = net_of("A <-> B");
  auto r = apply_modification(n, mod::Reversal{0});
  CHECK(r.num_reactions() == 3);
  CHECK_FALSE(r.reaction(2).reverse_of);
  CHECK(r.reaction(0).reverse_of == std::optional<std::size_t>(1));
}

TEST_CASE("catalyst and dimer rows, rank behaviour") {
  std::mt19937_64 rng(7);
  for (int t = 0; t < 40; ++t) {
    auto c = testing::random_round_trip_case(rng, 2);
    const auto& n = c.modified;
    for (std::size_t i = 0; i < n.num_species(); ++i) {
      auto cat = apply_modification(n, mod::AddCatalyst{i, "Zc"});
      auto dim = apply_modification(n, mod::AddDimer{i, "Zd"});
      const std::size_t x = n.num_species();
      for (std::size_t j = 0; j < n.num_reactions(); ++j) {
        CHECK(cat.gamma()(x, j) == -n.gamma()(i, j));
        CHECK(dim.gamma()(x, j) == n.gamma()(i, j));
        CHECK(cat.reactant_coeff(x, j) == n.product_coeff(i, j));
        CHECK(cat.product_coeff(x, j) == n.reactant_coeff(i, j));
        CHECK(dim.reactant_coeff(x, j) == n.reactant_coeff(i, j));
        CHECK(dim.product_coeff(x, j) == n.product_coeff(i, j));
      }
      CHECK(rank(cat) == rank(n));
      CHECK(rank(dim) == rank(n));
    }
    const std::size_t r0 = rank(n);
    for (std::size_t j = 0; j < n.num_reactions(); ++j) {
      CHECK(rank(apply_modification(n, mod::Reversal{j})) == r0);
      if (n.reaction(j).products.empty()) continue;
      const std::size_t r1 = rank(apply_modification(n, mod::AddIntermediate{j, "Zi"}));
      CHECK((r1 == r0 || r1 == r0 + 1));
    }
  }
}

TEST_CASE("peel recovers the network before each modification kind") {
  std::mt19937_64 rng(11);
  for (int t = 0; t < 30; ++t) {
    auto base = testing::random_linear_base(rng);
    for (int kind = 0; kind < 7; ++kind) {
      const std::size_t j = testing::draw(rng, 0, base.num_reactions() - 1);
      const std::size_t k = (j + 1) % base.num_reactions();
      const std::size_t i = testing::draw(rng, 0, base.num_species() - 1);
      Modification m;
      switch (kind) {
        case 0: m = mod::Reversal{j}; break;
        case 1: m = mod::AddIntermediate{j, "Q"}; break;
        case 2: m = mod::ExternalRegulation{i}; break;
        case 3: m = mod::ConservedRegulation{i, "Q"}; break;
        case 4: m = mod::AddFeedbackSpecies{j, k, "Q"}; break;
        case 5: m = mod::AddCatalyst{i, "Q"}; break;
        default: m = mod::AddDimer{i, "Q"}; break;
      }
      Network mod_net;
      try {
        mod_net = apply_modification(base, m);
      } catch (const ModificationError&) {
        continue;
      }
      CAPTURE(serialize_network(base));
      CAPTURE(kind);
      auto trace = testing::recover_base(mod_net, base);
      REQUIRE(trace);
      CHECK(isomorphic(trace->base, base));
      CHECK(isomorphic(replay(*trace), mod_net));
    }
  }
}

TEST_CASE("random modification sequences are undone") {
  std::mt19937_64 rng(2024);
  for (int t = 0; t < 20; ++t) {
    auto c = testing::random_round_trip_case(rng);
    CAPTURE(serialize_network(c.base));
    CAPTURE(serialize_network(c.modified));
    auto trace = testing::recover_base(c.modified, c.base);
    REQUIRE(trace);
    CHECK(isomorphic(trace->base, c.base));
  }
}

TEST_CASE("PTM star reduces to the linear star by enzymatic peels") {
  auto trace = reduce(corpus_net("ptm_star_3.crn"), Target::Linear);
  REQUIRE(trace);
  CHECK(trace->steps.size() == 6);
  CHECK(count_kind(*trace, ModKind::Enzymatic) == 6);
  CHECK(isomorphic(trace->base, corpus_net("linear_star_3.crn")));
  for (const auto& s : trace->steps) CHECK(s.licensed_by == "soc_enzymatic");
  CHECK(isomorphic(replay(*trace), corpus_net("ptm_star_3.crn")));
  CHECK(isomorphic(trace->final_network, corpus_net("ptm_star_3.crn")));
}

TEST_CASE("proofreading network is a dimer modification of a linear network") {
  auto trace = reduce(corpus_net("mckeithan_2.crn"), Target::Linear);
  REQUIRE(trace);
  REQUIRE(trace->steps.size() == 1);
  CHECK(trace->steps[0].kind() == ModKind::Dimer);
  CHECK(trace->steps[0].licensed_by == "soc_catalyst_dimer");
  CHECK(isomorphic(trace->base, net_of("X <-> C0\nC0 -> C1\nC1 -> C2\nC1 -> X\nC2 -> X")));
}

TEST_CASE("ribosome flow model peels three catalysts") {
  auto trace = reduce(corpus_net("rfm_3.crn"), Target::Linear);
  REQUIRE(trace);
  CHECK(trace->steps.size() == 3);
  CHECK(count_kind(*trace, ModKind::Catalyst) == 3);
  CHECK(isomorphic(trace->base, net_of("0 -> X1\nX1 -> X2\nX2 -> X3\nX3 -> 0")));
  std::set<std::string> added, targets;
  for (const auto& s : trace->steps) {
    added.insert(std::get<mod::AddCatalyst>(s.mod).catalyst);
    targets.insert(s.target_species);
  }
  CHECK(added == std::set<std::string>{"Y1", "Y2", "Y3"});
  CHECK(targets == std::set<std::string>{"X1", "X2", "X3"});
}

TEST_CASE("pooled ribosome flow model reduces to a cycle") {
  auto trace = reduce(corpus_net("rfm_pool.crn"), Target::Linear);
  REQUIRE(trace);
  CHECK(isomorphic(trace->base, net_of("Z -> X1\nX1 -> X2\nX2 -> X3\nX3 -> Z")));
}

TEST_CASE("processive cycle reduces under max-min priorities") {
  auto trace = reduce(corpus_net("processive.crn"), Target::MaxMinBase);
  REQUIRE(trace);
  CHECK(trace->steps.size() == 3);
  CHECK(count_kind(*trace, ModKind::Processive) == 3);
  CHECK(isomorphic(trace->base, net_of("S0 -> S1\nS1 -> S2\nS2 -> S0")));
  for (const auto& s : trace->steps) CHECK(s.licensed_by == "maxmin_processive");
}

TEST_CASE("reductions replay and are deterministic across the corpus") {
  for (const auto& entry : std::filesystem::directory_iterator(corpus)) {
    CAPTURE(entry.path().filename().string());
    auto n = load_network(entry.path()).network;
    for (auto target : {Target::Linear, Target::MaxMinBase}) {
      auto a = reduce(n, target);
      auto b = reduce(n, target);
      REQUIRE(a.has_value() == b.has_value());
      if (!a) continue;
      CHECK(isomorphic(replay(*a), n));
      CHECK(serialize_network(a->base) == serialize_network(b->base));
      REQUIRE(a->steps.size() == b->steps.size());
      for (std::size_t s = 0; s < a->steps.size(); ++s) CHECK(a->steps[s].params == b->steps[s].params);
    }
  }
}

TEST_CASE("licenses per family") {
  CHECK(license_for(ModKind::FeedbackSpecies, Target::Linear, false).empty());
  CHECK(license_for(ModKind::FeedbackSpecies, Target::MaxMinBase, false) == "maxmin_rewrite");
  CHECK(license_for(ModKind::Reversal, Target::MaxMinBase, false).empty());
  CHECK(license_for(ModKind::Reversal, Target::MaxMinBase, true) == "maxmin_reversal");
  CHECK(license_for(ModKind::ExternalRegulation, Target::MaxMinBase, true).empty());
  CHECK(license_for(ModKind::Dimer, Target::Linear, false) == "soc_catalyst_dimer");
}
