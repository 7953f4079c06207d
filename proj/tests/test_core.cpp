#include <doctest.h>

#include <filesystem>

#include "crncert/netio.hpp"
#include "crncert/structure.hpp"

using namespace crncert;

namespace {

Network net_of(const char* text) { return parse_network(text).network; }

std::vector<long> as_long(const std::vector<Integer>& v) {
  std::vector<long> out;
  for (const auto& z : v) out.push_back(z.get_si());
  return out;
}

// Independent extremality test: d >= 0, d^T Gamma = 0, and the left kernel of
// Gamma restricted to supp(d) is one-dimensional.
bool is_extreme_law(const Network& net, const std::vector<Integer>& d) {
  const auto& g = net.gamma();
  for (std::size_t j = 0; j < g.cols(); ++j) {
    Integer s = 0;
    for (std::size_t i = 0; i < g.rows(); ++i) s += d[i] * Integer(static_cast<long>(g(i, j)));
    if (s != 0) return false;
  }
  std::vector<std::size_t> supp;
  for (std::size_t i = 0; i < d.size(); ++i) {
    if (d[i] < 0) return false;
    if (d[i] > 0) supp.push_back(i);
  }
  if (supp.empty()) return false;
  IntMatrix sub(supp.size(), g.cols());
  for (std::size_t a = 0; a < supp.size(); ++a)
    for (std::size_t j = 0; j < g.cols(); ++j) sub(a, j) = g(supp[a], j);
  return supp.size() - exact_rank(sub) == 1;
}

std::vector<std::filesystem::path> corpus_files() {
  std::vector<std::filesystem::path> files;
  for (const auto& e : std::filesystem::directory_iterator(CRNCERT_CORPUS_DIR))
    if (e.path().extension() == ".crn") files.push_back(e.path());
  std::sort(files.begin(), files.end());
  return files;
}

}  // namespace

TEST_CASE("stoichiometry of a reversible pair") {
  const auto net = net_of("S <-> P\n");
  REQUIRE(net.num_reactions() == 2);
  const auto& g = stoichiometry(net);
  CHECK(g(0, 0) == -1);
  CHECK(g(0, 1) == 1);
  CHECK(g(1, 0) == 1);
  CHECK(g(1, 1) == -1);
  CHECK(net.reaction(0).reverse_of == 1u);
  CHECK(net.reaction(1).reverse_of == 0u);
}

TEST_CASE("PTM star with one arm has six species and six reactions") {
  const auto net = net_of("S + E <-> C\nC -> P + E\nP + F <-> D\nD -> S + F\n");
  CHECK(net.num_species() == 6);
  CHECK(net.num_reactions() == 6);
}

TEST_CASE("catalytic reaction column cancels") {
  const auto net = net_of("X + Y -> X\n");
  CHECK(net.gamma()(0, 0) == 0);
  CHECK(net.gamma()(1, 0) == -1);
  const auto a = check_assumptions(net);
  CHECK_FALSE(a.as2);
  REQUIRE(a.catalytic_reactions.size() == 1);
  CHECK(a.catalytic_reactions[0] == 0);
}

TEST_CASE("malformed networks are rejected") {
  CHECK_THROWS_AS(Network({"A", "A"}, {}), NetworkError);
  CHECK_THROWS_AS(Network({"A"}, {Reaction{{}, {}, std::nullopt}}), NetworkError);
  CHECK_THROWS_AS(Network({"A"}, {Reaction{{{3, 1}}, {}, std::nullopt}}), NetworkError);
  CHECK_THROWS_AS(Network({"A", "B"}, {Reaction{{{0, 1}}, {{1, 1}}, 0}}), NetworkError);
  // Linked reverses must mirror each other.
  CHECK_THROWS_AS(Network({"A", "B"}, {Reaction{{{0, 1}}, {{1, 1}}, 1},
                                       Reaction{{{0, 1}}, {{1, 1}}, 0}}),
                  NetworkError);
}

TEST_CASE("Petri net incidence reproduces Gamma") {
  for (const auto& f : corpus_files()) {
    CAPTURE(f.filename().string());
    const auto net = load_network(f).network;
    CHECK(petri_net(net).incidence() == net.gamma());
  }
}

TEST_CASE("conservation laws of small networks") {
  SUBCASE("S <-> P") {
    const auto laws = conservation_laws(net_of("S <-> P\n"));
    REQUIRE(laws.size() == 1);
    CHECK(as_long(laws[0].d) == std::vector<long>{1, 1});
  }
  SUBCASE("McKeithan n=1") {
    const auto net = net_of("R + L <-> C0\nC0 -> C1\nC1 -> R + L\n");
    const auto laws = conservation_laws(net);
    REQUIRE(laws.size() == 2);
    CHECK(as_long(laws[0].d) == std::vector<long>{1, 0, 1, 1});
    CHECK(as_long(laws[1].d) == std::vector<long>{0, 1, 1, 1});
    CHECK(laws[0].support == std::vector<std::size_t>{0, 2, 3});
  }
  SUBCASE("inflow/outflow has no law") {
    CHECK(conservation_laws(net_of("0 -> X\nX -> 0\n")).empty());
  }
}

TEST_CASE("every corpus law is an extreme ray and conservativity matches supports") {
  for (const auto& f : corpus_files()) {
    CAPTURE(f.filename().string());
    const auto net = load_network(f).network;
    const auto laws = conservation_laws(net);
    std::vector<bool> covered(net.num_species(), false);
    for (const auto& l : laws) {
      CHECK(is_extreme_law(net, l.d));
      for (auto i : l.support) covered[i] = true;
    }
    const bool all = net.num_species() > 0 &&
                     std::all_of(covered.begin(), covered.end(), [](bool b) { return b; });
    const auto c = is_conservative(net, laws);
    CHECK(c.conservative == all);
    if (c.witness) CHECK(is_extreme_law(net, c.witness->d) == (laws.size() == 1));
  }
}

TEST_CASE("conservativity") {
  auto c = is_conservative(net_of("S <-> P\n"));
  CHECK(c.conservative);
  REQUIRE(c.witness);
  CHECK(as_long(c.witness->d) == std::vector<long>{1, 1});

  CHECK_FALSE(is_conservative(net_of("0 -> X1\nX1 -> X2\nX2 -> 0\n")).conservative);

  const auto star2 = net_of(
      "S + E1 <-> C1\nC1 -> P1 + E1\nP1 + F1 <-> D1\nD1 -> S + F1\n"
      "S + E2 <-> C2\nC2 -> P2 + E2\nP2 + F2 <-> D2\nD2 -> S + F2\n");
  c = is_conservative(star2);
  CHECK(c.conservative);
  // Oracle: witness is strictly positive and annihilates Gamma.
  REQUIRE(c.witness);
  for (const auto& x : c.witness->d) CHECK(x > 0);
  CHECK(is_extreme_law(star2, c.witness->d) == false);
}

TEST_CASE("positive flux") {
  auto f = positive_flux(net_of("S0 -> S1\nS1 -> S2\nS2 -> S0\n"));
  REQUIRE(f.positive);
  CHECK(as_long(f.positive->v) == std::vector<long>{1, 1, 1});
  CHECK(f.unique);

  CHECK_FALSE(positive_flux(net_of("X1 -> X2\n")).positive);

  f = positive_flux(net_of("S <-> P\n"));
  REQUIRE(f.positive);
  CHECK(as_long(f.positive->v) == std::vector<long>{1, 1});
  CHECK(f.unique);

  // Two independent cycles: positive but not unique.
  f = positive_flux(net_of("A <-> B\nC <-> D\n"));
  CHECK(f.positive);
  CHECK_FALSE(f.unique);
}

TEST_CASE("assumptions") {
  const auto a = check_assumptions(
      net_of("R + L <-> C0\nC0 -> C1\nC1 -> C2\nC1 -> R + L\nC2 -> R + L\n"));
  CHECK(a.as1);
  CHECK(a.as2);
  const auto e = check_assumptions(Network());
  CHECK_FALSE(e.as1);
  CHECK(e.degenerate);
}

TEST_CASE("linearity") {
  CHECK(is_linear(net_of("S <-> P1\nS <-> P2\nS <-> P3\n")));
  CHECK_FALSE(is_linear(net_of("S + E <-> C\n")));
  CHECK(is_linear(net_of("0 -> X\n")));
  CHECK_FALSE(is_linear(net_of("2 A -> B\n")));
}

TEST_CASE("ancestor pairs") {
  CHECK(ancestor_pairs(net_of("S0 -> S1\nS1 -> S0\n")));
  CHECK_FALSE(ancestor_pairs(net_of("A -> B\nC -> D\n")));
  CHECK(ancestor_pairs(net_of("R + L <-> C0\nC0 -> C1\nC1 -> R + L\n")));
  // Common ancestor without mutual reachability: X -> A and X -> B.
  CHECK(ancestor_pairs(net_of("X -> A + B\nA -> 0\nB -> 0\n")));
}

TEST_CASE("exact and floating-point ranks agree on the corpus") {
  for (const auto& f : corpus_files()) {
    CAPTURE(f.filename().string());
    const auto net = load_network(f).network;
    CHECK(rank(net) == numeric_rank(net.gamma()));
  }
}

TEST_CASE("exact kernel and determinant helpers") {
  IntMatrix m(2, 3);
  m(0, 0) = 1; m(0, 1) = 2; m(0, 2) = 3;
  m(1, 0) = 2; m(1, 1) = 4; m(1, 2) = 6;
  CHECK(exact_rank(m) == 1);
  const auto k = right_kernel_basis(to_rational(m));
  CHECK(k.rows() == 2);
  for (std::size_t r = 0; r < k.rows(); ++r) {
    Rational s = 0;
    for (std::size_t j = 0; j < 3; ++j) s += k(r, j) * Rational(static_cast<long>(m(0, j)));
    CHECK(s == 0);
  }
  IntMatrix a(3, 3);
  a(0, 0) = 0; a(0, 1) = 2; a(0, 2) = 1;
  a(1, 0) = 3; a(1, 1) = 1; a(1, 2) = 0;
  a(2, 0) = 1; a(2, 1) = 1; a(2, 2) = 1;
  const std::vector<std::size_t> all{0, 1, 2};
  // Cofactor expansion by hand: 0*(1) - 2*(3) + 1*(3-1) = -4.
  CHECK(sub_determinant(a, all, all) == -4);
  std::vector<Rational> q{Rational(1, 2), Rational(-3, 4)};
  CHECK(as_long(to_coprime_integers(q)) == std::vector<long>{2, -3});
}
