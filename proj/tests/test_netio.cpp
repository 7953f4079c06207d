#include <doctest.h>

#include <filesystem>
#include <fstream>
#include <sstream>

#include "crncert/isomorphism.hpp"
#include "crncert/netio.hpp"

using namespace crncert;

namespace {

const std::filesystem::path corpus{CRNCERT_CORPUS_DIR};

std::string read_file(const std::filesystem::path& p) {
  std::ifstream in(p);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

ParseError parse_failure(const char* text) {
  try {
    parse_network(text);
  } catch (const ParseError& e) {
    return e;
  }
  FAIL("expected a parse error for: " << text);
  return ParseError(0, 0, "");
}

}  // namespace

TEST_CASE("enzymatic step parses to four species and three reactions") {
  auto doc = parse_network("S + E <-> C\nC -> P + E");
  const auto& n = doc.network;
  CHECK(n.num_species() == 4);
  CHECK(n.num_reactions() == 3);
  CHECK(n.reaction(0).reverse_of == std::optional<std::size_t>(1));
  CHECK(n.reaction(1).reverse_of == std::optional<std::size_t>(0));
  CHECK_FALSE(n.reaction(2).reverse_of);
  CHECK(doc.reaction_line == std::vector<std::size_t>{1, 1, 2});
  CHECK(doc.warnings.empty());
}

TEST_CASE("empty side and external regulation pair") {
  auto n = parse_network("0 -> X\nX -> 0").network;
  CHECK(n.num_species() == 1);
  CHECK(n.reaction(0).reactants.empty());
  CHECK(n.reaction(1).products.empty());
}

TEST_CASE("coefficients enter the stoichiometric column") {
  auto n = parse_network("2 A -> B").network;
  CHECK(n.gamma()(0, 0) == -2);
  CHECK(n.gamma()(1, 0) == 1);
}

TEST_CASE("comments, blank lines and species declared on first use") {
  auto doc = parse_network("# header\n\n  A -> B   # trailing\nB -> C\n");
  CHECK(doc.network.species_names() == std::vector<std::string>{"A", "B", "C"});
  CHECK(doc.reaction_line == std::vector<std::size_t>{3, 4});
}

TEST_CASE("names with trailing sign and prime suffixes") {
  auto n = parse_network("X1+ + Y' -> X1- + Z_2\n").network;
  CHECK(n.species_names() == std::vector<std::string>{"X1+", "Y'", "X1-", "Z_2"});
  auto m = parse_network("A+B -> C").network;
  CHECK(m.species_names() == std::vector<std::string>{"A", "B", "C"});
  auto k = parse_network("A + B->C").network;
  CHECK(k.species_names() == std::vector<std::string>{"A", "B", "C"});
}

TEST_CASE("syntax errors carry line and column") {
  auto e = parse_failure("A -> B\nA -> B C");
  CHECK(e.line() == 2);
  CHECK(e.column() == 8);

  e = parse_failure("A -> 0 B");
  CHECK(e.column() == 6);
  CHECK(e.detail() == "coefficient 0");

  e = parse_failure("A => B");
  CHECK(e.line() == 1);
  CHECK(e.column() == 3);

  e = parse_failure("0 A -> B");
  CHECK(e.detail() == "coefficient 0");

  e = parse_failure("0 -> 0");
  CHECK(e.detail() == "both sides of the reaction are empty");

  e = parse_failure("A ->");
  CHECK(e.line() == 1);

  e = parse_failure("A + -> B");
  CHECK(e.column() == 5);

  e = parse_failure("A -> B $");
  CHECK(e.detail() == "unexpected character '$'");
  CHECK(std::string(e.what()).rfind("line 1, column 8", 0) == 0);
}

TEST_CASE("duplicate reaction is a warning") {
  auto doc = parse_network("A -> B\nC -> D\nA -> B\n");
  CHECK(doc.network.num_reactions() == 3);
  REQUIRE(doc.warnings.size() == 1);
  CHECK(doc.warnings[0] == "line 3: duplicate reaction (first declared on line 1)");
}

TEST_CASE("serialization merges reversible pairs and is idempotent") {
  const std::string src = read_file(corpus / "ptm_cycle.crn");
  const std::string once = serialize_network(parse_network(src).network);
  const std::string twice = serialize_network(parse_network(once).network);
  CHECK(once == twice);
  CHECK(once.find("<->") != std::string::npos);
}

TEST_CASE("programmatic network serializes to parseable text") {
  Network n({"A", "B", "C"},
            {Reaction{{{0, 2}}, {{1, 1}}, std::nullopt},
             Reaction{{{1, 1}}, {}, std::nullopt},
             Reaction{{}, {{2, 3}}, std::nullopt}});
  const std::string text = serialize_network(n);
  CHECK(text == "2 A -> B\nB -> 0\n0 -> 3 C\n");
  CHECK(same_content(parse_network(text).network, n));
}

TEST_CASE("McKeithan n=2 matches the frozen canonical form") {
  auto n = load_network(corpus / "mckeithan_2.crn").network;
  CHECK(serialize_network(n) ==
        read_file(std::filesystem::path(CRNCERT_TEST_DIR) / "golden" / "mckeithan_2.crn"));
}

TEST_CASE("parse after serialize preserves every corpus network") {
  for (const auto& entry : std::filesystem::directory_iterator(corpus)) {
    CAPTURE(entry.path().filename().string());
    auto n = load_network(entry.path()).network;
    auto back = parse_network(serialize_network(n)).network;
    CHECK(same_content(n, back));
    CHECK(isomorphic(n, back));
  }
}

TEST_CASE("missing file is reported") {
  CHECK_THROWS_AS(load_network(corpus / "no_such_file.crn"), std::runtime_error);
}
