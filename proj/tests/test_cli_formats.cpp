#include <catch2/catch_amalgamated.hpp>

#include "isomat/gf2.hpp"
#include "isomat/graph.hpp"
#include "isomat/matroid.hpp"
#include "isomat/reconstruct.hpp"
#include "isomat/triangulate.hpp"

using namespace isomat;

// The text formats are the CLI's I/O surface; pin them down exactly.

TEST_CASE("matrix format is rows of 0/1 with no separators") {
  BitMatrix b(2, 3);
  b.set(0, 0, true);
  b.set(1, 2, true);
  REQUIRE(format_matrix(b) == "100\n001\n");
  REQUIRE(parse_matrix("100\n001\n") == b);
}

TEST_CASE("graph format is a count header plus edge lines") {
  Graph g(3);
  g.add_edge(0, 2);
  REQUIRE(format_graph(g) == "3 1\n0 2\n");
  Graph back = parse_graph("# comment\n3 1\n0 2\n");
  REQUIRE(back.adjacent(0, 2));
  // Errors carry line numbers.
  try {
    parse_graph("3 1\n0 0\n");
    FAIL("expected a parse error");
  } catch (const std::invalid_argument& e) {
    REQUIRE(std::string(e.what()).find("line") != std::string::npos);
  }
}

TEST_CASE("ground map format lines") {
  GroundMap f;
  f.add(ElementLabel::phi(2), ElementLabel::chi(0));
  std::string text = format_ground_map(f);
  REQUIRE(text == "phi:2 -> chi:0\n");
  GroundMap back = parse_ground_map(text);
  REQUIRE(back.apply(ElementLabel::phi(2)) == ElementLabel::chi(0));
  REQUIRE_THROWS_AS(parse_ground_map("phi:0 chi:1\n"), std::invalid_argument);
  REQUIRE_THROWS_AS(parse_ground_map("phi:0 -> zeta:1\n"), std::invalid_argument);
  // Plain labels use the col kind.
  GroundMap p = parse_ground_map("col:3 -> col:0\n");
  REQUIRE(p.apply(ElementLabel::plain(3)) == ElementLabel::plain(0));
}

TEST_CASE("triangulation format is comma-separated labels per line") {
  Triangulation t;
  t.triples.push_back(make_triple(ElementLabel::phi(0), ElementLabel::chi(0), ElementLabel::psi(0)));
  std::string text = format_triangulation(t);
  REQUIRE(text == "phi:0,chi:0,psi:0\n");
  Triangulation back = parse_triangulation(text);
  REQUIRE(back.triples.size() == 1);
  REQUIRE(back.triples[0] == t.triples[0]);
}

TEST_CASE("vertex map format") {
  VertexMap vm;
  vm.mapping = {{0, 2}, {1, 1}, {2, 0}};
  vm.certified = false;
  REQUIRE(format_vertex_map(vm) == "0 -> 2\n1 -> 1\n2 -> 0\ncertified: no\n");
}
