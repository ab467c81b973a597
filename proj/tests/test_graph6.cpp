// SPDX-License-Identifier: Apache-2.0
#include <sstream>

#include "doctest.h"
#include "helpers.hpp"
#include "wqaoa/error.hpp"
#include "wqaoa/graph6.hpp"

using namespace wqaoa;

TEST_SUITE("graph6") {

TEST_CASE("hand decoded examples") {
  const auto a = parse_graph6("A_");
  CHECK(a.n_vertices() == 2);
  REQUIRE(a.num_edges() == 1u);
  CHECK(a.edges()[0] == Edge{0, 1, 1.0});

  const auto d = parse_graph6("D??");
  CHECK(d.n_vertices() == 5);
  CHECK(d.num_edges() == 0u);

  // Bits x = 0101001010 over pairs (0,1) (0,2) (1,2) (0,3) ...
  const auto q = parse_graph6("DQc");
  const std::vector<Edge> expected{{0, 2, 1.0}, {0, 4, 1.0}, {1, 3, 1.0}, {3, 4, 1.0}};
  CHECK(q.edges() == expected);
  CHECK(serialize_graph6(q) == "DQc");
}

TEST_CASE("header and line endings are tolerated") {
  CHECK(parse_graph6(">>graph6<<A_").num_edges() == 1u);
  CHECK(parse_graph6("A_\n").num_edges() == 1u);
  CHECK(parse_graph6("A_\r\n").num_edges() == 1u);
  CHECK(parse_graph6("@").n_vertices() == 1);
  CHECK_THROWS(parse_graph6("?"));
}

TEST_CASE("malformed input reports byte offsets") {
  CHECK_THROWS_AS(parse_graph6(""), ParseError);
  CHECK_THROWS_AS(parse_graph6(":Fa@x^"), ParseError);
  CHECK_THROWS_AS(parse_graph6("&B?"), ParseError);
  try {
    parse_graph6("D?");
    FAIL("expected truncation error");
  } catch (const ParseError& e) {
    CHECK(e.offset() == 2u);
  }
  try {
    parse_graph6("D? ?");
    FAIL("expected bad character");
  } catch (const ParseError& e) {
    CHECK(e.offset() == 2u);
  }
  try {
    parse_graph6("A_?");
    FAIL("expected trailing data");
  } catch (const ParseError& e) {
    CHECK(e.offset() == 2u);
  }
  CHECK_THROWS_AS(parse_graph6("~??"), ParseError);
}

TEST_CASE("round trip on random graphs") {
  Rng rng(2024);
  for (int t = 0; t < 1000; ++t) {
    const int n = 2 + static_cast<int>(rng.index(t % 50 == 0 ? 120 : 20));
    std::vector<Edge> edges;
    const double p = rng.uniform();
    for (int i = 0; i < n; ++i)
      for (int j = i + 1; j < n; ++j)
        if (rng.uniform() < p) edges.push_back({i, j, 1.0});
    const WeightedGraph g(n, edges);
    const auto text = serialize_graph6(g);
    const auto back = parse_graph6(text);
    REQUIRE(back.n_vertices() == n);
    REQUIRE(back.edges() == g.edges());
  }
}

TEST_CASE("long size form") {
  const auto g = testing::cycle(100);
  const auto text = serialize_graph6(g);
  CHECK(text[0] == '~');
  const auto back = parse_graph6(text);
  CHECK(back.n_vertices() == 100);
  CHECK(back.num_edges() == 100u);
}

TEST_CASE("stream reader") {
  std::istringstream in("A_\n\nD??\nDQc\n");
  const auto gs = read_graph6_stream(in);
  REQUIRE(gs.size() == 3u);
  CHECK(gs[2].num_edges() == 4u);
  std::istringstream bad("A_\nD?\n");
  try {
    read_graph6_stream(bad);
    FAIL("expected error");
  } catch (const ParseError& e) {
    CHECK(std::string(e.what()).find("line 2") != std::string::npos);
  }
}

}  // TEST_SUITE
