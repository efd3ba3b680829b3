// Copyright 2026 The densesim Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include <gtest/gtest.h>

#include <string>

#include "densesim/edge_list.hpp"
#include "densesim/generate.hpp"
#include "densesim/graph.hpp"
#include "densesim/rational.hpp"

namespace densesim {
namespace {

TEST(Density, PathOfFive) { EXPECT_EQ(density(gen::path(5), Subset::all(5)), make_rational(4, 5)); }
TEST(Density, Cycle20) { EXPECT_EQ(density(gen::cycle(20), Subset::all(20)), make_rational(1)); }
TEST(Density, K4) { EXPECT_EQ(density(gen::complete(4), Subset::all(4)), make_rational(3, 2)); }

TEST(Density, EmptySubsetThrows) {
  EXPECT_THROW(density(gen::complete(3), Subset(3)), PreconditionError);
}

TEST(Density, UnionOfSeparatedDenseParts) {
  Graph g = gen::barbell(5, 10);
  Subset a(g.num_vertices()), b(g.num_vertices());
  for (Vertex v = 0; v < 5; ++v) a.insert(v);
  for (Vertex v = 0; v < 5; ++v) b.insert(static_cast<Vertex>(g.num_vertices() - 1 - v));
  Subset u = a;
  u |= b;
  EXPECT_GE(density(g, u), std::min(density(g, a), density(g, b)));
}

TEST(DirectedDensity, StarOfNine) {
  DirectedGraph g = gen::two_stars(9);
  Subset s(20, {0}), t(20);
  for (Vertex i = 1; i <= 9; ++i) t.insert(i);
  auto d = directed_density(g, s, t);
  EXPECT_EQ(d.squared(), make_rational(9));
  EXPECT_TRUE(d.at_least(make_rational(3)));
  EXPECT_FALSE(d.at_least(make_rational(31, 10)));
}

TEST(DirectedDensity, UnionOfBothStars) {
  DirectedGraph g = gen::two_stars(9);
  Subset s(20, {0}), t(20, {19});
  for (Vertex i = 1; i <= 9; ++i) {
    t.insert(i);
    s.insert(9 + i);
  }
  auto d = directed_density(g, s, t);
  EXPECT_EQ(d.squared(), make_rational(9, 5) * make_rational(9, 5));
}

TEST(DirectedDensity, SingleArc) {
  DirectedGraph g(2, {{0, 1}});
  EXPECT_EQ(directed_density(g, Subset(2, {0}), Subset(2, {1})).squared(), make_rational(1));
  EXPECT_THROW(directed_density(g, Subset(2), Subset(2, {1})), PreconditionError);
}

TEST(Generate, ClosedFormCounts) {
  for (std::size_t n = 3; n < 12; ++n) {
    EXPECT_EQ(gen::cycle(n).num_edges(), n);
    EXPECT_EQ(gen::path(n).num_edges(), n - 1);
    EXPECT_EQ(gen::complete(n).num_edges(), n * (n - 1) / 2);
  }
  EXPECT_EQ(gen::complete(5).num_edges(), 10u);
}

TEST(Generate, LowerboundPair) {
  auto [c, p] = gen::lowerbound_pair(make_rational(1, 10));
  EXPECT_EQ(c, gen::cycle(5));
  EXPECT_EQ(p, gen::path(5));
  EXPECT_THROW(gen::lowerbound_pair(make_rational(1, 7)), PreconditionError);
}

TEST(Generate, Deterministic) {
  EXPECT_EQ(gen::erdos_renyi(40, 0.2, 3), gen::erdos_renyi(40, 0.2, 3));
  EXPECT_EQ(gen::planted_dense(50, 6, 7), gen::planted_dense(50, 6, 7));
  EXPECT_THROW(gen::erdos_renyi(10, 1.5, 1), PreconditionError);
  EXPECT_THROW(gen::complete(0), PreconditionError);
}

TEST(Generate, RandomRegular) {
  Graph g = gen::random_regular(64, 3, 5);
  for (Vertex v = 0; v < 64; ++v) EXPECT_EQ(g.degree(v), 3u);
}

TEST(Generate, Barbell) {
  Graph g = gen::barbell(5, 60);
  EXPECT_EQ(g.num_vertices(), 69u);
  EXPECT_EQ(g.num_edges(), 80u);
}

TEST(GraphAdjacency, ConsistentWithEdges) {
  Graph g = gen::erdos_renyi(30, 0.3, 11);
  std::size_t total = 0;
  for (Vertex v = 0; v < g.num_vertices(); ++v) {
    for (auto inc : g.incident(v)) {
      const Edge& e = g.edge(inc.edge);
      EXPECT_TRUE(e.u == v || e.v == v);
      EXPECT_EQ(e.other(v), inc.neighbor);
    }
    total += g.degree(v);
  }
  EXPECT_EQ(total, 2 * g.num_edges());
}

TEST(EdgeList, ReadPath) {
  Graph g = read_edge_list("3 2\n0 1\n1 2\n");
  EXPECT_EQ(g, gen::path(3));
}

TEST(EdgeList, WriteTriangle) { EXPECT_EQ(write_edge_list(gen::complete(3)), "3 3\n0 1\n0 2\n1 2\n"); }

TEST(EdgeList, SelfLoopReportsLine) {
  try {
    read_edge_list("3 2\n0 1\n0 0\n");
    FAIL();
  } catch (const ParseError& e) {
    EXPECT_EQ(e.line(), 3u);
    EXPECT_NE(std::string(e.what()).find("self-loop at line 3"), std::string::npos);
  }
}

TEST(EdgeList, Errors) {
  EXPECT_THROW(read_edge_list("3 2\n0 1\n1 0\n"), ParseError);
  EXPECT_THROW(read_edge_list("3 1\n0 3\n"), ParseError);
  EXPECT_THROW(read_edge_list("3 2\n0 1\n"), ParseError);
  EXPECT_THROW(read_edge_list("x\n"), ParseError);
}

TEST(EdgeList, RoundTripRandom) {
  for (std::uint64_t seed = 0; seed < 100; ++seed) {
    Graph g = gen::erdos_renyi(1 + seed % 40, 0.15, seed);
    EXPECT_EQ(read_edge_list(write_edge_list(g)), g);
  }
}

TEST(EdgeList, DirectedRoundTrip) {
  DirectedGraph g = gen::two_stars(3);
  auto text = write_edge_list(g);
  EXPECT_EQ(text.substr(0, text.find('\n')), "8 6 directed");
  EXPECT_EQ(read_directed_edge_list(text), g);
}

TEST(RationalText, ParseAndPrint) {
  EXPECT_EQ(to_string(parse_rational("4/2")), "2/1");
  EXPECT_EQ(parse_rational("-3/6"), make_rational(-1, 2));
  EXPECT_THROW(parse_rational("1/0"), PreconditionError);
  EXPECT_THROW(parse_rational("a/b"), PreconditionError);
}

}  // namespace
}  // namespace densesim
