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

#include "densesim/generate.hpp"
#include "densesim/oracle.hpp"

namespace densesim {
namespace {

TEST(ExactDensest, K5) {
  auto r = exact_densest(gen::complete(5));
  EXPECT_EQ(r.D, make_rational(2));
  EXPECT_EQ(r.best_subset, Subset::all(5));
  EXPECT_EQ(r.method, OracleMethod::flow);
}

TEST(ExactDensest, P4) {
  auto r = exact_densest(gen::path(4));
  EXPECT_EQ(r.D, make_rational(3, 4));
  EXPECT_EQ(r.best_subset, Subset::all(4));
}

TEST(ExactDensest, PlantedK6) {
  Graph g = gen::planted_dense(50, 6, 7);
  auto r = exact_densest(g);
  EXPECT_GE(r.D, make_rational(5, 2));
  EXPECT_EQ(density(g, r.best_subset), r.D);
}

TEST(ExactDensest, Edgeless) {
  auto r = exact_densest(Graph(4, std::vector<Edge>{}));
  EXPECT_EQ(r.D, 0);
  EXPECT_EQ(r.best_subset.size(), 1u);
}

TEST(BruteDensest, Small) {
  EXPECT_EQ(brute_densest(Graph(2, {{0, 1}})).D, make_rational(1, 2));
  auto c5 = brute_densest(gen::cycle(5));
  EXPECT_EQ(c5.D, make_rational(1));
  EXPECT_EQ(c5.best_subset, Subset::all(5));
  EXPECT_THROW(brute_densest(gen::path(21)), PreconditionError);
}

TEST(BruteDensest, LexSmallestTie) {
  // Two disjoint triangles; the one on the smaller ids wins.
  Graph g = gen::disjoint_union(gen::complete(3), gen::complete(3));
  auto r = brute_densest(g);
  EXPECT_EQ(r.best_subset, Subset(6, {0, 1, 2}));
  EXPECT_TRUE(lex_less_mask(0b011, 0b101));
  EXPECT_TRUE(lex_less_mask(0b001, 0b011));
  EXPECT_FALSE(lex_less_mask(0b110, 0b101));
}

TEST(Oracles, AgreeOnRandomGraphs) {
  for (std::uint64_t seed = 0; seed < 200; ++seed) {
    SplitMix64 rng(seed);
    std::size_t n = 1 + rng.below(12);
    Graph g = gen::erdos_renyi(n, 0.1 + 0.8 * rng.uniform(), seed);
    auto a = exact_densest(g), b = brute_densest(g);
    ASSERT_EQ(a.D, b.D) << "seed " << seed;
    EXPECT_EQ(density(g, a.best_subset), a.D);
  }
}

TEST(BruteDirected, TwoStarsFour) {
  auto r = brute_directed_densest(gen::two_stars(4));
  EXPECT_EQ(r.density.squared(), make_rational(4));
}

TEST(BruteDirected, SingleArc) {
  auto r = brute_directed_densest(DirectedGraph(2, {{0, 1}}));
  EXPECT_EQ(r.density.squared(), make_rational(1));
  EXPECT_EQ(r.s, Subset(2, {0}));
  EXPECT_EQ(r.t, Subset(2, {1}));
}

TEST(BruteDirected, OppositeArcs) {
  auto r = brute_directed_densest(DirectedGraph(2, {{0, 1}, {1, 0}}));
  EXPECT_EQ(r.density.squared(), make_rational(1));
  EXPECT_THROW(brute_directed_densest(DirectedGraph(13, {})), PreconditionError);
}

TEST(MinMaxOutdegree, Examples) {
  EXPECT_EQ(min_max_outdegree(gen::path(7)).value, 1u);
  EXPECT_EQ(min_max_outdegree(gen::star(9)).value, 1u);
  EXPECT_EQ(min_max_outdegree(gen::cycle(6)).value, 1u);
  auto k5 = min_max_outdegree(gen::complete(5));
  EXPECT_EQ(k5.value, 2u);
  EXPECT_EQ(k5.witness.max_outdegree(gen::complete(5)), 2u);
  EXPECT_EQ(min_max_outdegree(Graph(3, std::vector<Edge>{})).value, 0u);
}

TEST(MinMaxOutdegree, WitnessAchievesValue) {
  for (std::uint64_t seed = 0; seed < 50; ++seed) {
    Graph g = gen::erdos_renyi(40, 0.05 + 0.01 * static_cast<double>(seed), seed);
    auto r = min_max_outdegree(g);
    EXPECT_EQ(r.witness.max_outdegree(g), r.value);
    if (g.num_edges()) EXPECT_EQ(BigInt(r.value), ceil_of(exact_densest(g).D));
  }
}

}  // namespace
}  // namespace densesim
