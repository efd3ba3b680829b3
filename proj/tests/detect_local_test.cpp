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

#include "densesim/detect_local.hpp"
#include "densesim/generate.hpp"
#include "densesim/oracle.hpp"

namespace densesim {
namespace {

TEST(LocalDetect, Cycle20AllMarked) {
  sim::Engine engine;
  auto r = local_detect(gen::cycle(20), make_rational(1), make_rational(1, 5), engine);
  EXPECT_EQ(r.marked, Subset::all(20));
  EXPECT_EQ(r.density, make_rational(1));
  EXPECT_LE(r.trace.rounds_executed, 4 * r.radius + 8);
}

TEST(LocalDetect, Cycle20TooHigh) {
  sim::Engine engine;
  auto r = local_detect(gen::cycle(20), make_rational(2), make_rational(1, 5), engine);
  EXPECT_TRUE(r.marked.empty());
  EXPECT_TRUE(r.black.empty());
}

TEST(LocalDetect, BarbellBothCliquesMarked) {
  Graph g = gen::barbell(5, 60);
  sim::Engine engine;
  auto r = local_detect(g, make_rational(2), make_rational(1, 10), engine);
  for (Vertex v = 0; v < 5; ++v) {
    EXPECT_TRUE(r.marked.contains(v));
    EXPECT_TRUE(r.marked.contains(static_cast<Vertex>(g.num_vertices() - 1 - v)));
  }
  EXPECT_GE(r.density, make_rational(9, 5));
  // The radius exceeds the path length, so the whole graph is one ball.
  EXPECT_GT(r.radius, 60u);
  EXPECT_EQ(r.black, std::vector<Vertex>{0});
}

TEST(LocalDetect, FarCliquesGetTwoBlackVertices) {
  // With a short radius the two cliques are more than 2r apart.
  Graph g = gen::barbell(5, 60);
  auto prog = make_local_program(g.num_vertices(), make_rational(2), make_rational(1, 10));
  prog.r = 10;
  sim::Engine engine;
  auto res = engine.run(sim::Topology::of(g), prog);
  std::vector<Vertex> black;
  for (Vertex v = 0; v < g.num_vertices(); ++v)
    if (res.states[v].black) black.push_back(v);
  EXPECT_EQ(black.size(), 2u);
  EXPECT_EQ(res.trace.rounds_executed, 41u);
}

TEST(LocalDetect, SoundnessAtAnyDtilde) {
  for (std::uint64_t seed = 0; seed < 10; ++seed) {
    Graph g = gen::planted_dense(40, 5 + seed % 3, seed, 0.08);
    for (auto dt : {make_rational(1), make_rational(3, 2), make_rational(2), make_rational(3)}) {
      sim::Engine engine;
      auto r = local_detect(g, dt, make_rational(1, 4), engine);
      if (!r.marked.empty()) EXPECT_GE(r.density, make_rational(3, 4) * dt);
      EXPECT_LE(r.trace.rounds_executed, 4 * r.radius + 8);
    }
  }
}

TEST(LocalDetect, BlackChoicesDisjoint) {
  Graph g = gen::disjoint_union(gen::barbell(4, 30), gen::barbell(6, 30));
  auto prog = make_local_program(g.num_vertices(), make_rational(3, 2), make_rational(1, 4));
  prog.r = 5;
  sim::Engine engine;
  auto res = engine.run(sim::Topology::of(g), prog);
  std::vector<Subset> hs;
  for (Vertex v = 0; v < g.num_vertices(); ++v)
    if (res.states[v].black) hs.push_back(Subset::from(g.num_vertices(), res.states[v].choice.first));
  EXPECT_GE(hs.size(), 2u);
  for (std::size_t i = 0; i < hs.size(); ++i)
    for (std::size_t j = i + 1; j < hs.size(); ++j) EXPECT_FALSE(hs[i].intersects(hs[j]));
}

TEST(LocalDetect, RefusesCongest) {
  sim::Engine engine(sim::SimConfig::congest());
  EXPECT_THROW(local_detect(gen::cycle(5), make_rational(1), make_rational(1, 2), engine), PreconditionError);
}

// Middle vertex of the cycle/path pair: same state for the first two rounds.
TEST(LowerBound, MiddleStateIndistinguishable) {
  auto [c, p] = gen::lowerbound_pair(make_rational(1, 10));
  auto prog = make_local_program(5, make_rational(1), make_rational(1, 10));
  auto state_after = [&](const Graph& g, std::uint64_t rounds) {
    sim::Engine engine;
    sim::RunOptions opt;
    opt.stop_after = rounds;
    return engine.run(sim::Topology::of(g), prog, opt).states[2].serialize();
  };
  EXPECT_EQ(state_after(c, 1), state_after(p, 1));
  EXPECT_EQ(state_after(c, 2), state_after(p, 2));
  EXPECT_NE(state_after(c, 3), state_after(p, 3));
}

TEST(LocalDetectDirected, TwoGadgets) {
  DirectedGraph g = gen::disjoint_union(gen::two_stars(9), gen::two_stars(9));
  sim::Engine engine;
  auto r = local_detect_directed(g, make_rational(3), make_rational(1, 10), engine);
  auto groups = r.groups();
  EXPECT_GE(groups.size(), 2u);
  for (const auto& [label, st] : groups) {
    ASSERT_FALSE(st.first.empty());
    ASSERT_FALSE(st.second.empty());
    EXPECT_TRUE(directed_density(g, st.first, st.second).at_least(make_rational(27, 10)));
  }
}

TEST(LocalDetectDirected, SingleArc) {
  DirectedGraph g(2, {{0, 1}});
  sim::Engine engine;
  auto r = local_detect_directed(g, make_rational(1), make_rational(1, 2), engine);
  EXPECT_EQ(r.s, (std::vector<Vertex>{1, 0}));
  EXPECT_EQ(r.t, (std::vector<Vertex>{0, 1}));
}

TEST(LocalDetectDirected, NoArcs) {
  DirectedGraph g(4, {});
  sim::Engine engine;
  auto r = local_detect_directed(g, make_rational(1), make_rational(1, 2), engine);
  EXPECT_EQ(r.s, std::vector<Vertex>(4, 0));
  EXPECT_EQ(r.t, std::vector<Vertex>(4, 0));
}

TEST(LocalDetectDirected, BallTooLarge) {
  DirectedGraph g = gen::two_stars(12);
  sim::Engine engine;
  EXPECT_THROW(local_detect_directed(g, make_rational(1), make_rational(1, 2), engine), PreconditionError);
}

TEST(LocalDetectDirected, SolverMatchesBruteForce) {
  for (std::uint64_t seed = 0; seed < 40; ++seed) {
    SplitMix64 rng(seed);
    std::size_t n = 2 + rng.below(8);
    std::vector<Arc> arcs;
    std::vector<std::pair<Vertex, Vertex>> pairs;
    for (Vertex a = 0; a < n; ++a)
      for (Vertex b = 0; b < n; ++b)
        if (a != b && rng.uniform() < 0.3) {
          arcs.push_back({a, b});
          pairs.emplace_back(a, b);
        }
    DirectedGraph g(n, arcs);
    auto brute = brute_directed_densest(g);
    auto fast = small_directed_densest(n, pairs);
    if (arcs.empty()) continue;
    EXPECT_EQ(fast.density.squared(), brute.density.squared()) << "seed " << seed;
  }
}

}  // namespace
}  // namespace densesim
