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

#include "densesim/detect_congest.hpp"
#include "densesim/generate.hpp"
#include "densesim/oracle.hpp"

namespace densesim {
namespace {

sim::Engine strict_engine() { return sim::Engine(sim::SimConfig::congest(sim::Enforcement::strict)); }

TEST(CongestDetect, CliqueMarkedWhole) {
  sim::Engine engine(sim::SimConfig::congest());
  Graph g = gen::complete(8);
  CongestOptions opt;
  opt.primal_T = 64;
  auto r = congest_detect(g, make_rational(3), make_rational(1, 8), 7, engine, opt);
  EXPECT_EQ(r.marked.size(), 8u);
  EXPECT_EQ(r.density, make_rational(7, 2));
  EXPECT_EQ(r.marked_per_trial.front(), 8u);
  EXPECT_EQ(r.trials, 8u);
}

TEST(CongestDetect, CycleTooSparse) {
  auto engine = strict_engine();
  CongestOptions opt;
  opt.primal_T = 64;
  auto r = congest_detect(gen::cycle(20), make_rational(10), make_rational(1, 8), 3, engine, opt);
  EXPECT_TRUE(r.marked.empty());
  EXPECT_EQ(r.density, Rational(0));
}

TEST(CongestDetect, TwoFarCliques) {
  Graph g = gen::barbell(6, 100);
  CongestOptions opt;
  opt.primal_T = 64;
  for (std::uint64_t seed = 0; seed < 20; ++seed) {
    auto engine = strict_engine();
    auto r = congest_detect(g, make_rational(2), make_rational(1, 8), seed, engine, opt);
    ASSERT_FALSE(r.marked.empty()) << seed;
    EXPECT_GE(r.density, make_rational(7, 8) * 2) << seed;
    EXPECT_TRUE(r.trace.violations.empty());
    std::size_t left = 0, right = 0;
    for (Vertex v = 0; v < 6; ++v) left += r.marked.contains(v);
    for (Vertex v = g.num_vertices() - 6; v < g.num_vertices(); ++v) right += r.marked.contains(v);
    EXPECT_GE(left, 5u) << seed;
    EXPECT_GE(right, 5u) << seed;
  }
}

TEST(CongestDetect, SoundOnRandomGraphs) {
  for (std::uint64_t seed = 0; seed < 6; ++seed) {
    Graph g = gen::planted_dense(40, 8, seed, 0.08);
    Rational D = exact_densest(g).D;
    CongestOptions opt;
    opt.primal_T = 64;
    for (Rational dt : {D / 2, D, D * 3 / 2}) {
      auto engine = strict_engine();
      auto r = congest_detect(g, dt, make_rational(1, 8), seed, engine, opt);
      if (!r.marked.empty()) {
        EXPECT_GE(r.density, make_rational(7, 8) * dt);
      }
      if (dt <= D) EXPECT_FALSE(r.marked.empty());
    }
  }
}

TEST(CongestDetect, Deterministic) {
  Graph g = gen::planted_dense(30, 7, 4);
  CongestOptions opt;
  opt.primal_T = 32;
  auto a_engine = strict_engine();
  auto b_engine = strict_engine();
  auto a = congest_detect(g, make_rational(2), make_rational(1, 8), 11, a_engine, opt);
  auto b = congest_detect(g, make_rational(2), make_rational(1, 8), 11, b_engine, opt);
  EXPECT_EQ(a.marked, b.marked);
  EXPECT_EQ(a.trace, b.trace);
}

TEST(CongestDetect, RejectsLargeEps) {
  auto engine = strict_engine();
  EXPECT_THROW(congest_detect(gen::complete(4), make_rational(1), make_rational(1, 4), 0, engine),
               PreconditionError);
}

TEST(ApproxDensest, TwoCliques) {
  Graph g = gen::disjoint_union(gen::complete(5), gen::complete(9));
  CongestOptions opt;
  opt.primal_T = 32;
  for (std::uint64_t seed = 0; seed < 20; ++seed) {
    sim::Engine engine(sim::SimConfig::congest());
    auto r = approx_densest(g, make_rational(1, 8), seed, engine, opt);
    EXPECT_GE(r.D_hat, make_rational(28, 9));
    for (Vertex v = 5; v < 14; ++v) EXPECT_TRUE(r.output.contains(v));
  }
}

TEST(ApproxDensest, SingleEdge) {
  sim::Engine engine(sim::SimConfig::congest());
  auto r = approx_densest(Graph(2, {{0, 1}}), make_rational(1, 8), 1, engine);
  EXPECT_EQ(r.D_hat, make_rational(1, 2));
  EXPECT_EQ(r.output.size(), 2u);
}

TEST(ApproxDensest, EmptyGraph) {
  auto engine = strict_engine();
  auto r = approx_densest(Graph(5, {}), make_rational(1, 8), 1, engine);
  EXPECT_TRUE(r.output.empty());
  EXPECT_EQ(r.D_hat, Rational(0));
}

TEST(PhaseGrid, StepsWithinFactor) {
  Rational eps = make_rational(1, 8);
  auto grid = phase_grid(eps, 100);
  ASSERT_FALSE(grid.empty());
  EXPECT_EQ(grid.front(), make_rational(1, 2));
  EXPECT_LE(grid.back(), make_rational(99, 2));
  EXPECT_GT(grid.back() * (1 + eps), make_rational(99, 2) - 1);
  for (std::size_t i = 1; i < grid.size(); ++i) {
    EXPECT_GT(grid[i], grid[i - 1]);
    EXPECT_LE(grid[i], grid[i - 1] * (1 + eps));
  }
  EXPECT_TRUE(phase_grid(eps, 1).empty());
}

}  // namespace
}  // namespace densesim
