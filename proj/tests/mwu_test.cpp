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
#include "densesim/mwu.hpp"
#include "densesim/oracle.hpp"

namespace densesim {
namespace {

TEST(LoadScale, RhoFromZ) {
  auto s = LoadScale::of(make_rational(1));
  EXPECT_EQ(s.half, 1u);
  EXPECT_EQ(s.rho(), make_rational(1));
  auto t = LoadScale::of(make_rational(7, 2));
  EXPECT_EQ(t.half, 2u);
  EXPECT_EQ(t.rho(), make_rational(3, 2));
  EXPECT_EQ((LoadValue{4, 2}.value(make_rational(7, 2))), make_rational(7));
  EXPECT_EQ(LoadScale::of(make_rational(4)).rho(), make_rational(2));
}

TEST(Iterations, DefaultIsPowerOfTwo) {
  std::uint64_t T = default_iterations(make_rational(1, 8), 256);
  EXPECT_EQ(T & (T - 1), 0u);
  EXPECT_GE(static_cast<double>(T), 8.0 * 64.0 * std::log(256.0));
}

TEST(FractionalDual, SingleEdge) {
  sim::Engine engine;
  auto r = fractional_dual(Graph(2, {{0, 1}}), make_rational(1), make_rational(1, 4), 16, engine);
  EXPECT_EQ(r.solution.alpha[0][0], make_rational(3, 2));
  EXPECT_EQ(r.solution.alpha[0][1], make_rational(3, 2));
  EXPECT_TRUE(r.solution.feasible);
  EXPECT_EQ(r.trace.rounds_executed, 17u);
}

TEST(FractionalDual, Triangle) {
  sim::Engine engine;
  auto r = fractional_dual(gen::complete(3), make_rational(2), make_rational(1, 8), std::nullopt, engine);
  EXPECT_TRUE(r.solution.feasible);
}

TEST(FractionalDual, StarZOne) {
  sim::Engine engine;
  Graph g = gen::star(3);
  auto r = fractional_dual(g, make_rational(1), make_rational(1, 8), 64, engine);
  for (EdgeId e = 0; e < g.num_edges(); ++e) EXPECT_EQ(r.solution.alpha[e][1], make_rational(5, 4));
  EXPECT_TRUE(r.solution.feasible);
}

TEST(FractionalDual, StrictCongestAtSixteen) {
  sim::Engine engine(sim::SimConfig::congest(sim::Enforcement::strict));
  Graph g = gen::erdos_renyi(16, 0.4, 1);
  auto r = fractional_dual(g, make_rational(3), make_rational(1, 8), 128, engine);
  EXPECT_TRUE(r.trace.violations.empty());
}

TEST(AlphaBits, SingleEdgeT1024) {
  sim::Engine engine;
  auto r = fractional_dual(Graph(2, {{0, 1}}), make_rational(2), make_rational(1, 8), 1024, engine);
  EXPECT_EQ(alpha_bit_width(r.solution), 15u);
  EXPECT_LE(alpha_bit_width(r.solution), 17u);
}

TEST(AlphaBits, TriangleT64) {
  sim::Engine engine;
  auto r = fractional_dual(gen::complete(3), make_rational(2), make_rational(1, 4), 64, engine);
  EXPECT_LE(alpha_bit_width(r.solution), 12u);
}

TEST(AlphaBits, ZeroCountsAsOneBit) {
  DualSolution s;
  s.z = 2;
  s.eps = make_rational(1, 4);
  s.T = 64;
  s.alpha = {{Rational(0), Rational(0)}};
  EXPECT_EQ(alpha_bit_width(s), 1u);
  s.z = make_rational(3, 2);
  EXPECT_THROW(alpha_bit_width(s), PreconditionError);
  s.z = 2;
  s.eps = make_rational(1, 3);
  EXPECT_THROW(alpha_bit_width(s), PreconditionError);
}

TEST(IntegralPrimal, K4) {
  sim::Engine engine;
  Graph g = gen::complete(4);
  auto r = integral_primal(g, make_rational(1), make_rational(1, 8), 64, engine);
  ASSERT_TRUE(r.subset);
  EXPECT_GE(density(g, *r.subset), make_rational(5, 8));
}

TEST(IntegralPrimal, SingleEdgeNoOutput) {
  sim::Engine engine;
  Graph g(2, {{0, 1}});
  auto r = integral_primal(g, make_rational(1), make_rational(1, 8), 64, engine);
  EXPECT_FALSE(r.subset);
  sim::Engine e2;
  EXPECT_TRUE(fractional_dual(g, make_rational(1), make_rational(1, 8), 64, e2).solution.feasible);
}

TEST(IntegralPrimal, CliqueWithPendants) {
  std::vector<Edge> e = gen::complete(6).edges();
  for (Vertex i = 0; i < 50; ++i) e.push_back({i % 6, 6 + i});
  Graph g(56, e);
  sim::Engine engine;
  auto r = integral_primal(g, make_rational(2), make_rational(1, 8), 256, engine);
  ASSERT_TRUE(r.subset);
  // The first passing level already clears the bar with a K5 inside the core.
  for (Vertex v : r.subset->members()) EXPECT_LT(v, 6u);
  EXPECT_GE(r.subset->size(), 5u);
  EXPECT_GE(density(g, *r.subset), make_rational(5, 8) * 2);
}

TEST(IntegralPrimal, StrictCongest) {
  sim::Engine engine(sim::SimConfig::congest(sim::Enforcement::strict));
  Graph g = gen::planted_dense(64, 8, 3, 0.05);
  auto r = integral_primal(g, make_rational(3), make_rational(1, 8), 256, engine);
  EXPECT_TRUE(r.trace.violations.empty());
  if (r.subset) EXPECT_GE(density(g, *r.subset), make_rational(5, 8) * 3);
}

TEST(Disjunction, RandomInstances) {
  for (std::uint64_t seed = 0; seed < 12; ++seed) {
    Graph g = gen::planted_dense(24, 4 + seed % 4, seed, 0.15);
    Rational D = exact_densest(g).D;
    for (Rational z : {D / 2, Rational(ceil_of(D)), 2 * D + 1}) {
      if (z <= 0) continue;
      sim::Engine e1, e2;
      auto eps = make_rational(1, 8);
      auto dual = fractional_dual(g, z, eps, 256, e1);
      auto primal = integral_primal(g, z, eps, 256, e2);
      bool primal_ok = primal.subset && density(g, *primal.subset) >= (1 - 3 * eps) * z;
      EXPECT_TRUE(dual.solution.feasible || primal_ok) << "seed " << seed << " z " << to_string(z);
      if (z >= D) EXPECT_TRUE(dual.solution.feasible);
    }
  }
}

}  // namespace
}  // namespace densesim
