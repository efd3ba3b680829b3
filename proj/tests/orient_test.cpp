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

#include <cmath>

#include "densesim/generate.hpp"
#include "densesim/oracle.hpp"
#include "densesim/orient/paths.hpp"
#include "densesim/orient/rounding.hpp"
#include "densesim/orient/weak.hpp"

namespace densesim {
namespace {

sim::Engine engine_for(const Graph& g) {
  return sim::Engine(sim::SimConfig::congest(g.num_vertices() >= 16 ? sim::Enforcement::strict
                                                                     : sim::Enforcement::permissive));
}

void expect_weak(const Graph& g, const WeakOrientation& r) {
  auto out = r.orientation.outdegrees(g);
  for (Vertex v = 0; v < g.num_vertices(); ++v) EXPECT_GE(out[v], g.degree(v) / 3) << v;
  for (std::size_t i = 1; i < r.sinks.size(); ++i) EXPECT_LT(r.sinks[i], r.sinks[i - 1]);
  EXPECT_EQ(r.sinks.back(), 0u);
  EXPECT_LE(r.phases, 8 * sim::ceil_log2(g.num_vertices()));
}

TEST(WeakOrientation, TriangleNeedsNoPhase) {
  Graph g = gen::complete(3);
  auto e = engine_for(g);
  auto r = weak_orientation(g, e);
  EXPECT_EQ(r.phases, 0u);
  expect_weak(g, r);
}

TEST(WeakOrientation, K4) {
  Graph g = gen::complete(4);
  auto e = engine_for(g);
  auto r = weak_orientation(g, e);
  expect_weak(g, r);
  for (auto d : r.orientation.outdegrees(g)) EXPECT_GE(d, 1u);
}

TEST(WeakOrientation, CubicGraphs) {
  for (std::uint64_t seed = 0; seed < 20; ++seed) {
    Graph g = gen::random_regular(64, 3, seed);
    auto e = engine_for(g);
    auto r = weak_orientation(g, e);
    expect_weak(g, r);
    EXPECT_LE(r.phases, 48u);
    EXPECT_TRUE(r.trace.violations.empty());
  }
}

TEST(WeakOrientation, DenseRandom) {
  Graph g = gen::erdos_renyi(200, 0.2, 5);
  auto e = engine_for(g);
  auto r = weak_orientation(g, e);
  expect_weak(g, r);
}

TEST(WeakOrientation, MultigraphLinks) {
  // Parallel links and self-loops, as in a virtual path graph.
  auto topo = sim::Topology::of_links(3, {{0, 1}, {0, 1}, {0, 1}, {1, 2}, {1, 1}, {2, 2}, {0, 2}});
  sim::Engine e;
  auto r = weak_orient_links(topo, e);
  auto views = orient_detail::port_views(topo, r.forward);
  for (Vertex v = 0; v < 3; ++v) {
    std::size_t out = std::count(views[v].begin(), views[v].end(), 1);
    EXPECT_GE(out, topo.degree(v) / 3);
  }
  EXPECT_TRUE(orient_detail::sink_list(topo, r.forward).empty());
}

void expect_decomposition(const Graph& g, const PathDecomposition& pd, std::size_t i) {
  EXPECT_TRUE(is_path_partition(g, pd));
  EXPECT_LE(pd.max_length(), std::size_t{1} << i);
  double f = std::pow(2.0 / 3.0, static_cast<double>(i));
  for (Vertex v = 0; v < g.num_vertices(); ++v)
    EXPECT_LE(static_cast<double>(pd.endpoint_count[v]), f * static_cast<double>(g.degree(v)) + 12.0) << v;
}

TEST(PathDecompose, ZeroIterations) {
  Graph g = gen::erdos_renyi(30, 0.3, 1);
  auto e = engine_for(g);
  auto pd = path_decompose(g, 0, e);
  EXPECT_EQ(pd.paths.size(), g.num_edges());
  for (Vertex v = 0; v < g.num_vertices(); ++v) EXPECT_EQ(pd.endpoint_count[v], g.degree(v));
  expect_decomposition(g, pd, 0);
}

TEST(PathDecompose, K7OneIteration) {
  Graph g = gen::complete(7);
  auto e = engine_for(g);
  auto pd = path_decompose(g, 1, e);
  expect_decomposition(g, pd, 1);
}

TEST(PathDecompose, RandomFourIterations) {
  Graph g = gen::erdos_renyi(128, 0.25, 2);
  auto e = engine_for(g);
  auto pd = path_decompose(g, 4, e);
  expect_decomposition(g, pd, 4);
  EXPECT_TRUE(pd.trace.violations.empty());
}

TEST(SplitIterations, SmallestPower) {
  EXPECT_EQ(split_iterations(make_rational(1, 4)), 4u);
  EXPECT_EQ(split_iterations(make_rational(1, 8)), 6u);
  EXPECT_EQ(split_iterations(Rational(1)), 0u);
  EXPECT_EQ(split_iterations(make_rational(2, 3)), 1u);
}

void expect_split(const Graph& g, const Rational& eps) {
  auto e = engine_for(g);
  auto r = directed_split(g, eps, e);
  auto out = r.orientation.outdegrees(g), in = r.orientation.indegrees(g);
  for (Vertex v = 0; v < g.num_vertices(); ++v) {
    auto diff = static_cast<std::int64_t>(out[v]) - static_cast<std::int64_t>(in[v]);
    EXPECT_LE(Rational(std::abs(diff)), eps * static_cast<std::int64_t>(g.degree(v)) + 12) << v;
  }
  expect_decomposition(g, r.decomposition, split_iterations(eps));
}

TEST(DirectedSplit, EvenCycle) { expect_split(gen::cycle(20), make_rational(1, 4)); }
TEST(DirectedSplit, K33) { expect_split(gen::complete(33), make_rational(1, 4)); }
TEST(DirectedSplit, Star) { expect_split(gen::star(96), make_rational(1, 8)); }
TEST(DirectedSplit, RandomGraphs) {
  for (std::uint64_t seed = 0; seed < 4; ++seed) expect_split(gen::erdos_renyi(100, 0.2, seed), make_rational(1, 8));
}

TEST(LowOutdegree, Preconditions) {
  Graph g = gen::complete(5);
  sim::Engine e;
  EXPECT_THROW(orient_low_outdegree(g, 128, make_rational(3, 16), e), PreconditionError);
  EXPECT_THROW(orient_low_outdegree(g, 64, make_rational(1, 4), e), PreconditionError);
  EXPECT_THROW(orient_low_outdegree(g, 128, make_rational(1, 2), e), PreconditionError);
}

TEST(LowOutdegree, TreeWithLargeDtilde) {
  Graph g = gen::path(40);
  auto e = engine_for(g);
  auto r = orient_low_outdegree(g, 129, make_rational(1, 4), e);
  EXPECT_TRUE(r.pass);
  EXPECT_LE(r.max_outdeg, 161u);
}

TEST(LowOutdegree, DenseRandom) {
  Graph g = gen::erdos_renyi(120, 0.6, 4);
  std::int64_t dt = static_cast<std::int64_t>(ceil_of(exact_densest(g).D));
  dt = std::max<std::int64_t>(dt, 128);
  auto e = engine_for(g);
  auto r = orient_low_outdegree(g, dt, make_rational(1, 4), e);
  EXPECT_TRUE(r.integral);
  EXPECT_TRUE(r.edge_constraint);
  for (const auto& st : r.steps) {
    EXPECT_TRUE(st.edge_constraint) << st.k;
    EXPECT_TRUE(st.low_bits_zero) << st.k;
    EXPECT_TRUE(st.within_bound) << st.k;
  }
  EXPECT_LE(Rational(static_cast<std::int64_t>(r.max_outdeg)), r.target);
  EXPECT_TRUE(r.trace.violations.empty());
}

}  // namespace
}  // namespace densesim
