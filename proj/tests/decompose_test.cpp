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

#include <deque>

#include "densesim/decompose.hpp"
#include "densesim/generate.hpp"

namespace densesim {
namespace {

// Eccentricity of the center inside its own cluster, or -1 if disconnected.
std::int64_t cluster_radius(const Graph& g, const Clustering& c, Vertex center) {
  std::vector<std::int64_t> dist(g.num_vertices(), -1);
  std::deque<Vertex> q{center};
  dist[center] = 0;
  std::int64_t far = 0;
  while (!q.empty()) {
    Vertex x = q.front();
    q.pop_front();
    far = std::max(far, dist[x]);
    for (auto inc : g.incident(x)) {
      if (dist[inc.neighbor] >= 0 || c.cluster_of[inc.neighbor] != center) continue;
      dist[inc.neighbor] = dist[x] + 1;
      q.push_back(inc.neighbor);
    }
  }
  for (Vertex v = 0; v < g.num_vertices(); ++v)
    if (c.cluster_of[v] == center && dist[v] < 0) return -1;
  return far;
}

TEST(Ldd, SingleVertex) {
  sim::Engine engine;
  auto c = ldd(Graph(1, std::vector<Edge>{}), make_rational(1, 2), 3, engine);
  EXPECT_EQ(c.centers, std::vector<Vertex>{0});
  EXPECT_EQ(c.cut_edges, 0u);
}

TEST(Ldd, BudgetAndRounds) {
  EXPECT_EQ(ldd_budget(make_rational(1, 4), 128), 59u);
  sim::Engine engine;
  Graph g = gen::connected_random(128, 0.03, 1);
  auto c = ldd(g, make_rational(1, 4), 1, engine);
  EXPECT_LE(engine.trace().rounds_executed, c.delta + 1);
}

TEST(Ldd, ClustersConnectedWithBoundedRadius) {
  for (std::uint64_t seed = 0; seed < 100; ++seed) {
    Graph g = gen::erdos_renyi(128, 0.03, seed);
    sim::Engine engine;
    auto c = ldd(g, make_rational(1, 4), seed, engine);
    for (Vertex center : c.centers) {
      auto r = cluster_radius(g, c, center);
      ASSERT_GE(r, 0);
      EXPECT_LE(static_cast<std::uint64_t>(r), c.delta);
    }
    for (Vertex v = 0; v < g.num_vertices(); ++v) {
      EXPECT_LE(c.depth[v], c.delta);
      EXPECT_EQ(c.cluster_of[c.cluster_of[v]], c.cluster_of[v]);
    }
  }
}

// cluster_of(v) minimises dist(u, v) + shift(u), ties to the smaller u.
TEST(Ldd, MatchesArgminDefinition) {
  Graph g = gen::connected_random(60, 0.05, 9);
  sim::Engine engine;
  auto c = ldd(g, make_rational(1, 3), 17, engine);
  const std::size_t n = g.num_vertices();
  for (Vertex v = 0; v < n; ++v) {
    std::vector<std::int64_t> dist(n, -1);
    std::deque<Vertex> q{v};
    dist[v] = 0;
    while (!q.empty()) {
      Vertex x = q.front();
      q.pop_front();
      for (auto inc : g.incident(x))
        if (dist[inc.neighbor] < 0) {
          dist[inc.neighbor] = dist[x] + 1;
          q.push_back(inc.neighbor);
        }
    }
    Vertex best = 0;
    std::int64_t score = -1;
    for (Vertex u = 0; u < n; ++u) {
      std::int64_t s = dist[u] + static_cast<std::int64_t>(c.shift[u]);
      if (score < 0 || s < score) {
        score = s;
        best = u;
      }
    }
    EXPECT_EQ(c.cluster_of[v], best) << "vertex " << v;
  }
}

TEST(Ldd, Deterministic) {
  Graph g = gen::erdos_renyi(100, 0.05, 2);
  sim::Engine a, b;
  EXPECT_EQ(ldd(g, make_rational(1, 4), 5, a), ldd(g, make_rational(1, 4), 5, b));
}

TEST(Ldd, PathCutFraction) {
  Graph g = gen::path(64);
  std::size_t cut = 0;
  for (std::uint64_t seed = 0; seed < 1000; ++seed) {
    sim::Engine engine;
    cut += ldd(g, make_rational(1, 2), seed, engine).cut_edges;
  }
  double frac = static_cast<double>(cut) / (1000.0 * 63.0);
  EXPECT_LE(frac, 0.5);
}

TEST(Ldd, EmpiricalCutFractionWithinSlack) {
  for (auto [eps, g] : {std::pair{make_rational(1, 4), gen::erdos_renyi(64, 0.1, 3)},
                        std::pair{make_rational(1, 8), gen::cycle(64)}}) {
    std::size_t cut = 0;
    const std::size_t runs = 500;
    for (std::uint64_t seed = 0; seed < runs; ++seed) {
      sim::Engine engine;
      cut += ldd(g, eps, seed, engine).cut_edges;
    }
    double frac = static_cast<double>(cut) / static_cast<double>(runs * g.num_edges());
    EXPECT_LE(frac, 1.1 * to_double(eps));
  }
}

}  // namespace
}  // namespace densesim
