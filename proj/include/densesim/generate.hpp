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

#pragma once

#include <algorithm>
#include <cstdint>
#include <numeric>
#include <string>
#include <utility>
#include <vector>

#include "densesim/errors.hpp"
#include "densesim/graph.hpp"
#include "densesim/random.hpp"
#include "densesim/rational.hpp"

namespace densesim::gen {

inline void require(bool ok, const std::string& what) {
  if (!ok) throw PreconditionError(what);
}

inline Graph path(std::size_t n) {
  require(n >= 1, "path needs at least one vertex");
  std::vector<Edge> e;
  for (Vertex i = 0; i + 1 < n; ++i) e.push_back({i, i + 1});
  return Graph(n, std::move(e));
}

inline Graph cycle(std::size_t n) {
  require(n >= 3, "cycle needs at least three vertices");
  std::vector<Edge> e;
  for (Vertex i = 0; i < n; ++i) e.push_back({i, static_cast<Vertex>((i + 1) % n)});
  return Graph(n, std::move(e));
}

inline Graph complete(std::size_t n) {
  require(n >= 1, "complete graph needs at least one vertex");
  std::vector<Edge> e;
  for (Vertex i = 0; i < n; ++i)
    for (Vertex j = i + 1; j < n; ++j) e.push_back({i, j});
  return Graph(n, std::move(e));
}

// Center 0 joined to leaves 1..k.
inline Graph star(std::size_t leaves) {
  std::vector<Edge> e;
  for (Vertex i = 1; i <= leaves; ++i) e.push_back({0, i});
  return Graph(leaves + 1, std::move(e));
}

inline Graph erdos_renyi(std::size_t n, double p, std::uint64_t seed) {
  require(n >= 1, "graph needs at least one vertex");
  require(p >= 0.0 && p <= 1.0, "edge probability must lie in [0, 1]");
  SplitMix64 rng(seed);
  std::vector<Edge> e;
  for (Vertex i = 0; i < n; ++i)
    for (Vertex j = i + 1; j < n; ++j)
      if (rng.uniform() < p) e.push_back({i, j});
  return Graph(n, std::move(e));
}

inline Graph disjoint_union(const Graph& a, const Graph& b) {
  std::vector<Edge> e = a.edges();
  auto shift = static_cast<Vertex>(a.num_vertices());
  for (const auto& x : b.edges()) e.push_back({x.u + shift, x.v + shift});
  return Graph(a.num_vertices() + b.num_vertices(), std::move(e));
}

// G(n, p) with a clique on clique_size random vertices.
inline Graph planted_dense(std::size_t n, std::size_t clique_size, std::uint64_t seed, double p = 0.05) {
  require(n >= 1 && clique_size >= 1, "sizes must be at least 1");
  require(clique_size <= n, "clique larger than the graph");
  Graph base = erdos_renyi(n, p, seed);
  SplitMix64 rng(hash_key(seed, 0x706c616e74ULL));
  std::vector<Vertex> perm(n);
  std::iota(perm.begin(), perm.end(), 0);
  for (std::size_t i = 0; i < clique_size; ++i) {
    std::swap(perm[i], perm[i + rng.below(n - i)]);
  }
  std::vector<Edge> e = base.edges();
  for (std::size_t i = 0; i < clique_size; ++i)
    for (std::size_t j = i + 1; j < clique_size; ++j) {
      Vertex a = std::min(perm[i], perm[j]), b = std::max(perm[i], perm[j]);
      if (!base.has_edge(a, b)) e.push_back({a, b});
    }
  return Graph(n, std::move(e));
}

// Two cliques joined by a path with path_len edges. Vertices 0..k-1 form the
// first clique, the last k the second.
inline Graph barbell(std::size_t clique_size, std::size_t path_len) {
  require(clique_size >= 1 && path_len >= 1, "sizes must be at least 1");
  const std::size_t k = clique_size;
  const std::size_t n = 2 * k + path_len - 1;
  std::vector<Edge> e;
  for (Vertex i = 0; i < k; ++i)
    for (Vertex j = i + 1; j < k; ++j) e.push_back({i, j});
  auto second = static_cast<Vertex>(n - k);
  for (Vertex i = 0; i < k; ++i)
    for (Vertex j = i + 1; j < k; ++j) e.push_back({second + i, second + j});
  Vertex prev = static_cast<Vertex>(k - 1);
  for (std::size_t s = 1; s <= path_len; ++s) {
    Vertex next = s == path_len ? second : static_cast<Vertex>(k - 1 + s);
    e.push_back({prev, next});
    prev = next;
  }
  return Graph(n, std::move(e));
}

// Cycle and path on 4/(10 eps) + 1 vertices; 1/(10 eps) must be an integer.
inline std::pair<Graph, Graph> lowerbound_pair(const Rational& eps) {
  require(eps > 0 && eps < 1, "eps must lie in (0, 1)");
  Rational inv = 1 / (10 * eps);
  require(is_integer(inv), "1/(10 eps) must be an integer");
  auto l = (4 * inv + 1).convert_to<std::size_t>();
  return {cycle(l), path(l)};
}

// Random simple d-regular graph by the pairing model with restarts.
inline Graph random_regular(std::size_t n, std::size_t d, std::uint64_t seed) {
  require(n >= 1 && d < n && (n * d) % 2 == 0, "no d-regular graph with these parameters");
  SplitMix64 rng(seed);
  for (;;) {
    std::vector<Vertex> points;
    for (Vertex v = 0; v < n; ++v)
      for (std::size_t i = 0; i < d; ++i) points.push_back(v);
    for (std::size_t i = points.size(); i > 1; --i) std::swap(points[i - 1], points[rng.below(i)]);
    std::vector<Edge> e;
    bool ok = true;
    for (std::size_t i = 0; i + 1 < points.size() && ok; i += 2) {
      Vertex a = std::min(points[i], points[i + 1]), b = std::max(points[i], points[i + 1]);
      ok = a != b;
      e.push_back({a, b});
    }
    if (!ok) continue;
    std::sort(e.begin(), e.end());
    if (std::adjacent_find(e.begin(), e.end()) != e.end()) continue;
    return Graph(n, std::move(e));
  }
}

// G(n, p) plus a random spanning tree, so the result is connected.
inline Graph connected_random(std::size_t n, double p, std::uint64_t seed) {
  Graph base = erdos_renyi(n, p, seed);
  SplitMix64 rng(hash_key(seed, 0x74726565ULL));
  std::vector<Edge> e = base.edges();
  for (Vertex v = 1; v < n; ++v) {
    auto parent = static_cast<Vertex>(rng.below(v));
    if (!base.has_edge(parent, v)) e.push_back({parent, v});
  }
  return Graph(n, std::move(e));
}

// Vertex v points to a_1..a_x and b_1..b_x point to u. Ids: v = 0,
// a_i = i, b_i = x + i, u = 2x + 1.
inline DirectedGraph two_stars(std::size_t x) {
  require(x >= 1, "x must be at least 1");
  std::vector<Arc> arcs;
  auto u = static_cast<Vertex>(2 * x + 1);
  for (Vertex i = 1; i <= x; ++i) {
    arcs.push_back({0, i});
    arcs.push_back({static_cast<Vertex>(x + i), u});
  }
  return DirectedGraph(2 * x + 2, std::move(arcs));
}

inline DirectedGraph disjoint_union(const DirectedGraph& a, const DirectedGraph& b) {
  std::vector<Arc> arcs = a.arcs();
  auto shift = static_cast<Vertex>(a.num_vertices());
  for (const auto& x : b.arcs()) arcs.push_back({x.from + shift, x.to + shift});
  return DirectedGraph(a.num_vertices() + b.num_vertices(), std::move(arcs));
}

}  // namespace densesim::gen
