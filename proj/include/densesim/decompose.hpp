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
#include <cmath>
#include <cstdint>
#include <deque>
#include <vector>

#include "densesim/errors.hpp"
#include "densesim/graph.hpp"
#include "densesim/random.hpp"
#include "densesim/rational.hpp"
#include "densesim/sim/engine.hpp"
#include "densesim/sim/topology.hpp"

namespace densesim {

struct Clustering {
  std::vector<Vertex> cluster_of;
  std::vector<Vertex> centers;  // sorted
  std::size_t cut_edges = 0;
  std::uint64_t delta = 0;
  std::vector<std::uint64_t> shift;       // start offset of each vertex
  std::vector<std::int64_t> parent_port;  // -1 at centers
  std::vector<std::uint32_t> depth;       // hops from the center

  bool same_cluster(const Edge& e) const { return cluster_of[e.u] == cluster_of[e.v]; }
  friend bool operator==(const Clustering&, const Clustering&) = default;
};

// ceil((3/eps) ln n); 0 when n <= 1.
inline std::uint64_t ldd_budget(const Rational& eps, std::size_t n) {
  if (n <= 1) return 0;
  return static_cast<std::uint64_t>(std::ceil(3.0 / to_double(eps) * std::log(static_cast<double>(n))));
}

// floor(delta - min(delta_v, delta)) with delta_v ~ Exp(eps).
inline std::uint64_t ldd_shift(double eps, std::uint64_t delta, std::uint64_t seed, Vertex v) {
  double u = CounterRng{seed}.uniform(v, 0, 0);
  double dv = std::min(-std::log(u) / eps, static_cast<double>(delta));
  auto s = static_cast<std::int64_t>(std::floor(static_cast<double>(delta) - dv));
  return static_cast<std::uint64_t>(std::clamp<std::int64_t>(s, 0, static_cast<std::int64_t>(delta)));
}

// Exponential-shift clustering. An unclaimed vertex starts its own cluster
// in round shift+1; a claim travels one hop per round. Earliest arrival wins,
// then the smaller center id.
struct LddProgram {
  double eps = 0.5;
  std::uint64_t delta = 0;
  std::uint64_t seed = 0;

  struct State {
    std::uint64_t shift = 0;
    std::int64_t center = -1;
    std::int64_t parent = -1;
  };

  State init(const sim::VertexInfo& info) const {
    State s;
    s.shift = ldd_shift(eps, delta, seed, info.id);
    return s;
  }

  void step(State& s, sim::Context& ctx) const {
    std::int64_t best = -1, via = -1;
    for (std::size_t p = 0; p < ctx.degree(); ++p) {
      const sim::Message* m = ctx.received(p);
      if (!m) continue;
      if (best < 0 || m->value() < best) {
        best = m->value();
        via = static_cast<std::int64_t>(p);
      }
    }
    bool own = ctx.round() == s.shift + 1;
    if (own && (best < 0 || static_cast<std::int64_t>(ctx.id()) < best)) {
      best = ctx.id();
      via = -1;
    }
    if (best < 0) {
      ctx.wait_until(s.shift + 1);
      return;
    }
    s.center = best;
    s.parent = via;
    for (std::size_t p = 0; p < ctx.degree(); ++p)
      if (static_cast<std::int64_t>(p) != via) ctx.send(p, sim::Message::word(best));
    ctx.halt();
  }
};

inline Clustering ldd(const Graph& g, const Rational& eps, std::uint64_t seed, sim::Engine& engine) {
  if (!(eps > 0 && eps < 1)) throw PreconditionError("ldd needs 0 < eps < 1");
  const std::size_t n = g.num_vertices();
  LddProgram prog{to_double(eps), ldd_budget(eps, n), seed};
  auto res = engine.run(sim::Topology::of(g), prog);
  Clustering c;
  c.delta = prog.delta;
  c.cluster_of.resize(n);
  c.shift.resize(n);
  c.parent_port.resize(n);
  c.depth.assign(n, 0);
  for (Vertex v = 0; v < n; ++v) {
    const auto& s = res.states[v];
    if (s.center < 0) throw InvariantViolation("vertex left unclustered");
    c.cluster_of[v] = static_cast<Vertex>(s.center);
    c.shift[v] = s.shift;
    c.parent_port[v] = s.parent;
    if (s.parent < 0) c.centers.push_back(v);
  }
  for (Vertex v = 0; v < n; ++v) {
    std::uint32_t d = 0;
    for (Vertex x = v; c.parent_port[x] >= 0; ++d) x = g.incident(x)[c.parent_port[x]].neighbor;
    c.depth[v] = d;
  }
  for (const auto& e : g.edges())
    if (!c.same_cluster(e)) ++c.cut_edges;
  return c;
}

}  // namespace densesim
