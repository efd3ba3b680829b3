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
#include <vector>

#include "densesim/errors.hpp"
#include "densesim/graph.hpp"
#include "densesim/orient/weak.hpp"
#include "densesim/orientation.hpp"
#include "densesim/rational.hpp"
#include "densesim/sim/engine.hpp"
#include "densesim/sim/topology.hpp"

namespace densesim {

struct PathDecomposition {
  std::vector<std::vector<Vertex>> paths;   // vertex sequences
  std::vector<std::vector<EdgeId>> edges;   // edges[i][j] joins paths[i][j], paths[i][j+1]
  std::vector<std::size_t> endpoint_count;  // a closed path counts twice at its end
  std::size_t iterations = 0;
  std::vector<std::size_t> weak_phases;     // per boosting iteration
  sim::RoundTrace trace;

  std::size_t max_length() const {
    std::size_t l = 0;
    for (const auto& e : edges) l = std::max(l, e.size());
    return l;
  }
};

// Every edge in exactly one path, consecutive path edges adjacent, counts consistent.
inline bool is_path_partition(const Graph& g, const PathDecomposition& pd) {
  std::vector<char> used(g.num_edges(), 0);
  std::vector<std::size_t> ends(g.num_vertices(), 0);
  if (pd.paths.size() != pd.edges.size()) return false;
  for (std::size_t i = 0; i < pd.paths.size(); ++i) {
    const auto& vs = pd.paths[i];
    const auto& es = pd.edges[i];
    if (es.empty() || vs.size() != es.size() + 1) return false;
    for (std::size_t j = 0; j < es.size(); ++j) {
      if (es[j] >= g.num_edges() || used[es[j]]) return false;
      used[es[j]] = 1;
      const Edge& e = g.edge(es[j]);
      if (!((e.u == vs[j] && e.v == vs[j + 1]) || (e.v == vs[j] && e.u == vs[j + 1]))) return false;
    }
    ++ends[vs.front()];
    ++ends[vs.back()];
  }
  if (std::find(used.begin(), used.end(), 0) != used.end()) return false;
  return ends == pd.endpoint_count;
}

namespace orient_detail {

// Tells the partner link of each pair over the virtual links; one virtual round.
struct PairNotice {
  const std::vector<std::vector<std::uint32_t>>* paired_ports = nullptr;
  struct State {};
  State init(const sim::VertexInfo&) const { return {}; }
  void step(State&, sim::Context& ctx) const {
    if (ctx.round() == 1)
      for (auto p : (*paired_ports)[ctx.id()]) ctx.send(p, sim::Message::word(1));
    ctx.halt();
  }
};

// A token walks each path from its first vertex; every hop fixes one edge.
struct PathWalk {
  const std::vector<std::vector<std::int64_t>>* next = nullptr;  // per in-port, the out-port or -1
  const std::vector<std::vector<std::uint32_t>>* starts = nullptr;
  struct State {};
  State init(const sim::VertexInfo&) const { return {}; }
  void step(State&, sim::Context& ctx) const {
    if (ctx.round() == 1)
      for (auto p : (*starts)[ctx.id()]) ctx.send(p, sim::Message::word(1));
    for (std::size_t p = 0; p < ctx.degree(); ++p) {
      if (!ctx.received(p)) continue;
      std::int64_t q = (*next)[ctx.id()][p];
      if (q >= 0) ctx.send(static_cast<std::size_t>(q), sim::Message::word(1));
    }
    ctx.wait();
  }
};

inline void orient_to_start(std::vector<Vertex>& vs, std::vector<EdgeId>& es, Vertex start) {
  if (vs.front() == start) return;
  std::reverse(vs.begin(), vs.end());
  std::reverse(es.begin(), es.end());
}

}  // namespace orient_detail

// Boosting from single-edge paths, `iterations` times.
inline PathDecomposition path_decompose(const Graph& g, std::size_t iterations, sim::Engine& engine) {
  using namespace orient_detail;
  const std::size_t n = g.num_vertices();
  PathDecomposition pd;
  for (EdgeId e = 0; e < g.num_edges(); ++e) {
    pd.paths.push_back({g.edge(e).u, g.edge(e).v});
    pd.edges.push_back({e});
  }
  for (std::size_t it = 0; it < iterations; ++it) {
    std::vector<std::pair<Vertex, Vertex>> links;
    std::vector<std::uint64_t> hops;
    for (std::size_t i = 0; i < pd.paths.size(); ++i) {
      links.emplace_back(pd.paths[i].front(), pd.paths[i].back());
      hops.push_back(pd.edges[i].size());
    }
    auto topo = sim::Topology::of_links(n, links, hops);
    sim::RunOptions opt;
    opt.stretch = std::max<std::size_t>(1, pd.max_length());
    opt.network_size = n;
    auto weak = weak_orient_links(topo, engine, opt);
    pd.trace.append(weak.trace);
    pd.weak_phases.push_back(weak.phases);

    // partner[l] = the link l is joined with at the vertex where l is outgoing.
    std::vector<std::int64_t> partner(pd.paths.size(), -1);
    std::vector<Vertex> joint(pd.paths.size(), 0);
    std::vector<std::vector<std::uint32_t>> paired_ports(n);
    for (Vertex v = 0; v < n; ++v) {
      std::vector<std::pair<std::uint32_t, std::uint32_t>> outgoing;  // (link, port)
      for (std::size_t p = 0; p < topo.degree(v); ++p)
        if (port_out(topo, weak.forward, v, p)) outgoing.emplace_back(topo.port(v, p).link, static_cast<std::uint32_t>(p));
      std::sort(outgoing.begin(), outgoing.end());
      std::size_t pairs = topo.degree(v) / 3 / 2;
      if (outgoing.size() < 2 * pairs) throw InvariantViolation("weak orientation left too few outgoing links");
      for (std::size_t j = 0; j < pairs; ++j) {
        auto a = outgoing[2 * j], b = outgoing[2 * j + 1];
        partner[a.first] = b.first;
        partner[b.first] = a.first;
        joint[a.first] = joint[b.first] = v;
        paired_ports[v].push_back(a.second);
        paired_ports[v].push_back(b.second);
      }
    }
    auto notice = engine.run(topo, PairNotice{&paired_ports}, opt);
    pd.trace.append(notice.trace);

    PathDecomposition next;
    for (std::size_t i = 0; i < pd.paths.size(); ++i) {
      if (partner[i] < 0) {
        next.paths.push_back(std::move(pd.paths[i]));
        next.edges.push_back(std::move(pd.edges[i]));
        continue;
      }
      auto j = static_cast<std::size_t>(partner[i]);
      if (j < i) continue;
      Vertex u = joint[i];
      auto vs = std::move(pd.paths[i]);
      auto es = std::move(pd.edges[i]);
      orient_to_start(vs, es, u);
      std::reverse(vs.begin(), vs.end());
      std::reverse(es.begin(), es.end());
      auto ws = std::move(pd.paths[j]);
      auto fs = std::move(pd.edges[j]);
      orient_to_start(ws, fs, u);
      vs.insert(vs.end(), ws.begin() + 1, ws.end());
      es.insert(es.end(), fs.begin(), fs.end());
      next.paths.push_back(std::move(vs));
      next.edges.push_back(std::move(es));
    }
    pd.paths = std::move(next.paths);
    pd.edges = std::move(next.edges);
    ++pd.iterations;
  }
  pd.endpoint_count.assign(n, 0);
  for (const auto& vs : pd.paths) {
    ++pd.endpoint_count[vs.front()];
    ++pd.endpoint_count[vs.back()];
  }
  return pd;
}

// Smallest i with (3/2)^i >= 1/eps.
inline std::size_t split_iterations(const Rational& eps) {
  if (eps <= 0) throw PreconditionError("eps must be positive");
  Rational x = 1;
  std::size_t i = 0;
  while (x * eps < 1) {
    x *= make_rational(3, 2);
    ++i;
  }
  return i;
}

struct SplitResult {
  Orientation orientation;
  PathDecomposition decomposition;
  sim::RoundTrace trace;
};

// Every edge follows its path; |outdeg - indeg| <= eps deg + 12.
inline SplitResult directed_split(const Graph& g, const Rational& eps, sim::Engine& engine) {
  using namespace orient_detail;
  SplitResult res;
  res.decomposition = path_decompose(g, split_iterations(eps), engine);
  res.trace = res.decomposition.trace;
  const auto& pd = res.decomposition;
  const std::size_t n = g.num_vertices();
  res.orientation = Orientation(g.num_edges());
  std::vector<std::vector<std::int64_t>> next(n);
  std::vector<std::vector<std::uint32_t>> starts(n);
  std::vector<std::vector<std::uint32_t>> port_of(n);
  for (Vertex v = 0; v < n; ++v) next[v].assign(g.degree(v), -1);
  auto port_at = [&](Vertex v, EdgeId e) {
    auto inc = g.incident(v);
    for (std::size_t p = 0; p < inc.size(); ++p)
      if (inc[p].edge == e) return static_cast<std::uint32_t>(p);
    throw InvariantViolation("edge not incident");
  };
  for (std::size_t i = 0; i < pd.paths.size(); ++i) {
    const auto& vs = pd.paths[i];
    const auto& es = pd.edges[i];
    starts[vs.front()].push_back(port_at(vs.front(), es.front()));
    for (std::size_t j = 0; j < es.size(); ++j) {
      res.orientation.point(g, es[j], vs[j + 1]);
      if (j + 1 < es.size()) next[vs[j + 1]][port_at(vs[j + 1], es[j])] = port_at(vs[j + 1], es[j + 1]);
    }
  }
  auto walk = engine.run(sim::Topology::of(g), PathWalk{&next, &starts});
  res.trace.append(walk.trace);
  return res;
}

}  // namespace densesim
