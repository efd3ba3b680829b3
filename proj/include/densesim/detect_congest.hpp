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
#include <optional>
#include <vector>

#include "densesim/decompose.hpp"
#include "densesim/errors.hpp"
#include "densesim/graph.hpp"
#include "densesim/mwu.hpp"
#include "densesim/random.hpp"
#include "densesim/rational.hpp"
#include "densesim/sim/engine.hpp"
#include "densesim/sim/primitives.hpp"
#include "densesim/sim/topology.hpp"

namespace densesim {

struct CongestOptions {
  std::optional<std::uint64_t> trials;   // default ceil(log2 n) + 5
  std::optional<std::uint64_t> primal_T; // default from eps/8
};

struct CongestDetection {
  Subset marked;
  Rational density;  // 0 when empty
  std::uint64_t trials = 0;
  std::vector<std::size_t> marked_per_trial;
  sim::RoundTrace trace;
};

namespace detail {

// Every non-center tells its parent it is a child; one round.
struct ChildNotice {
  const std::vector<std::int64_t>* parent = nullptr;
  struct State {
    std::vector<std::uint32_t> children;
  };
  State init(const sim::VertexInfo&) const { return {}; }
  void step(State& s, sim::Context& ctx) const {
    if (ctx.round() == 1) {
      std::int64_t p = (*parent)[ctx.id()];
      if (p >= 0) ctx.send(static_cast<std::size_t>(p), sim::Message::word(0));
      ctx.wait_until(2);
      return;
    }
    for (std::size_t q = 0; q < ctx.degree(); ++q)
      if (ctx.received(q)) s.children.push_back(static_cast<std::uint32_t>(q));
    ctx.halt();
  }
};

// Links of g whose endpoints satisfy keep(e), in edge id order.
template <class Keep>
sim::Topology restricted_topology(const Graph& g, Keep keep) {
  std::vector<std::pair<Vertex, Vertex>> links;
  for (const auto& e : g.edges())
    if (keep(e)) links.emplace_back(e.u, e.v);
  return sim::Topology::of_links(g.num_vertices(), links);
}

// Port of edge e at v inside a topology built from kept edges in id order.
inline std::int64_t restricted_port(const Graph& g, Vertex v, EdgeId e, const std::vector<char>& kept) {
  std::int64_t port = 0;
  for (auto inc : g.incident(v)) {
    if (inc.edge == e) return port;
    if (kept[inc.edge]) ++port;
  }
  return -1;
}

}  // namespace detail

inline CongestDetection congest_detect(const Graph& g, const Rational& dtilde, const Rational& eps, std::uint64_t seed,
                                       sim::Engine& engine, CongestOptions options = {}) {
  if (!(eps > 0 && eps < make_rational(1, 4))) throw PreconditionError("eps must lie in (0, 1/4)");
  if (dtilde <= 0) throw PreconditionError("Dtilde must be positive");
  const std::size_t n = g.num_vertices();
  CongestDetection out;
  out.trials = options.trials ? *options.trials : sim::ceil_log2(n) + 5;
  out.marked = Subset(n);
  const Rational z = (1 - eps / 2) * dtilde;
  const Rational eps_inner = eps / 8;
  const std::uint64_t T = options.primal_T ? *options.primal_T : default_iterations(eps_inner, n);

  for (std::uint64_t trial = 0; trial < out.trials; ++trial) {
    std::uint64_t trial_seed = hash_key(seed, trial);
    sim::Engine stage(engine.config());
    Clustering c = ldd(g, eps / 2, trial_seed, stage);

    std::vector<char> intra(g.num_edges(), 0);
    for (EdgeId e = 0; e < g.num_edges(); ++e) intra[e] = c.same_cluster(g.edge(e));
    auto cluster_topo = detail::restricted_topology(g, [&](const Edge& e) { return c.same_cluster(e); });

    std::vector<std::int64_t> parent(n, -1);
    for (Vertex v = 0; v < n; ++v) {
      if (c.parent_port[v] < 0) continue;
      EdgeId e = g.incident(v)[static_cast<std::size_t>(c.parent_port[v])].edge;
      parent[v] = detail::restricted_port(g, v, e, intra);
    }
    auto notice = stage.run(cluster_topo, detail::ChildNotice{&parent});
    std::vector<sim::TreeLinks> trees(n);
    for (Vertex v = 0; v < n; ++v) {
      trees[v].root = c.cluster_of[v];
      trees[v].parent_port = parent[v];
      trees[v].depth = c.depth[v];
      trees[v].children = notice.states[v].children;
    }

    std::vector<std::uint64_t> bits(n);
    for (Vertex v = 0; v < n; ++v) bits[v] = out.marked.contains(v) ? 1 : 0;
    auto busy = sim::tree_aggregate(cluster_topo, trees, bits, sim::AggOp::bit_or, 1, stage);

    std::vector<char> open(g.num_edges(), 0);
    for (EdgeId e = 0; e < g.num_edges(); ++e) open[e] = intra[e] && !busy[g.edge(e).u];
    auto work_topo = detail::restricted_topology(g, [&](const Edge& e) { return c.same_cluster(e) && !busy[e.u]; });
    std::vector<sim::TreeLinks> work_trees(n);
    for (Vertex v = 0; v < n; ++v)
      if (!busy[v]) work_trees[v] = trees[v];
    auto run = run_mwu(MwuMode::primal, work_topo, work_trees, z, eps_inner, T, g.num_edges(), stage);

    std::size_t fresh = 0;
    for (Vertex v = 0; v < n; ++v) {
      if (!run.states[v].marked) continue;
      if (out.marked.contains(v)) throw InvariantViolation("vertex marked twice");
      out.marked.insert(v);
      ++fresh;
    }
    out.marked_per_trial.push_back(fresh);
    out.trace.append(stage.trace());
  }
  out.density = out.marked.empty() ? Rational(0) : density(g, out.marked);
  return out;
}

struct ApproxResult {
  Subset output;
  Rational D_hat;
  std::vector<Rational> phases;
  std::vector<std::int64_t> chosen_phase;  // per vertex; -1 if none
  sim::RoundTrace trace;
};

// Guesses from 1/2 up to (n-1)/2 on a dyadic grid; each step is the largest
// grid point not above (1+eps) times the previous one.
inline std::vector<Rational> phase_grid(const Rational& eps, std::size_t n) {
  std::int64_t s = 4;
  while (Rational(BigInt(1) << static_cast<unsigned>(s)) * eps < 16) ++s;
  const BigInt unit = BigInt(1) << static_cast<unsigned>(s);
  const Rational top = make_rational(static_cast<std::int64_t>(n > 0 ? n - 1 : 0), 2);
  std::vector<Rational> out;
  for (Rational d = make_rational(1, 2); d <= top;) {
    out.push_back(d);
    d = Rational(floor_of(d * (1 + eps) * unit)) / unit;
  }
  return out;
}

inline ApproxResult approx_densest(const Graph& g, const Rational& eps, std::uint64_t seed, sim::Engine& engine,
                                   CongestOptions options = {}) {
  if (!(eps > 0 && eps < make_rational(1, 4))) throw PreconditionError("eps must lie in (0, 1/4)");
  const std::size_t n = g.num_vertices();
  ApproxResult out;
  out.output = Subset(n);
  out.D_hat = 0;
  out.chosen_phase.assign(n, -1);
  if (g.num_edges() == 0) return out;
  out.phases = phase_grid(eps, n);
  std::vector<std::int64_t> psi(n, 0);  // phase index + 1, 0 if never marked
  std::vector<Subset> marks;
  for (std::size_t i = 0; i < out.phases.size(); ++i) {
    sim::Engine stage(engine.config());
    auto r = congest_detect(g, out.phases[i], eps, hash_key(seed, i), stage, options);
    out.trace.append(r.trace);
    for (Vertex v = 0; v < n; ++v)
      if (r.marked.contains(v)) psi[v] = static_cast<std::int64_t>(i) + 1;
    marks.push_back(std::move(r.marked));
  }
  sim::Engine stage(engine.config());
  auto j = sim::component_max(g, psi, stage);
  out.trace.append(stage.trace());
  for (Vertex v = 0; v < n; ++v) {
    out.chosen_phase[v] = j[v] - 1;
    if (j[v] > 0 && marks[static_cast<std::size_t>(j[v] - 1)].contains(v)) out.output.insert(v);
  }
  if (!out.output.empty()) out.D_hat = density(g, out.output);
  return out;
}

}  // namespace densesim
