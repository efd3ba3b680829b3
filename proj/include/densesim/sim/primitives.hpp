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
#include <limits>
#include <set>
#include <sstream>
#include <string>
#include <unordered_map>
#include <utility>
#include <vector>

#include "densesim/errors.hpp"
#include "densesim/graph.hpp"
#include "densesim/sim/engine.hpp"
#include "densesim/sim/mailbox.hpp"
#include "densesim/sim/topology.hpp"

namespace densesim::sim {

// Induced subgraph on a vertex set, in original ids.
struct Ball {
  std::vector<Vertex> vertices;  // sorted
  std::vector<Edge> edges;       // canonical order

  // The same subgraph relabelled to 0..k-1 in vertex order.
  Graph local_graph() const {
    std::vector<Edge> out;
    out.reserve(edges.size());
    for (const auto& e : edges) out.push_back({local_id(e.u), local_id(e.v)});
    return Graph(vertices.size(), std::move(out));
  }
  Vertex local_id(Vertex v) const {
    return static_cast<Vertex>(std::lower_bound(vertices.begin(), vertices.end(), v) -
                               vertices.begin());
  }
  friend bool operator==(const Ball&, const Ball&) = default;
};

// Edge knowledge spread by neighbourhood gossip; each round forwards only
// what was learned in the previous one.
struct BallGossip {
  std::set<std::pair<Vertex, Vertex>> known;
  std::vector<std::int64_t> fresh;  // flattened pairs not yet forwarded

  void start(Vertex self, std::span<const Port> ports) {
    for (const auto& p : ports) learn(std::min(self, p.peer), std::max(self, p.peer));
  }

  void learn(Vertex a, Vertex b) {
    if (known.emplace(a, b).second) {
      fresh.push_back(a);
      fresh.push_back(b);
    }
  }

  void absorb(const Context& ctx) {
    if (!ctx.any_received()) return;
    for (std::size_t p = 0; p < ctx.degree(); ++p) {
      const Message* m = ctx.received(p);
      if (!m) continue;
      auto items = m->items();
      for (std::size_t i = 0; i + 1 < items.size(); i += 2) {
        learn(static_cast<Vertex>(items[i]), static_cast<Vertex>(items[i + 1]));
      }
    }
  }

  void forward(Context& ctx) {
    if (fresh.empty()) return;
    ctx.send_all(Message::list(std::move(fresh)));
    fresh.clear();
  }

  // Vertices within `radius` of `center` over the known edges, and every known
  // edge between them.
  Ball ball(Vertex center, std::uint64_t radius) const {
    std::unordered_map<Vertex, std::vector<Vertex>> adj;
    for (auto [a, b] : known) {
      adj[a].push_back(b);
      adj[b].push_back(a);
    }
    std::unordered_map<Vertex, std::uint64_t> dist{{center, 0}};
    std::vector<Vertex> frontier{center};
    for (std::uint64_t d = 1; d <= radius && !frontier.empty(); ++d) {
      std::vector<Vertex> next;
      for (Vertex x : frontier) {
        auto it = adj.find(x);
        if (it == adj.end()) continue;
        for (Vertex y : it->second) {
          if (dist.emplace(y, d).second) next.push_back(y);
        }
      }
      frontier.swap(next);
    }
    Ball out;
    for (auto [v, d] : dist) out.vertices.push_back(v);
    std::sort(out.vertices.begin(), out.vertices.end());
    for (auto [a, b] : known) {
      if (dist.count(a) && dist.count(b)) out.edges.push_back({a, b});
    }
    return out;
  }

  std::string serialize() const {
    std::ostringstream os;
    os << "known";
    for (auto [a, b] : known) os << ' ' << a << '-' << b;
    os << " fresh";
    for (auto x : fresh) os << ' ' << x;
    return os.str();
  }
};

struct CollectBallProgram {
  std::uint64_t radius = 0;

  struct State {
    BallGossip gossip;
    Ball ball;
  };

  State init(const VertexInfo& info) const {
    State s;
    s.gossip.start(info.id, info.ports);
    return s;
  }

  void step(State& s, Context& ctx) const {
    s.gossip.absorb(ctx);
    if (ctx.round() <= radius) {
      s.gossip.forward(ctx);
      ctx.wait_until(radius + 1);
      return;
    }
    s.ball = s.gossip.ball(ctx.id(), radius);
    ctx.halt();
  }
};

// Every vertex learns G[N_r(v)] after r+1 rounds. LOCAL only.
inline std::vector<Ball> collect_ball(const Graph& g, std::uint64_t r, Engine& engine) {
  const auto& cfg = engine.config();
  if (cfg.model == Model::congest && cfg.enforcement == Enforcement::strict) {
    throw PreconditionError("collect_ball needs unbounded messages and cannot run under strict CONGEST");
  }
  auto res = engine.run(Topology::of(g), CollectBallProgram{r});
  std::vector<Ball> out;
  out.reserve(res.states.size());
  for (auto& s : res.states) out.push_back(std::move(s.ball));
  return out;
}

enum class FloodOp { min, max };

// Each vertex repeatedly forwards the best value seen until nothing changes.
struct FloodProgram {
  const std::vector<std::int64_t>* values = nullptr;
  FloodOp op = FloodOp::min;

  struct State {
    std::int64_t best = 0;
  };

  State init(const VertexInfo& info) const { return {(*values)[info.id]}; }

  bool better(std::int64_t a, std::int64_t b) const { return op == FloodOp::min ? a < b : a > b; }

  void step(State& s, Context& ctx) const {
    bool changed = ctx.round() == 1;
    for (std::size_t p = 0; p < ctx.degree(); ++p) {
      if (const Message* m = ctx.received(p)) {
        if (better(m->value(), s.best)) {
          s.best = m->value();
          changed = true;
        }
      }
    }
    if (changed) ctx.send_all(Message::word(s.best));
    ctx.wait();
  }
};

inline std::vector<std::int64_t> flood(const Topology& topo, const std::vector<std::int64_t>& values,
                                       FloodOp op, Engine& engine, RunOptions opt = {}) {
  if (values.size() != topo.num_vertices()) throw PreconditionError("one value per vertex required");
  auto res = engine.run(topo, FloodProgram{&values, op}, opt);
  std::vector<std::int64_t> out;
  out.reserve(values.size());
  for (auto& s : res.states) out.push_back(s.best);
  return out;
}

inline std::vector<std::int64_t> component_min(const Graph& g, const std::vector<std::int64_t>& values,
                                               Engine& engine) {
  return flood(Topology::of(g), values, FloodOp::min, engine);
}

inline std::vector<std::int64_t> component_max(const Graph& g, const std::vector<std::int64_t>& values,
                                               Engine& engine) {
  return flood(Topology::of(g), values, FloodOp::max, engine);
}

inline std::vector<bool> component_or(const Graph& g, const std::vector<bool>& bits, Engine& engine) {
  std::vector<std::int64_t> values(bits.begin(), bits.end());
  auto r = flood(Topology::of(g), values, FloodOp::max, engine);
  return std::vector<bool>(r.begin(), r.end());
}

// Rooted spanning tree of one component, seen from one vertex.
struct TreeLinks {
  Vertex root = 0;
  std::int64_t parent_port = -1;  // -1 at the root
  std::vector<std::uint32_t> children;
  std::uint32_t depth = 0;

  bool is_root() const { return parent_port < 0; }
};

// BFS forest rooted at the minimum id of each component. A vertex announces
// its current root to all neighbours, negated towards its chosen parent, so
// the last word on each port tells who its children are.
struct BfsForestProgram {
  struct State {
    Vertex best = 0;
    std::int64_t parent = -1;
    std::uint32_t depth = 0;
    std::vector<char> child;
  };

  State init(const VertexInfo& info) const {
    State s;
    s.best = info.id;
    s.child.assign(info.degree, 0);
    return s;
  }

  void step(State& s, Context& ctx) const {
    if (ctx.round() == 1) {
      ctx.send_all(Message::word(ctx.id()));
      ctx.wait();
      return;
    }
    Vertex fresh = s.best;
    std::int64_t via = -1;
    for (std::size_t p = 0; p < ctx.degree(); ++p) {
      const Message* m = ctx.received(p);
      if (!m) continue;
      std::int64_t x = m->value();
      s.child[p] = x < 0;
      Vertex claimed = static_cast<Vertex>(x < 0 ? -x - 1 : x);
      if (claimed < fresh) {
        fresh = claimed;
        via = static_cast<std::int64_t>(p);
      }
    }
    if (via >= 0) {
      s.best = fresh;
      s.parent = via;
      s.depth = static_cast<std::uint32_t>(ctx.round() - 1);
      for (std::size_t p = 0; p < ctx.degree(); ++p) {
        std::int64_t w = static_cast<std::int64_t>(fresh);
        ctx.send(p, Message::word(static_cast<std::int64_t>(p) == via ? -w - 1 : w));
      }
    }
    ctx.wait();
  }
};

inline std::vector<TreeLinks> bfs_forest(const Topology& topo, Engine& engine, RunOptions opt = {},
                                         RoundTrace* trace = nullptr) {
  auto res = engine.run(topo, BfsForestProgram{}, opt);
  if (trace) trace->append(res.trace);
  std::vector<TreeLinks> out(topo.num_vertices());
  for (Vertex v = 0; v < out.size(); ++v) {
    auto& s = res.states[v];
    out[v].root = s.best;
    out[v].parent_port = s.parent;
    out[v].depth = s.depth;
    for (std::uint32_t p = 0; p < s.child.size(); ++p)
      if (s.child[p]) out[v].children.push_back(p);
  }
  return out;
}

enum class AggOp { sum, min, max, bit_or };

inline std::uint64_t combine(AggOp op, std::uint64_t a, std::uint64_t b) {
  switch (op) {
    case AggOp::sum: return a + b;
    case AggOp::min: return std::min(a, b);
    case AggOp::max: return std::max(a, b);
    case AggOp::bit_or: return a | b;
  }
  return a;
}

// Convergecast to the root, then broadcast of the result. Each vertex waits
// for all children before reporting, so no global clock is needed.
struct TreeAggregateProgram {
  const std::vector<TreeLinks>* trees = nullptr;
  const std::vector<std::uint64_t>* values = nullptr;
  AggOp op = AggOp::sum;
  FrameCodec codec;
  std::size_t frames = 1;

  struct State {
    Mailbox box;
    bool up_sent = false;
    bool done = false;
    std::uint64_t result = 0;
  };

  State init(const VertexInfo& info) const {
    State s;
    s.box.resize(info.degree);
    return s;
  }

  void step(State& s, Context& ctx) const {
    const TreeLinks& t = (*trees)[ctx.id()];
    s.box.receive(ctx);
    if (!s.up_sent) {
      bool all = true;
      for (auto c : t.children) all = all && s.box.ready(c, frames);
      if (all) {
        std::uint64_t acc = (*values)[ctx.id()];
        for (auto c : t.children) acc = combine(op, acc, codec.decode(s.box.in[c], frames));
        s.up_sent = true;
        if (t.is_root()) {
          s.result = acc;
          s.done = true;
          for (auto c : t.children) codec.encode(acc, frames, s.box.out[c]);
        } else {
          codec.encode(acc, frames, s.box.out[t.parent_port]);
        }
      }
    }
    if (s.up_sent && !s.done && s.box.ready(t.parent_port, frames)) {
      s.result = codec.decode(s.box.in[t.parent_port], frames);
      s.done = true;
      for (auto c : t.children) codec.encode(s.result, frames, s.box.out[c]);
    }
    bool more = s.box.flush(ctx);
    if (more) return;
    if (s.done) {
      ctx.halt();
    } else {
      ctx.wait();
    }
  }
};

inline std::vector<std::uint64_t> tree_aggregate(const Topology& topo, const std::vector<TreeLinks>& trees,
                                                 const std::vector<std::uint64_t>& values, AggOp op,
                                                 std::uint64_t result_bound, Engine& engine,
                                                 RunOptions opt = {}) {
  std::size_t net = opt.network_size ? opt.network_size : topo.num_vertices();
  FrameCodec codec(engine.config(), net);
  TreeAggregateProgram prog{&trees, &values, op, codec, codec.frames(result_bound)};
  auto res = engine.run(topo, prog, opt);
  std::vector<std::uint64_t> out;
  out.reserve(values.size());
  for (auto& s : res.states) out.push_back(s.result);
  return out;
}

// Sum over each component via a BFS tree rooted at its minimum id.
inline std::vector<std::uint64_t> component_sum(const Graph& g, const std::vector<std::uint64_t>& values,
                                                Engine& engine) {
  auto topo = Topology::of(g);
  auto trees = bfs_forest(topo, engine);
  std::uint64_t bound = 0;
  for (auto v : values) bound += v;
  return tree_aggregate(topo, trees, values, AggOp::sum, std::max<std::uint64_t>(bound, 1), engine);
}

}  // namespace densesim::sim
