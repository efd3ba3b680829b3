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
#include <vector>

#include "densesim/errors.hpp"
#include "densesim/graph.hpp"
#include "densesim/orientation.hpp"
#include "densesim/sim/engine.hpp"
#include "densesim/sim/mailbox.hpp"
#include "densesim/sim/topology.hpp"

namespace densesim {

// Per link: true when it points from its first end to its second end.
using LinkDirections = std::vector<char>;

namespace orient_detail {

// 0 for the first end of the link, 1 for the second. Self-loops use port order.
inline int port_side(const sim::Topology& topo, Vertex v, std::size_t p) {
  const auto& port = topo.port(v, p);
  auto [a, b] = topo.link_ends(port.link);
  if (a != b) return v == a ? 0 : 1;
  return p < port.peer_port ? 0 : 1;
}

inline bool port_out(const sim::Topology& topo, const LinkDirections& fwd, Vertex v, std::size_t p) {
  return (port_side(topo, v, p) == 0) == (fwd[topo.port(v, p).link] != 0);
}

// Copies hold ports [3c, 3c+3).
inline std::size_t copy_count(std::size_t degree) { return (degree + 2) / 3; }

inline bool is_sink(const std::vector<char>& out, std::size_t c) {
  if (3 * c + 3 > out.size()) return false;
  return !out[3 * c] && !out[3 * c + 1] && !out[3 * c + 2];
}

enum class CopyType : std::uint8_t { sink, relay, open };

inline CopyType copy_type(const std::vector<char>& out, std::size_t c) {
  std::size_t end = std::min(out.size(), 3 * c + 3);
  if (end - 3 * c < 3) return CopyType::open;
  std::size_t in = 0;
  for (std::size_t p = 3 * c; p < end; ++p) in += out[p] ? 0 : 1;
  if (in == 3) return CopyType::sink;
  if (in == 2) return CopyType::relay;
  return CopyType::open;
}

// One augmentation phase: reverse BFS from all sinks, accept convergecast,
// then flips along the accepted paths. Every value uses `k` frames, so a
// step lasts k rounds.
struct WeakPhaseProgram {
  const sim::Topology* topo = nullptr;
  const LinkDirections* fwd = nullptr;
  std::uint64_t W = 1;
  sim::FrameCodec codec;
  std::size_t k = 1;
  std::uint64_t n = 1;

  static constexpr std::int64_t kNone = -1;

  struct Copy {
    CopyType type = CopyType::open;
    bool claimed = false;
    bool endpoint = false;
    bool forwarded = false;
    std::uint64_t root = 0;
    std::int64_t parent = kNone;
    std::int64_t child = kNone;
    std::uint64_t best = 0;  // smallest accepted endpoint id seen
  };

  struct State {
    std::vector<char> out;
    std::vector<Copy> copies;
    sim::Mailbox box;
  };

  std::uint64_t accept_start() const { return W + 1; }
  std::uint64_t flip_start() const { return 2 * W + 2; }
  std::uint64_t last_step() const { return 3 * W + 3; }

  State init(const sim::VertexInfo& info) const {
    State s;
    s.out.resize(info.degree);
    for (std::size_t p = 0; p < info.degree; ++p) s.out[p] = port_out(*topo, *fwd, info.id, p);
    s.copies.resize(copy_count(info.degree));
    for (std::size_t c = 0; c < s.copies.size(); ++c) s.copies[c].type = copy_type(s.out, c);
    s.box.resize(info.degree);
    return s;
  }

  std::uint64_t copy_id(Vertex v, std::size_t c) const { return static_cast<std::uint64_t>(c) * n + v; }

  void send(State& s, std::size_t port, std::uint64_t value) const { codec.encode(value, k, s.box.out[port]); }

  void step(State& s, sim::Context& ctx) const {
    s.box.receive(ctx);
    const std::uint64_t r = ctx.round() - 1;
    if (r % k == 0) on_step(s, ctx, r / k);
    if (s.box.flush(ctx)) return;
    std::uint64_t step = r / k;
    if (step >= last_step()) {
      ctx.halt();
      return;
    }
    ctx.wait_until((step + 1) * k + 1);
  }

  void on_step(State& s, sim::Context& ctx, std::uint64_t step) const {
    const Vertex v = ctx.id();
    // Values that finished arriving belong to the previous step.
    std::vector<std::int64_t> got(s.out.size(), kNone);
    for (std::size_t p = 0; p < s.out.size(); ++p)
      if (s.box.ready(p, k)) got[p] = static_cast<std::int64_t>(codec.decode(s.box.in[p], k));
    const std::uint64_t prev = step - 1;

    if (step == 0) {
      for (std::size_t c = 0; c < s.copies.size(); ++c) {
        auto& cp = s.copies[c];
        if (cp.type != CopyType::sink) continue;
        cp.claimed = true;
        cp.root = copy_id(v, c);
        for (std::size_t p = 3 * c; p < 3 * c + 3; ++p) send(s, p, cp.root);
      }
      return;
    }

    if (prev <= W) {
      // Joins arrive on out-ports.
      for (std::size_t c = 0; c < s.copies.size(); ++c) {
        auto& cp = s.copies[c];
        if (cp.claimed) continue;
        std::size_t end = std::min(s.out.size(), 3 * c + 3);
        for (std::size_t p = 3 * c; p < end; ++p) {
          if (got[p] == kNone || !s.out[p]) continue;
          auto root = static_cast<std::uint64_t>(got[p]);
          if (!cp.claimed || root < cp.root) {
            cp.claimed = true;
            cp.root = root;
            cp.parent = static_cast<std::int64_t>(p);
          }
        }
        if (!cp.claimed) continue;
        if (cp.type == CopyType::open) {
          cp.endpoint = true;
        } else if (step <= W) {
          for (std::size_t p = 3 * c; p < end; ++p)
            if (!s.out[p]) send(s, p, cp.root);
        }
      }
    } else if (prev >= accept_start() && prev < flip_start()) {
      // Accepts arrive on in-ports, from children.
      for (std::size_t c = 0; c < s.copies.size(); ++c) {
        auto& cp = s.copies[c];
        if (!cp.claimed || cp.endpoint || cp.forwarded) continue;
        std::size_t end = std::min(s.out.size(), 3 * c + 3);
        for (std::size_t p = 3 * c; p < end; ++p) {
          if (got[p] == kNone || s.out[p]) continue;
          auto id = static_cast<std::uint64_t>(got[p]);
          if (cp.child == kNone || id < cp.best) {
            cp.child = static_cast<std::int64_t>(p);
            cp.best = id;
          }
        }
        if (cp.child == kNone) continue;
        cp.forwarded = true;
        if (cp.type != CopyType::sink && step < flip_start()) send(s, static_cast<std::size_t>(cp.parent), cp.best);
      }
    } else if (prev >= flip_start()) {
      // A flip arrives on the parent port and continues to the chosen child.
      for (std::size_t c = 0; c < s.copies.size(); ++c) {
        auto& cp = s.copies[c];
        if (!cp.claimed || cp.parent == kNone) continue;
        auto pp = static_cast<std::size_t>(cp.parent);
        if (got[pp] == kNone) continue;
        s.out[pp] = 0;
        if (cp.child != kNone) {
          auto cc = static_cast<std::size_t>(cp.child);
          s.out[cc] = 1;
          if (step <= last_step() - 1) send(s, cc, 1);
        }
      }
    }

    if (step == accept_start()) {
      for (std::size_t c = 0; c < s.copies.size(); ++c) {
        auto& cp = s.copies[c];
        if (!cp.endpoint) continue;
        cp.forwarded = true;
        send(s, static_cast<std::size_t>(cp.parent), copy_id(v, c));
      }
    }
    if (step == flip_start()) {
      for (auto& cp : s.copies) {
        if (cp.type != CopyType::sink || cp.child == kNone) continue;
        auto cc = static_cast<std::size_t>(cp.child);
        s.out[cc] = 1;
        send(s, cc, 1);
      }
    }
  }
};

inline std::uint64_t weak_window(std::size_t n) {
  return 2 * sim::ceil_log2(std::max<std::size_t>(n, 2)) + 1;
}

inline std::size_t weak_phase_budget(std::size_t n) { return 8 * sim::ceil_log2(std::max<std::size_t>(n, 2)); }

inline std::vector<std::vector<char>> port_views(const sim::Topology& topo, const LinkDirections& fwd) {
  std::vector<std::vector<char>> out(topo.num_vertices());
  for (Vertex v = 0; v < topo.num_vertices(); ++v) {
    out[v].resize(topo.degree(v));
    for (std::size_t p = 0; p < topo.degree(v); ++p) out[v][p] = port_out(topo, fwd, v, p);
  }
  return out;
}

// Sinks as (vertex, copy) pairs in increasing order.
inline std::vector<std::pair<Vertex, std::size_t>> sink_list(const sim::Topology& topo, const LinkDirections& fwd) {
  std::vector<std::pair<Vertex, std::size_t>> out;
  auto views = port_views(topo, fwd);
  for (Vertex v = 0; v < topo.num_vertices(); ++v)
    for (std::size_t c = 0; c < copy_count(views[v].size()); ++c)
      if (is_sink(views[v], c)) out.emplace_back(v, c);
  return out;
}

}  // namespace orient_detail

struct WeakLinkResult {
  LinkDirections forward;
  std::size_t phases = 0;
  std::vector<std::size_t> sinks;  // before each phase, then after the last
  sim::RoundTrace trace;
};

// Links start pointing to the larger id (self-loops from first port to second).
inline LinkDirections initial_directions(const sim::Topology& topo) {
  LinkDirections fwd(topo.num_links());
  for (std::uint32_t l = 0; l < topo.num_links(); ++l) {
    auto [a, b] = topo.link_ends(l);
    fwd[l] = a <= b ? 1 : 0;
  }
  return fwd;
}

inline WeakLinkResult weak_orient_links(const sim::Topology& topo, sim::Engine& engine, sim::RunOptions opt = {}) {
  using namespace orient_detail;
  const std::size_t n = opt.network_size ? opt.network_size : topo.num_vertices();
  WeakLinkResult res;
  res.forward = initial_directions(topo);
  auto sinks = sink_list(topo, res.forward);
  res.sinks.push_back(sinks.size());
  sim::FrameCodec codec(engine.config(), n);
  const std::uint64_t big = static_cast<std::uint64_t>(n) * n * n;
  WeakPhaseProgram prog{&topo, &res.forward, weak_window(n), codec, codec.frames(big), n};
  while (!sinks.empty()) {
    if (res.phases == weak_phase_budget(n)) throw InvariantViolation("weak orientation exceeded its phase budget");
    auto run = engine.run(topo, prog, opt);
    res.trace.append(run.trace);
    ++res.phases;
    LinkDirections next(topo.num_links(), 0);
    std::vector<char> seen(topo.num_links(), 0);
    for (Vertex v = 0; v < topo.num_vertices(); ++v) {
      for (std::size_t p = 0; p < topo.degree(v); ++p) {
        auto l = topo.port(v, p).link;
        bool out = run.states[v].out[p] != 0;
        bool f = (port_side(topo, v, p) == 0) == out;
        if (seen[l] && next[l] != f) throw InvariantViolation("endpoints disagree on a link direction");
        seen[l] = 1;
        next[l] = f;
      }
    }
    res.forward = std::move(next);
    auto after = sink_list(topo, res.forward);
    if (!std::includes(sinks.begin(), sinks.end(), after.begin(), after.end()))
      throw InvariantViolation("augmentation created a new sink");
    if (after.size() >= sinks.size()) throw InvariantViolation("sink count did not decrease");
    sinks = std::move(after);
    res.sinks.push_back(sinks.size());
  }
  return res;
}

struct WeakOrientation {
  Orientation orientation;
  std::size_t phases = 0;
  std::vector<std::size_t> sinks;
  sim::RoundTrace trace;
};

// outdeg(v) >= floor(deg(v)/3) for every v.
inline WeakOrientation weak_orientation(const Graph& g, sim::Engine& engine) {
  auto topo = sim::Topology::of(g);
  auto r = weak_orient_links(topo, engine);
  WeakOrientation out;
  out.orientation = Orientation(g.num_edges());
  for (EdgeId e = 0; e < g.num_edges(); ++e) out.orientation.toward_larger[e] = r.forward[e] == (g.edge(e).u < g.edge(e).v);
  out.phases = r.phases;
  out.sinks = std::move(r.sinks);
  out.trace = std::move(r.trace);
  return out;
}

}  // namespace densesim
