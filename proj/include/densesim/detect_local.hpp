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
#include <map>
#include <memory>
#include <mutex>
#include <set>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include "densesim/decompose.hpp"
#include "densesim/errors.hpp"
#include "densesim/graph.hpp"
#include "densesim/oracle.hpp"
#include "densesim/rational.hpp"
#include "densesim/sim/engine.hpp"
#include "densesim/sim/primitives.hpp"

namespace densesim {

// 2 * ceil((6/eps) ln n).
inline std::uint64_t local_radius(const Rational& eps, std::size_t n) { return 2 * ldd_budget(eps / 2, n); }

struct LocalDetection {
  Subset marked;
  std::vector<Vertex> black;
  Rational density;  // of the marked set; 0 when empty
  std::uint64_t radius = 0;
  sim::RoundTrace trace;
};

struct DirectedLocalDetection {
  std::vector<Vertex> s, t;  // 0: none, i: black vertex i-1
  std::vector<Vertex> black;
  std::uint64_t radius = 0;
  sim::RoundTrace trace;

  // Nonempty (S_i, T_i) pairs keyed by label.
  std::map<Vertex, std::pair<Subset, Subset>> groups() const {
    std::map<Vertex, std::pair<Subset, Subset>> out;
    const std::size_t n = s.size();
    auto slot = [&](Vertex label) -> std::pair<Subset, Subset>& {
      return out.try_emplace(label, Subset(n), Subset(n)).first->second;
    };
    for (Vertex v = 0; v < n; ++v) {
      if (s[v]) slot(s[v]).first.insert(v);
      if (t[v]) slot(t[v]).second.insert(v);
    }
    return out;
  }
};

// What a vertex decides from its ball: a vertex set (or an (S, T) pair) and
// whether it is dense enough.
struct LocalChoice {
  std::vector<Vertex> first;   // H, or S
  std::vector<Vertex> second;  // T (directed only)
  bool active = false;
};

inline constexpr std::size_t kDirectedBallLimit = 12;

// Densest (S, T) of a small digraph. For each S, the best T of each size takes
// the vertices with most arcs from S (ties: smaller id).
struct SmallDirectedDensest {
  std::uint32_t s_mask = 0, t_mask = 0;
  DirectedDensity density;
};

inline SmallDirectedDensest small_directed_densest(std::size_t k, const std::vector<std::pair<Vertex, Vertex>>& arcs) {
  if (k > kDirectedBallLimit) throw PreconditionError("ball too large for exact directed oracle");
  std::vector<std::uint32_t> out(k, 0);
  for (auto [a, b] : arcs) out[a] |= 1u << b;
  SmallDirectedDensest best;
  std::vector<std::uint32_t> indeg(k);
  std::vector<Vertex> order(k);
  for (std::uint32_t sm = 1; sm < (1u << k); ++sm) {
    std::fill(indeg.begin(), indeg.end(), 0);
    for (std::uint32_t rest = sm; rest; rest &= rest - 1) {
      for (std::uint32_t tg = out[std::countr_zero(rest)]; tg; tg &= tg - 1) ++indeg[std::countr_zero(tg)];
    }
    for (Vertex i = 0; i < k; ++i) order[i] = i;
    std::stable_sort(order.begin(), order.end(), [&](Vertex a, Vertex b) { return indeg[a] > indeg[b]; });
    std::uint64_t ks = std::popcount(sm), e = 0;
    std::uint32_t tm = 0;
    for (std::size_t j = 1; j <= k; ++j) {
      e += indeg[order[j - 1]];
      tm |= 1u << order[j - 1];
      if (e == 0) continue;
      const auto& b = best.density;
      if (best.s_mask == 0 || e * e * b.s_size * b.t_size > b.arcs * b.arcs * ks * j) best = {sm, tm, {e, ks, j}};
    }
  }
  return best;
}

namespace detail {

// Ball solutions are shared across vertices with identical balls.
class BallCache {
 public:
  template <class F>
  LocalChoice get(const sim::Ball& ball, F&& solve) {
    auto key = std::make_pair(ball.vertices, ball.edges);
    {
      std::lock_guard lock(mu_);
      auto it = memo_.find(key);
      if (it != memo_.end()) return it->second;
    }
    LocalChoice c = solve();
    std::lock_guard lock(mu_);
    memo_.emplace(std::move(key), c);
    return c;
  }

 private:
  std::mutex mu_;
  std::map<std::pair<std::vector<Vertex>, std::vector<Edge>>, LocalChoice> memo_;
};

}  // namespace detail

// Gather the r-ball, pick a dense part of it, elect the smallest active id
// within distance 2r, and let elected vertices announce their choice for r
// rounds. Round milestones: r+1, 3r+1, 4r+1.
struct LocalDetectProgram {
  std::uint64_t r = 0;
  Rational threshold;  // (1 - eps) * Dtilde
  const DirectedGraph* directed = nullptr;
  std::shared_ptr<detail::BallCache> cache = std::make_shared<detail::BallCache>();

  struct State {
    sim::BallGossip gossip;
    LocalChoice choice;
    std::int64_t best = -1;
    bool black = false;
    std::int64_t label_first = -1, label_second = -1;
    std::set<Vertex> relayed;

    std::string serialize() const {
      std::ostringstream os;
      os << gossip.serialize() << " active " << choice.active << " best " << best << " black " << black
         << " labels " << label_first << ' ' << label_second << " relayed " << relayed.size();
      return os.str();
    }
  };

  State init(const sim::VertexInfo& info) const {
    State s;
    if (!directed) {
      s.gossip.start(info.id, info.ports);
    } else {
      for (const auto& p : info.ports) {
        if (directed->has_arc(info.id, p.peer)) s.gossip.learn(info.id, p.peer);
        if (directed->has_arc(p.peer, info.id)) s.gossip.learn(p.peer, info.id);
      }
    }
    return s;
  }

  LocalChoice solve(const sim::Ball& ball) const {
    LocalChoice c;
    const std::size_t k = ball.vertices.size();
    if (!directed) {
      Graph local = ball.local_graph();
      if (local.num_edges() == 0) {
        c.first = {ball.vertices.front()};
        c.active = threshold <= 0;
        return c;
      }
      auto res = exact_densest(local);
      for (Vertex i : res.best_subset.members()) c.first.push_back(ball.vertices[i]);
      c.active = res.D >= threshold;
      return c;
    }
    if (k > kDirectedBallLimit) throw PreconditionError("ball too large for exact directed oracle");
    std::vector<std::pair<Vertex, Vertex>> arcs;
    for (const auto& e : ball.edges) arcs.emplace_back(ball.local_id(e.u), ball.local_id(e.v));
    auto best = small_directed_densest(k, arcs);
    if (best.s_mask == 0) return c;
    for (Vertex i = 0; i < k; ++i) {
      if ((best.s_mask >> i) & 1) c.first.push_back(ball.vertices[i]);
      if ((best.t_mask >> i) & 1) c.second.push_back(ball.vertices[i]);
    }
    c.active = best.density.at_least(threshold);
    return c;
  }

  void step(State& s, sim::Context& ctx) const {
    const std::uint64_t R = ctx.round();
    const std::uint64_t m1 = r + 1, m2 = 3 * r + 1, m3 = 4 * r + 1;
    if (R <= m1) s.gossip.absorb(ctx);
    if (R <= r) s.gossip.forward(ctx);
    if (R == m1) {
      sim::Ball ball = s.gossip.ball(ctx.id(), r);
      s.choice = cache->get(ball, [&] { return solve(ball); });
      s.gossip.fresh.clear();
    }

    if (R >= m1 && R <= m2) {
      bool improved = R == m1 && s.choice.active;
      if (improved) s.best = ctx.id();
      if (R > m1) {
        for (std::size_t p = 0; p < ctx.degree(); ++p) {
          const sim::Message* m = ctx.received(p);
          if (m && (s.best < 0 || m->value() < s.best)) {
            s.best = m->value();
            improved = true;
          }
        }
      }
      if (improved && R < m2) ctx.send_all(sim::Message::word(s.best));
    }

    std::vector<std::int64_t> relay;
    if (R == m2) {
      s.black = s.choice.active && s.best == static_cast<std::int64_t>(ctx.id());
      if (s.black) {
        accept(s, ctx.id(), s.choice.first, s.choice.second, ctx.id());
        s.relayed.insert(ctx.id());
        append(relay, ctx.id(), s.choice.first, s.choice.second);
      }
    }
    if (R > m2 && R <= m3) {
      for (std::size_t p = 0; p < ctx.degree(); ++p) {
        const sim::Message* m = ctx.received(p);
        if (!m) continue;
        auto items = m->items();
        for (std::size_t i = 0; i < items.size();) {
          auto owner = static_cast<Vertex>(items[i]);
          std::size_t a = static_cast<std::size_t>(items[i + 1]);
          std::size_t b = static_cast<std::size_t>(items[i + 2]);
          std::vector<Vertex> first(items.begin() + i + 3, items.begin() + i + 3 + a);
          std::vector<Vertex> second(items.begin() + i + 3 + a, items.begin() + i + 3 + a + b);
          i += 3 + a + b;
          if (!s.relayed.insert(owner).second) continue;
          accept(s, owner, first, second, ctx.id());
          append(relay, owner, first, second);
        }
      }
    }
    if (!relay.empty() && R < m3) ctx.send_all(sim::Message::list(std::move(relay)));

    if (R >= m3) {
      ctx.halt();
    } else {
      ctx.wait_until(R < m1 ? m1 : R < m2 ? m2 : m3);
    }
  }

  static void append(std::vector<std::int64_t>& out, Vertex owner, const std::vector<Vertex>& a,
                     const std::vector<Vertex>& b) {
    out.push_back(owner);
    out.push_back(static_cast<std::int64_t>(a.size()));
    out.push_back(static_cast<std::int64_t>(b.size()));
    out.insert(out.end(), a.begin(), a.end());
    out.insert(out.end(), b.begin(), b.end());
  }

  static void accept(State& s, Vertex owner, const std::vector<Vertex>& a, const std::vector<Vertex>& b, Vertex self) {
    if (std::binary_search(a.begin(), a.end(), self)) s.label_first = owner;
    if (std::binary_search(b.begin(), b.end(), self)) s.label_second = owner;
  }
};

inline LocalDetectProgram make_local_program(std::size_t n, const Rational& dtilde, const Rational& eps) {
  if (!(eps > 0 && eps < 1)) throw PreconditionError("eps must lie in (0, 1)");
  if (dtilde < 0) throw PreconditionError("Dtilde must be non-negative");
  LocalDetectProgram prog;
  prog.r = local_radius(eps, n);
  prog.threshold = (1 - eps) * dtilde;
  return prog;
}

inline LocalDetection local_detect(const Graph& g, const Rational& dtilde, const Rational& eps, sim::Engine& engine) {
  if (engine.config().model != sim::Model::local) throw PreconditionError("local_detect runs in the LOCAL model");
  auto prog = make_local_program(g.num_vertices(), dtilde, eps);
  auto res = engine.run(sim::Topology::of(g), prog);
  LocalDetection out;
  out.radius = prog.r;
  out.trace = res.trace;
  out.marked = Subset(g.num_vertices());
  for (Vertex v = 0; v < g.num_vertices(); ++v) {
    if (res.states[v].black) out.black.push_back(v);
    if (res.states[v].label_first >= 0) out.marked.insert(v);
  }
  out.density = out.marked.empty() ? Rational(0) : density(g, out.marked);
  return out;
}

inline DirectedLocalDetection local_detect_directed(const DirectedGraph& g, const Rational& dtilde, const Rational& eps,
                                                    sim::Engine& engine) {
  if (engine.config().model != sim::Model::local) throw PreconditionError("local_detect runs in the LOCAL model");
  auto prog = make_local_program(g.num_vertices(), dtilde, eps);
  prog.directed = &g;
  auto res = engine.run(sim::Topology::of(g.underlying()), prog);
  DirectedLocalDetection out;
  out.radius = prog.r;
  out.trace = res.trace;
  out.s.assign(g.num_vertices(), 0);
  out.t.assign(g.num_vertices(), 0);
  for (Vertex v = 0; v < g.num_vertices(); ++v) {
    const auto& st = res.states[v];
    if (st.black) out.black.push_back(v);
    if (st.label_first >= 0) out.s[v] = static_cast<Vertex>(st.label_first + 1);
    if (st.label_second >= 0) out.t[v] = static_cast<Vertex>(st.label_second + 1);
  }
  return out;
}

}  // namespace densesim
