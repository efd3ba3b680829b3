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
#include <array>
#include <cmath>
#include <cstdint>
#include <optional>
#include <vector>

#include "densesim/errors.hpp"
#include "densesim/graph.hpp"
#include "densesim/rational.hpp"
#include "densesim/sim/engine.hpp"
#include "densesim/sim/mailbox.hpp"
#include "densesim/sim/primitives.hpp"
#include "densesim/sim/topology.hpp"

namespace densesim {

// Loads are 2*twos + rho*rhos with rho = z - 2(ceil(z/2) - 1) = p/q. Scaled by
// q they become plain integers, so comparisons are exact.
struct LoadScale {
  std::size_t half = 1;  // ceil(z/2)
  std::int64_t p = 1, q = 1;

  static LoadScale of(const Rational& z) {
    if (z <= 0) throw PreconditionError("z must be positive");
    LoadScale s;
    BigInt h = ceil_of(z / 2);
    s.half = h.convert_to<std::size_t>();
    Rational rho = z - 2 * (Rational(h) - 1);
    s.p = numerator_of(rho).convert_to<std::int64_t>();
    s.q = denominator_of(rho).convert_to<std::int64_t>();
    return s;
  }
  Rational rho() const { return make_rational(p, q); }
  std::int64_t key(std::int64_t twos, std::int64_t rhos) const { return 2 * twos * q + rhos * p; }
  std::int64_t floor(std::int64_t key) const { return key / q; }
  std::int64_t ceil(std::int64_t key) const { return (key + q - 1) / q; }
};

// A load a + b*rho as an exact value.
struct LoadValue {
  std::int64_t a = 0;
  std::int64_t b = 0;
  Rational value(const Rational& z) const { return Rational(a) + Rational(b) * LoadScale::of(z).rho(); }
};

// ceil((8/eps^2) ln n) rounded up to a power of two.
inline std::uint64_t default_iterations(const Rational& eps, std::size_t n) {
  double e = to_double(eps);
  double raw = std::ceil(8.0 / (e * e) * std::log(std::max<double>(2.0, static_cast<double>(n))));
  std::uint64_t t = 1;
  while (static_cast<double>(t) < raw) t <<= 1;
  return t;
}

// Smallest k with 2^k >= x, for x > 0.
inline std::uint64_t ceil_log2(const Rational& x) {
  BigInt a = numerator_of(x), b = denominator_of(x);
  std::uint64_t k = 0;
  BigInt pow = 1;
  while (pow * b < a) {
    pow <<= 1;
    ++k;
  }
  return k;
}

// ceil((1/eps) * (7/10) * ceil(log2(2m/eps))); 7/10 bounds ln 2 from above.
inline std::uint64_t level_span(const Rational& eps, std::size_t m) {
  if (m == 0) return 0;
  Rational x = Rational(2 * static_cast<std::int64_t>(m)) / eps;
  Rational span = Rational(BigInt(ceil_log2(x))) * make_rational(7, 10) / eps;
  return ceil_of(span).convert_to<std::uint64_t>();
}

enum class MwuMode { dual, primal };

// Both multiplicative-weight loops as one vertex program. Per iteration each
// link carries, in order: the allocation code (0 none, 1 rho, 2 two), then in
// primal mode the sender's threshold level and, on tree links, the level
// search traffic (up: floor-min, theta-min, theta-max, counts per level;
// down: first level, level count, decision).
struct MwuProgram {
  MwuMode mode = MwuMode::dual;
  const std::vector<sim::TreeLinks>* trees = nullptr;
  LoadScale scale;
  std::uint64_t T = 1;
  std::uint64_t span = 0;
  std::int64_t cnum = 0, cden = 1;  // (1 - 3 eps) z
  sim::FrameCodec codec;
  std::size_t k_val = 1, k_len = 1, k_cnt = 1;
  std::uint64_t inf = 1;

  enum class Phase { alloc, edge, up, down, counts, decide, finish };

  struct State {
    sim::Mailbox box;
    std::vector<std::int64_t> key;
    std::vector<std::uint32_t> twos, rhos;
    std::vector<std::uint8_t> code, peer_code;
    std::vector<std::uint64_t> peer_theta;
    std::vector<std::size_t> order;
    std::uint64_t t = 1;
    Phase phase = Phase::alloc;
    std::uint64_t theta = 0, fmin = 0;
    std::uint64_t up_fmin = 0, up_tmin = 0, up_tmax = 0;
    std::uint64_t lo = 0, levels = 0, j = 0, decision = 0;
    std::vector<std::uint64_t> edge_levels;
    std::size_t edge_ptr = 0;
    bool done = false;
    bool marked = false;
    std::uint64_t success_iteration = 0;
  };

  State init(const sim::VertexInfo& info) const {
    State s;
    s.box.resize(info.degree);
    s.key.assign(info.degree, 0);
    s.twos.assign(info.degree, 0);
    s.rhos.assign(info.degree, 0);
    s.code.assign(info.degree, 0);
    s.peer_code.assign(info.degree, 0);
    s.peer_theta.assign(info.degree, 0);
    s.order.resize(info.degree);
    s.done = info.degree == 0;
    return s;
  }

  void allocate(State& s) const {
    const std::size_t deg = s.key.size();
    for (std::size_t i = 0; i < deg; ++i) s.order[i] = i;
    const std::size_t k = scale.half;
    auto less = [&](std::size_t a, std::size_t b) { return s.key[a] != s.key[b] ? s.key[a] < s.key[b] : a < b; };
    if (k <= deg) std::nth_element(s.order.begin(), s.order.begin() + (k - 1), s.order.end(), less);
    std::fill(s.code.begin(), s.code.end(), 0);
    std::int64_t twos = 0, rhos = 0;
    for (std::size_t i = 0; i < std::min(k - 1, deg); ++i) {
      s.code[s.order[i]] = 2;
      ++twos;
    }
    if (deg >= k) {
      s.code[s.order[k - 1]] = 1;
      ++rhos;
    }
    if (scale.key(twos, rhos) > scale.key(static_cast<std::int64_t>(k) - 1, 1)) {
      throw InvariantViolation("allocation exceeds the per-vertex budget");
    }
    if (mode == MwuMode::primal) {
      s.theta = deg >= k ? static_cast<std::uint64_t>(scale.ceil(s.key[s.order[k - 1]])) : inf;
      std::int64_t f = -1;
      for (auto x : s.key) f = f < 0 ? scale.floor(x) : std::min(f, scale.floor(x));
      s.fmin = f < 0 ? inf : static_cast<std::uint64_t>(f);
    }
    for (std::size_t p = 0; p < deg; ++p) {
      s.box.out[p].push_back(s.code[p]);
      if (mode == MwuMode::primal) codec.encode(s.theta, k_val, s.box.out[p]);
    }
  }

  void apply(State& s) const {
    for (std::size_t p = 0; p < s.key.size(); ++p) {
      auto add = [&](std::uint8_t c) {
        if (c == 2) s.key[p] += 2 * scale.q;
        if (c == 1) s.key[p] += scale.p;
      };
      add(s.code[p]);
      add(s.peer_code[p]);
      if (s.code[p] == 2) ++s.twos[p];
      if (s.code[p] == 1) ++s.rhos[p];
    }
    ++s.t;
    if (s.t > T) s.done = true;
    s.phase = Phase::alloc;
  }

  bool test(std::uint64_t N, std::uint64_t M) const {
    return N > 0 && static_cast<__int128>(M) * cden >= static_cast<__int128>(cnum) * static_cast<__int128>(N);
  }

  void open_counts(State& s, sim::Context& ctx) const {
    s.j = 0;
    s.decision = 0;
    s.edge_levels.clear();
    s.edge_ptr = 0;
    for (std::size_t p = 0; p < s.key.size(); ++p) {
      if (ctx.peer(p) > ctx.id()) s.edge_levels.push_back(std::max(s.theta, s.peer_theta[p]));
    }
    std::sort(s.edge_levels.begin(), s.edge_levels.end());
    s.phase = Phase::counts;
  }

  bool advance(State& s, sim::Context& ctx) const {
    const sim::TreeLinks& tl = (*trees)[ctx.id()];
    auto& in = s.box.in;
    auto& out = s.box.out;
    switch (s.phase) {
      case Phase::alloc:
        allocate(s);
        s.phase = Phase::edge;
        return true;
      case Phase::edge: {
        std::size_t need = 1 + (mode == MwuMode::primal ? k_val : 0);
        for (std::size_t p = 0; p < in.size(); ++p)
          if (!s.box.ready(p, need)) return false;
        for (std::size_t p = 0; p < in.size(); ++p) {
          s.peer_code[p] = static_cast<std::uint8_t>(in[p].front());
          in[p].pop_front();
          if (mode == MwuMode::primal) s.peer_theta[p] = codec.decode(in[p], k_val);
        }
        if (mode == MwuMode::dual) {
          apply(s);
        } else {
          s.phase = Phase::up;
        }
        return true;
      }
      case Phase::up: {
        for (auto c : tl.children)
          if (!s.box.ready(c, 3 * k_val)) return false;
        std::uint64_t fmin = s.fmin, tmin = s.theta, tmax = s.theta == inf ? 0 : s.theta;
        for (auto c : tl.children) {
          fmin = std::min(fmin, codec.decode(in[c], k_val));
          tmin = std::min(tmin, codec.decode(in[c], k_val));
          tmax = std::max(tmax, codec.decode(in[c], k_val));
        }
        if (tl.is_root()) {
          s.lo = std::max(fmin, tmin);
          s.levels = 0;
          if (fmin != inf && tmin != inf) {
            std::uint64_t hi = std::max(fmin, std::min(fmin + span, tmax));
            if (hi >= s.lo) s.levels = hi - s.lo + 1;
          }
          for (auto c : tl.children) {
            codec.encode(s.lo, k_val, out[c]);
            codec.encode(s.levels, k_len, out[c]);
          }
          open_counts(s, ctx);
        } else {
          auto& up = out[tl.parent_port];
          codec.encode(fmin, k_val, up);
          codec.encode(tmin, k_val, up);
          codec.encode(tmax, k_val, up);
          s.phase = Phase::down;
        }
        return true;
      }
      case Phase::down: {
        auto pp = static_cast<std::size_t>(tl.parent_port);
        if (!s.box.ready(pp, k_val + k_len)) return false;
        s.lo = codec.decode(in[pp], k_val);
        s.levels = codec.decode(in[pp], k_len);
        for (auto c : tl.children) {
          codec.encode(s.lo, k_val, out[c]);
          codec.encode(s.levels, k_len, out[c]);
        }
        open_counts(s, ctx);
        return true;
      }
      case Phase::counts: {
        bool moved = false;
        while (s.j < s.levels) {
          bool all = true;
          for (auto c : tl.children) all = all && s.box.ready(c, 2 * k_cnt);
          if (!all) break;
          std::uint64_t level = s.lo + s.j;
          while (s.edge_ptr < s.edge_levels.size() && s.edge_levels[s.edge_ptr] <= level) ++s.edge_ptr;
          std::uint64_t N = s.theta <= level ? 1 : 0, M = s.edge_ptr;
          for (auto c : tl.children) {
            N += codec.decode(in[c], k_cnt);
            M += codec.decode(in[c], k_cnt);
          }
          if (tl.is_root()) {
            if (s.decision == 0 && test(N, M)) s.decision = s.j + 1;
          } else {
            codec.encode(N, k_cnt, out[tl.parent_port]);
            codec.encode(M, k_cnt, out[tl.parent_port]);
          }
          ++s.j;
          moved = true;
        }
        if (s.j < s.levels) return moved;
        if (tl.is_root()) {
          for (auto c : tl.children) codec.encode(s.decision, k_len, out[c]);
          s.phase = Phase::finish;
        } else {
          s.phase = Phase::decide;
        }
        return true;
      }
      case Phase::decide: {
        auto pp = static_cast<std::size_t>(tl.parent_port);
        if (!s.box.ready(pp, k_len)) return false;
        s.decision = codec.decode(in[pp], k_len);
        for (auto c : tl.children) codec.encode(s.decision, k_len, out[c]);
        s.phase = Phase::finish;
        return true;
      }
      case Phase::finish:
        if (s.decision) {
          s.marked = s.theta <= s.lo + s.decision - 1;
          s.success_iteration = s.t;
          s.done = true;
        } else {
          apply(s);
        }
        return true;
    }
    return false;
  }

  void step(State& s, sim::Context& ctx) const {
    s.box.receive(ctx);
    while (!s.done && advance(s, ctx)) {
    }
    if (s.box.flush(ctx)) return;
    if (s.done) {
      ctx.halt();
    } else {
      ctx.wait();
    }
  }
};

struct MwuRun {
  std::vector<MwuProgram::State> states;
  sim::RoundTrace trace;
};

// Runs either loop on an arbitrary communication topology. In primal mode
// every component needs a spanning tree in `trees`.
inline MwuRun run_mwu(MwuMode mode, const sim::Topology& topo, const std::vector<sim::TreeLinks>& trees,
                      const Rational& z, const Rational& eps, std::uint64_t T, std::size_t m_for_span,
                      sim::Engine& engine, sim::RunOptions opt = {}) {
  if (!(eps > 0 && eps <= make_rational(1, 4))) throw PreconditionError("eps must lie in (0, 1/4]");
  if (T == 0) throw PreconditionError("T must be positive");
  MwuProgram prog;
  prog.mode = mode;
  prog.trees = &trees;
  prog.scale = LoadScale::of(z);
  prog.T = T;
  std::size_t net = opt.network_size ? opt.network_size : topo.num_vertices();
  __int128 top = static_cast<__int128>(4) * static_cast<__int128>(T + 1) *
                 static_cast<__int128>(std::max(prog.scale.p, prog.scale.q));
  if (top > static_cast<__int128>(INT64_MAX / 4)) throw PreconditionError("load range does not fit 64 bits");
  if (mode == MwuMode::primal) {
    prog.span = level_span(eps, m_for_span);
    Rational c = (1 - 3 * eps) * z;
    prog.cnum = numerator_of(c).convert_to<std::int64_t>();
    prog.cden = denominator_of(c).convert_to<std::int64_t>();
    prog.codec = sim::FrameCodec(engine.config(), net);
    prog.inf = 4 * T + 1;
    prog.k_val = prog.codec.frames(prog.inf);
    prog.k_len = prog.codec.frames(prog.span + 2);
    prog.k_cnt = prog.codec.frames(static_cast<std::uint64_t>(net) * net);
  }
  auto res = engine.run(topo, prog, opt);
  return {std::move(res.states), std::move(res.trace)};
}

struct DualSolution {
  Rational z;
  Rational eps;
  std::uint64_t T = 0;
  std::vector<std::array<Rational, 2>> alpha;  // [edge][0] at edge.u, [1] at edge.v
  bool feasible = false;
  std::size_t bit_width = 0;
};

// Both constraint families of DUAL((1+2eps) z), exactly.
inline bool dual_feasible(const Graph& g, const std::vector<std::array<Rational, 2>>& alpha, const Rational& budget) {
  std::vector<Rational> load(g.num_vertices());
  for (EdgeId e = 0; e < g.num_edges(); ++e) {
    if (alpha[e][0] < 0 || alpha[e][1] < 0) return false;
    if (alpha[e][0] + alpha[e][1] < 1) return false;
    load[g.edge(e).u] += alpha[e][0];
    load[g.edge(e).v] += alpha[e][1];
  }
  for (const auto& l : load)
    if (l > budget) return false;
  return true;
}

// Width of the dyadic numerator alpha * T / eps over all entries; 0 counts as
// one bit. Needs integer z, eps = 2^-k and T a power of two.
inline std::size_t alpha_bit_width(const DualSolution& sol) {
  long eexp = 0, texp = 0;
  if (!is_integer(sol.z)) throw PreconditionError("bit width needs an integer z");
  if (!is_power_of_two(sol.eps, &eexp) || eexp >= 0) throw PreconditionError("bit width needs eps = 2^-k");
  if (!is_power_of_two(Rational(BigInt(sol.T)), &texp)) throw PreconditionError("bit width needs T a power of two");
  Rational scale = Rational(BigInt(sol.T)) / sol.eps;
  std::size_t width = 1;
  for (const auto& pair : sol.alpha) {
    for (const auto& a : pair) {
      Rational x = a * scale;
      if (!is_integer(x)) throw InvariantViolation("alpha is not dyadic at the expected scale");
      width = std::max(width, bit_length(numerator_of(x)));
    }
  }
  auto limit = static_cast<std::size_t>(texp - eexp + 4);
  if (width > limit) throw InvariantViolation("alpha bit width " + std::to_string(width) + " above " + std::to_string(limit));
  return width;
}

struct DualResult {
  DualSolution solution;
  std::vector<std::int64_t> edge_load_scaled;  // load * q per edge
  sim::RoundTrace trace;
};

inline DualResult fractional_dual(const Graph& g, const Rational& z, const Rational& eps,
                                  std::optional<std::uint64_t> T_override, sim::Engine& engine) {
  const std::uint64_t T = T_override ? *T_override : default_iterations(eps, g.num_vertices());
  auto topo = sim::Topology::of(g);
  std::vector<sim::TreeLinks> none(g.num_vertices());
  auto run = run_mwu(MwuMode::dual, topo, none, z, eps, T, g.num_edges(), engine);
  LoadScale scale = LoadScale::of(z);
  DualResult out;
  auto& sol = out.solution;
  sol.z = z;
  sol.eps = eps;
  sol.T = T;
  sol.alpha.assign(g.num_edges(), {Rational(0), Rational(0)});
  out.edge_load_scaled.assign(g.num_edges(), 0);
  Rational factor = (1 + 2 * eps) / Rational(BigInt(T));
  for (Vertex v = 0; v < g.num_vertices(); ++v) {
    auto inc = g.incident(v);
    const auto& st = run.states[v];
    for (std::size_t p = 0; p < inc.size(); ++p) {
      EdgeId e = inc[p].edge;
      int side = g.edge(e).u == v ? 0 : 1;
      sol.alpha[e][side] = (Rational(2 * static_cast<std::int64_t>(st.twos[p])) +
                            Rational(static_cast<std::int64_t>(st.rhos[p])) * scale.rho()) * factor;
      if (side == 0) out.edge_load_scaled[e] = st.key[p];
      if (side == 1 && out.edge_load_scaled[e] != st.key[p]) throw InvariantViolation("edge load differs between endpoints");
    }
  }
  sol.feasible = dual_feasible(g, sol.alpha, (1 + 2 * eps) * z);
  sol.bit_width = 1;
  for (const auto& pair : sol.alpha)
    for (const auto& a : pair) {
      Rational x = a * Rational(BigInt(T)) / eps;
      sol.bit_width = std::max(sol.bit_width, bit_length(floor_of(x)));
    }
  out.trace = run.trace;
  return out;
}

struct PrimalResult {
  std::optional<Subset> subset;
  std::uint64_t iteration = 0;  // first successful iteration (0 if none)
  sim::RoundTrace trace;
};

inline PrimalResult integral_primal(const Graph& g, const Rational& z, const Rational& eps,
                                    std::optional<std::uint64_t> T_override, sim::Engine& engine) {
  const std::uint64_t T = T_override ? *T_override : default_iterations(eps, g.num_vertices());
  auto topo = sim::Topology::of(g);
  PrimalResult out;
  auto trees = sim::bfs_forest(topo, engine, {}, &out.trace);
  auto run = run_mwu(MwuMode::primal, topo, trees, z, eps, T, g.num_edges(), engine);
  Subset marked(g.num_vertices());
  for (Vertex v = 0; v < g.num_vertices(); ++v) {
    const auto& st = run.states[v];
    if (st.marked) marked.insert(v);
    if (st.success_iteration) {
      out.iteration = out.iteration ? std::min(out.iteration, st.success_iteration) : st.success_iteration;
    }
  }
  if (!marked.empty()) out.subset = marked;
  out.trace.append(run.trace);
  return out;
}

}  // namespace densesim
