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
#include <cstdint>
#include <optional>
#include <vector>

#include "densesim/errors.hpp"
#include "densesim/graph.hpp"
#include "densesim/mwu.hpp"
#include "densesim/orient/paths.hpp"
#include "densesim/orientation.hpp"
#include "densesim/rational.hpp"
#include "densesim/sim/engine.hpp"
#include "densesim/sim/primitives.hpp"

namespace densesim {

namespace orient_detail {

// One round: each vertex sends one small word on every port.
struct ExchangeBits {
  const std::vector<std::vector<std::int64_t>>* words = nullptr;
  struct State {};
  State init(const sim::VertexInfo&) const { return {}; }
  void step(State&, sim::Context& ctx) const {
    if (ctx.round() == 1) {
      const auto& w = (*words)[ctx.id()];
      for (std::size_t p = 0; p < ctx.degree(); ++p) ctx.send(p, sim::Message::word(w[p]));
    }
    ctx.halt();
  }
};

inline void exchange(const Graph& g, const std::vector<std::vector<std::int64_t>>& words, sim::Engine& engine,
                     sim::RoundTrace& trace) {
  auto r = engine.run(sim::Topology::of(g), ExchangeBits{&words});
  trace.append(r.trace);
}

}  // namespace orient_detail

struct RoundingStep {
  std::size_t k = 0;
  std::size_t split_edges = 0;  // |E(G_k)|
  Rational bound;               // D_k
  Rational max_load;            // max over u of the sum of alpha at u
  bool low_bits_zero = true;
  bool edge_constraint = true;
  bool within_bound = true;
};

struct LowOutdegreeOptions {
  std::uint64_t initial_T = 16;
  std::optional<std::uint64_t> max_T;  // default from eps1/2
};

struct LowOutdegreeResult {
  Orientation orientation;
  std::size_t max_outdeg = 0;
  Rational target;  // (1+eps) Dtilde
  bool pass = false;
  Rational eps1, eps2, eps3;
  std::uint64_t dual_T = 0;
  std::size_t bit_width = 0;
  std::size_t B = 0;
  std::size_t t = 0;
  std::vector<RoundingStep> steps;  // k = 0 is the initial rounding
  bool integral = false;
  bool edge_constraint = false;
  sim::RoundTrace trace;
};

inline LowOutdegreeResult orient_low_outdegree(const Graph& g, std::int64_t dtilde, const Rational& eps,
                                               sim::Engine& engine, LowOutdegreeOptions options = {}) {
  using namespace orient_detail;
  long eexp = 0;
  if (!is_power_of_two(eps, &eexp) || eexp >= 0) throw PreconditionError("eps must be a negative power of 2");
  if (dtilde <= 0) throw PreconditionError("Dtilde must be positive");
  const Rational D(dtilde);
  if (eps > make_rational(1, 4) || eps < Rational(32) / D) throw PreconditionError("eps must lie in [32/Dtilde, 1/4]");

  const std::size_t n = g.num_vertices(), m = g.num_edges();
  LowOutdegreeResult res;
  res.target = (1 + eps) * D;
  res.eps1 = res.eps2 = eps / 8;

  // Fractional dual, doubling T until the solution is feasible everywhere.
  const Rational dual_eps = res.eps1 / 2;
  const std::uint64_t max_T = options.max_T ? *options.max_T : default_iterations(dual_eps, n);
  DualSolution sol;
  for (std::uint64_t T = std::max<std::uint64_t>(1, options.initial_T);; T *= 2) {
    auto dual = fractional_dual(g, D, dual_eps, T, engine);
    res.trace.append(dual.trace);
    std::vector<Rational> load(n);
    std::vector<bool> bad(n, false);
    for (EdgeId e = 0; e < m; ++e) {
      const Edge& ed = g.edge(e);
      load[ed.u] += dual.solution.alpha[e][0];
      load[ed.v] += dual.solution.alpha[e][1];
      if (dual.solution.alpha[e][0] + dual.solution.alpha[e][1] < 1) bad[ed.u] = bad[ed.v] = true;
    }
    const Rational budget = (1 + res.eps1) * D;
    for (Vertex v = 0; v < n; ++v)
      if (load[v] > budget) bad[v] = true;
    sim::Engine stage(engine.config());
    auto any = sim::component_or(g, bad, stage);
    res.trace.append(stage.trace());
    bool ok = std::find(any.begin(), any.end(), true) == any.end();
    if (ok) {
      sol = std::move(dual.solution);
      res.dual_T = T;
      break;
    }
    if (T >= max_T) throw PreconditionError("dual infeasible at the full iteration count; Dtilde may be below the density");
  }
  res.bit_width = sol.bit_width;

  // Fraction bits actually present.
  for (const auto& a : sol.alpha)
    for (const auto& x : a) {
      long ex = 0;
      BigInt den = denominator_of(x);
      if (!is_power_of_two(Rational(den), &ex)) throw InvariantViolation("alpha is not dyadic");
      res.B = std::max<std::size_t>(res.B, static_cast<std::size_t>(ex));
    }
  std::size_t maxdeg = 0;
  for (Vertex v = 0; v < n; ++v) maxdeg = std::max(maxdeg, g.degree(v));
  res.t = std::min<std::size_t>(res.B, ceil_log2(Rational(static_cast<std::int64_t>(std::max<std::size_t>(maxdeg, 1))) / res.eps2));
  const std::size_t t = res.t;
  if (t > 40) throw InvariantViolation("too many fraction bits");
  res.eps3 = t ? eps / (4 * static_cast<std::int64_t>(t)) : eps;
  const std::int64_t one = std::int64_t{1} << t;

  // a[e][side] = 2^t alpha, rounded up.
  std::vector<std::array<std::int64_t, 2>> a(m);
  for (EdgeId e = 0; e < m; ++e)
    for (int s = 0; s < 2; ++s) a[e][s] = static_cast<std::int64_t>(ceil_of(sol.alpha[e][s] * one));

  auto audit = [&](std::size_t k, const Rational& bound, std::size_t split_edges) {
    RoundingStep st;
    st.k = k;
    st.bound = bound;
    st.split_edges = split_edges;
    std::vector<std::int64_t> load(n, 0);
    const std::int64_t low = k ? (std::int64_t{1} << k) - 1 : 0;
    for (EdgeId e = 0; e < m; ++e) {
      const Edge& ed = g.edge(e);
      load[ed.u] += a[e][0];
      load[ed.v] += a[e][1];
      if (a[e][0] + a[e][1] < one || a[e][0] < 0 || a[e][1] < 0) st.edge_constraint = false;
      if ((a[e][0] & low) || (a[e][1] & low)) st.low_bits_zero = false;
    }
    std::int64_t worst = n ? *std::max_element(load.begin(), load.end()) : 0;
    st.max_load = make_rational(worst, one);
    st.within_bound = st.max_load <= bound;
    res.steps.push_back(st);
  };

  Rational bound = (1 + res.eps1) * (1 + res.eps2) * D;
  audit(0, bound, 0);

  for (std::size_t k = 1; k <= t; ++k) {
    const std::int64_t unit = std::int64_t{1} << (k - 1);
    std::vector<std::vector<std::int64_t>> words(n);
    for (Vertex v = 0; v < n; ++v) {
      auto inc = g.incident(v);
      words[v].resize(inc.size());
      for (std::size_t p = 0; p < inc.size(); ++p) {
        int side = g.edge(inc[p].edge).u == v ? 0 : 1;
        words[v][p] = (a[inc[p].edge][side] >> (k - 1)) & 1;
      }
    }
    exchange(g, words, engine, res.trace);

    std::vector<Edge> split;
    std::vector<EdgeId> split_id;
    for (EdgeId e = 0; e < m; ++e) {
      bool bu = (a[e][0] >> (k - 1)) & 1, bv = (a[e][1] >> (k - 1)) & 1;
      if (bu && bv) {
        split.push_back(g.edge(e));
        split_id.push_back(e);
      } else if (bu) {
        a[e][0] -= unit;
      } else if (bv) {
        a[e][1] -= unit;
      }
    }
    if (!split.empty()) {
      Graph gk(n, split);
      auto sp = directed_split(gk, res.eps3, engine);
      res.trace.append(sp.trace);
      for (EdgeId j = 0; j < gk.num_edges(); ++j) {
        EdgeId e = split_id[j];
        bool from_u = sp.orientation.tail(gk, j) == g.edge(e).u;
        a[e][from_u ? 0 : 1] += unit;
        a[e][from_u ? 1 : 0] -= unit;
      }
    }
    bound = (1 + res.eps3) * bound + make_rational(12 * unit, one);
    audit(k, bound, split.size());
  }

  // Clamp at 1; both at 1 points to the larger id.
  std::vector<std::vector<std::int64_t>> words(n);
  for (Vertex v = 0; v < n; ++v) {
    auto inc = g.incident(v);
    words[v].resize(inc.size());
    for (std::size_t p = 0; p < inc.size(); ++p) {
      int side = g.edge(inc[p].edge).u == v ? 0 : 1;
      words[v][p] = a[inc[p].edge][side] >= one ? 1 : 0;
    }
  }
  exchange(g, words, engine, res.trace);
  res.integral = true;
  res.edge_constraint = true;
  res.orientation = Orientation(m);
  for (EdgeId e = 0; e < m; ++e) {
    if (a[e][0] % one || a[e][1] % one) res.integral = false;
    bool au = a[e][0] >= one, av = a[e][1] >= one;
    if (!au && !av) res.edge_constraint = false;
    res.orientation.toward_larger[e] = au ? 1 : 0;
  }
  res.max_outdeg = res.orientation.max_outdegree(g);
  res.pass = res.integral && res.edge_constraint && Rational(static_cast<std::int64_t>(res.max_outdeg)) <= res.target;
  for (const auto& st : res.steps) res.pass = res.pass && st.edge_constraint && st.low_bits_zero && st.within_bound;
  return res;
}

}  // namespace densesim
