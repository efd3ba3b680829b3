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

#include <bit>
#include <cstdint>
#include <deque>
#include <string>
#include <vector>

#include "densesim/errors.hpp"
#include "densesim/graph.hpp"
#include "densesim/maxflow.hpp"
#include "densesim/orientation.hpp"
#include "densesim/rational.hpp"

namespace densesim {

enum class OracleMethod { flow, brute };

inline const char* to_string(OracleMethod m) { return m == OracleMethod::flow ? "flow" : "brute"; }

struct OracleResult {
  Subset best_subset;
  Rational D;
  OracleMethod method = OracleMethod::flow;
};

namespace detail {

// Largest maximiser of |E(S)| - (a/b)|S|, from one Goldberg cut with every
// capacity multiplied by b.
inline Subset goldberg_cut(const Graph& g, const BigInt& a_big, const BigInt& b_big) {
  const std::size_t n = g.num_vertices();
  const auto m = static_cast<std::int64_t>(g.num_edges());
  const auto a = a_big.convert_to<std::int64_t>();
  const auto b = b_big.convert_to<std::int64_t>();
  MaxFlow flow(n + 2);
  const std::size_t s = n, t = n + 1;
  for (Vertex v = 0; v < n; ++v) {
    flow.add_edge(s, v, m * b);
    flow.add_edge(v, t, m * b + 2 * a - static_cast<std::int64_t>(g.degree(v)) * b);
  }
  for (const auto& e : g.edges()) {
    flow.add_edge(e.u, e.v, b);
    flow.add_edge(e.v, e.u, b);
  }
  flow.run(s, t);
  auto side = flow.max_source_side(t);
  Subset out(n);
  for (Vertex v = 0; v < n; ++v)
    if (side[v]) out.insert(v);
  return out;
}

}  // namespace detail

// Exact maximum density and the largest densest vertex set, by Dinkelbach
// iterations on Goldberg's min-cut construction.
inline OracleResult exact_densest(const Graph& g) {
  const std::size_t n = g.num_vertices();
  if (n == 0) throw PreconditionError("exact_densest needs at least one vertex");
  if (g.num_edges() == 0) return {Subset(n, {0}), Rational(0), OracleMethod::flow};
  Rational guess(BigInt(g.num_edges()), BigInt(n));
  for (;;) {
    Subset s = detail::goldberg_cut(g, numerator_of(guess), denominator_of(guess));
    if (s.empty()) throw InvariantViolation("empty cut side at a density not above the optimum");
    Rational d = density(g, s);
    if (d > guess) {
      guess = d;
      continue;
    }
    return {std::move(s), guess, OracleMethod::flow};
  }
}

inline constexpr std::size_t kBruteMaxVertices = 20;
inline constexpr std::size_t kBruteDirectedMaxVertices = 12;

// True when the ascending member list of a precedes that of b.
inline bool lex_less_mask(std::uint32_t a, std::uint32_t b) {
  if (a == b) return false;
  std::uint32_t diff = a ^ b;
  int i = std::countr_zero(diff);
  std::uint32_t above = ~((std::uint32_t{2} << i) - 1);
  bool a_has = (a >> i) & 1;
  std::uint32_t other = a_has ? b : a;
  bool other_continues = (other & above) != 0;
  return a_has ? other_continues : !other_continues;
}

inline OracleResult brute_densest(const Graph& g) {
  const std::size_t n = g.num_vertices();
  if (n > kBruteMaxVertices) {
    throw PreconditionError("brute_densest refuses graphs with more than 20 vertices");
  }
  if (n == 0) throw PreconditionError("brute_densest needs at least one vertex");
  std::vector<std::uint32_t> adj(n, 0);
  for (const auto& e : g.edges()) {
    adj[e.u] |= 1u << e.v;
    adj[e.v] |= 1u << e.u;
  }
  std::uint64_t best_e = 0, best_k = 1;
  std::uint32_t best = 1;
  const std::uint32_t full = n == 32 ? ~0u : (1u << n) - 1;
  for (std::uint32_t mask = 1; mask <= full && mask != 0; ++mask) {
    std::uint64_t twice = 0;
    for (std::uint32_t rest = mask; rest; rest &= rest - 1) {
      twice += std::popcount(adj[std::countr_zero(rest)] & mask);
    }
    std::uint64_t e = twice / 2, k = std::popcount(mask);
    std::uint64_t lhs = e * best_k, rhs = best_e * k;
    if (lhs > rhs || (lhs == rhs && lex_less_mask(mask, best))) {
      best = mask;
      best_e = e;
      best_k = k;
    }
  }
  Subset s(n);
  for (Vertex v = 0; v < n; ++v)
    if ((best >> v) & 1) s.insert(v);
  return {std::move(s), Rational(BigInt(best_e), BigInt(best_k)), OracleMethod::brute};
}

struct DirectedOracleResult {
  Subset s;
  Subset t;
  DirectedDensity density;
  OracleMethod method = OracleMethod::brute;
};

// Every (S, T) with both sides nonempty; the first maximum in mask order wins.
inline DirectedOracleResult brute_directed_densest(const DirectedGraph& g) {
  const std::size_t n = g.num_vertices();
  if (n > kBruteDirectedMaxVertices) {
    throw PreconditionError("brute_directed_densest refuses graphs with more than 12 vertices");
  }
  if (n == 0) throw PreconditionError("brute_directed_densest needs at least one vertex");
  std::vector<std::uint32_t> out(n, 0);
  for (const auto& a : g.arcs()) out[a.from] |= 1u << a.to;
  const std::uint32_t full = (1u << n) - 1;
  std::vector<std::uint32_t> in_from_s(n);
  std::vector<std::uint32_t> arcs_into(std::size_t{1} << n);
  std::uint64_t best_e = 0, best_s = 1, best_t = 1;
  std::uint32_t best_sm = 1, best_tm = 1;
  for (std::uint32_t sm = 1; sm <= full; ++sm) {
    std::fill(in_from_s.begin(), in_from_s.end(), 0);
    for (std::uint32_t rest = sm; rest; rest &= rest - 1) {
      std::uint32_t targets = out[std::countr_zero(rest)];
      for (; targets; targets &= targets - 1) ++in_from_s[std::countr_zero(targets)];
    }
    std::uint64_t ks = std::popcount(sm);
    arcs_into[0] = 0;
    for (std::uint32_t tm = 1; tm <= full; ++tm) {
      arcs_into[tm] = arcs_into[tm & (tm - 1)] + in_from_s[std::countr_zero(tm)];
      std::uint64_t e = arcs_into[tm], kt = std::popcount(tm);
      if (e * e * best_s * best_t > best_e * best_e * ks * kt) {
        best_e = e;
        best_s = ks;
        best_t = kt;
        best_sm = sm;
        best_tm = tm;
      }
    }
  }
  DirectedOracleResult r{Subset(n), Subset(n), {best_e, best_s, best_t}, OracleMethod::brute};
  for (Vertex v = 0; v < n; ++v) {
    if ((best_sm >> v) & 1) r.s.insert(v);
    if ((best_tm >> v) & 1) r.t.insert(v);
  }
  return r;
}

inline BigInt ceil_density(const Rational& d) { return ceil_of(d); }

struct OutdegreeResult {
  std::size_t value = 0;
  Orientation witness;
};

// ceil(D) together with an orientation achieving it. The witness starts from a
// greedy orientation and reverses out-paths from overloaded vertices.
inline OutdegreeResult min_max_outdegree(const Graph& g) {
  const std::size_t n = g.num_vertices(), m = g.num_edges();
  OutdegreeResult r;
  r.witness = Orientation(m);
  if (m == 0) return r;
  r.value = ceil_of(exact_densest(g).D).convert_to<std::size_t>();
  const std::size_t k = r.value;

  std::vector<std::size_t> out(n, 0);
  for (EdgeId e = 0; e < m; ++e) {
    const auto& ed = g.edge(e);
    Vertex tail = out[ed.u] <= out[ed.v] ? ed.u : ed.v;
    r.witness.point(g, e, ed.other(tail));
    ++out[tail];
  }
  std::vector<std::int64_t> via(n);
  for (Vertex u = 0; u < n; ++u) {
    while (out[u] > k) {
      std::fill(via.begin(), via.end(), -2);
      via[u] = -1;
      std::deque<Vertex> q{u};
      std::int64_t found = -1;
      while (!q.empty() && found < 0) {
        Vertex x = q.front();
        q.pop_front();
        for (const auto& inc : g.incident(x)) {
          if (r.witness.tail(g, inc.edge) != x || via[inc.neighbor] != -2) continue;
          via[inc.neighbor] = inc.edge;
          if (out[inc.neighbor] < k) {
            found = inc.neighbor;
            break;
          }
          q.push_back(inc.neighbor);
        }
      }
      if (found < 0) throw InvariantViolation("no augmenting path although ceil(D) orientation exists");
      Vertex w = static_cast<Vertex>(found);
      ++out[w];
      --out[u];
      while (w != u) {
        auto e = static_cast<EdgeId>(via[w]);
        Vertex prev = r.witness.tail(g, e);
        r.witness.flip(e);
        w = prev;
      }
    }
  }
  return r;
}

}  // namespace densesim
