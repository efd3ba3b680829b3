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
#include <cstddef>
#include <cstdint>
#include <initializer_list>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "densesim/errors.hpp"
#include "densesim/rational.hpp"

namespace densesim {

using Vertex = std::uint32_t;
using EdgeId = std::uint32_t;

struct Edge {
  Vertex u = 0;  // u < v
  Vertex v = 0;

  Vertex other(Vertex x) const { return x == u ? v : u; }
  friend auto operator<=>(const Edge&, const Edge&) = default;
};

struct Incidence {
  Vertex neighbor = 0;
  EdgeId edge = 0;
};

// Immutable simple undirected graph. Edge ids follow the canonical
// lexicographic order of (min endpoint, max endpoint); each adjacency list is
// sorted by edge id, which for this numbering is also neighbor order.
class Graph {
 public:
  Graph() = default;

  // Endpoints may be given in either order; the result is canonical.
  // Throws PreconditionError on self-loops, duplicates or ids >= n.
  Graph(std::size_t n, std::vector<Edge> edges) : n_(n), edges_(std::move(edges)) {
    for (auto& e : edges_) {
      if (e.u >= n_ || e.v >= n_) throw PreconditionError("edge endpoint out of range");
      if (e.u == e.v) throw PreconditionError("self-loop at vertex " + std::to_string(e.u));
      if (e.u > e.v) std::swap(e.u, e.v);
    }
    std::sort(edges_.begin(), edges_.end());
    for (std::size_t i = 1; i < edges_.size(); ++i) {
      if (edges_[i] == edges_[i - 1]) {
        throw PreconditionError("duplicate edge " + std::to_string(edges_[i].u) + " " +
                                std::to_string(edges_[i].v));
      }
    }
    build_adjacency();
  }

  Graph(std::size_t n, std::initializer_list<std::pair<Vertex, Vertex>> pairs)
      : Graph(n, to_edges(pairs)) {}

  std::size_t num_vertices() const { return n_; }
  std::size_t num_edges() const { return edges_.size(); }
  const std::vector<Edge>& edges() const { return edges_; }
  const Edge& edge(EdgeId e) const { return edges_[e]; }

  std::span<const Incidence> incident(Vertex v) const {
    return {incidences_.data() + offsets_[v], incidences_.data() + offsets_[v + 1]};
  }
  std::size_t degree(Vertex v) const { return offsets_[v + 1] - offsets_[v]; }
  std::size_t max_degree() const {
    std::size_t d = 0;
    for (Vertex v = 0; v < n_; ++v) d = std::max(d, degree(v));
    return d;
  }

  // Edge id of {a, b}, or -1 when absent.
  std::int64_t find_edge(Vertex a, Vertex b) const {
    auto inc = incident(a);
    auto it = std::lower_bound(inc.begin(), inc.end(), b,
                               [](const Incidence& i, Vertex x) { return i.neighbor < x; });
    if (it == inc.end() || it->neighbor != b) return -1;
    return it->edge;
  }
  bool has_edge(Vertex a, Vertex b) const { return find_edge(a, b) >= 0; }

  friend bool operator==(const Graph& a, const Graph& b) {
    return a.n_ == b.n_ && a.edges_ == b.edges_;
  }

 private:
  static std::vector<Edge> to_edges(std::initializer_list<std::pair<Vertex, Vertex>> pairs) {
    std::vector<Edge> out;
    for (auto [a, b] : pairs) out.push_back({a, b});
    return out;
  }

  void build_adjacency() {
    offsets_.assign(n_ + 1, 0);
    for (const auto& e : edges_) {
      ++offsets_[e.u + 1];
      ++offsets_[e.v + 1];
    }
    for (std::size_t i = 0; i < n_; ++i) offsets_[i + 1] += offsets_[i];
    incidences_.resize(2 * edges_.size());
    std::vector<std::size_t> fill(offsets_.begin(), offsets_.end() - 1);
    for (EdgeId id = 0; id < edges_.size(); ++id) {
      const auto& e = edges_[id];
      incidences_[fill[e.u]++] = {e.v, id};
      incidences_[fill[e.v]++] = {e.u, id};
    }
  }

  std::size_t n_ = 0;
  std::vector<Edge> edges_;
  std::vector<std::size_t> offsets_{0};
  std::vector<Incidence> incidences_;
};

struct Arc {
  Vertex from = 0;
  Vertex to = 0;
  friend auto operator<=>(const Arc&, const Arc&) = default;
};

// Simple digraph. Antiparallel arcs u->v and v->u are both allowed.
class DirectedGraph {
 public:
  DirectedGraph() = default;

  DirectedGraph(std::size_t n, std::vector<Arc> arcs) : n_(n), arcs_(std::move(arcs)) {
    for (const auto& a : arcs_) {
      if (a.from >= n_ || a.to >= n_) throw PreconditionError("arc endpoint out of range");
      if (a.from == a.to) throw PreconditionError("self-loop at vertex " + std::to_string(a.from));
    }
    std::sort(arcs_.begin(), arcs_.end());
    for (std::size_t i = 1; i < arcs_.size(); ++i) {
      if (arcs_[i] == arcs_[i - 1]) throw PreconditionError("duplicate arc");
    }
    std::vector<Edge> und;
    und.reserve(arcs_.size());
    for (const auto& a : arcs_) und.push_back({std::min(a.from, a.to), std::max(a.from, a.to)});
    std::sort(und.begin(), und.end());
    und.erase(std::unique(und.begin(), und.end()), und.end());
    underlying_ = Graph(n_, std::move(und));
  }

  std::size_t num_vertices() const { return n_; }
  std::size_t num_arcs() const { return arcs_.size(); }
  const std::vector<Arc>& arcs() const { return arcs_; }
  bool has_arc(Vertex a, Vertex b) const {
    return std::binary_search(arcs_.begin(), arcs_.end(), Arc{a, b});
  }
  // The graph with directions ignored; communication happens over it.
  const Graph& underlying() const { return underlying_; }

  friend bool operator==(const DirectedGraph& a, const DirectedGraph& b) {
    return a.n_ == b.n_ && a.arcs_ == b.arcs_;
  }

 private:
  std::size_t n_ = 0;
  std::vector<Arc> arcs_;
  Graph underlying_;
};

// Vertex set tied to a graph of a given order.
class Subset {
 public:
  Subset() = default;
  explicit Subset(std::size_t n) : member_(n, 0) {}
  Subset(std::size_t n, std::initializer_list<Vertex> vs) : member_(n, 0) {
    for (Vertex v : vs) insert(v);
  }
  static Subset from(std::size_t n, std::span<const Vertex> vs) {
    Subset s(n);
    for (Vertex v : vs) s.insert(v);
    return s;
  }
  static Subset all(std::size_t n) {
    Subset s(n);
    std::fill(s.member_.begin(), s.member_.end(), 1);
    return s;
  }

  std::size_t universe() const { return member_.size(); }
  bool contains(Vertex v) const { return member_[v] != 0; }
  void insert(Vertex v) {
    if (v >= member_.size()) throw PreconditionError("subset member out of range");
    member_[v] = 1;
  }
  void erase(Vertex v) { member_[v] = 0; }
  std::size_t size() const {
    return static_cast<std::size_t>(std::count(member_.begin(), member_.end(), 1));
  }
  bool empty() const { return size() == 0; }
  std::vector<Vertex> members() const {
    std::vector<Vertex> out;
    for (Vertex v = 0; v < member_.size(); ++v)
      if (member_[v]) out.push_back(v);
    return out;
  }
  Subset& operator|=(const Subset& o) {
    for (std::size_t i = 0; i < member_.size(); ++i) member_[i] |= o.member_[i];
    return *this;
  }
  bool intersects(const Subset& o) const {
    for (std::size_t i = 0; i < member_.size(); ++i)
      if (member_[i] && o.member_[i]) return true;
    return false;
  }

  friend bool operator==(const Subset&, const Subset&) = default;

 private:
  std::vector<char> member_;
};

inline std::size_t induced_edge_count(const Graph& g, const Subset& s) {
  std::size_t count = 0;
  for (const auto& e : g.edges())
    if (s.contains(e.u) && s.contains(e.v)) ++count;
  return count;
}

// |E(G[s])| / |s|, exactly.
inline Rational density(const Graph& g, const Subset& s) {
  if (s.universe() != g.num_vertices()) throw PreconditionError("subset does not match graph");
  std::size_t k = s.size();
  if (k == 0) throw PreconditionError("density of an empty subset is undefined");
  return Rational(BigInt(induced_edge_count(g, s)), BigInt(k));
}

// |E(S,T)| / sqrt(|S||T|) kept exact through its square.
struct DirectedDensity {
  std::size_t arcs = 0;
  std::size_t s_size = 0;
  std::size_t t_size = 0;

  Rational squared() const {
    return Rational(BigInt(arcs) * BigInt(arcs), BigInt(s_size) * BigInt(t_size));
  }
  // Compares d(S,T) against a non-negative threshold without square roots.
  bool at_least(const Rational& threshold) const { return squared() >= threshold * threshold; }
};

inline DirectedDensity directed_density(const DirectedGraph& g, const Subset& s, const Subset& t) {
  if (s.universe() != g.num_vertices() || t.universe() != g.num_vertices()) {
    throw PreconditionError("subset does not match graph");
  }
  DirectedDensity d{0, s.size(), t.size()};
  if (d.s_size == 0 || d.t_size == 0) throw PreconditionError("directed density needs nonempty S and T");
  for (const auto& a : g.arcs())
    if (s.contains(a.from) && t.contains(a.to)) ++d.arcs;
  return d;
}

}  // namespace densesim
