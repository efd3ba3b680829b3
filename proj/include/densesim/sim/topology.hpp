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

#include <cstdint>
#include <span>
#include <utility>
#include <vector>

#include "densesim/errors.hpp"
#include "densesim/graph.hpp"

namespace densesim::sim {

struct Port {
  Vertex peer = 0;
  std::uint32_t peer_port = 0;  // index of the reverse port at the peer
  std::uint32_t link = 0;
};

// Communication network as a port-numbered multigraph. Self-loops occupy two
// consecutive ports of the same vertex. Each link may stand for a path of
// several physical hops; its bits are charged once per hop.
class Topology {
 public:
  Topology() = default;

  // Port i of v is the i-th incident edge of v; link ids are edge ids.
  static Topology of(const Graph& g) {
    std::vector<std::pair<Vertex, Vertex>> links;
    links.reserve(g.num_edges());
    for (const auto& e : g.edges()) links.emplace_back(e.u, e.v);
    return of_links(g.num_vertices(), links);
  }

  // Ports at each vertex follow link id order.
  static Topology of_links(std::size_t n, const std::vector<std::pair<Vertex, Vertex>>& links,
                           std::vector<std::uint64_t> hops = {}) {
    Topology t;
    t.n_ = n;
    t.ends_ = links;
    if (hops.empty()) hops.assign(links.size(), 1);
    if (hops.size() != links.size()) throw PreconditionError("hop weights do not match links");
    t.hops_ = std::move(hops);
    t.offsets_.assign(n + 1, 0);
    for (auto [a, b] : links) {
      if (a >= n || b >= n) throw PreconditionError("link endpoint out of range");
      ++t.offsets_[a + 1];
      ++t.offsets_[b + 1];
    }
    for (std::size_t i = 0; i < n; ++i) t.offsets_[i + 1] += t.offsets_[i];
    t.ports_.resize(2 * links.size());
    std::vector<std::size_t> fill(t.offsets_.begin(), t.offsets_.end() - 1);
    for (std::uint32_t id = 0; id < links.size(); ++id) {
      auto [a, b] = links[id];
      std::size_t pa = fill[a]++;
      std::size_t pb = fill[b]++;
      t.ports_[pa] = {b, static_cast<std::uint32_t>(pb - t.offsets_[b]), id};
      t.ports_[pb] = {a, static_cast<std::uint32_t>(pa - t.offsets_[a]), id};
    }
    return t;
  }

  std::size_t num_vertices() const { return n_; }
  std::size_t num_links() const { return ends_.size(); }
  std::size_t num_ports() const { return ports_.size(); }
  std::size_t degree(Vertex v) const { return offsets_[v + 1] - offsets_[v]; }
  std::size_t offset(Vertex v) const { return offsets_[v]; }
  std::span<const Port> ports(Vertex v) const {
    return {ports_.data() + offsets_[v], ports_.data() + offsets_[v + 1]};
  }
  const Port& port(Vertex v, std::size_t i) const { return ports_[offsets_[v] + i]; }
  std::pair<Vertex, Vertex> link_ends(std::uint32_t link) const { return ends_[link]; }
  std::uint64_t hops(std::uint32_t link) const { return hops_[link]; }

 private:
  std::size_t n_ = 0;
  std::vector<std::pair<Vertex, Vertex>> ends_;
  std::vector<std::uint64_t> hops_;
  std::vector<std::size_t> offsets_{0};
  std::vector<Port> ports_;
};

}  // namespace densesim::sim
