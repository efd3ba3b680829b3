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

namespace densesim {

// One direction per edge: toward the larger or the smaller endpoint id.
struct Orientation {
  std::vector<char> toward_larger;

  Orientation() = default;
  explicit Orientation(std::size_t m, bool larger = true) : toward_larger(m, larger ? 1 : 0) {}

  Vertex tail(const Graph& g, EdgeId e) const { return toward_larger[e] ? g.edge(e).u : g.edge(e).v; }
  Vertex head(const Graph& g, EdgeId e) const { return toward_larger[e] ? g.edge(e).v : g.edge(e).u; }
  void point(const Graph& g, EdgeId e, Vertex to) { toward_larger[e] = g.edge(e).v == to; }
  void flip(EdgeId e) { toward_larger[e] ^= 1; }

  std::vector<std::size_t> outdegrees(const Graph& g) const {
    check(g);
    std::vector<std::size_t> out(g.num_vertices(), 0);
    for (EdgeId e = 0; e < g.num_edges(); ++e) ++out[tail(g, e)];
    return out;
  }
  std::vector<std::size_t> indegrees(const Graph& g) const {
    check(g);
    std::vector<std::size_t> in(g.num_vertices(), 0);
    for (EdgeId e = 0; e < g.num_edges(); ++e) ++in[head(g, e)];
    return in;
  }
  std::size_t max_outdegree(const Graph& g) const {
    auto out = outdegrees(g);
    return out.empty() ? 0 : *std::max_element(out.begin(), out.end());
  }

  friend bool operator==(const Orientation&, const Orientation&) = default;

 private:
  void check(const Graph& g) const {
    if (toward_larger.size() != g.num_edges()) throw PreconditionError("orientation does not match graph");
  }
};

}  // namespace densesim
