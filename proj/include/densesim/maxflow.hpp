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
#include <queue>
#include <vector>

namespace densesim {

// Dinic's algorithm on integer capacities.
class MaxFlow {
 public:
  explicit MaxFlow(std::size_t n) : head_(n, -1), level_(n), iter_(n) {}

  void add_edge(std::size_t from, std::size_t to, std::int64_t cap) {
    arcs_.push_back({to, cap, head_[from]});
    head_[from] = static_cast<std::int64_t>(arcs_.size() - 1);
    arcs_.push_back({from, 0, head_[to]});
    head_[to] = static_cast<std::int64_t>(arcs_.size() - 1);
  }

  std::int64_t run(std::size_t s, std::size_t t) {
    std::int64_t flow = 0;
    while (bfs(s, t)) {
      for (std::size_t i = 0; i < head_.size(); ++i) iter_[i] = head_[i];
      while (std::int64_t f = dfs(s, t, std::numeric_limits<std::int64_t>::max())) flow += f;
    }
    return flow;
  }

  // Largest source side of a minimum cut: everything that cannot reach t in
  // the residual network.
  std::vector<char> max_source_side(std::size_t t) const {
    std::vector<char> reaches_t(head_.size(), 0);
    std::vector<std::size_t> stack{t};
    reaches_t[t] = 1;
    // Arc a = (x -> y) with residual capacity lets x reach y; walk backwards.
    while (!stack.empty()) {
      std::size_t y = stack.back();
      stack.pop_back();
      for (std::int64_t a = head_[y]; a >= 0; a = arcs_[a].next) {
        // arcs_[a] is y -> x; its partner a^1 is x -> y.
        std::size_t x = arcs_[a].to;
        if (!reaches_t[x] && arcs_[a ^ 1].cap > 0) {
          reaches_t[x] = 1;
          stack.push_back(x);
        }
      }
    }
    std::vector<char> side(head_.size());
    for (std::size_t i = 0; i < side.size(); ++i) side[i] = !reaches_t[i];
    return side;
  }

 private:
  struct Arc {
    std::size_t to;
    std::int64_t cap;
    std::int64_t next;
  };

  bool bfs(std::size_t s, std::size_t t) {
    std::fill(level_.begin(), level_.end(), -1);
    std::queue<std::size_t> q;
    level_[s] = 0;
    q.push(s);
    while (!q.empty()) {
      std::size_t x = q.front();
      q.pop();
      for (std::int64_t a = head_[x]; a >= 0; a = arcs_[a].next) {
        if (arcs_[a].cap > 0 && level_[arcs_[a].to] < 0) {
          level_[arcs_[a].to] = level_[x] + 1;
          q.push(arcs_[a].to);
        }
      }
    }
    return level_[t] >= 0;
  }

  std::int64_t dfs(std::size_t x, std::size_t t, std::int64_t limit) {
    if (x == t) return limit;
    for (std::int64_t& a = iter_[x]; a >= 0; a = arcs_[a].next) {
      Arc& arc = arcs_[a];
      if (arc.cap > 0 && level_[arc.to] == level_[x] + 1) {
        std::int64_t f = dfs(arc.to, t, std::min(limit, arc.cap));
        if (f > 0) {
          arc.cap -= f;
          arcs_[a ^ 1].cap += f;
          return f;
        }
      }
    }
    return 0;
  }

  std::vector<Arc> arcs_;
  std::vector<std::int64_t> head_;
  std::vector<std::int64_t> level_;
  std::vector<std::int64_t> iter_;
};

}  // namespace densesim
