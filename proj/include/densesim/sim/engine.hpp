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
#include <condition_variable>
#include <cstdint>
#include <cstdlib>
#include <functional>
#include <memory>
#include <mutex>
#include <queue>
#include <string>
#include <thread>
#include <vector>

#include "densesim/errors.hpp"
#include "densesim/random.hpp"
#include "densesim/sim/message.hpp"
#include "densesim/sim/topology.hpp"

namespace densesim::sim {

enum class Model { local, congest };
enum class Enforcement { strict, permissive };

// SIM_MAX_ROUNDS, when set to a positive integer, replaces the built-in limit.
inline std::uint64_t default_max_rounds() {
  constexpr std::uint64_t kBuiltin = std::uint64_t{1} << 50;
  if (const char* env = std::getenv("SIM_MAX_ROUNDS")) {
    char* end = nullptr;
    unsigned long long v = std::strtoull(env, &end, 10);
    if (end && *end == '\0' && v > 0) return v;
  }
  return kBuiltin;
}

struct SimConfig {
  Model model = Model::local;
  std::size_t bits_per_word = 64;  // widest integer field a message may carry
  std::size_t congest_cap_words = 2;
  Enforcement enforcement = Enforcement::permissive;
  std::uint64_t max_rounds = default_max_rounds();
  std::uint64_t seed = 0;
  unsigned threads = 1;
  bool record_links = false;  // keep per-round per-link bit counts

  static SimConfig congest(Enforcement e = Enforcement::permissive) {
    SimConfig c;
    c.model = Model::congest;
    c.enforcement = e;
    return c;
  }
};

// ceil(log2 n), with 0 for n <= 1.
inline std::size_t ceil_log2(std::uint64_t n) {
  std::size_t k = 0;
  while ((std::uint64_t{1} << k) < n) ++k;
  return k;
}

// Per-link, per-direction, per-round cap; 0 means unbounded (LOCAL).
inline std::size_t congest_cap_bits(const SimConfig& cfg, std::size_t network_size) {
  if (cfg.model == Model::local) return 0;
  return cfg.congest_cap_words * ceil_log2(network_size);
}

struct Violation {
  std::uint64_t round = 0;
  std::uint32_t link = 0;
  std::size_t bits = 0;
  friend bool operator==(const Violation&, const Violation&) = default;
};

struct LinkLoad {
  std::uint64_t round = 0;
  std::uint32_t link = 0;
  std::size_t bits = 0;
  friend bool operator==(const LinkLoad&, const LinkLoad&) = default;
};

struct RoundTrace {
  std::uint64_t rounds_executed = 0;
  std::size_t max_message_bits = 0;
  std::uint64_t total_bits = 0;
  std::uint64_t messages = 0;
  std::vector<Violation> violations;
  std::vector<LinkLoad> link_loads;

  // Sequential composition: `later` ran after everything recorded here.
  void append(const RoundTrace& later) {
    for (auto v : later.violations) {
      v.round += rounds_executed;
      violations.push_back(v);
    }
    for (auto l : later.link_loads) {
      l.round += rounds_executed;
      link_loads.push_back(l);
    }
    rounds_executed += later.rounds_executed;
    max_message_bits = std::max(max_message_bits, later.max_message_bits);
    total_bits += later.total_bits;
    messages += later.messages;
  }

  friend bool operator==(const RoundTrace&, const RoundTrace&) = default;
};

// Fixed set of worker threads that split index ranges; the caller's thread
// takes the first chunk.
class WorkerPool {
 public:
  explicit WorkerPool(unsigned threads) {
    for (unsigned i = 1; i < threads; ++i) workers_.emplace_back([this, i] { loop(i); });
  }
  ~WorkerPool() {
    {
      std::lock_guard lock(mu_);
      stop_ = true;
      ++generation_;
    }
    cv_.notify_all();
    for (auto& t : workers_) t.join();
  }
  WorkerPool(const WorkerPool&) = delete;
  WorkerPool& operator=(const WorkerPool&) = delete;

  unsigned size() const { return static_cast<unsigned>(workers_.size()) + 1; }

  void run(std::size_t count, const std::function<void(std::size_t, std::size_t)>& fn) {
    if (workers_.empty() || count < 2 * size()) {
      fn(0, count);
      return;
    }
    {
      std::lock_guard lock(mu_);
      task_ = &fn;
      count_ = count;
      pending_ = workers_.size();
      ++generation_;
    }
    cv_.notify_all();
    auto [b, e] = chunk(0, count);
    fn(b, e);
    std::unique_lock lock(mu_);
    done_cv_.wait(lock, [&] { return pending_ == 0; });
    task_ = nullptr;
  }

 private:
  std::pair<std::size_t, std::size_t> chunk(unsigned idx, std::size_t count) const {
    std::size_t per = (count + size() - 1) / size();
    std::size_t b = std::min(count, per * idx);
    return {b, std::min(count, b + per)};
  }

  void loop(unsigned idx) {
    std::uint64_t seen = 0;
    for (;;) {
      const std::function<void(std::size_t, std::size_t)>* task;
      std::size_t count;
      {
        std::unique_lock lock(mu_);
        cv_.wait(lock, [&] { return generation_ != seen; });
        seen = generation_;
        if (stop_) return;
        task = task_;
        count = count_;
      }
      auto [b, e] = chunk(idx, count);
      if (b < e) (*task)(b, e);
      {
        std::lock_guard lock(mu_);
        if (--pending_ == 0) done_cv_.notify_one();
      }
    }
  }

  std::vector<std::thread> workers_;
  std::mutex mu_;
  std::condition_variable cv_, done_cv_;
  const std::function<void(std::size_t, std::size_t)>* task_ = nullptr;
  std::size_t count_ = 0;
  std::size_t pending_ = 0;
  std::uint64_t generation_ = 0;
  bool stop_ = false;
};

struct RunOptions {
  std::uint64_t stretch = 1;      // physical rounds per simulated round
  std::uint64_t stop_after = 0;   // stop once this round has run (0: never)
  std::size_t network_size = 0;   // n used for the cap (0: topology order)
};

class Engine;

namespace detail {
struct Buffers;
}

// What a vertex sees during one step.
class Context {
 public:
  Vertex id() const { return v_; }
  std::uint64_t round() const { return round_; }
  std::size_t degree() const { return topo_->degree(v_); }
  Vertex peer(std::size_t port) const { return topo_->port(v_, port).peer; }
  std::size_t network_size() const { return network_size_; }

  const Message* received(std::size_t port) const;
  bool any_received() const;

  void send(std::size_t port, Message m);
  void send_all(const Message& m) {
    for (std::size_t p = 0; p < degree(); ++p) send(p, m);
  }

  // Default after a step is to run again next round.
  void halt() { next_ = Next::halt; }
  void wait() { next_ = Next::wait; }
  void wait_until(std::uint64_t round) {
    next_ = Next::wait;
    wake_ = round;
  }

  std::uint64_t random(std::uint64_t draw = 0) const { return rng_.bits(v_, round_, draw); }
  double uniform(std::uint64_t draw = 0) const { return rng_.uniform(v_, round_, draw); }

 private:
  friend class Engine;
  enum class Next { run, wait, halt };

  const Topology* topo_ = nullptr;
  detail::Buffers* buf_ = nullptr;
  CounterRng rng_;
  Vertex v_ = 0;
  std::uint64_t round_ = 0;
  std::size_t network_size_ = 0;
  Next next_ = Next::run;
  std::uint64_t wake_ = 0;
};

namespace detail {
struct Buffers {
  std::vector<Message> in, out;
  std::vector<char> in_has, out_has;
  std::vector<std::uint32_t> in_count;  // per vertex
};
}  // namespace detail

inline const Message* Context::received(std::size_t port) const {
  std::size_t g = topo_->offset(v_) + port;
  return buf_->in_has[g] ? &buf_->in[g] : nullptr;
}
inline bool Context::any_received() const { return buf_->in_count[v_] > 0; }
inline void Context::send(std::size_t port, Message m) {
  if (port >= degree()) throw PreconditionError("send on a nonexistent port");
  std::size_t g = topo_->offset(v_) + port;
  buf_->out[g] = std::move(m);
  buf_->out_has[g] = 1;
}

struct VertexInfo {
  Vertex id = 0;
  std::size_t degree = 0;
  std::span<const Port> ports;
  std::size_t network_size = 0;
};

// A program supplies init(const VertexInfo&) -> State and
// step(State&, Context&) const. Vertices start at round 1.
template <class P>
concept VertexProgram = requires(const P& p, typename P::State& s, Context& ctx,
                                 const VertexInfo& info) {
  { p.init(info) } -> std::convertible_to<typename P::State>;
  p.step(s, ctx);
};

template <class State>
struct RunResult {
  std::vector<State> states;
  RoundTrace trace;
};

// Runs programs round by round and accumulates the trace of every run made
// through it, so multi-stage algorithms report one combined trace.
class Engine {
 public:
  explicit Engine(SimConfig cfg = {}) : cfg_(std::move(cfg)) {}

  const SimConfig& config() const { return cfg_; }
  const RoundTrace& trace() const { return total_; }
  void reset_trace() { total_ = {}; }
  // Adds rounds spent without messages (for example a globally known wait).
  void charge_rounds(std::uint64_t r) { total_.rounds_executed += r; }

  template <VertexProgram P>
  RunResult<typename P::State> run(const Topology& topo, const P& program, RunOptions opt = {}) {
    const std::size_t n = topo.num_vertices();
    std::vector<typename P::State> states;
    states.reserve(n);
    std::size_t net = opt.network_size ? opt.network_size : n;
    for (Vertex v = 0; v < n; ++v) {
      states.push_back(program.init(VertexInfo{v, topo.degree(v), topo.ports(v), net}));
    }
    return run_states(topo, program, std::move(states), opt);
  }

  template <VertexProgram P>
  RunResult<typename P::State> run_states(const Topology& topo, const P& program,
                                          std::vector<typename P::State> states,
                                          RunOptions opt = {}) {
    using State = typename P::State;
    const std::size_t n = topo.num_vertices();
    if (states.size() != n) throw PreconditionError("one state per vertex required");
    if (cfg_.max_rounds < 1) throw PreconditionError("max_rounds must be at least 1");
    const std::size_t net = opt.network_size ? opt.network_size : n;
    const std::size_t cap = congest_cap_bits(cfg_, net);
    const std::uint64_t stretch = std::max<std::uint64_t>(1, opt.stretch);

    detail::Buffers buf;
    buf.in.resize(topo.num_ports());
    buf.out.resize(topo.num_ports());
    buf.in_has.assign(topo.num_ports(), 0);
    buf.out_has.assign(topo.num_ports(), 0);
    buf.in_count.assign(n, 0);

    enum : char { kRun, kWait, kHalt };
    std::vector<char> status(n, kRun);
    std::vector<std::uint64_t> wake(n, 0);
    std::vector<std::uint64_t> stamp(n, 0);
    using Timer = std::pair<std::uint64_t, Vertex>;
    std::priority_queue<Timer, std::vector<Timer>, std::greater<>> timers;

    std::vector<Vertex> active(n), next_active;
    for (Vertex v = 0; v < n; ++v) active[v] = v;

    RoundTrace trace;
    std::uint64_t round = 1;
    std::vector<Context> contexts(pool_size());

    auto step_range = [&](std::size_t b, std::size_t e, Context& ctx) {
      for (std::size_t i = b; i < e; ++i) {
        Vertex v = active[i];
        ctx.v_ = v;
        ctx.round_ = round;
        ctx.next_ = Context::Next::run;
        ctx.wake_ = 0;
        program.step(states[v], ctx);
        status[v] = ctx.next_ == Context::Next::halt ? kHalt
                    : ctx.next_ == Context::Next::wait ? kWait
                                                       : kRun;
        wake[v] = ctx.next_ == Context::Next::wait ? ctx.wake_ : 0;
      }
    };

    for (;;) {
      if (active.empty()) {
        // Fast-forward to the next timer.
        while (!timers.empty()) {
          auto [r, v] = timers.top();
          if (status[v] == kWait && wake[v] == r) break;
          timers.pop();
        }
        if (timers.empty()) break;
        round = timers.top().first;
        while (!timers.empty() && timers.top().first == round) {
          auto [r, v] = timers.top();
          timers.pop();
          if (status[v] == kWait && wake[v] == r && stamp[v] != round) {
            stamp[v] = round;
            active.push_back(v);
          }
        }
        std::sort(active.begin(), active.end());
        continue;
      }
      if (opt.stop_after && round > opt.stop_after) break;
      if (round * stretch > cfg_.max_rounds) {
        throw RoundLimitExceeded("round limit " + std::to_string(cfg_.max_rounds) +
                                 " reached before all vertices halted");
      }

      for (auto& c : contexts) {
        c.topo_ = &topo;
        c.buf_ = &buf;
        c.rng_ = CounterRng{cfg_.seed};
        c.network_size_ = net;
      }
      if (contexts.size() == 1 || active.size() < 64) {
        step_range(0, active.size(), contexts[0]);
      } else {
        pool().run(active.size(), [&](std::size_t b, std::size_t e) {
          // Chunks are disjoint; pick a context by chunk start.
          std::size_t per = (active.size() + pool().size() - 1) / pool().size();
          step_range(b, e, contexts[b / per]);
        });
      }

      // Consume inboxes, then account and deliver in sender order.
      for (Vertex v : active) {
        if (buf.in_count[v] == 0) continue;
        for (std::size_t g = topo.offset(v), end = g + topo.degree(v); g < end; ++g) {
          if (buf.in_has[g]) {
            buf.in_has[g] = 0;
            buf.in[g] = Message();
          }
        }
        buf.in_count[v] = 0;
      }
      next_active.clear();
      const std::uint64_t next_round = round + 1;
      for (Vertex v : active) {
        auto ports = topo.ports(v);
        std::size_t base = topo.offset(v);
        for (std::size_t p = 0; p < ports.size(); ++p) {
          std::size_t g = base + p;
          if (!buf.out_has[g]) continue;
          buf.out_has[g] = 0;
          Message& m = buf.out[g];
          std::size_t bits = m.bits();
          if (m.widest_field() > cfg_.bits_per_word) {
            throw PreconditionError("message field wider than the configured word");
          }
          const Port& port = ports[p];
          std::uint64_t hops = topo.hops(port.link);
          trace.total_bits += bits * hops;
          trace.messages += 1;
          trace.max_message_bits = std::max(trace.max_message_bits, bits);
          if (cfg_.record_links) trace.link_loads.push_back({round, port.link, bits});
          if (cap && bits > cap) {
            if (cfg_.enforcement == Enforcement::strict) {
              throw CongestViolation("message of " + std::to_string(bits) + " bits exceeds cap of " +
                                     std::to_string(cap) + " on link " + std::to_string(port.link) +
                                     " in round " + std::to_string(round));
            }
            trace.violations.push_back({round, port.link, bits});
          }
          Vertex to = port.peer;
          if (status[to] == kHalt) {
            m = Message();
            continue;
          }
          std::size_t gin = topo.offset(to) + port.peer_port;
          buf.in[gin] = std::move(m);
          m = Message();
          buf.in_has[gin] = 1;
          buf.in_count[to] += 1;
          if (stamp[to] != next_round) {
            stamp[to] = next_round;
            next_active.push_back(to);
          }
        }
      }
      for (Vertex v : active) {
        if (status[v] == kRun) {
          if (stamp[v] != next_round) {
            stamp[v] = next_round;
            next_active.push_back(v);
          }
        } else if (status[v] == kWait && wake[v] != 0) {
          if (wake[v] <= next_round) {
            wake[v] = next_round;
            if (stamp[v] != next_round) {
              stamp[v] = next_round;
              next_active.push_back(v);
            }
          } else {
            timers.emplace(wake[v], v);
          }
        }
      }
      trace.rounds_executed = round;
      std::sort(next_active.begin(), next_active.end());
      active.swap(next_active);
      // Timers due next round join the active set.
      while (!timers.empty() && timers.top().first <= next_round) {
        auto [r, v] = timers.top();
        timers.pop();
        if (status[v] == kWait && wake[v] == r && r == next_round && stamp[v] != next_round) {
          stamp[v] = next_round;
          active.push_back(v);
        }
      }
      std::sort(active.begin(), active.end());
      round = next_round;
    }

    trace.rounds_executed *= stretch;
    for (auto& v : trace.violations) v.round = (v.round - 1) * stretch + 1;
    for (auto& l : trace.link_loads) l.round = (l.round - 1) * stretch + 1;
    total_.append(trace);
    return {std::move(states), std::move(trace)};
  }

 private:
  unsigned pool_size() { return cfg_.threads > 1 ? pool().size() : 1; }
  WorkerPool& pool() {
    if (!pool_) pool_ = std::make_unique<WorkerPool>(std::max(1u, cfg_.threads));
    return *pool_;
  }

  SimConfig cfg_;
  RoundTrace total_;
  std::unique_ptr<WorkerPool> pool_;
};

}  // namespace densesim::sim
