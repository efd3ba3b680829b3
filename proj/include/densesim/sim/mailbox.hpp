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
#include <deque>
#include <vector>

#include "densesim/errors.hpp"
#include "densesim/sim/engine.hpp"

namespace densesim::sim {

// Splits bounded non-negative integers into single-integer frames that each
// fit the CONGEST cap. Frames go least significant first.
class FrameCodec {
 public:
  FrameCodec() = default;
  FrameCodec(const SimConfig& cfg, std::size_t network_size) {
    std::size_t cap = congest_cap_bits(cfg, network_size);
    if (cap == 0) {
      payload_ = 62;
    } else {
      std::size_t whole = cap / 8 * 8;
      payload_ = whole >= 8 ? whole - 1 : 7;
      if (payload_ > 62) payload_ = 62;
    }
  }

  std::size_t payload_bits() const { return payload_; }

  std::size_t frames(std::uint64_t bound) const {
    std::size_t bits = 0;
    while (bits < 64 && (bound >> bits)) ++bits;
    if (bits == 0) return 1;
    return (bits + payload_ - 1) / payload_;
  }

  void encode(std::uint64_t value, std::size_t frames, std::deque<std::int64_t>& out) const {
    std::uint64_t mask = (std::uint64_t{1} << payload_) - 1;
    for (std::size_t i = 0; i < frames; ++i) {
      out.push_back(static_cast<std::int64_t>(value & mask));
      value = payload_ >= 64 ? 0 : value >> payload_;
    }
    if (value) throw PreconditionError("value exceeds its announced frame budget");
  }

  std::uint64_t decode(std::deque<std::int64_t>& in, std::size_t frames) const {
    std::uint64_t value = 0;
    for (std::size_t i = 0; i < frames; ++i) {
      value |= static_cast<std::uint64_t>(in.front()) << (payload_ * i);
      in.pop_front();
    }
    return value;
  }

 private:
  std::size_t payload_ = 62;
};

// Per-port FIFO queues of single-integer frames. One frame leaves each port per
// round; arrivals are appended in order, so a fixed per-link protocol order
// tells the receiver what each frame means.
struct Mailbox {
  std::vector<std::deque<std::int64_t>> in, out;

  void resize(std::size_t degree) {
    in.assign(degree, {});
    out.assign(degree, {});
  }

  void receive(const Context& ctx) {
    if (!ctx.any_received()) return;
    for (std::size_t p = 0; p < in.size(); ++p) {
      if (const Message* m = ctx.received(p)) in[p].push_back(m->value());
    }
  }

  // Sends one queued frame per port; true while frames remain queued.
  bool flush(Context& ctx) {
    bool more = false;
    for (std::size_t p = 0; p < out.size(); ++p) {
      if (out[p].empty()) continue;
      ctx.send(p, Message::word(out[p].front()));
      out[p].pop_front();
      more = more || !out[p].empty();
    }
    return more;
  }

  bool pending_out() const {
    for (const auto& q : out)
      if (!q.empty()) return true;
    return false;
  }

  bool ready(std::size_t port, std::size_t frames) const { return in[port].size() >= frames; }
};

}  // namespace densesim::sim
