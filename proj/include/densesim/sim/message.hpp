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
#include <memory>
#include <span>
#include <vector>

namespace densesim::sim {

// Minimal two's-complement width of x, rounded up to whole bytes.
inline std::size_t integer_bits(std::int64_t x) {
  std::uint64_t mag = x < 0 ? ~static_cast<std::uint64_t>(x) : static_cast<std::uint64_t>(x);
  std::size_t width = 1;
  while (mag) {
    ++width;
    mag >>= 1;
  }
  return (width + 7) / 8 * 8;
}

inline constexpr std::size_t kCompositeTagBits = 4;

// One integer, or a composite list of integers.
class Message {
 public:
  Message() = default;

  static Message word(std::int64_t v) {
    Message m;
    m.value_ = v;
    return m;
  }
  static Message list(std::vector<std::int64_t> items) {
    Message m;
    m.list_ = std::make_shared<const std::vector<std::int64_t>>(std::move(items));
    return m;
  }

  bool is_list() const { return list_ != nullptr; }
  std::int64_t value() const { return value_; }
  std::span<const std::int64_t> items() const {
    if (!list_) return {&value_, 1};
    return {list_->data(), list_->size()};
  }

  std::size_t bits() const {
    if (!list_) return integer_bits(value_);
    std::size_t total = kCompositeTagBits;
    for (auto x : *list_) total += integer_bits(x);
    return total;
  }
  // Widest integer field before byte rounding is irrelevant; this is after.
  std::size_t widest_field() const {
    if (!list_) return integer_bits(value_);
    std::size_t w = 0;
    for (auto x : *list_) w = std::max(w, integer_bits(x));
    return w;
  }

  friend bool operator==(const Message& a, const Message& b) {
    if (a.is_list() != b.is_list()) return false;
    if (!a.is_list()) return a.value_ == b.value_;
    return *a.list_ == *b.list_;
  }

 private:
  std::int64_t value_ = 0;
  std::shared_ptr<const std::vector<std::int64_t>> list_;
};

}  // namespace densesim::sim
