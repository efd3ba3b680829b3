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
#include <string>
#include <string_view>

#include <boost/multiprecision/cpp_int.hpp>

#include "densesim/errors.hpp"

namespace densesim {

using BigInt = boost::multiprecision::number<boost::multiprecision::cpp_int_backend<>, boost::multiprecision::et_off>;

// Exact rational number, always normalized (lowest terms, positive denominator).
using Rational = boost::multiprecision::number<boost::multiprecision::cpp_rational_backend, boost::multiprecision::et_off>;

inline Rational make_rational(std::int64_t num, std::int64_t den = 1) {
  if (den == 0) throw PreconditionError("rational with zero denominator");
  return Rational(BigInt(num), BigInt(den));
}

inline BigInt numerator_of(const Rational& r) {
  return boost::multiprecision::numerator(r);
}
inline BigInt denominator_of(const Rational& r) {
  return boost::multiprecision::denominator(r);
}

inline BigInt floor_of(const Rational& r) {
  BigInt num = numerator_of(r), den = denominator_of(r);
  BigInt q = num / den;  // truncates toward zero
  if (num < 0 && q * den != num) --q;
  return q;
}

inline BigInt ceil_of(const Rational& r) { return -floor_of(-r); }

inline bool is_integer(const Rational& r) { return denominator_of(r) == 1; }

// Parses "p/q", "p" or "-p/q".
inline Rational parse_rational(std::string_view text) {
  auto parse_int = [&](std::string_view s) {
    if (s.empty()) throw PreconditionError("malformed rational '" + std::string(text) + "'");
    std::size_t i = (s[0] == '-' || s[0] == '+') ? 1 : 0;
    if (i == s.size()) throw PreconditionError("malformed rational '" + std::string(text) + "'");
    for (std::size_t k = i; k < s.size(); ++k) {
      if (s[k] < '0' || s[k] > '9') {
        throw PreconditionError("malformed rational '" + std::string(text) + "'");
      }
    }
    return BigInt(std::string(s[0] == '+' ? s.substr(1) : s));
  };
  auto slash = text.find('/');
  if (slash == std::string_view::npos) return Rational(parse_int(text));
  BigInt num = parse_int(text.substr(0, slash));
  BigInt den = parse_int(text.substr(slash + 1));
  if (den == 0) throw PreconditionError("rational with zero denominator");
  return Rational(num, den);
}

// Always "p/q", including integers ("2/1").
inline std::string to_string(const Rational& r) {
  return numerator_of(r).str() + "/" + denominator_of(r).str();
}

inline double to_double(const Rational& r) { return r.convert_to<double>(); }

// Number of bits in |x| (0 for x == 0).
inline std::size_t bit_length(const BigInt& x) {
  if (x == 0) return 0;
  return boost::multiprecision::msb(boost::multiprecision::abs(x)) + 1;
}

// If r == 2^k for some integer k (possibly negative) returns k through *exp.
inline bool is_power_of_two(const Rational& r, long* exp = nullptr) {
  if (r <= 0) return false;
  BigInt num = numerator_of(r), den = denominator_of(r);
  auto single_bit = [](const BigInt& x) { return (x & (x - 1)) == 0; };
  if (num == 1 && single_bit(den)) {
    if (exp) *exp = -static_cast<long>(bit_length(den) - 1);
    return true;
  }
  if (den == 1 && single_bit(num)) {
    if (exp) *exp = static_cast<long>(bit_length(num) - 1);
    return true;
  }
  return false;
}

}  // namespace densesim
