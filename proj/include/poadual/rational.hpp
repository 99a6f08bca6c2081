// Copyright 2026 The poadual Authors
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

#include <boost/multiprecision/cpp_int.hpp>

#include <optional>
#include <stdexcept>
#include <string>

namespace poadual {

// Exact arbitrary-precision rational. All arithmetic in the library is exact;
// there is no floating point on any certified path.
using Rational = boost::multiprecision::cpp_rational;
using Integer = boost::multiprecision::cpp_int;

struct Error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Instance or LP text could not be parsed.
struct ParseError : Error {
  ParseError(const std::string& what, int line)
      : Error(what + " (line " + std::to_string(line) + ")"), line(line) {}
  explicit ParseError(const std::string& what) : Error(what), line(0) {}
  int line;
};

// An enumeration cap was hit; `dimension` names the offending quantity.
struct CapExceeded : Error {
  CapExceeded(const std::string& dimension, long long value, long long cap)
      : Error("cap exceeded: " + dimension + " = " + std::to_string(value) +
              " > " + std::to_string(cap)),
        dimension(dimension) {}
  std::string dimension;
};

inline Rational make_rational(long long num, long long den = 1) {
  if (den == 0) throw Error("zero denominator");
  return Rational(Integer(num), Integer(den));
}

// Parses "p", "-p", "p/q". Decimals are rejected: the formats used by this
// library are exact by contract.
inline Rational parse_rational(const std::string& text) {
  if (text.empty()) throw Error("empty rational literal");
  if (text.find('.') != std::string::npos)
    throw Error("decimal literal not allowed, use p/q: '" + text + "'");
  auto slash = text.find('/');
  try {
    if (slash == std::string::npos) return Rational(Integer(text));
    Integer num(text.substr(0, slash));
    Integer den(text.substr(slash + 1));
    if (den == 0) throw Error("zero denominator in '" + text + "'");
    return Rational(num, den);
  } catch (const std::runtime_error&) {
    throw Error("bad rational literal '" + text + "'");
  }
}

// Canonical rendering: "p" when the denominator is 1, else "p/q".
inline std::string to_string(const Rational& r) {
  Integer num = boost::multiprecision::numerator(r);
  Integer den = boost::multiprecision::denominator(r);
  if (den == 1) return num.str();
  return num.str() + "/" + den.str();
}

inline bool is_integer(const Rational& r) {
  return boost::multiprecision::denominator(r) == 1;
}

// Floor of p/q as an Integer (toward negative infinity).
inline Integer rational_floor(const Rational& r) {
  Integer num = boost::multiprecision::numerator(r);
  Integer den = boost::multiprecision::denominator(r);
  Integer q = num / den;
  if (num < 0 && q * den != num) --q;
  return q;
}

}  // namespace poadual
