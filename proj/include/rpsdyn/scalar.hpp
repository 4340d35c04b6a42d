// Copyright 2026 The rpsdyn Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#ifndef RPSDYN_SCALAR_HPP_
#define RPSDYN_SCALAR_HPP_

// Arithmetic back ends. Every algorithm in the library is a template over a
// scalar type; `double` gives the fast float path and `Rational` gives exact
// arithmetic where ties and region boundaries are decided without tolerance.

#include <cctype>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <string>
#include <string_view>

#include <boost/multiprecision/cpp_int.hpp>

#include "rpsdyn/error.hpp"

namespace rpsdyn {

using BigInt = boost::multiprecision::cpp_int;
using Rational = boost::multiprecision::cpp_rational;

enum class Arithmetic { kFloat64, kExactRational };

namespace internal {

// True if `text` has the shape "p/q" (integers, optional sign on p).
inline bool LooksLikeFraction(std::string_view text) {
  return text.find('/') != std::string_view::npos;
}

inline std::string_view Trim(std::string_view text) {
  while (!text.empty() && std::isspace(static_cast<unsigned char>(text.front())))
    text.remove_prefix(1);
  while (!text.empty() && std::isspace(static_cast<unsigned char>(text.back())))
    text.remove_suffix(1);
  return text;
}

inline bool AllDigits(std::string_view text) {
  if (text.empty()) return false;
  for (char c : text) {
    if (!std::isdigit(static_cast<unsigned char>(c))) return false;
  }
  return true;
}

inline BigInt ParseBigInt(std::string_view text) {
  bool negative = false;
  if (!text.empty() && (text.front() == '-' || text.front() == '+')) {
    negative = text.front() == '-';
    text.remove_prefix(1);
  }
  if (!AllDigits(text)) {
    Fail(ErrorCode::kConfigInvalid,
         "malformed integer '" + std::string(text) + "'");
  }
  BigInt value{std::string(text)};
  return negative ? BigInt(-value) : value;
}

// Decimal literal ("-0.05", "3", "1.5e-3") to an exact rational.
inline Rational ParseDecimalExact(std::string_view text) {
  bool negative = false;
  if (!text.empty() && (text.front() == '-' || text.front() == '+')) {
    negative = text.front() == '-';
    text.remove_prefix(1);
  }
  long exponent = 0;
  if (auto e = text.find_first_of("eE"); e != std::string_view::npos) {
    std::string_view exp_text = text.substr(e + 1);
    text = text.substr(0, e);
    BigInt exp_value = ParseBigInt(exp_text);
    if (abs(exp_value) > 4096) {
      Fail(ErrorCode::kConfigInvalid, "decimal exponent out of range");
    }
    exponent = exp_value.convert_to<long>();
  }
  std::string digits;
  if (auto dot = text.find('.'); dot != std::string_view::npos) {
    std::string_view whole = text.substr(0, dot);
    std::string_view frac = text.substr(dot + 1);
    if ((!whole.empty() && !AllDigits(whole)) ||
        (!frac.empty() && !AllDigits(frac)) || (whole.empty() && frac.empty())) {
      Fail(ErrorCode::kConfigInvalid,
           "malformed decimal '" + std::string(text) + "'");
    }
    digits = std::string(whole) + std::string(frac);
    exponent -= static_cast<long>(frac.size());
  } else {
    if (!AllDigits(text)) {
      Fail(ErrorCode::kConfigInvalid,
           "malformed decimal '" + std::string(text) + "'");
    }
    digits = std::string(text);
  }
  BigInt mantissa{digits};
  if (negative) mantissa = -mantissa;
  BigInt ten_power = boost::multiprecision::pow(BigInt(10),
                                                static_cast<unsigned>(std::labs(exponent)));
  if (exponent >= 0) return Rational(mantissa * ten_power);
  return Rational(mantissa, ten_power);
}

inline Rational ParseRational(std::string_view text) {
  text = Trim(text);
  if (LooksLikeFraction(text)) {
    auto slash = text.find('/');
    BigInt num = ParseBigInt(Trim(text.substr(0, slash)));
    BigInt den = ParseBigInt(Trim(text.substr(slash + 1)));
    if (den == 0) Fail(ErrorCode::kConfigInvalid, "zero denominator");
    return Rational(num, den);
  }
  return ParseDecimalExact(text);
}

inline unsigned BitLength(const BigInt& value) {
  if (value == 0) return 0;
  return static_cast<unsigned>(boost::multiprecision::msb(abs(value))) + 1;
}

}  // namespace internal

template <typename T>
struct ScalarTraits;

template <>
struct ScalarTraits<double> {
  static constexpr bool kExact = false;
  static constexpr Arithmetic kArithmetic = Arithmetic::kFloat64;

  static double FromRatio(long num, long den) {
    return static_cast<double>(num) / static_cast<double>(den);
  }
  static double Parse(std::string_view text) {
    text = internal::Trim(text);
    if (internal::LooksLikeFraction(text)) {
      return internal::ParseRational(text).convert_to<double>();
    }
    // Validate the shape exactly as the rational path would.
    (void)internal::ParseDecimalExact(text);
    return std::strtod(std::string(text).c_str(), nullptr);
  }
  static double ToDouble(double v) { return v; }
  static std::string Format(double v) {
    char buffer[40];
    std::snprintf(buffer, sizeof(buffer), "%.17g", v);
    return buffer;
  }
  static unsigned BitLength(double) { return 0; }
  static bool IsInteger(double v) { return std::isfinite(v) && std::floor(v) == v; }
};

template <>
struct ScalarTraits<Rational> {
  static constexpr bool kExact = true;
  static constexpr Arithmetic kArithmetic = Arithmetic::kExactRational;

  static Rational FromRatio(long num, long den) { return Rational(num, den); }
  static Rational Parse(std::string_view text) {
    return internal::ParseRational(text);
  }
  static double ToDouble(const Rational& v) { return v.convert_to<double>(); }
  static std::string Format(const Rational& v) {
    return numerator(v).str() + "/" + denominator(v).str();
  }
  // Larger of the numerator and denominator bit lengths.
  static unsigned BitLength(const Rational& v) {
    unsigned num_bits = internal::BitLength(numerator(v));
    unsigned den_bits = internal::BitLength(denominator(v));
    return num_bits > den_bits ? num_bits : den_bits;
  }
  static bool IsInteger(const Rational& v) { return denominator(v) == 1; }
};

template <typename T>
double ToDouble(const T& v) {
  return ScalarTraits<T>::ToDouble(v);
}

template <typename T>
T Abs(const T& v) {
  return v < T(0) ? T(-v) : v;
}

}  // namespace rpsdyn

#endif  // RPSDYN_SCALAR_HPP_
