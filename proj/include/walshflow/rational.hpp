#pragma once

#include <cstdint>
#include <string>
#include <string_view>

#include <boost/rational.hpp>
#include <boost/safe_numerics/safe_integer.hpp>

namespace walshflow {

// Exact weights. Arithmetic overflow throws instead of wrapping.
using RationalInt = boost::safe_numerics::safe<std::int64_t>;
using Rational = boost::rational<RationalInt>;

inline Rational make_rational(std::int64_t num, std::int64_t den = 1) {
  return Rational(RationalInt(num), RationalInt(den));
}

inline std::int64_t numerator(const Rational& r) { return static_cast<std::int64_t>(r.numerator()); }
inline std::int64_t denominator(const Rational& r) { return static_cast<std::int64_t>(r.denominator()); }

inline double to_double(const Rational& r) {
  return static_cast<double>(numerator(r)) / static_cast<double>(denominator(r));
}

// Parses "p/q", "p" or " p / q "; throws walshflow::Error(config_error) on malformed input.
Rational parse_rational(std::string_view text);

std::string to_string(const Rational& r);

}  // namespace walshflow
