#pragma once

#include <boost/multiprecision/cpp_int.hpp>

#include <cstdint>
#include <string>
#include <string_view>

namespace loccode {

// Exact arithmetic substrate. Distances, probabilities and rate bounds are
// never represented in floating point.
using BigInt = boost::multiprecision::cpp_int;
using Rational = boost::multiprecision::cpp_rational;

// r^e with numerator and denominator exponentiated separately.
Rational rational_pow(const Rational& r, std::uint64_t e);

// Accepts "p" or "p/q" (q > 0, arbitrary precision). Throws std::invalid_argument.
Rational parse_rational(std::string_view text);

// Canonical "p/q" rendering; the denominator is always written ("3/1").
std::string format_rational(const Rational& r);

// ceil(num/den), den > 0.
BigInt ceil_div(const BigInt& num, const BigInt& den);

// floor(r) as an integer.
BigInt rational_floor(const Rational& r);

// ceil(2*ln(3) * x) for x > 0, decided exactly by sandwiching 2*ln 3 between
// rational bounds 1e-59 apart. Throws std::overflow_error if the bounds do
// not settle the ceiling (would need x beyond ~1e59).
BigInt ceil_two_ln3_times(const Rational& x);

long double to_long_double(const Rational& r);

// Position of the most significant bit, 0-based; v must be >= 1.
unsigned msb_index(const BigInt& v);

// log2(v) to long-double precision for arbitrarily large v >= 1.
long double log2_bigint(const BigInt& v);

}  // namespace loccode
