#include "loccode/rational.hpp"

#include <cmath>
#include <stdexcept>

namespace loccode {

Rational rational_pow(const Rational& r, std::uint64_t e) {
  if (e == 0) return Rational(1);
  BigInt num = boost::multiprecision::pow(numerator(r), static_cast<unsigned>(e));
  BigInt den = boost::multiprecision::pow(denominator(r), static_cast<unsigned>(e));
  return Rational(num, den);
}

Rational parse_rational(std::string_view text) {
  auto bad = [&] { throw std::invalid_argument("not a rational: '" + std::string(text) + "'"); };
  if (text.empty()) bad();
  std::size_t slash = text.find('/');
  auto parse_int = [&](std::string_view part) -> BigInt {
    if (part.empty()) bad();
    std::size_t start = (part[0] == '-') ? 1 : 0;
    if (start == part.size()) bad();
    for (std::size_t i = start; i < part.size(); ++i)
      if (part[i] < '0' || part[i] > '9') bad();
    return BigInt(std::string(part));
  };
  if (slash == std::string_view::npos) return Rational(parse_int(text));
  BigInt num = parse_int(text.substr(0, slash));
  BigInt den = parse_int(text.substr(slash + 1));
  if (den <= 0) bad();
  return Rational(num, den);
}

std::string format_rational(const Rational& r) {
  return numerator(r).str() + "/" + denominator(r).str();
}

BigInt ceil_div(const BigInt& num, const BigInt& den) {
  if (den <= 0) throw std::invalid_argument("ceil_div: denominator must be positive");
  BigInt q = num / den;
  if (num > q * den) ++q;
  return q;
}

BigInt rational_floor(const Rational& r) {
  BigInt q = numerator(r) / denominator(r);
  if (q * denominator(r) > numerator(r)) --q;  // round toward -inf
  return q;
}

BigInt ceil_two_ln3_times(const Rational& x) {
  // 2*ln 3 = 2.19722457733621938279049047384505140929498111564549890346938866727...
  static const BigInt kDigits("219722457733621938279049047384505140929498111564549890346938");
  static const BigInt kScale = boost::multiprecision::pow(BigInt(10), 59);
  const Rational lo(kDigits, kScale);
  const Rational hi(kDigits + 1, kScale);
  Rational a = lo * x;
  Rational b = hi * x;
  BigInt ca = ceil_div(numerator(a), denominator(a));
  BigInt cb = ceil_div(numerator(b), denominator(b));
  if (ca != cb) throw std::overflow_error("ceil_two_ln3_times: bounds too coarse for this input");
  return ca;
}

long double to_long_double(const Rational& r) { return r.convert_to<long double>(); }

unsigned msb_index(const BigInt& v) {
  if (v < 1) throw std::invalid_argument("msb_index: value must be >= 1");
  return boost::multiprecision::msb(v);
}

long double log2_bigint(const BigInt& v) {
  unsigned m = msb_index(v);
  if (m <= 62) return std::log2l(v.convert_to<long double>());
  unsigned shift = m - 62;
  BigInt top = v >> shift;
  return std::log2l(top.convert_to<long double>()) + static_cast<long double>(shift);
}

}  // namespace loccode
