#include "loccode/params.hpp"

#include <boost/multiprecision/miller_rabin.hpp>

#include <json.hpp>

#include <cmath>
#include <fstream>
#include <sstream>
#include <stdexcept>

namespace loccode {

namespace {

Rational rational_from_json(const nlohmann::json& v) {
  if (v.is_string()) return parse_rational(v.get<std::string>());
  if (v.is_number_integer()) return Rational(v.get<long long>());
  throw std::invalid_argument("constants: values must be integers or \"p/q\" strings");
}

bool is_probable_prime(const BigInt& v) {
  if (v < 2) return false;
  if (v < 4) return true;
  if (v % 2 == 0) return false;
  return boost::multiprecision::miller_rabin_test(v, 32);
}

// Integer k-th root by binary search.
BigInt integer_root(const BigInt& v, unsigned k) {
  if (v < 0) throw std::invalid_argument("integer_root: negative value");
  if (v < 2 || k == 1) return v;
  BigInt lo = 1, hi = BigInt(1) << (msb_index(v) / k + 1);
  while (lo < hi) {
    BigInt mid = (lo + hi + 1) / 2;
    if (boost::multiprecision::pow(mid, k) <= v)
      lo = mid;
    else
      hi = mid - 1;
  }
  return lo;
}

long double powl_int(long double base, int e) {
  long double out = 1.0L;
  for (int i = 0; i < e; ++i) out *= base;
  return out;
}

// Exact dyadic rational equal to the long double value (finite, positive).
Rational dyadic_from_long_double(long double x) {
  if (!(x > 0) || !std::isfinite(x))
    throw std::invalid_argument("dyadic_from_long_double: need a finite positive value");
  int exp2 = 0;
  long double mant = frexpl(x, &exp2);  // x = mant * 2^exp2, mant in [0.5, 1)
  BigInt mant_int = BigInt(llroundl(ldexpl(mant, 62)));
  if (exp2 >= 62) return Rational(mant_int * (BigInt(1) << (exp2 - 62)));
  return Rational(mant_int, BigInt(1) << (62 - exp2));
}

}  // namespace

Constants Constants::from_json_text(const std::string& text) {
  nlohmann::json j = nlohmann::json::parse(text);
  Constants c;
  auto fill = [&](const char* key, Rational& slot) {
    if (j.contains(key)) slot = rational_from_json(j.at(key));
  };
  fill("c_p", c.c_p);
  fill("c_delta", c.c_delta);
  fill("c_kappa", c.c_kappa);
  fill("c_q", c.c_q);
  fill("c_n", c.c_n);
  fill("c_rate", c.c_rate);
  fill("c_radius", c.c_radius);
  fill("c_query", c.c_query);
  for (auto& [key, value] : j.items()) {
    (void)value;
    if (key != "c_p" && key != "c_delta" && key != "c_kappa" && key != "c_q" && key != "c_n" &&
        key != "c_rate" && key != "c_radius" && key != "c_query")
      throw std::invalid_argument("constants: unknown key " + key);
  }
  return c;
}

Constants Constants::from_json_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::invalid_argument("cannot open constants file: " + path);
  std::stringstream ss;
  ss << in.rdbuf();
  return from_json_text(ss.str());
}

std::string Constants::summary() const {
  return "c_p=" + format_rational(c_p) + " c_delta=" + format_rational(c_delta) +
         " c_kappa=" + format_rational(c_kappa) + " c_q=" + format_rational(c_q) +
         " c_n=" + format_rational(c_n) + " c_rate=" + format_rational(c_rate) +
         " c_radius=" + format_rational(c_radius) + " c_query=" + format_rational(c_query);
}

bool is_odd_prime_power(const BigInt& v) {
  if (v < 3 || v % 2 == 0) return false;
  unsigned max_exp = msb_index(v) + 1;
  for (unsigned e = 1; e <= max_exp; ++e) {
    BigInt root = integer_root(v, e);
    if (boost::multiprecision::pow(root, e) == v && is_probable_prime(root)) return true;
    if (root < 3) break;
  }
  return false;
}

BigInt next_odd_prime_power(const Rational& bound) {
  BigInt candidate = ceil_div(numerator(bound), denominator(bound));
  if (candidate < 3) candidate = 3;
  while (!is_odd_prime_power(candidate)) ++candidate;
  return candidate;
}

DellmParams dellm_params(const Rational& eps, const Constants& constants, int levels) {
  if (eps <= 0 || eps >= 1) throw std::invalid_argument("dellm_params: eps must lie in (0, 1)");
  if (levels < 1) throw std::invalid_argument("dellm_params: levels must be >= 1");
  Rational inv = Rational(1) / eps;
  DellmParams out;
  out.eps = eps;
  out.p = next_odd_prime_power(constants.c_p * rational_pow(inv, 10));
  out.delta = constants.c_delta * rational_pow(eps, 3);
  out.kappa = constants.c_kappa * rational_pow(eps, 15);
  out.q = constants.c_q * rational_pow(inv, 20);
  for (int j = 1; j <= levels; ++j) {
    BigInt powers = boost::multiprecision::pow(out.p, static_cast<unsigned>(3 * j)) -
                    boost::multiprecision::pow(out.p, static_cast<unsigned>(j));
    out.block_lengths.push_back(out.q / 8 * Rational(powers));
  }
  return out;
}

Rational block_length_ratio(const BigInt& p, int j) {
  if (p < 3 || j < 1) throw std::invalid_argument("block_length_ratio: need p >= 3, j >= 1");
  BigInt hi = boost::multiprecision::pow(p, static_cast<unsigned>(3 * (j + 1))) -
              boost::multiprecision::pow(p, static_cast<unsigned>(j + 1));
  BigInt lo = boost::multiprecision::pow(p, static_cast<unsigned>(3 * j)) -
              boost::multiprecision::pow(p, static_cast<unsigned>(j));
  return Rational(hi, lo);
}

FamilyDescriptor family_params(const BigInt& target, const Constants& constants,
                               int max_levels) {
  if (target < 4) throw std::invalid_argument("family_params: N too small");
  FamilyDescriptor out;
  out.target = target;
  long double logn = log2_bigint(target);
  out.log2_target = logn;
  out.p = next_odd_prime_power(constants.c_p * dyadic_from_long_double(powl_int(logn, 10)));
  out.epsilon_ltc = 1.0L / (100.0L * logn);
  out.delta_ltc = to_long_double(constants.c_delta) / powl_int(logn, 3);
  out.kappa_ltc = to_long_double(constants.c_kappa) / powl_int(logn, 15);
  out.q_ltc = to_long_double(constants.c_q) * powl_int(logn, 20);

  // (log2 N)^20 as an exact dyadic, so the rounding of n_j is well defined.
  Rational log_pow = dyadic_from_long_double(powl_int(logn, 20));

  for (int j = 1; j <= max_levels; ++j) {
    BigInt powers = boost::multiprecision::pow(out.p, static_cast<unsigned>(3 * j)) -
                    boost::multiprecision::pow(out.p, static_cast<unsigned>(j));
    Rational exact = constants.c_n * Rational(powers) * log_pow;
    BigInt rounded = rational_floor(exact + Rational(1, 2));
    if (rounded > target) break;
    out.block_lengths.push_back(rounded);
  }
  out.m = static_cast<int>(out.block_lengths.size());
  if (out.m == 0)
    throw std::invalid_argument("family_params: N too small (n_1 already exceeds N)");

  // n_1 <= 8*c_n*(2*c_p)^3*(log N)^50 follows from the prime-power search
  // staying within a factor 2 of its threshold.
  long double n1 = out.block_lengths.front().convert_to<long double>();
  long double cap = 8.0L * to_long_double(constants.c_n) *
                    powl_int(2.0L * std::max(1.0L, to_long_double(constants.c_p)), 3) *
                    powl_int(logn, 50);
  if (n1 > cap * 1.0001L) throw std::logic_error("family_params: n_1 bound violated");
  return out;
}

HeadlineEvaluation headline_iterated(const BigInt& target, const Constants& constants) {
  long double logn = log2_bigint(target);
  long double loglog = log2l(logn);
  if (loglog <= 0) throw std::invalid_argument("headline_iterated: N too small");
  HeadlineEvaluation out;
  out.queries = to_long_double(constants.c_query) * powl_int(logn, 69) / loglog;
  out.rate_loss = to_long_double(constants.c_rate) / loglog;
  out.radius = to_long_double(constants.c_radius) / powl_int(logn, 3);
  out.block_low = target.convert_to<long double>() / powl_int(logn, 30);
  return out;
}

HeadlineEvaluation headline_boosted(const BigInt& target, long double tester_q,
                                    long double tester_kappa, const Constants& constants) {
  if (tester_q <= 0 || tester_kappa <= 0)
    throw std::invalid_argument("headline_boosted: q and kappa must be positive");
  long double logn = log2_bigint(target);
  long double loglog = log2l(logn);
  if (loglog <= 0) throw std::invalid_argument("headline_boosted: N too small");
  HeadlineEvaluation out;
  out.queries = to_long_double(constants.c_query) *
                (tester_q / tester_kappa * powl_int(logn, 33) + powl_int(logn, 69) / loglog);
  out.rate_loss = to_long_double(constants.c_rate) / loglog;
  return out;
}

HeadlineEvaluation headline_explicit(const BigInt& target, long double eps,
                                     const Constants& constants) {
  if (eps <= 0 || eps >= 1) throw std::invalid_argument("headline_explicit: eps must lie in (0, 1)");
  long double logn = log2_bigint(target);
  long double loglog = log2l(logn);
  if (loglog <= 0) throw std::invalid_argument("headline_explicit: N too small");
  HeadlineEvaluation out;
  out.queries = to_long_double(constants.c_query) *
                (powl_int(1.0L / eps, 35) * powl_int(logn, 33) + powl_int(logn, 69) / loglog);
  out.rate_loss = to_long_double(constants.c_rate) / loglog;
  out.radius = to_long_double(constants.c_radius) * powl_int(eps, 3);
  return out;
}

}  // namespace loccode
