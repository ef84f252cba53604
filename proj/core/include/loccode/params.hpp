#pragma once

#include "loccode/rational.hpp"

#include <string>
#include <vector>

namespace loccode {

// Every hidden asymptotic multiplier lives here, default 1. Calculator
// outputs are formula evaluations under these constants, never ground-truth
// claims about the underlying constructions.
struct Constants {
  Rational c_p{1};       // prime-power threshold scale
  Rational c_delta{1};   // distance scale
  Rational c_kappa{1};   // testability scale
  Rational c_q{1};       // query-complexity scale
  Rational c_n{1};       // block-length scale
  Rational c_rate{1};    // rate-loss scale
  Rational c_radius{1};  // correcting-radius scale
  Rational c_query{1};   // headline query scale

  static Constants from_json_file(const std::string& path);
  static Constants from_json_text(const std::string& text);
  std::string summary() const;
};

// Smallest prime power >= bound that is odd (Miller-Rabin primality on the
// root of each candidate power).
BigInt next_odd_prime_power(const Rational& bound);
bool is_odd_prime_power(const BigInt& v);

// Rate-epsilon family: p = smallest odd prime power >= c_p*(1/eps)^10,
// delta = c_delta*eps^3, kappa = c_kappa*eps^15, q = c_q*(1/eps)^20,
// block length n_j = (q/8)*(p^(3j) - p^j).
struct DellmParams {
  Rational eps;
  BigInt p;
  Rational delta, kappa, q;
  std::vector<Rational> block_lengths;  // levels 1..levels
};
DellmParams dellm_params(const Rational& eps, const Constants& constants, int levels = 3);

// Exact block-length ratio (p^(3(j+1)) - p^(j+1)) / (p^(3j) - p^j).
// Equals p*(p^2+1) exactly at j = 1 and lies in (p^3, p*(p^2+1)] for all j.
Rational block_length_ratio(const BigInt& p, int j);

// Family instantiated at block-length target N: p = smallest odd prime
// power >= c_p*(log2 N)^10, n_j = round(c_n*(p^(3j) - p^j)*(log2 N)^20),
// m = largest j with n_j <= N, eps_ltc = 1/(100*log2 N), and the remaining
// parameters from the same power laws in log2 N.
struct FamilyDescriptor {
  BigInt target;  // N
  long double log2_target;
  BigInt p;
  long double epsilon_ltc, delta_ltc, kappa_ltc, q_ltc;
  std::vector<BigInt> block_lengths;  // n_1..n_m
  int m = 0;
};
FamilyDescriptor family_params(const BigInt& target, const Constants& constants,
                               int max_levels = 10000);

// Straight numeric evaluations of the headline displays; constants are the
// caller's, not the paper's.
struct HeadlineEvaluation {
  long double queries = 0;
  long double rate_loss = 0;
  long double radius = 0;
  long double block_low = 0;
};
// Iterated-only construction at target N: queries c_query*log^69 N/loglog N,
// rate loss c_rate/loglog N, radius c_radius/log^3 N, block >= N/log^30 N.
HeadlineEvaluation headline_iterated(const BigInt& target, const Constants& constants);
// Radius-boosted construction from a tester with parameters (q, kappa):
// queries c_query*(q/kappa*log^33 N + log^69 N/loglog N).
HeadlineEvaluation headline_boosted(const BigInt& target, long double tester_q,
                                    long double tester_kappa, const Constants& constants);
// Explicit family at rate 1 - eps: queries c_query*((1/eps)^35*log^33 n +
// log^69 n/loglog n), radius c_radius*eps^3.
HeadlineEvaluation headline_explicit(const BigInt& target, long double eps,
                                     const Constants& constants);

}  // namespace loccode
