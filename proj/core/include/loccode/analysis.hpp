#pragma once

#include "loccode/nesting.hpp"
#include "loccode/parallel.hpp"

#include <optional>
#include <string>

namespace loccode {

enum class CorruptionKind {
  uniform_random,           // `weight` distinct positions, uniform
  burst,                    // one contiguous run of `weight` flips
  block_targeted,           // all flips inside one layout block
  exhaustive_up_to_weight,  // not a sampler: sweeps enumerate every pattern
};

CorruptionKind corruption_kind_from_string(const std::string& name);
std::string corruption_kind_to_string(CorruptionKind kind);

struct CorruptionModel {
  CorruptionKind kind = CorruptionKind::uniform_random;
  int weight = 0;
  std::uint64_t seed = 0;
};

// One corrupted word per call; differs from `codeword` in at most (and for
// the random kinds, exactly min(weight, room)) positions. block_targeted
// needs the layout of the code under attack.
BitWord corrupt(const BitWord& codeword, const CorruptionModel& model, Rng& rng,
                const NestedLayout* layout = nullptr);

struct Counterexample {
  BitWord word;
  int index = 0;
  Rational success;
  std::string note;
};

struct McStats {
  std::uint64_t samples = 0;
  std::uint64_t successes = 0;
  double cp_low = 0.0;   // Clopper-Pearson 99% interval for the pooled
  double cp_high = 1.0;  // single-run success rate
};

struct VerificationReport {
  std::string kind;        // completeness | soundness | testability
  std::string code_label;
  int n = 0, k = 0;
  Rational radius;         // 0/1 for testability rows
  std::uint64_t sweep_size = 0;
  bool pass = false;
  Rational min_success;    // min success probability, or kappa_hat
  long long max_queries = 0;
  bool exhaustive = true;
  std::uint64_t seed = 0;
  std::optional<Counterexample> counterexample;
  std::optional<McStats> mc;
};

// CSV schema, bit-exact:
// kind,code,n,k,radius_num,radius_den,sweep_size,min_success_num,min_success_den,max_queries,exhaustive,seed
std::string report_csv_header();
std::string report_csv_row(const VerificationReport& report);
std::string report_json(const VerificationReport& report);

struct SweepOptions {
  std::uint64_t budget = kDefaultEnumerationBudget;
  int threads = 1;
  std::uint64_t master_seed = 0;
  std::uint64_t mc_samples = 0;  // 0 = exhaustive required
  std::string code_label = "code";
};

// Perfect-completeness sweep: every codeword, every index; the output
// distribution must be a point mass on the true symbol. For product-form
// correctors the distribution itself covers every randomness outcome, so
// the check is exhaustive without flattening the product space. Falls back
// to sampled (codeword, index) pairs when 2^k * indices exceeds the budget.
VerificationReport verify_completeness(const Corrector& corrector, const SweepOptions& opts);

// Tester counterpart: every codeword under every outcome must accept.
VerificationReport verify_tester_completeness(const Tester& tester, const SweepOptions& opts);

// Success probability of `corrector` on (w, i) measured against an explicit
// reference codeword: Pr[output in {reference_i, bot}], exact.
Rational success_probability(const Corrector& corrector, const BitWord& w, int i,
                             const BitWord& reference);

// Closed form for a nested corrector: 1 - (1-r)^t * (1-s), where r is the
// outer tester's exact rejection probability on w and s the inner
// corrector's success probability on the zoomed block. Exact by the product
// structure of the randomness space.
Rational nested_success_probability(const NestedCorrector& corrector, const BitWord& w, int i,
                                    const BitWord& reference);

// Variant that locates the reference itself; requires the nearest codeword
// of the nested code to be unique and reports ambiguity as an error rather
// than guessing.
struct NearestSuccess {
  Rational probability;
  BitWord reference;
};
NearestSuccess nested_success_probability(const NestedCorrector& corrector, const BitWord& w,
                                          int i, std::uint64_t budget = kDefaultEnumerationBudget);

// Soundness sweep at the given radius. exhaustive_up_to_weight enumerates
// every error pattern of weight <= floor(radius*n) on every codeword and
// every index; the random kinds sample mc_samples (codeword, pattern, index)
// trials. Success is always measured against the codeword the pattern was
// applied to. Pass iff the minimum success probability is >= 2/3.
VerificationReport soundness_sweep(const Corrector& corrector, const Rational& radius,
                                   const CorruptionModel& model, const SweepOptions& opts);

struct TestabilityReport {
  ExactTestability data;
  Rational kappa_clamped;  // min(kappa_hat, 1)
  bool exhaustive = true;
  std::uint64_t samples = 0;
};

// kappa_hat = min over words outside the code of reject probability over
// distance. Exact mode enumerates all 2^n words; MC mode samples words and
// reports the minimum observed ratio, an upper bound on kappa.
TestabilityReport measure_testability(const Tester& tester, const SweepOptions& opts);

VerificationReport testability_report(const Tester& tester, const TestabilityReport& result,
                                      const SweepOptions& opts);

// Binary entropy, log base 2; H(0) = H(1) = 0.
long double binary_entropy(long double x);

// Gilbert-Varshamov slack: 1 - R - H(delta). Negative values mean the
// (R, delta) pair is infeasible and are reported as-is, never clamped.
long double gv_epsilon(long double rate, long double delta);

}  // namespace loccode
