#pragma once

#include "loccode/codes.hpp"
#include "loccode/rng.hpp"

#include <functional>
#include <memory>
#include <optional>
#include <set>
#include <vector>

namespace loccode {

// Corrector output alphabet: a symbol or the rejection mark.
enum class Out : std::uint8_t { zero = 0, one = 1, bot = 2 };

inline Out out_of_bit(bool bit) { return bit ? Out::one : Out::zero; }
std::string out_to_string(Out o);

struct QueryLog {
  std::set<int> positions;   // distinct queried indices
  long long count = 0;       // total queries, with multiplicity
  void record(int pos) {
    positions.insert(pos);
    ++count;
  }
};

// One point of a procedure's finite randomness space. Queries are fixed
// data, so nonadaptivity is structural: the positions exist before any
// symbol of the input is read.
struct TesterOutcome {
  Rational prob;
  std::vector<int> queries;  // 1-indexed positions, |queries| <= query bound
  std::function<bool(const std::vector<bool>&)> accept;  // sees w[queries[j]] only
};

// Nonadaptive randomized tester with fully enumerable randomness.
// Outcome probabilities must sum to exactly 1.
class Tester {
 public:
  Tester(std::shared_ptr<const LinearCode> code, long long query_bound,
         std::vector<TesterOutcome> outcomes);

  const LinearCode& code() const { return *code_; }
  std::shared_ptr<const LinearCode> code_ptr() const { return code_; }
  long long query_bound() const { return query_bound_; }
  const std::vector<TesterOutcome>& outcomes() const { return outcomes_; }

  // Evaluates one fixed outcome on w. true = accept.
  bool accepts(const BitWord& w, std::size_t outcome_index, QueryLog* log = nullptr) const;
  // Samples an outcome and evaluates it.
  bool run(const BitWord& w, Rng& rng, QueryLog* log = nullptr) const;
  std::size_t sample_outcome(Rng& rng) const;

 private:
  std::shared_ptr<const LinearCode> code_;
  long long query_bound_;
  std::vector<TesterOutcome> outcomes_;
  std::vector<std::uint64_t> cumulative_;  // sampling weights over a common denominator
  std::uint64_t weight_total_ = 0;
};

// Pr[tester rejects w], exact.
Rational exact_reject_probability(const Tester& t, const BitWord& w);

// Exact distribution of a corrector's output on (w, i).
struct OutputDist {
  Rational p_zero, p_one, p_bot;
  Rational p(Out o) const;
  Rational total() const { return p_zero + p_one + p_bot; }
  bool is_point_mass(Out o) const;
  // Pr[output in {expected, bot}]: the Def-2.7-style success event.
  Rational success(Out expected) const;
};

// Nonadaptive randomized corrector. Concrete correctors either enumerate
// their randomness space directly (PlannedCorrector) or expose an exact
// output distribution through product structure (NestedCorrector), which
// keeps analysis exact even when the flat space is astronomically large.
class Corrector {
 public:
  virtual ~Corrector() = default;

  const LinearCode& code() const { return *code_; }
  std::shared_ptr<const LinearCode> code_ptr() const { return code_; }
  const Rational& radius() const { return radius_; }
  long long query_bound() const { return query_bound_; }
  // Number of correctable indices; message decoders return k instead of n.
  virtual int index_count() const { return code_->n(); }

  virtual OutputDist exact_output_distribution(const BitWord& w, int i) const = 0;
  virtual Out run(const BitWord& w, int i, Rng& rng, QueryLog* log = nullptr) const = 0;
  // Exact per-run query count when every outcome reads the same number of
  // symbols; nullopt otherwise.
  virtual std::optional<long long> fixed_query_count() const = 0;

 protected:
  Corrector(std::shared_ptr<const LinearCode> code, Rational radius, long long query_bound);
  std::shared_ptr<const LinearCode> code_;
  Rational radius_;
  long long query_bound_;
};

struct CorrectorOutcome {
  Rational prob;
  std::vector<int> queries;
  std::function<Out(const std::vector<bool>&)> output;
};

// Corrector whose randomness space is a per-index list of outcomes.
class PlannedCorrector : public Corrector {
 public:
  using Plan = std::function<std::vector<CorrectorOutcome>(int i)>;
  PlannedCorrector(std::shared_ptr<const LinearCode> code, Rational radius,
                   long long query_bound, Plan plan,
                   std::optional<long long> fixed_count = std::nullopt);

  std::vector<CorrectorOutcome> outcomes(int i) const;

  OutputDist exact_output_distribution(const BitWord& w, int i) const override;
  Out run(const BitWord& w, int i, Rng& rng, QueryLog* log = nullptr) const override;
  std::optional<long long> fixed_query_count() const override { return fixed_count_; }

 private:
  Plan plan_;
  std::optional<long long> fixed_count_;
};

// Single deterministic outcome: read everything, accept iff member. The
// soundness constant is exactly 1.
Tester full_read_tester(std::shared_ptr<const LinearCode> code);

// Uniformly samples one presented parity row (redundant rows included, so
// the row multiset is observable behavior) and checks it on its support.
Tester parity_sample_tester(std::shared_ptr<const LinearCode> code);

// Uniformly samples one of the grid_rows + grid_cols lines of a tensor code
// and checks membership of the line in its factor code.
Tester tensor_tester(std::shared_ptr<const LinearCode> code);

// Reads the whole word; returns w_i on members and bot otherwise. Declared
// radius (d-1)/n sits strictly below the exact minimum distance d/n: at
// distance exactly d a second codeword can be equally close and the output
// w_i would break soundness with certainty.
std::shared_ptr<const PlannedCorrector> full_read_corrector(
    std::shared_ptr<const LinearCode> code, std::uint64_t budget = kDefaultEnumerationBudget);

// Message-coordinate decoder from a systematic view: decoding message index
// i runs the codeword corrector at position perm(i). Radius, query bound and
// all probabilities pass through unchanged.
class MessageDecoder : public Corrector {
 public:
  MessageDecoder(SystematicCode systematic, std::shared_ptr<const Corrector> inner);

  int index_count() const override { return systematic_.code().k(); }
  OutputDist exact_output_distribution(const BitWord& w, int i) const override;
  Out run(const BitWord& w, int i, Rng& rng, QueryLog* log = nullptr) const override;
  std::optional<long long> fixed_query_count() const override;
  const SystematicCode& systematic() const { return systematic_; }

 private:
  int check_index(int i) const;
  SystematicCode systematic_;
  std::shared_ptr<const Corrector> inner_;
};

std::shared_ptr<const MessageDecoder> rldc_decoder_from_systematic(
    SystematicCode systematic, std::shared_ptr<const Corrector> corrector);

struct TesterRun {
  bool accept;
  QueryLog log;
};
TesterRun run_with_queries(const Tester& t, const BitWord& w, std::uint64_t seed);

struct CorrectorRun {
  Out output;
  QueryLog log;
};
CorrectorRun run_with_queries(const Corrector& m, const BitWord& w, int i, std::uint64_t seed);

// Exact testability sweep: kappa_hat = min over all 2^n words w not in the
// code of Pr[reject w] / dist(w, C). Returns nullopt witness/kappa when the
// code is the full space. Exposed here so nesting-time certificates can be
// checked without pulling in the full analysis layer.
struct ExactTestability {
  std::optional<Rational> kappa;   // unclamped; may exceed 1
  std::optional<BitWord> witness;  // first arg-min in word order
  bool completeness_pass = true;
  std::optional<BitWord> completeness_counterexample;
  std::uint64_t words = 0;
};
ExactTestability measure_testability_exact(const Tester& t,
                                           std::uint64_t budget = kDefaultEnumerationBudget);

}  // namespace loccode
