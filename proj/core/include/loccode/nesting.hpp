#pragma once

#include "loccode/local.hpp"

#include <iosfwd>
#include <memory>
#include <optional>
#include <string>
#include <vector>

namespace loccode {

// Block decomposition of [N] into aligned n-intervals {kn+1..kn+n} plus a
// tail interval {N-n+1..N} when n does not divide N. The tail overlaps the
// last aligned block in exactly that case.
struct NestedLayout {
  int outer_len = 0;  // N
  int inner_len = 0;  // n

  static NestedLayout make(int outer_len, int inner_len);

  int aligned_count() const { return outer_len / inner_len; }
  bool has_tail() const { return outer_len % inner_len != 0; }
  int block_count() const { return aligned_count() + (has_tail() ? 1 : 0); }
  // 1-indexed block -> inclusive [lo, hi] interval.
  std::pair<int, int> block(int b) const;
};

struct BlockRef {
  int lo = 0, hi = 0;    // the interval I containing i
  int local_index = 0;   // i* with (w|_I)_{i*} = w_i
};

// Selects the block containing i by block index: ceil(i/n) <= floor(N/n)
// picks that aligned block, anything larger falls onto the tail block.
// Always satisfies i in I and |I| = n.
BlockRef block_interval(int i, int outer_len, int inner_len);

// Intersection code: outer constraints plus a copy of the inner parity
// checks on every aligned block, and on the tail block when n does not
// divide N. Row order: outer rows, aligned-block copies in block order,
// then the tail copy. Redundant rows are kept.
LinearCode nest(const LinearCode& outer, const LinearCode& inner);

// 1 - eps1 - (n/N)*ceil(N/n)*eps2, exact.
Rational rate_lower_bound(const Rational& eps1, const Rational& eps2, int outer_len,
                          int inner_len);

// t = ceil(2*ln 3 * N / (delta*kappa*n)): the smallest count of independent
// tester repetitions for which (1 - delta*kappa*n/(2N))^t <= 1/3. The
// inequality is re-proved for the returned t by exact rational arithmetic.
long long repetitions(int outer_len, int inner_len, const Rational& delta,
                      const Rational& kappa);

// The exact certificate behind `repetitions`, exposed for verification:
// (1 - delta*kappa*n/(2N))^t <= 1/3, with the base clamped at 0.
bool repetition_certificate(int outer_len, int inner_len, const Rational& delta,
                            const Rational& kappa, long long t);

// A nesting step bundled with everything its corrector needs. delta_ltc and
// kappa are certified inputs: a distance lower bound for the outer code and
// a testability lower bound for its tester.
struct NestedCode {
  LinearCode code;  // the intersection
  NestedLayout layout;
  std::shared_ptr<const LinearCode> outer;
  std::shared_ptr<const Tester> outer_tester;
  std::shared_ptr<const Corrector> inner;
  Rational delta_ltc;
  Rational kappa;
};

// Builds the intersection and validates what is checkable within the
// budget: inner radius positive, delta_ltc no larger than the outer code's
// exact minimum distance, kappa no larger than the measured testability
// (both checks skipped when enumeration would exceed the budget).
NestedCode make_nested_code(std::shared_ptr<const LinearCode> outer,
                            std::shared_ptr<const Tester> outer_tester, Rational delta_ltc,
                            Rational kappa, std::shared_ptr<const Corrector> inner,
                            std::uint64_t budget = kDefaultEnumerationBudget);

// Corrector for a nested code: correct index i by zooming into the block
// containing it and running the inner corrector at the local index, run the
// outer tester t times on the whole word, output bot if any tester run
// rejects, otherwise the inner result. Both steps always execute, which
// keeps the procedure nonadaptive and the query count exact. Radius
// delta_ltc/2, query bound q_inner + t*q_tester.
//
// The randomness space is the product of the inner corrector's space with t
// independent tester outcomes; the exact output distribution factorizes as
// (1-r)^t across that product, so analysis stays exact without enumerating
// the product space.
class NestedCorrector : public Corrector {
 public:
  explicit NestedCorrector(NestedCode nc,
                           std::optional<long long> forced_repetitions = std::nullopt);

  long long repetitions() const { return reps_; }
  const NestedCode& nested() const { return nc_; }
  const Tester& outer_tester() const { return *nc_.outer_tester; }
  const Corrector& inner() const { return *nc_.inner; }

  OutputDist exact_output_distribution(const BitWord& w, int i) const override;
  Out run(const BitWord& w, int i, Rng& rng, QueryLog* log = nullptr) const override;
  std::optional<long long> fixed_query_count() const override;

 private:
  NestedCode nc_;
  long long reps_ = 0;
};

struct ChainLevelInput {
  std::shared_ptr<const LinearCode> ltc;
  std::shared_ptr<const Tester> tester;  // may be null at level 1 (unused there)
  Rational delta_ltc;
  Rational kappa;
};

struct ChainLevel {
  ChainLevelInput input;
  int block_length = 0;
  int dimension = 0;          // of the folded code after this level
  long long t = 0;            // tester repetitions (0 at level 1)
  long long tester_queries = 0;
  Rational radius;            // corrector radius after this level
  Rational eps_bound;         // cumulative rate-loss bound eps'_j
  long long query_bound = 0;  // cumulative corrector queries
};

struct NestingChain {
  std::vector<ChainLevel> levels;
  std::shared_ptr<const LinearCode> folded;
  std::shared_ptr<const Corrector> corrector;
  Rational rate_bound;     // 1 - eps'_m
  long long query_bound = 0;
};

// Left fold, innermost level first. Level 1 gets the trivial full-read
// corrector with radius (d1-1)/n1; level j >= 2 nests the running code into
// its LTC and boosts with NestedCorrector, tracking the actual inner radius
// at every level. Block lengths must be nondecreasing.
NestingChain iterate_nesting(const std::vector<ChainLevelInput>& family,
                             std::uint64_t budget = kDefaultEnumerationBudget);

// One final nesting step on an already-built chain; the reported rate bound
// extends the chain's tracked bound by the usual constraint count.
NestingChain boost_radius(const NestingChain& inner, const ChainLevelInput& final_ltc,
                          std::uint64_t budget = kDefaultEnumerationBudget);

// Chain descriptor file: one line per level,
//   LEVEL <j> code=<ref> tester=<full|parity|tensor> delta=<p/q> kappa=<p/q>
// Levels must be 1..m in order. code= refs are resolved by the caller.
struct ChainSpec {
  int level = 0;
  std::string code_ref;
  std::string tester_kind;
  Rational delta;
  Rational kappa;
};
std::vector<ChainSpec> parse_chain_descriptor(std::istream& in);
std::string format_chain_descriptor(const std::vector<ChainSpec>& specs);

// Builds the tester named in a chain line for the given code.
std::shared_ptr<const Tester> make_named_tester(const std::string& kind,
                                                std::shared_ptr<const LinearCode> code);

}  // namespace loccode
