#pragma once

#include "loccode/gf2.hpp"
#include "loccode/rational.hpp"

#include <cstdint>
#include <memory>
#include <mutex>
#include <optional>
#include <stdexcept>
#include <vector>

namespace loccode {

inline constexpr std::uint64_t kDefaultEnumerationBudget = std::uint64_t{1} << 24;

// Raised when an exact enumeration would exceed the configured budget.
struct budget_error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

class LinearCode;

// Grid structure recorded by tensor_product: cell (r, s) of an
// grid_rows x grid_cols grid sits at codeword position (r-1)*grid_cols + s.
// Every grid row must lie in row_code, every grid column in col_code.
struct TensorLayout {
  int grid_rows = 0;
  int grid_cols = 0;
  std::shared_ptr<const LinearCode> row_code;
  std::shared_ptr<const LinearCode> col_code;

  std::vector<int> row_positions(int r) const;
  std::vector<int> col_positions(int s) const;
};

// Binary linear code presented by a parity-check matrix. The presented rows
// may be redundant (rank < row count); the dimension always comes from the
// rank. Immutable after construction apart from the idempotent distance
// cache, so instances can be shared read-only across threads.
class LinearCode {
 public:
  static LinearCode from_parity_check(BitMatrix h);
  static LinearCode from_generator(BitMatrix g);

  int n() const { return n_; }
  int k() const { return k_; }
  const BitMatrix& generator() const { return g_; }
  const BitMatrix& parity_check() const { return h_; }
  int parity_check_rank() const { return h_rank_; }

  bool contains(const BitWord& w) const;

  // Exact minimum relative distance over nonzero codewords. Enumerates
  // whichever of the code (2^k words) or its dual (2^(n-k) words, via the
  // MacWilliams transform) fits the budget; throws budget_error otherwise.
  Rational min_distance(std::uint64_t budget = kDefaultEnumerationBudget) const;
  std::optional<Rational> cached_min_distance() const;

  struct Nearest {
    BitWord codeword;
    Rational distance;
    bool unique = false;
  };
  // Closest codeword by brute force over all 2^k codewords; ties broken by
  // the lexicographically smallest codeword.
  Nearest nearest_codeword(const BitWord& w,
                           std::uint64_t budget = kDefaultEnumerationBudget) const;

  std::shared_ptr<const TensorLayout> tensor_layout() const { return tensor_; }

  // Visits all 2^k codewords in Gray-code order (one row XOR per step),
  // starting from the zero word. f(const BitWord&).
  template <class F>
  void for_each_codeword(F&& f) const {
    BitWord w(n_);
    f(static_cast<const BitWord&>(w));
    std::uint64_t total = std::uint64_t{1} << k_;
    for (std::uint64_t t = 1; t < total; ++t) {
      int row = lowest_set_bit(t);
      w.xor_with(g_.row(row + 1));
      f(static_cast<const BitWord&>(w));
    }
  }

  // Gray-order slice [t_begin, t_end) of the message counter, for chunked
  // parallel sweeps. f(const BitWord&, std::uint64_t message_counter).
  template <class F>
  void for_each_codeword_range(std::uint64_t t_begin, std::uint64_t t_end, F&& f) const {
    BitWord w = codeword_at_counter(t_begin);
    f(static_cast<const BitWord&>(w), t_begin);
    for (std::uint64_t t = t_begin + 1; t < t_end; ++t) {
      int row = lowest_set_bit(t);
      w.xor_with(g_.row(row + 1));
      f(static_cast<const BitWord&>(w), t);
    }
  }

  // Saturates at 2^63 so budget comparisons stay meaningful for large k.
  std::uint64_t codeword_count() const {
    return k_ >= 63 ? (std::uint64_t{1} << 63) : (std::uint64_t{1} << k_);
  }
  // Codeword reached after `counter` Gray steps (message = counter ^ (counter >> 1)).
  BitWord codeword_at_counter(std::uint64_t counter) const;

 private:
  LinearCode(BitMatrix g, BitMatrix h, int h_rank);
  static int lowest_set_bit(std::uint64_t v);
  Rational min_distance_primal() const;
  Rational min_distance_dual() const;

  int n_ = 0;
  int k_ = 0;
  BitMatrix g_;
  BitMatrix h_;
  int h_rank_ = 0;
  std::shared_ptr<const TensorLayout> tensor_;

  struct DistanceCache {
    std::once_flag once;
    std::optional<Rational> value;
    std::mutex peek;
  };
  std::shared_ptr<DistanceCache> cache_;

  friend LinearCode tensor_product(const LinearCode& a, const LinearCode& b);
};

inline std::shared_ptr<const LinearCode> share(LinearCode c) {
  return std::make_shared<const LinearCode>(std::move(c));
}

// #differing positions / length, exact.
Rational relative_distance(const BitWord& x, const BitWord& y);

// Systematic view: message index i lives at codeword position perm(i); the
// stored generator is in reduced row echelon form so row i carries a unit
// at perm(i).
class SystematicCode {
 public:
  SystematicCode(LinearCode code, BitMatrix systematic_generator, std::vector<int> perm);

  const LinearCode& code() const { return code_; }
  // perm[i-1] for i in [1, n]; the first k entries are the pivot columns.
  const std::vector<int>& perm() const { return perm_; }
  int message_position(int i) const;  // perm(i) for i in [1, k]

  BitWord encode(const BitWord& message) const;
  // Restriction of a codeword to the message positions.
  BitWord message_of(const BitWord& codeword) const;

 private:
  LinearCode code_;
  BitMatrix sys_gen_;
  std::vector<int> perm_;
};

SystematicCode systematize(const LinearCode& c);

// [n, n-1] even-weight code, n >= 2.
LinearCode parity_code(int n);
// [2^r - 1, 2^r - 1 - r] Hamming code, r >= 2; H column j is the binary
// expansion of j (row i holds bit i-1).
LinearCode hamming_code(int r);
// `rows` parity rows of exactly `row_weight` ones each, positions drawn
// without replacement; deterministic per seed.
LinearCode random_ldpc(int n, int rows, int row_weight, std::uint64_t seed);
// Grid code: every grid row in b, every grid column in a; block length
// a.n * b.n, dimension a.k * b.k. Records a TensorLayout.
LinearCode tensor_product(const LinearCode& a, const LinearCode& b);

}  // namespace loccode
