#pragma once

#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

namespace loccode {

// Word over GF(2), bit-packed into 64-bit blocks. Positions are 1-indexed
// to match the interval arithmetic used throughout ({kn+1, ..., kn+n}).
// Values are treated as immutable once construction is finished.
class BitWord {
 public:
  BitWord() = default;  // zero-length placeholder for containers only
  explicit BitWord(int len);
  static BitWord from_string(std::string_view bits);

  int len() const { return len_; }
  bool get(int pos) const;
  void set(int pos, bool value);
  void flip(int pos);

  int weight() const;
  void xor_with(const BitWord& other);
  // <x, y> over GF(2).
  bool dot(const BitWord& other) const;
  // New word from positions lo..hi (inclusive).
  BitWord restricted(int lo, int hi) const;

  std::string to_string() const;
  bool is_zero() const;
  bool operator==(const BitWord& other) const = default;

  // Position-1-first ordering on the {0,1} strings.
  bool lex_less(const BitWord& other) const;

 private:
  void check_pos(int pos) const;
  int len_ = 0;
  std::vector<std::uint64_t> blocks_;
};

// Hamming distance; lengths must match.
int hamming(const BitWord& a, const BitWord& b);

// Dense GF(2) matrix stored as row words. rows >= 0 (an empty matrix means
// "no constraints"), cols >= 1.
class BitMatrix {
 public:
  BitMatrix(int rows, int cols);
  static BitMatrix identity(int n);
  static BitMatrix from_rows(std::vector<BitWord> rows, int cols);

  int rows() const { return static_cast<int>(rows_.size()); }
  int cols() const { return cols_; }
  bool get(int r, int c) const { return row(r).get(c); }
  void set(int r, int c, bool value);
  const BitWord& row(int r) const;
  void append_row(BitWord w);

  bool operator==(const BitMatrix& other) const = default;

 private:
  int cols_ = 0;
  std::vector<BitWord> rows_;
};

struct RowReduceResult {
  BitMatrix rref;
  int rank = 0;
  std::vector<int> pivots;  // 1-indexed column indices, strictly increasing
};

// Reduced row echelon form over GF(2); zero rows sink to the bottom, so the
// output has the same shape as the input and the row space is preserved.
RowReduceResult row_reduce(const BitMatrix& m);

int rank(const BitMatrix& m);

// Basis of {x : m*x = 0} as rows; (cols - rank) rows, identity for an empty m.
BitMatrix kernel_basis(const BitMatrix& m);

// m*x over GF(2); len(x) == cols(m), rows(m) >= 1.
BitWord mat_vec(const BitMatrix& m, const BitWord& x);

}  // namespace loccode
