#include "loccode/gf2.hpp"

#include <bit>
#include <stdexcept>
#include <utility>

namespace loccode {

namespace {
constexpr int kBlockBits = 64;

std::size_t blocks_for(int len) {
  return static_cast<std::size_t>((len + kBlockBits - 1) / kBlockBits);
}
}  // namespace

BitWord::BitWord(int len) : len_(len) {
  if (len < 1) throw std::invalid_argument("BitWord: length must be >= 1");
  blocks_.assign(blocks_for(len), 0);
}

BitWord BitWord::from_string(std::string_view bits) {
  BitWord w(static_cast<int>(bits.size()));
  for (int i = 0; i < w.len_; ++i) {
    char c = bits[static_cast<std::size_t>(i)];
    if (c == '1')
      w.set(i + 1, true);
    else if (c != '0')
      throw std::invalid_argument("BitWord: string must contain only 0/1");
  }
  return w;
}

void BitWord::check_pos(int pos) const {
  if (pos < 1 || pos > len_) throw std::out_of_range("BitWord: position out of range");
}

bool BitWord::get(int pos) const {
  check_pos(pos);
  int i = pos - 1;
  return (blocks_[static_cast<std::size_t>(i / kBlockBits)] >> (i % kBlockBits)) & 1u;
}

void BitWord::set(int pos, bool value) {
  check_pos(pos);
  int i = pos - 1;
  std::uint64_t mask = std::uint64_t{1} << (i % kBlockBits);
  auto& block = blocks_[static_cast<std::size_t>(i / kBlockBits)];
  if (value)
    block |= mask;
  else
    block &= ~mask;
}

void BitWord::flip(int pos) {
  check_pos(pos);
  int i = pos - 1;
  blocks_[static_cast<std::size_t>(i / kBlockBits)] ^= std::uint64_t{1} << (i % kBlockBits);
}

int BitWord::weight() const {
  int w = 0;
  for (auto b : blocks_) w += std::popcount(b);
  return w;
}

void BitWord::xor_with(const BitWord& other) {
  if (other.len_ != len_) throw std::invalid_argument("BitWord: length mismatch");
  for (std::size_t i = 0; i < blocks_.size(); ++i) blocks_[i] ^= other.blocks_[i];
}

bool BitWord::dot(const BitWord& other) const {
  if (other.len_ != len_) throw std::invalid_argument("BitWord: length mismatch");
  std::uint64_t acc = 0;
  for (std::size_t i = 0; i < blocks_.size(); ++i) acc ^= blocks_[i] & other.blocks_[i];
  return std::popcount(acc) & 1;
}

BitWord BitWord::restricted(int lo, int hi) const {
  if (lo < 1 || hi > len_ || lo > hi) throw std::out_of_range("BitWord: bad restriction interval");
  BitWord out(hi - lo + 1);
  for (int pos = lo; pos <= hi; ++pos)
    if (get(pos)) out.set(pos - lo + 1, true);
  return out;
}

std::string BitWord::to_string() const {
  std::string s(static_cast<std::size_t>(len_), '0');
  for (int pos = 1; pos <= len_; ++pos)
    if (get(pos)) s[static_cast<std::size_t>(pos - 1)] = '1';
  return s;
}

bool BitWord::is_zero() const {
  for (auto b : blocks_)
    if (b != 0) return false;
  return true;
}

bool BitWord::lex_less(const BitWord& other) const {
  if (other.len_ != len_) throw std::invalid_argument("BitWord: length mismatch");
  for (std::size_t i = 0; i < blocks_.size(); ++i) {
    std::uint64_t diff = blocks_[i] ^ other.blocks_[i];
    if (diff != 0) {
      int bit = std::countr_zero(diff);  // earliest differing position
      return ((blocks_[i] >> bit) & 1u) == 0;
    }
  }
  return false;
}

int hamming(const BitWord& a, const BitWord& b) {
  if (a.len() != b.len()) throw std::invalid_argument("hamming: length mismatch");
  BitWord tmp = a;
  tmp.xor_with(b);
  return tmp.weight();
}

BitMatrix::BitMatrix(int rows, int cols) : cols_(cols) {
  if (cols < 1) throw std::invalid_argument("BitMatrix: cols must be >= 1");
  if (rows < 0) throw std::invalid_argument("BitMatrix: rows must be >= 0");
  rows_.assign(static_cast<std::size_t>(rows), BitWord(cols));
}

BitMatrix BitMatrix::identity(int n) {
  BitMatrix m(n, n);
  for (int i = 1; i <= n; ++i) m.set(i, i, true);
  return m;
}

BitMatrix BitMatrix::from_rows(std::vector<BitWord> rows, int cols) {
  BitMatrix m(0, cols);
  for (auto& r : rows) m.append_row(std::move(r));
  return m;
}

void BitMatrix::set(int r, int c, bool value) {
  if (r < 1 || r > rows()) throw std::out_of_range("BitMatrix: row out of range");
  rows_[static_cast<std::size_t>(r - 1)].set(c, value);
}

const BitWord& BitMatrix::row(int r) const {
  if (r < 1 || r > rows()) throw std::out_of_range("BitMatrix: row out of range");
  return rows_[static_cast<std::size_t>(r - 1)];
}

void BitMatrix::append_row(BitWord w) {
  if (w.len() != cols_) throw std::invalid_argument("BitMatrix: row length mismatch");
  rows_.push_back(std::move(w));
}

RowReduceResult row_reduce(const BitMatrix& m) {
  std::vector<BitWord> rows;
  rows.reserve(static_cast<std::size_t>(m.rows()));
  for (int r = 1; r <= m.rows(); ++r) rows.push_back(m.row(r));

  std::vector<int> pivots;
  int next_row = 0;
  for (int c = 1; c <= m.cols() && next_row < m.rows(); ++c) {
    int pivot = -1;
    for (int r = next_row; r < m.rows(); ++r) {
      if (rows[static_cast<std::size_t>(r)].get(c)) {
        pivot = r;
        break;
      }
    }
    if (pivot < 0) continue;
    std::swap(rows[static_cast<std::size_t>(pivot)], rows[static_cast<std::size_t>(next_row)]);
    for (int r = 0; r < m.rows(); ++r) {
      if (r != next_row && rows[static_cast<std::size_t>(r)].get(c))
        rows[static_cast<std::size_t>(r)].xor_with(rows[static_cast<std::size_t>(next_row)]);
    }
    pivots.push_back(c);
    ++next_row;
  }

  RowReduceResult out{BitMatrix::from_rows(std::move(rows), m.cols()), next_row,
                      std::move(pivots)};
  return out;
}

int rank(const BitMatrix& m) { return row_reduce(m).rank; }

BitMatrix kernel_basis(const BitMatrix& m) {
  RowReduceResult r = row_reduce(m);
  std::vector<bool> is_pivot(static_cast<std::size_t>(m.cols()) + 1, false);
  for (int c : r.pivots) is_pivot[static_cast<std::size_t>(c)] = true;

  BitMatrix basis(0, m.cols());
  for (int f = 1; f <= m.cols(); ++f) {
    if (is_pivot[static_cast<std::size_t>(f)]) continue;
    BitWord v(m.cols());
    v.set(f, true);
    for (int j = 0; j < r.rank; ++j) {
      if (r.rref.get(j + 1, f)) v.set(r.pivots[static_cast<std::size_t>(j)], true);
    }
    basis.append_row(std::move(v));
  }
  return basis;
}

BitWord mat_vec(const BitMatrix& m, const BitWord& x) {
  if (x.len() != m.cols()) throw std::invalid_argument("mat_vec: dimension mismatch");
  if (m.rows() < 1) throw std::invalid_argument("mat_vec: matrix has no rows");
  BitWord out(m.rows());
  for (int r = 1; r <= m.rows(); ++r)
    if (m.row(r).dot(x)) out.set(r, true);
  return out;
}

}  // namespace loccode
