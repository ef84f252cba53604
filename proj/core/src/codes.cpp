#include "loccode/codes.hpp"

#include "loccode/rng.hpp"

#include <algorithm>
#include <bit>
#include <utility>

namespace loccode {

std::vector<int> TensorLayout::row_positions(int r) const {
  if (r < 1 || r > grid_rows) throw std::out_of_range("TensorLayout: row out of range");
  std::vector<int> out;
  out.reserve(static_cast<std::size_t>(grid_cols));
  for (int s = 1; s <= grid_cols; ++s) out.push_back((r - 1) * grid_cols + s);
  return out;
}

std::vector<int> TensorLayout::col_positions(int s) const {
  if (s < 1 || s > grid_cols) throw std::out_of_range("TensorLayout: column out of range");
  std::vector<int> out;
  out.reserve(static_cast<std::size_t>(grid_rows));
  for (int r = 1; r <= grid_rows; ++r) out.push_back((r - 1) * grid_cols + s);
  return out;
}

LinearCode::LinearCode(BitMatrix g, BitMatrix h, int h_rank)
    : n_(g.cols()),
      k_(g.rows()),
      g_(std::move(g)),
      h_(std::move(h)),
      h_rank_(h_rank),
      cache_(std::make_shared<DistanceCache>()) {
  if (h_.cols() != n_) throw std::invalid_argument("LinearCode: G/H column mismatch");
  if (k_ > n_) throw std::invalid_argument("LinearCode: k > n");
  if (h_rank_ != n_ - k_) throw std::invalid_argument("LinearCode: rank(H) != n - k");
  // G must have full row rank and be orthogonal to every presented H row.
  if (rank(g_) != k_) throw std::invalid_argument("LinearCode: rank(G) != k");
  for (int i = 1; i <= k_; ++i)
    for (int j = 1; j <= h_.rows(); ++j)
      if (g_.row(i).dot(h_.row(j)))
        throw std::invalid_argument("LinearCode: G*H^T != 0");
}

LinearCode LinearCode::from_parity_check(BitMatrix h) {
  int h_rank = rank(h);
  BitMatrix g = kernel_basis(h);
  return LinearCode(std::move(g), std::move(h), h_rank);
}

LinearCode LinearCode::from_generator(BitMatrix g) {
  if (g.rows() < 1) throw std::invalid_argument("from_generator: need at least one row");
  RowReduceResult r = row_reduce(g);
  if (r.rank != g.rows())
    throw std::invalid_argument("from_generator: generator rows must be independent");
  BitMatrix h = kernel_basis(g);
  int h_rank = h.rows();
  return LinearCode(std::move(g), std::move(h), h_rank);
}

bool LinearCode::contains(const BitWord& w) const {
  if (w.len() != n_) throw std::invalid_argument("contains: length mismatch");
  for (int r = 1; r <= h_.rows(); ++r)
    if (h_.row(r).dot(w)) return false;
  return true;
}

int LinearCode::lowest_set_bit(std::uint64_t v) { return std::countr_zero(v); }

BitWord LinearCode::codeword_at_counter(std::uint64_t counter) const {
  std::uint64_t message = counter ^ (counter >> 1);
  BitWord w(n_);
  for (int i = 0; i < k_; ++i)
    if ((message >> i) & 1u) w.xor_with(g_.row(i + 1));
  return w;
}

Rational LinearCode::min_distance_primal() const {
  int best = n_ + 1;
  BitWord w(n_);
  std::uint64_t total = codeword_count();
  for (std::uint64_t t = 1; t < total; ++t) {
    w.xor_with(g_.row(lowest_set_bit(t) + 1));
    best = std::min(best, w.weight());
  }
  return Rational(best, n_);
}

Rational LinearCode::min_distance_dual() const {
  // Weight distribution of the dual (row space of H), then the MacWilliams
  // transform; the minimum distance is the smallest j >= 1 with A_j > 0.
  RowReduceResult hr = row_reduce(h_);
  std::vector<BigInt> dual_weights(static_cast<std::size_t>(n_) + 1, 0);
  BitWord w(n_);
  dual_weights[0] += 1;
  std::uint64_t total = std::uint64_t{1} << h_rank_;
  for (std::uint64_t t = 1; t < total; ++t) {
    w.xor_with(hr.rref.row(lowest_set_bit(t) + 1));
    dual_weights[static_cast<std::size_t>(w.weight())] += 1;
  }

  std::vector<std::vector<BigInt>> binom(static_cast<std::size_t>(n_) + 1);
  for (int i = 0; i <= n_; ++i) {
    binom[static_cast<std::size_t>(i)].assign(static_cast<std::size_t>(n_) + 1, 0);
    binom[static_cast<std::size_t>(i)][0] = 1;
    for (int j = 1; j <= i; ++j)
      binom[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)] =
          binom[static_cast<std::size_t>(i - 1)][static_cast<std::size_t>(j - 1)] +
          binom[static_cast<std::size_t>(i - 1)][static_cast<std::size_t>(j)];
  }

  BigInt dual_size = BigInt(1) << h_rank_;
  for (int j = 1; j <= n_; ++j) {
    BigInt sum = 0;
    for (int i = 0; i <= n_; ++i) {
      const BigInt& bi = dual_weights[static_cast<std::size_t>(i)];
      if (bi == 0) continue;
      // Binary Krawtchouk K_j(i) = sum_l (-1)^l C(i,l) C(n-i, j-l).
      BigInt kraw = 0;
      for (int l = std::max(0, j - (n_ - i)); l <= std::min(i, j); ++l) {
        BigInt term = binom[static_cast<std::size_t>(i)][static_cast<std::size_t>(l)] *
                      binom[static_cast<std::size_t>(n_ - i)][static_cast<std::size_t>(j - l)];
        if (l & 1)
          kraw -= term;
        else
          kraw += term;
      }
      sum += bi * kraw;
    }
    if (sum % dual_size != 0 || sum < 0)
      throw std::logic_error("min_distance: MacWilliams transform produced a non-count");
    if (sum > 0) return Rational(j, n_);
  }
  throw std::logic_error("min_distance: no nonzero codeword found via dual transform");
}

Rational LinearCode::min_distance(std::uint64_t budget) const {
  {
    std::lock_guard<std::mutex> lock(cache_->peek);
    if (cache_->value) return *cache_->value;
  }
  if (k_ == 0)
    throw std::invalid_argument("min_distance: code has no nonzero codewords");
  int budget_log = 63;
  while (budget_log > 0 && (std::uint64_t{1} << budget_log) > budget) --budget_log;
  if (k_ > budget_log && n_ - k_ > budget_log)
    throw budget_error("min_distance: too large for exact distance");
  std::call_once(cache_->once, [&] {
    Rational d = (k_ <= budget_log) ? min_distance_primal() : min_distance_dual();
    std::lock_guard<std::mutex> lock(cache_->peek);
    cache_->value = d;
  });
  std::lock_guard<std::mutex> lock(cache_->peek);
  return *cache_->value;
}

std::optional<Rational> LinearCode::cached_min_distance() const {
  std::lock_guard<std::mutex> lock(cache_->peek);
  return cache_->value;
}

LinearCode::Nearest LinearCode::nearest_codeword(const BitWord& w, std::uint64_t budget) const {
  if (w.len() != n_) throw std::invalid_argument("nearest_codeword: length mismatch");
  if (codeword_count() > budget)
    throw budget_error("nearest_codeword: too large for exact search");
  BitWord best(n_);
  int best_dist = n_ + 1;
  int at_best = 0;
  for_each_codeword([&](const BitWord& c) {
    int d = hamming(c, w);
    if (d < best_dist) {
      best_dist = d;
      best = c;
      at_best = 1;
    } else if (d == best_dist) {
      ++at_best;
      if (c.lex_less(best)) best = c;
    }
  });
  return Nearest{std::move(best), Rational(best_dist, n_), at_best == 1};
}

Rational relative_distance(const BitWord& x, const BitWord& y) {
  return Rational(hamming(x, y), x.len());
}

SystematicCode::SystematicCode(LinearCode code, BitMatrix systematic_generator,
                               std::vector<int> perm)
    : code_(std::move(code)), sys_gen_(std::move(systematic_generator)), perm_(std::move(perm)) {
  if (static_cast<int>(perm_.size()) != code_.n())
    throw std::invalid_argument("SystematicCode: perm must cover [n]");
  if (sys_gen_.rows() != code_.k())
    throw std::invalid_argument("SystematicCode: generator must have k rows");
}

int SystematicCode::message_position(int i) const {
  if (i < 1 || i > code_.k()) throw std::out_of_range("message_position: index out of range");
  return perm_[static_cast<std::size_t>(i - 1)];
}

BitWord SystematicCode::encode(const BitWord& message) const {
  if (message.len() != code_.k()) throw std::invalid_argument("encode: length mismatch");
  BitWord w(code_.n());
  for (int i = 1; i <= code_.k(); ++i)
    if (message.get(i)) w.xor_with(sys_gen_.row(i));
  return w;
}

BitWord SystematicCode::message_of(const BitWord& codeword) const {
  if (codeword.len() != code_.n()) throw std::invalid_argument("message_of: length mismatch");
  BitWord m(code_.k());
  for (int i = 1; i <= code_.k(); ++i)
    if (codeword.get(message_position(i))) m.set(i, true);
  return m;
}

SystematicCode systematize(const LinearCode& c) {
  RowReduceResult r = row_reduce(c.generator());
  // The generator has full row rank, so the RREF has k pivot rows and each
  // pivot column is a unit column: messages land verbatim on the pivots.
  std::vector<int> perm = r.pivots;
  std::vector<bool> used(static_cast<std::size_t>(c.n()) + 1, false);
  for (int p : perm) used[static_cast<std::size_t>(p)] = true;
  for (int pos = 1; pos <= c.n(); ++pos)
    if (!used[static_cast<std::size_t>(pos)]) perm.push_back(pos);
  BitMatrix gen(0, c.n());
  for (int i = 1; i <= r.rank; ++i) gen.append_row(r.rref.row(i));
  return SystematicCode(c, std::move(gen), std::move(perm));
}

LinearCode parity_code(int n) {
  if (n < 2) throw std::invalid_argument("parity_code: n must be >= 2");
  BitMatrix h(1, n);
  for (int c = 1; c <= n; ++c) h.set(1, c, true);
  return LinearCode::from_parity_check(std::move(h));
}

LinearCode hamming_code(int r) {
  if (r < 2) throw std::invalid_argument("hamming_code: r must be >= 2");
  if (r > 20) throw std::invalid_argument("hamming_code: r too large");
  int n = (1 << r) - 1;
  BitMatrix h(r, n);
  for (int j = 1; j <= n; ++j)
    for (int i = 1; i <= r; ++i)
      if ((j >> (i - 1)) & 1) h.set(i, j, true);
  return LinearCode::from_parity_check(std::move(h));
}

LinearCode random_ldpc(int n, int rows, int row_weight, std::uint64_t seed) {
  if (n < 2) throw std::invalid_argument("random_ldpc: n must be >= 2");
  if (rows < 1) throw std::invalid_argument("random_ldpc: need at least one row");
  if (row_weight < 1 || row_weight > n)
    throw std::invalid_argument("random_ldpc: row_weight must be in [1, n]");
  Rng rng(seed);
  BitMatrix h(0, n);
  std::vector<int> cols(static_cast<std::size_t>(n));
  for (int r = 0; r < rows; ++r) {
    for (int i = 0; i < n; ++i) cols[static_cast<std::size_t>(i)] = i + 1;
    BitWord row(n);
    // Partial Fisher-Yates: first row_weight entries become the support.
    for (int i = 0; i < row_weight; ++i) {
      std::size_t j = static_cast<std::size_t>(i) +
                      static_cast<std::size_t>(rng.next_below(static_cast<std::uint64_t>(n - i)));
      std::swap(cols[static_cast<std::size_t>(i)], cols[j]);
      row.set(cols[static_cast<std::size_t>(i)], true);
    }
    h.append_row(std::move(row));
  }
  return LinearCode::from_parity_check(std::move(h));
}

LinearCode tensor_product(const LinearCode& a, const LinearCode& b) {
  int na = a.n(), nb = b.n();
  int n = na * nb;
  BitMatrix h(0, n);
  // Row checks first (grid row ascending, row-code check ascending), then
  // column checks; this order is part of the emitted parity-check file.
  for (int r = 1; r <= na; ++r) {
    for (int j = 1; j <= b.parity_check().rows(); ++j) {
      BitWord row(n);
      for (int s = 1; s <= nb; ++s)
        if (b.parity_check().get(j, s)) row.set((r - 1) * nb + s, true);
      h.append_row(std::move(row));
    }
  }
  for (int s = 1; s <= nb; ++s) {
    for (int j = 1; j <= a.parity_check().rows(); ++j) {
      BitWord row(n);
      for (int r = 1; r <= na; ++r)
        if (a.parity_check().get(j, r)) row.set((r - 1) * nb + s, true);
      h.append_row(std::move(row));
    }
  }
  LinearCode code = LinearCode::from_parity_check(std::move(h));
  if (code.k() != a.k() * b.k())
    throw std::logic_error("tensor_product: dimension is not k_a * k_b");
  auto layout = std::make_shared<TensorLayout>();
  layout->grid_rows = na;
  layout->grid_cols = nb;
  layout->row_code = share(b);
  layout->col_code = share(a);
  code.tensor_ = std::move(layout);
  return code;
}

}  // namespace loccode
