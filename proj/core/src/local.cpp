#include "loccode/local.hpp"

#include <algorithm>
#include <numeric>

namespace loccode {

namespace {

// Common denominator for sampling a finite distribution exactly; must fit
// in 64 bits (all built-in procedures are uniform over a handful of
// outcomes, so this is never a real restriction).
std::uint64_t common_denominator(const std::vector<Rational>& probs) {
  BigInt lcm = 1;
  for (const auto& p : probs) {
    BigInt d = denominator(p);
    lcm = lcm / boost::multiprecision::gcd(lcm, d) * d;
    if (lcm > BigInt(~std::uint64_t{0} >> 1))
      throw std::invalid_argument("randomness space denominator exceeds 64 bits");
  }
  return lcm.convert_to<std::uint64_t>();
}

std::vector<bool> read_symbols(const BitWord& w, const std::vector<int>& queries,
                               QueryLog* log) {
  std::vector<bool> symbols;
  symbols.reserve(queries.size());
  for (int pos : queries) {
    symbols.push_back(w.get(pos));
    if (log) log->record(pos);
  }
  return symbols;
}

}  // namespace

std::string out_to_string(Out o) {
  switch (o) {
    case Out::zero: return "0";
    case Out::one: return "1";
    case Out::bot: return "bot";
  }
  return "?";
}

Tester::Tester(std::shared_ptr<const LinearCode> code, long long query_bound,
               std::vector<TesterOutcome> outcomes)
    : code_(std::move(code)), query_bound_(query_bound), outcomes_(std::move(outcomes)) {
  if (!code_) throw std::invalid_argument("Tester: null code");
  if (outcomes_.empty()) throw std::invalid_argument("Tester: empty randomness space");
  Rational total = 0;
  std::vector<Rational> probs;
  probs.reserve(outcomes_.size());
  for (const auto& o : outcomes_) {
    if (o.prob <= 0) throw std::invalid_argument("Tester: outcome probability must be positive");
    if (static_cast<long long>(o.queries.size()) > query_bound_)
      throw std::invalid_argument("Tester: outcome exceeds the declared query bound");
    for (int pos : o.queries)
      if (pos < 1 || pos > code_->n())
        throw std::invalid_argument("Tester: query position out of range");
    total += o.prob;
    probs.push_back(o.prob);
  }
  if (total != 1) throw std::invalid_argument("Tester: probabilities must sum to 1");
  std::uint64_t den = common_denominator(probs);
  cumulative_.reserve(outcomes_.size());
  std::uint64_t acc = 0;
  for (const auto& p : probs) {
    acc += (Rational(p * den)).convert_to<std::uint64_t>();
    cumulative_.push_back(acc);
  }
  weight_total_ = den;
}

bool Tester::accepts(const BitWord& w, std::size_t outcome_index, QueryLog* log) const {
  const TesterOutcome& o = outcomes_.at(outcome_index);
  return o.accept(read_symbols(w, o.queries, log));
}

std::size_t Tester::sample_outcome(Rng& rng) const {
  std::uint64_t draw = rng.next_below(weight_total_);
  auto it = std::upper_bound(cumulative_.begin(), cumulative_.end(), draw);
  return static_cast<std::size_t>(it - cumulative_.begin());
}

bool Tester::run(const BitWord& w, Rng& rng, QueryLog* log) const {
  return accepts(w, sample_outcome(rng), log);
}

Rational exact_reject_probability(const Tester& t, const BitWord& w) {
  Rational reject = 0;
  for (std::size_t idx = 0; idx < t.outcomes().size(); ++idx)
    if (!t.accepts(w, idx)) reject += t.outcomes()[idx].prob;
  return reject;
}

Rational OutputDist::p(Out o) const {
  switch (o) {
    case Out::zero: return p_zero;
    case Out::one: return p_one;
    case Out::bot: return p_bot;
  }
  throw std::logic_error("OutputDist: bad symbol");
}

bool OutputDist::is_point_mass(Out o) const { return p(o) == 1; }

Rational OutputDist::success(Out expected) const { return p(expected) + p_bot; }

Corrector::Corrector(std::shared_ptr<const LinearCode> code, Rational radius,
                     long long query_bound)
    : code_(std::move(code)), radius_(std::move(radius)), query_bound_(query_bound) {
  if (!code_) throw std::invalid_argument("Corrector: null code");
}

PlannedCorrector::PlannedCorrector(std::shared_ptr<const LinearCode> code, Rational radius,
                                   long long query_bound, Plan plan,
                                   std::optional<long long> fixed_count)
    : Corrector(std::move(code), std::move(radius), query_bound),
      plan_(std::move(plan)),
      fixed_count_(fixed_count) {}

std::vector<CorrectorOutcome> PlannedCorrector::outcomes(int i) const {
  if (i < 1 || i > index_count())
    throw std::out_of_range("PlannedCorrector: index out of range");
  std::vector<CorrectorOutcome> outs = plan_(i);
  if (outs.empty()) throw std::logic_error("PlannedCorrector: empty plan");
  Rational total = 0;
  for (const auto& o : outs) {
    if (static_cast<long long>(o.queries.size()) > query_bound_)
      throw std::logic_error("PlannedCorrector: outcome exceeds the declared query bound");
    total += o.prob;
  }
  if (total != 1) throw std::logic_error("PlannedCorrector: probabilities must sum to 1");
  return outs;
}

OutputDist PlannedCorrector::exact_output_distribution(const BitWord& w, int i) const {
  OutputDist dist{0, 0, 0};
  for (const auto& o : outcomes(i)) {
    Out result = o.output(read_symbols(w, o.queries, nullptr));
    switch (result) {
      case Out::zero: dist.p_zero += o.prob; break;
      case Out::one: dist.p_one += o.prob; break;
      case Out::bot: dist.p_bot += o.prob; break;
    }
  }
  return dist;
}

Out PlannedCorrector::run(const BitWord& w, int i, Rng& rng, QueryLog* log) const {
  std::vector<CorrectorOutcome> outs = outcomes(i);
  std::vector<Rational> probs;
  probs.reserve(outs.size());
  for (const auto& o : outs) probs.push_back(o.prob);
  std::uint64_t den = common_denominator(probs);
  std::uint64_t draw = rng.next_below(den);
  std::uint64_t acc = 0;
  for (const auto& o : outs) {
    acc += (Rational(o.prob * den)).convert_to<std::uint64_t>();
    if (draw < acc) return o.output(read_symbols(w, o.queries, log));
  }
  throw std::logic_error("PlannedCorrector: sampling fell through");
}

Tester full_read_tester(std::shared_ptr<const LinearCode> code) {
  int n = code->n();
  std::vector<int> all(static_cast<std::size_t>(n));
  std::iota(all.begin(), all.end(), 1);
  const LinearCode* raw = code.get();
  TesterOutcome o;
  o.prob = 1;
  o.queries = all;
  o.accept = [raw, n](const std::vector<bool>& symbols) {
    BitWord w(n);
    for (int pos = 1; pos <= n; ++pos)
      if (symbols[static_cast<std::size_t>(pos - 1)]) w.set(pos, true);
    return raw->contains(w);
  };
  std::vector<TesterOutcome> outs;
  outs.push_back(std::move(o));
  return Tester(std::move(code), n, std::move(outs));
}

Tester parity_sample_tester(std::shared_ptr<const LinearCode> code) {
  const BitMatrix& h = code->parity_check();
  if (h.rows() < 1)
    throw std::invalid_argument("parity_sample_tester: parity-check matrix has no rows");
  long long max_weight = 0;
  std::vector<TesterOutcome> outs;
  outs.reserve(static_cast<std::size_t>(h.rows()));
  for (int r = 1; r <= h.rows(); ++r) {
    TesterOutcome o;
    o.prob = Rational(1, h.rows());
    for (int c = 1; c <= h.cols(); ++c)
      if (h.get(r, c)) o.queries.push_back(c);
    max_weight = std::max<long long>(max_weight, static_cast<long long>(o.queries.size()));
    o.accept = [](const std::vector<bool>& symbols) {
      bool parity = false;
      for (bool s : symbols) parity ^= s;
      return !parity;
    };
    outs.push_back(std::move(o));
  }
  return Tester(std::move(code), max_weight, std::move(outs));
}

Tester tensor_tester(std::shared_ptr<const LinearCode> code) {
  auto layout = code->tensor_layout();
  if (!layout) throw std::invalid_argument("tensor_tester: code lacks a tensor layout");
  int lines = layout->grid_rows + layout->grid_cols;
  std::vector<TesterOutcome> outs;
  outs.reserve(static_cast<std::size_t>(lines));
  auto make_line = [&](std::vector<int> positions, std::shared_ptr<const LinearCode> factor) {
    TesterOutcome o;
    o.prob = Rational(1, lines);
    o.queries = std::move(positions);
    o.accept = [factor](const std::vector<bool>& symbols) {
      BitWord line(static_cast<int>(symbols.size()));
      for (std::size_t j = 0; j < symbols.size(); ++j)
        if (symbols[j]) line.set(static_cast<int>(j) + 1, true);
      return factor->contains(line);
    };
    outs.push_back(std::move(o));
  };
  for (int r = 1; r <= layout->grid_rows; ++r) make_line(layout->row_positions(r), layout->row_code);
  for (int s = 1; s <= layout->grid_cols; ++s) make_line(layout->col_positions(s), layout->col_code);
  long long bound = std::max(layout->grid_rows, layout->grid_cols);
  return Tester(std::move(code), bound, std::move(outs));
}

std::shared_ptr<const PlannedCorrector> full_read_corrector(
    std::shared_ptr<const LinearCode> code, std::uint64_t budget) {
  Rational d = code->min_distance(budget);
  int n = code->n();
  Rational scaled = d * n;
  BigInt d_abs = numerator(scaled) / denominator(scaled);
  Rational radius = Rational(d_abs - 1, n);
  std::vector<int> all(static_cast<std::size_t>(n));
  std::iota(all.begin(), all.end(), 1);
  const LinearCode* raw = code.get();
  auto plan = [raw, all, n](int i) {
    CorrectorOutcome o;
    o.prob = 1;
    o.queries = all;
    o.output = [raw, n, i](const std::vector<bool>& symbols) {
      BitWord w(n);
      for (int pos = 1; pos <= n; ++pos)
        if (symbols[static_cast<std::size_t>(pos - 1)]) w.set(pos, true);
      if (!raw->contains(w)) return Out::bot;
      return out_of_bit(w.get(i));
    };
    std::vector<CorrectorOutcome> outs;
    outs.push_back(std::move(o));
    return outs;
  };
  return std::make_shared<const PlannedCorrector>(std::move(code), std::move(radius), n,
                                                  std::move(plan), n);
}

MessageDecoder::MessageDecoder(SystematicCode systematic, std::shared_ptr<const Corrector> inner)
    : Corrector(inner->code_ptr(), inner->radius(), inner->query_bound()),
      systematic_(std::move(systematic)),
      inner_(std::move(inner)) {
  if (systematic_.code().n() != inner_->code().n() ||
      systematic_.code().parity_check() != inner_->code().parity_check())
    throw std::invalid_argument("MessageDecoder: corrector is for a different code");
}

int MessageDecoder::check_index(int i) const {
  if (i < 1 || i > systematic_.code().k())
    throw std::out_of_range("MessageDecoder: message index out of range");
  return systematic_.message_position(i);
}

OutputDist MessageDecoder::exact_output_distribution(const BitWord& w, int i) const {
  return inner_->exact_output_distribution(w, check_index(i));
}

Out MessageDecoder::run(const BitWord& w, int i, Rng& rng, QueryLog* log) const {
  return inner_->run(w, check_index(i), rng, log);
}

std::optional<long long> MessageDecoder::fixed_query_count() const {
  return inner_->fixed_query_count();
}

std::shared_ptr<const MessageDecoder> rldc_decoder_from_systematic(
    SystematicCode systematic, std::shared_ptr<const Corrector> corrector) {
  return std::make_shared<const MessageDecoder>(std::move(systematic), std::move(corrector));
}

TesterRun run_with_queries(const Tester& t, const BitWord& w, std::uint64_t seed) {
  Rng rng(seed);
  TesterRun out{false, {}};
  out.accept = t.run(w, rng, &out.log);
  return out;
}

CorrectorRun run_with_queries(const Corrector& m, const BitWord& w, int i, std::uint64_t seed) {
  Rng rng(seed);
  CorrectorRun out{Out::bot, {}};
  out.output = m.run(w, i, rng, &out.log);
  return out;
}

ExactTestability measure_testability_exact(const Tester& t, std::uint64_t budget) {
  const LinearCode& code = t.code();
  int n = code.n();
  if (n > 62 || (std::uint64_t{1} << n) > budget)
    throw budget_error("measure_testability_exact: 2^n exceeds the budget");
  if (code.codeword_count() > budget)
    throw budget_error("measure_testability_exact: 2^k exceeds the budget");

  std::vector<BitWord> codewords;
  codewords.reserve(static_cast<std::size_t>(code.codeword_count()));
  code.for_each_codeword([&](const BitWord& c) { codewords.push_back(c); });

  ExactTestability result;
  result.words = std::uint64_t{1} << n;
  for (std::uint64_t bits = 0; bits < (std::uint64_t{1} << n); ++bits) {
    BitWord w(n);
    for (int pos = 1; pos <= n; ++pos)
      if ((bits >> (pos - 1)) & 1u) w.set(pos, true);
    if (code.contains(w)) {
      // Perfect completeness: every outcome must accept every codeword.
      for (std::size_t idx = 0; idx < t.outcomes().size(); ++idx) {
        if (!t.accepts(w, idx)) {
          if (result.completeness_pass) result.completeness_counterexample = w;
          result.completeness_pass = false;
        }
      }
      continue;
    }
    int best = n + 1;
    for (const BitWord& c : codewords) best = std::min(best, hamming(c, w));
    Rational ratio = exact_reject_probability(t, w) / Rational(best, n);
    if (!result.kappa || ratio < *result.kappa) {
      result.kappa = ratio;
      result.witness = w;
    }
  }
  return result;
}

}  // namespace loccode
