#include "loccode/nesting.hpp"

#include <algorithm>
#include <sstream>

namespace loccode {

NestedLayout NestedLayout::make(int outer_len, int inner_len) {
  if (inner_len < 1 || inner_len > outer_len)
    throw std::invalid_argument("NestedLayout: need 1 <= n <= N");
  return NestedLayout{outer_len, inner_len};
}

std::pair<int, int> NestedLayout::block(int b) const {
  if (b < 1 || b > block_count()) throw std::out_of_range("NestedLayout: block out of range");
  if (b <= aligned_count()) return {(b - 1) * inner_len + 1, b * inner_len};
  return {outer_len - inner_len + 1, outer_len};
}

BlockRef block_interval(int i, int outer_len, int inner_len) {
  NestedLayout layout = NestedLayout::make(outer_len, inner_len);
  if (i < 1 || i > outer_len) throw std::out_of_range("block_interval: index out of range");
  int b = (i + inner_len - 1) / inner_len;  // ceil(i/n)
  auto [lo, hi] = (b <= layout.aligned_count()) ? layout.block(b)
                                                : layout.block(layout.block_count());
  return BlockRef{lo, hi, i + 1 - lo};
}

LinearCode nest(const LinearCode& outer, const LinearCode& inner) {
  int n_outer = outer.n();
  int n_inner = inner.n();
  if (n_inner > n_outer) throw std::invalid_argument("nest: inner block length exceeds outer");
  NestedLayout layout = NestedLayout::make(n_outer, n_inner);
  BitMatrix h(0, n_outer);
  for (int r = 1; r <= outer.parity_check().rows(); ++r) h.append_row(outer.parity_check().row(r));
  for (int b = 1; b <= layout.block_count(); ++b) {
    auto [lo, hi] = layout.block(b);
    (void)hi;
    for (int r = 1; r <= inner.parity_check().rows(); ++r) {
      BitWord row(n_outer);
      for (int c = 1; c <= n_inner; ++c)
        if (inner.parity_check().get(r, c)) row.set(lo + c - 1, true);
      h.append_row(std::move(row));
    }
  }
  return LinearCode::from_parity_check(std::move(h));
}

Rational rate_lower_bound(const Rational& eps1, const Rational& eps2, int outer_len,
                          int inner_len) {
  if (inner_len < 1 || inner_len > outer_len)
    throw std::invalid_argument("rate_lower_bound: need 1 <= n <= N");
  if (eps1 < 0 || eps1 > 1 || eps2 < 0 || eps2 > 1)
    throw std::invalid_argument("rate_lower_bound: eps must lie in [0, 1]");
  int copies = (outer_len + inner_len - 1) / inner_len;  // ceil(N/n)
  return Rational(1) - eps1 - Rational(inner_len, outer_len) * copies * eps2;
}

long long repetitions(int outer_len, int inner_len, const Rational& delta,
                      const Rational& kappa) {
  if (inner_len < 1 || inner_len > outer_len)
    throw std::invalid_argument("repetitions: need 1 <= n <= N");
  if (delta <= 0 || kappa <= 0)
    throw std::invalid_argument("repetitions: delta and kappa must be positive");
  Rational x = Rational(outer_len) / (delta * kappa * inner_len);
  BigInt t = ceil_two_ln3_times(x);
  if (t < 1) t = 1;
  if (t > BigInt(std::int64_t{1} << 62))
    throw std::overflow_error("repetitions: repetition count out of range");
  long long reps = t.convert_to<long long>();
  if (!repetition_certificate(outer_len, inner_len, delta, kappa, reps))
    throw std::logic_error("repetitions: exact certificate failed");  // unreachable
  return reps;
}

bool repetition_certificate(int outer_len, int inner_len, const Rational& delta,
                            const Rational& kappa, long long t) {
  Rational base = Rational(1) - kappa * delta * inner_len / (2 * Rational(outer_len));
  if (base < 0) base = 0;
  if (t < 0) return false;
  return rational_pow(base, static_cast<std::uint64_t>(t)) <= Rational(1, 3);
}

NestedCode make_nested_code(std::shared_ptr<const LinearCode> outer,
                            std::shared_ptr<const Tester> outer_tester, Rational delta_ltc,
                            Rational kappa, std::shared_ptr<const Corrector> inner,
                            std::uint64_t budget) {
  if (!outer || !outer_tester || !inner) throw std::invalid_argument("make_nested_code: null input");
  if (&outer_tester->code() != outer.get() && outer_tester->code().parity_check() != outer->parity_check())
    throw std::invalid_argument("make_nested_code: tester is not for the outer code");
  if (inner->radius() <= 0)
    throw std::invalid_argument("make_nested_code: inner corrector radius must be positive");
  if (delta_ltc <= 0 || delta_ltc > 1 || kappa <= 0)
    throw std::invalid_argument("make_nested_code: delta_ltc/kappa out of range");
  // Verify the certificates where enumeration is affordable.
  int nk = std::min(outer->k(), outer->n() - outer->k());
  if (nk <= 62 && (std::uint64_t{1} << nk) <= budget) {
    if (delta_ltc > outer->min_distance(budget))
      throw std::invalid_argument("make_nested_code: delta_ltc exceeds the outer code's distance");
  }
  if (outer->n() <= 12 && outer->codeword_count() <= budget) {
    ExactTestability kt = measure_testability_exact(*outer_tester, budget);
    if (kt.kappa && kappa > *kt.kappa)
      throw std::invalid_argument("make_nested_code: kappa exceeds the measured testability");
  }
  LinearCode code = nest(*outer, inner->code());
  NestedLayout layout = NestedLayout::make(outer->n(), inner->code().n());
  return NestedCode{std::move(code),  layout,
                    std::move(outer), std::move(outer_tester),
                    std::move(inner), std::move(delta_ltc),
                    std::move(kappa)};
}

NestedCorrector::NestedCorrector(NestedCode nc, std::optional<long long> forced_repetitions)
    : Corrector(std::make_shared<const LinearCode>(nc.code), nc.delta_ltc / 2, 0),
      nc_(std::move(nc)) {
  reps_ = forced_repetitions ? *forced_repetitions
                             : loccode::repetitions(nc_.layout.outer_len, nc_.layout.inner_len,
                                                    nc_.inner->radius(), nc_.kappa);
  if (reps_ < 0) throw std::invalid_argument("NestedCorrector: negative repetition count");
  query_bound_ = nc_.inner->query_bound() + reps_ * nc_.outer_tester->query_bound();
}

OutputDist NestedCorrector::exact_output_distribution(const BitWord& w, int i) const {
  if (w.len() != code().n()) throw std::invalid_argument("NestedCorrector: length mismatch");
  BlockRef ref = block_interval(i, nc_.layout.outer_len, nc_.layout.inner_len);
  OutputDist inner = nc_.inner->exact_output_distribution(w.restricted(ref.lo, ref.hi),
                                                          ref.local_index);
  Rational pass_all =
      rational_pow(Rational(1) - exact_reject_probability(*nc_.outer_tester, w),
                   static_cast<std::uint64_t>(reps_));
  OutputDist out;
  out.p_zero = pass_all * inner.p_zero;
  out.p_one = pass_all * inner.p_one;
  out.p_bot = Rational(1) - pass_all * (Rational(1) - inner.p_bot);
  return out;
}

Out NestedCorrector::run(const BitWord& w, int i, Rng& rng, QueryLog* log) const {
  if (w.len() != code().n()) throw std::invalid_argument("NestedCorrector: length mismatch");
  BlockRef ref = block_interval(i, nc_.layout.outer_len, nc_.layout.inner_len);
  QueryLog local;
  Out inner = nc_.inner->run(w.restricted(ref.lo, ref.hi), ref.local_index, rng,
                             log ? &local : nullptr);
  if (log) {
    for (int pos : local.positions) log->positions.insert(ref.lo - 1 + pos);
    log->count += local.count;
  }
  // Every tester repetition runs even after a rejection: short-circuiting
  // would make the query count depend on read values.
  bool rejected = false;
  for (long long rep = 0; rep < reps_; ++rep)
    if (!nc_.outer_tester->run(w, rng, log)) rejected = true;
  return rejected ? Out::bot : inner;
}

std::optional<long long> NestedCorrector::fixed_query_count() const {
  auto inner = nc_.inner->fixed_query_count();
  if (!inner) return std::nullopt;
  const auto& outs = nc_.outer_tester->outcomes();
  std::size_t first = outs.front().queries.size();
  for (const auto& o : outs)
    if (o.queries.size() != first) return std::nullopt;
  return *inner + reps_ * static_cast<long long>(first);
}

NestingChain iterate_nesting(const std::vector<ChainLevelInput>& family, std::uint64_t budget) {
  if (family.empty()) throw std::invalid_argument("iterate_nesting: empty family");
  for (std::size_t j = 1; j < family.size(); ++j)
    if (family[j].ltc->n() < family[j - 1].ltc->n())
      throw std::invalid_argument("iterate_nesting: block lengths must be nondecreasing");

  NestingChain chain;
  chain.folded = family[0].ltc;
  chain.corrector = full_read_corrector(family[0].ltc, budget);
  if (chain.corrector->radius() <= 0)
    throw std::invalid_argument("iterate_nesting: base code has distance 1; radius is zero");
  ChainLevel first;
  first.input = family[0];
  first.block_length = family[0].ltc->n();
  first.dimension = family[0].ltc->k();
  first.t = 0;
  first.tester_queries = family[0].tester ? family[0].tester->query_bound() : 0;
  first.radius = chain.corrector->radius();
  first.eps_bound = Rational(family[0].ltc->n() - family[0].ltc->k(), family[0].ltc->n());
  first.query_bound = chain.corrector->query_bound();
  chain.levels.push_back(std::move(first));

  for (std::size_t j = 1; j < family.size(); ++j)
    chain = boost_radius(chain, family[j], budget);
  chain.rate_bound = Rational(1) - chain.levels.back().eps_bound;
  chain.query_bound = chain.levels.back().query_bound;
  return chain;
}

NestingChain boost_radius(const NestingChain& inner, const ChainLevelInput& final_ltc,
                          std::uint64_t budget) {
  if (inner.levels.empty()) throw std::invalid_argument("boost_radius: empty chain");
  if (!final_ltc.tester) throw std::invalid_argument("boost_radius: level needs a tester");
  if (final_ltc.ltc->n() < inner.folded->n())
    throw std::invalid_argument("boost_radius: block lengths must be nondecreasing");

  NestedCode nc = make_nested_code(final_ltc.ltc, final_ltc.tester, final_ltc.delta_ltc,
                                   final_ltc.kappa, inner.corrector, budget);
  auto corrector = std::make_shared<const NestedCorrector>(nc);

  const ChainLevel& prev = inner.levels.back();
  ChainLevel level;
  level.input = final_ltc;
  level.block_length = final_ltc.ltc->n();
  level.dimension = nc.code.k();
  level.t = corrector->repetitions();
  level.tester_queries = final_ltc.tester->query_bound();
  level.radius = corrector->radius();
  Rational eps_ltc(final_ltc.ltc->n() - final_ltc.ltc->k(), final_ltc.ltc->n());
  int copies = (final_ltc.ltc->n() + inner.folded->n() - 1) / inner.folded->n();
  level.eps_bound = eps_ltc + Rational(inner.folded->n(), final_ltc.ltc->n()) * copies *
                                  prev.eps_bound;
  level.query_bound = prev.query_bound + level.t * level.tester_queries;

  NestingChain out;
  out.levels = inner.levels;
  out.levels.push_back(std::move(level));
  out.folded = std::make_shared<const LinearCode>(nc.code);
  out.corrector = std::move(corrector);
  out.rate_bound = Rational(1) - out.levels.back().eps_bound;
  out.query_bound = out.levels.back().query_bound;
  return out;
}

std::vector<ChainSpec> parse_chain_descriptor(std::istream& in) {
  std::vector<ChainSpec> specs;
  std::string line;
  int expected = 1;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    std::istringstream ls(line);
    std::string word, code_kv, tester_kv, delta_kv, kappa_kv;
    int level = 0;
    if (!(ls >> word >> level >> code_kv >> tester_kv >> delta_kv >> kappa_kv) || word != "LEVEL")
      throw std::invalid_argument("chain descriptor: bad line: " + line);
    std::string extra;
    if (ls >> extra) throw std::invalid_argument("chain descriptor: trailing tokens: " + line);
    if (level != expected)
      throw std::invalid_argument("chain descriptor: levels must be numbered 1..m in order");
    auto strip = [&](const std::string& kv, const char* key) {
      std::string prefix = std::string(key) + "=";
      if (kv.rfind(prefix, 0) != 0)
        throw std::invalid_argument("chain descriptor: expected " + prefix + "...: " + line);
      return kv.substr(prefix.size());
    };
    ChainSpec spec;
    spec.level = level;
    spec.code_ref = strip(code_kv, "code");
    spec.tester_kind = strip(tester_kv, "tester");
    if (spec.tester_kind != "full" && spec.tester_kind != "parity" && spec.tester_kind != "tensor")
      throw std::invalid_argument("chain descriptor: tester must be full|parity|tensor");
    spec.delta = parse_rational(strip(delta_kv, "delta"));
    spec.kappa = parse_rational(strip(kappa_kv, "kappa"));
    specs.push_back(std::move(spec));
    ++expected;
  }
  if (specs.empty()) throw std::invalid_argument("chain descriptor: no levels");
  return specs;
}

std::string format_chain_descriptor(const std::vector<ChainSpec>& specs) {
  std::string out;
  for (const auto& s : specs) {
    out += "LEVEL " + std::to_string(s.level) + " code=" + s.code_ref + " tester=" +
           s.tester_kind + " delta=" + format_rational(s.delta) + " kappa=" +
           format_rational(s.kappa) + "\n";
  }
  return out;
}

std::shared_ptr<const Tester> make_named_tester(const std::string& kind,
                                                std::shared_ptr<const LinearCode> code) {
  if (kind == "full") return std::make_shared<const Tester>(full_read_tester(std::move(code)));
  if (kind == "parity") return std::make_shared<const Tester>(parity_sample_tester(std::move(code)));
  if (kind == "tensor") return std::make_shared<const Tester>(tensor_tester(std::move(code)));
  throw std::invalid_argument("unknown tester kind: " + kind);
}

}  // namespace loccode
