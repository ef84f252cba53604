#include "loccode/analysis.hpp"

#include <boost/math/distributions/binomial.hpp>

#include <json.hpp>

#include <algorithm>
#include <cmath>

namespace loccode {

namespace {

// All error patterns of weight 0..max_weight on [1..n], in weight-then-
// lexicographic order. f(const std::vector<int>& positions).
template <class F>
void for_each_pattern(int n, int max_weight, F&& f) {
  std::vector<int> pos;
  f(static_cast<const std::vector<int>&>(pos));
  for (int w = 1; w <= max_weight; ++w) {
    pos.assign(static_cast<std::size_t>(w), 0);
    for (int i = 0; i < w; ++i) pos[static_cast<std::size_t>(i)] = i + 1;
    for (;;) {
      f(static_cast<const std::vector<int>&>(pos));
      int i = w - 1;
      while (i >= 0 && pos[static_cast<std::size_t>(i)] == n - (w - 1 - i)) --i;
      if (i < 0) break;
      ++pos[static_cast<std::size_t>(i)];
      for (int j = i + 1; j < w; ++j)
        pos[static_cast<std::size_t>(j)] = pos[static_cast<std::size_t>(j - 1)] + 1;
    }
  }
}

std::uint64_t pattern_count(int n, int max_weight) {
  std::uint64_t total = 0;
  BigInt c = 1;
  for (int j = 0; j <= max_weight; ++j) {
    total += c.convert_to<std::uint64_t>();
    c = c * (n - j) / (j + 1);
    if (c > BigInt(~std::uint64_t{0} >> 2)) return ~std::uint64_t{0} >> 1;
  }
  return total;
}

struct SweepCell {
  Rational min_success = 1;
  std::optional<Counterexample> worst;
  long long max_queries = 0;
  std::uint64_t pairs = 0;
  bool seen = false;
};

void fold_cell(SweepCell& into, const SweepCell& from) {
  if (!from.seen) return;
  if (!into.seen || from.min_success < into.min_success) {
    into.min_success = from.min_success;
    into.worst = from.worst;
  }
  into.seen = true;
  into.max_queries = std::max(into.max_queries, from.max_queries);
  into.pairs += from.pairs;
}

std::vector<std::pair<std::uint64_t, std::uint64_t>> chunk_ranges(std::uint64_t total,
                                                                  int threads) {
  std::uint64_t chunks = std::max<std::uint64_t>(1, static_cast<std::uint64_t>(threads) * 8);
  chunks = std::min(chunks, total);
  std::vector<std::pair<std::uint64_t, std::uint64_t>> out;
  std::uint64_t per = total / chunks, extra = total % chunks, begin = 0;
  for (std::uint64_t c = 0; c < chunks; ++c) {
    std::uint64_t len = per + (c < extra ? 1 : 0);
    out.emplace_back(begin, begin + len);
    begin += len;
  }
  return out;
}

McStats clopper_pearson(std::uint64_t samples, std::uint64_t successes) {
  using boost::math::binomial_distribution;
  McStats mc;
  mc.samples = samples;
  mc.successes = successes;
  double ns = static_cast<double>(samples);
  double ks = static_cast<double>(successes);
  mc.cp_low = (successes == 0)
                  ? 0.0
                  : binomial_distribution<double>::find_lower_bound_on_p(ns, ks, 0.005);
  mc.cp_high = (successes == samples)
                   ? 1.0
                   : binomial_distribution<double>::find_upper_bound_on_p(ns, ks, 0.005);
  return mc;
}

}  // namespace

CorruptionKind corruption_kind_from_string(const std::string& name) {
  if (name == "uniform") return CorruptionKind::uniform_random;
  if (name == "burst") return CorruptionKind::burst;
  if (name == "block") return CorruptionKind::block_targeted;
  if (name == "exhaustive") return CorruptionKind::exhaustive_up_to_weight;
  throw std::invalid_argument("unknown corruption model: " + name);
}

std::string corruption_kind_to_string(CorruptionKind kind) {
  switch (kind) {
    case CorruptionKind::uniform_random: return "uniform";
    case CorruptionKind::burst: return "burst";
    case CorruptionKind::block_targeted: return "block";
    case CorruptionKind::exhaustive_up_to_weight: return "exhaustive";
  }
  return "?";
}

BitWord corrupt(const BitWord& codeword, const CorruptionModel& model, Rng& rng,
                const NestedLayout* layout) {
  int n = codeword.len();
  BitWord w = codeword;
  if (model.weight < 0 || model.weight > n)
    throw std::invalid_argument("corrupt: weight must lie in [0, n]");
  switch (model.kind) {
    case CorruptionKind::uniform_random: {
      std::vector<int> pool(static_cast<std::size_t>(n));
      for (int i = 0; i < n; ++i) pool[static_cast<std::size_t>(i)] = i + 1;
      for (int i = 0; i < model.weight; ++i) {
        std::size_t j = static_cast<std::size_t>(i) + static_cast<std::size_t>(rng.next_below(
                                                         static_cast<std::uint64_t>(n - i)));
        std::swap(pool[static_cast<std::size_t>(i)], pool[j]);
        w.flip(pool[static_cast<std::size_t>(i)]);
      }
      return w;
    }
    case CorruptionKind::burst: {
      if (model.weight == 0) return w;
      int start = 1 + static_cast<int>(rng.next_below(static_cast<std::uint64_t>(n - model.weight + 1)));
      for (int pos = start; pos < start + model.weight; ++pos) w.flip(pos);
      return w;
    }
    case CorruptionKind::block_targeted: {
      if (!layout) throw std::invalid_argument("corrupt: block-targeted model needs a layout");
      int b = 1 + static_cast<int>(rng.next_below(static_cast<std::uint64_t>(layout->block_count())));
      auto [lo, hi] = layout->block(b);
      int room = hi - lo + 1;
      int flips = std::min(model.weight, room);
      std::vector<int> pool(static_cast<std::size_t>(room));
      for (int i = 0; i < room; ++i) pool[static_cast<std::size_t>(i)] = lo + i;
      for (int i = 0; i < flips; ++i) {
        std::size_t j = static_cast<std::size_t>(i) + static_cast<std::size_t>(rng.next_below(
                                                         static_cast<std::uint64_t>(room - i)));
        std::swap(pool[static_cast<std::size_t>(i)], pool[j]);
        w.flip(pool[static_cast<std::size_t>(i)]);
      }
      return w;
    }
    case CorruptionKind::exhaustive_up_to_weight:
      throw std::invalid_argument("corrupt: exhaustive model is swept, not sampled");
  }
  throw std::logic_error("corrupt: bad kind");
}

std::string report_csv_header() {
  return "kind,code,n,k,radius_num,radius_den,sweep_size,min_success_num,min_success_den,"
         "max_queries,exhaustive,seed\n";
}

std::string report_csv_row(const VerificationReport& r) {
  std::string out;
  out += r.kind;
  out += ',';
  out += r.code_label;
  out += ',';
  out += std::to_string(r.n);
  out += ',';
  out += std::to_string(r.k);
  out += ',';
  out += numerator(r.radius).str();
  out += ',';
  out += denominator(r.radius).str();
  out += ',';
  out += std::to_string(r.sweep_size);
  out += ',';
  out += numerator(r.min_success).str();
  out += ',';
  out += denominator(r.min_success).str();
  out += ',';
  out += std::to_string(r.max_queries);
  out += ',';
  out += (r.exhaustive ? "1" : "0");
  out += ',';
  out += std::to_string(r.seed);
  out += '\n';
  return out;
}

std::string report_json(const VerificationReport& r) {
  nlohmann::json j;
  j["kind"] = r.kind;
  j["code"] = r.code_label;
  j["n"] = r.n;
  j["k"] = r.k;
  j["radius_num"] = numerator(r.radius).str();
  j["radius_den"] = denominator(r.radius).str();
  j["sweep_size"] = r.sweep_size;
  j["min_success_num"] = numerator(r.min_success).str();
  j["min_success_den"] = denominator(r.min_success).str();
  j["max_queries"] = r.max_queries;
  j["exhaustive"] = r.exhaustive;
  j["seed"] = r.seed;
  j["pass"] = r.pass;
  if (r.counterexample) {
    j["counterexample"] = {{"word", r.counterexample->word.to_string()},
                           {"index", r.counterexample->index},
                           {"success", format_rational(r.counterexample->success)},
                           {"note", r.counterexample->note}};
  }
  if (r.mc) {
    j["mc"] = {{"samples", r.mc->samples},
               {"successes", r.mc->successes},
               {"cp_low", r.mc->cp_low},
               {"cp_high", r.mc->cp_high}};
  }
  return j.dump(2) + "\n";
}

VerificationReport verify_completeness(const Corrector& corrector, const SweepOptions& opts) {
  const LinearCode& code = corrector.code();
  int indices = corrector.index_count();
  VerificationReport report;
  report.kind = "completeness";
  report.code_label = opts.code_label;
  report.n = code.n();
  report.k = code.k();
  report.radius = Rational(0);
  report.seed = opts.master_seed;
  report.min_success = 1;

  bool exhaustive =
      code.k() <= 62 && code.codeword_count() <= opts.budget / std::max(1, indices);
  if (!exhaustive && opts.mc_samples == 0)
    throw budget_error("verify_completeness: sweep exceeds the budget; set mc_samples");
  report.exhaustive = exhaustive;

  auto check_pair = [&](const BitWord& c, int i, std::uint64_t pair_idx, SweepCell& cell) {
    OutputDist dist = corrector.exact_output_distribution(c, i);
    // Decoders index message coordinates; the contracted symbol sits at the
    // decoded codeword position.
    Out truth;
    if (const auto* dec = dynamic_cast<const MessageDecoder*>(&corrector))
      truth = out_of_bit(c.get(dec->systematic().message_position(i)));
    else
      truth = out_of_bit(c.get(i));
    Rational ok = dist.p(truth);
    cell.seen = true;
    ++cell.pairs;
    if (ok < cell.min_success) {
      cell.min_success = ok;
      if (ok < 1)
        cell.worst = Counterexample{c, i, ok, "output distribution is not a point mass"};
    }
    CorrectorRun run = run_with_queries(corrector, c, i, derive_seed(opts.master_seed, pair_idx));
    cell.max_queries = std::max(cell.max_queries, run.log.count);
  };

  SweepCell total;
  if (exhaustive) {
    auto ranges = chunk_ranges(code.codeword_count(), opts.threads);
    std::function<SweepCell(std::size_t)> task = [&](std::size_t chunk) {
      SweepCell cell;
      auto [begin, end] = ranges[chunk];
      code.for_each_codeword_range(begin, end, [&](const BitWord& c, std::uint64_t counter) {
        for (int i = 1; i <= indices; ++i)
          check_pair(c, i, counter * static_cast<std::uint64_t>(indices) +
                               static_cast<std::uint64_t>(i - 1),
                     cell);
      });
      return cell;
    };
    for (const SweepCell& cell : parallel_map<SweepCell>(ranges.size(), opts.threads, task))
      fold_cell(total, cell);
  } else {
    std::function<SweepCell(std::size_t)> task = [&](std::size_t trial) {
      SweepCell cell;
      Rng rng(derive_seed(opts.master_seed, trial));
      std::uint64_t counter =
          (code.k() >= 62) ? rng.next() : rng.next_below(code.codeword_count());
      BitWord c = code.codeword_at_counter(counter);
      int i = 1 + static_cast<int>(rng.next_below(static_cast<std::uint64_t>(indices)));
      check_pair(c, i, trial, cell);
      return cell;
    };
    for (const SweepCell& cell :
         parallel_map<SweepCell>(static_cast<std::size_t>(opts.mc_samples), opts.threads, task))
      fold_cell(total, cell);
  }

  report.sweep_size = total.pairs;
  report.min_success = total.seen ? total.min_success : Rational(1);
  report.max_queries = total.max_queries;
  report.counterexample = total.worst;
  report.pass = report.min_success == 1;
  return report;
}

VerificationReport verify_tester_completeness(const Tester& tester, const SweepOptions& opts) {
  const LinearCode& code = tester.code();
  VerificationReport report;
  report.kind = "completeness";
  report.code_label = opts.code_label;
  report.n = code.n();
  report.k = code.k();
  report.radius = Rational(0);
  report.seed = opts.master_seed;
  report.min_success = 1;
  std::uint64_t outcomes = tester.outcomes().size();
  bool exhaustive = code.k() <= 62 && code.codeword_count() <= opts.budget / std::max<std::uint64_t>(1, outcomes);
  if (!exhaustive && opts.mc_samples == 0)
    throw budget_error("verify_tester_completeness: sweep exceeds the budget; set mc_samples");
  report.exhaustive = exhaustive;

  SweepCell total;
  auto check_word = [&](const BitWord& c, SweepCell& cell) {
    cell.seen = true;
    for (std::size_t idx = 0; idx < tester.outcomes().size(); ++idx) {
      QueryLog log;
      bool ok = tester.accepts(c, idx, &log);
      cell.max_queries = std::max(cell.max_queries, log.count);
      ++cell.pairs;
      if (!ok && cell.min_success > 0) {
        cell.min_success = 0;
        cell.worst = Counterexample{c, static_cast<int>(idx + 1), Rational(0),
                                    "tester rejects a codeword"};
      }
    }
  };

  if (exhaustive) {
    auto ranges = chunk_ranges(code.codeword_count(), opts.threads);
    std::function<SweepCell(std::size_t)> task = [&](std::size_t chunk) {
      SweepCell cell;
      auto [begin, end] = ranges[chunk];
      code.for_each_codeword_range(begin, end,
                                   [&](const BitWord& c, std::uint64_t) { check_word(c, cell); });
      return cell;
    };
    for (const SweepCell& cell : parallel_map<SweepCell>(ranges.size(), opts.threads, task))
      fold_cell(total, cell);
  } else {
    std::function<SweepCell(std::size_t)> task = [&](std::size_t trial) {
      SweepCell cell;
      Rng rng(derive_seed(opts.master_seed, trial));
      BitWord c = code.codeword_at_counter(
          (code.k() >= 62) ? rng.next() : rng.next_below(code.codeword_count()));
      check_word(c, cell);
      return cell;
    };
    for (const SweepCell& cell :
         parallel_map<SweepCell>(static_cast<std::size_t>(opts.mc_samples), opts.threads, task))
      fold_cell(total, cell);
  }

  report.sweep_size = total.pairs;
  report.min_success = total.seen ? total.min_success : Rational(1);
  report.max_queries = total.max_queries;
  report.counterexample = total.worst;
  report.pass = report.min_success == 1;
  return report;
}

Rational success_probability(const Corrector& corrector, const BitWord& w, int i,
                             const BitWord& reference) {
  Out expected;
  if (const auto* dec = dynamic_cast<const MessageDecoder*>(&corrector))
    expected = out_of_bit(reference.get(dec->systematic().message_position(i)));
  else
    expected = out_of_bit(reference.get(i));
  return corrector.exact_output_distribution(w, i).success(expected);
}

Rational nested_success_probability(const NestedCorrector& corrector, const BitWord& w, int i,
                                    const BitWord& reference) {
  return success_probability(corrector, w, i, reference);
}

NearestSuccess nested_success_probability(const NestedCorrector& corrector, const BitWord& w,
                                          int i, std::uint64_t budget) {
  LinearCode::Nearest nearest = corrector.code().nearest_codeword(w, budget);
  if (!nearest.unique && nearest.distance > 0)
    throw std::runtime_error(
        "nested_success_probability: nearest codeword is not unique; pass the reference "
        "codeword explicitly");
  Rational p = success_probability(corrector, w, i, nearest.codeword);
  return NearestSuccess{std::move(p), std::move(nearest.codeword)};
}

VerificationReport soundness_sweep(const Corrector& corrector, const Rational& radius,
                                   const CorruptionModel& model, const SweepOptions& opts) {
  const LinearCode& code = corrector.code();
  int n = code.n();
  int indices = corrector.index_count();
  int max_weight = static_cast<int>(rational_floor(radius * n).convert_to<long long>());
  if (max_weight < 0) throw std::invalid_argument("soundness_sweep: negative radius");
  max_weight = std::min(max_weight, n);

  VerificationReport report;
  report.kind = "soundness";
  report.code_label = opts.code_label;
  report.n = n;
  report.k = code.k();
  report.radius = radius;
  report.seed = opts.master_seed;

  const NestedLayout* layout = nullptr;
  if (const auto* nested = dynamic_cast<const NestedCorrector*>(&corrector))
    layout = &nested->nested().layout;

  SweepCell total;
  if (model.kind == CorruptionKind::exhaustive_up_to_weight) {
    std::uint64_t patterns = pattern_count(n, max_weight);
    if (code.k() > 62 || code.codeword_count() > opts.budget / std::max<std::uint64_t>(1, patterns))
      throw budget_error("soundness_sweep: exhaustive sweep exceeds the budget");
    report.exhaustive = true;
    auto ranges = chunk_ranges(code.codeword_count(), opts.threads);
    std::function<SweepCell(std::size_t)> task = [&](std::size_t chunk) {
      SweepCell cell;
      auto [begin, end] = ranges[chunk];
      code.for_each_codeword_range(begin, end, [&](const BitWord& c, std::uint64_t counter) {
        std::uint64_t pattern_idx = 0;
        for_each_pattern(n, max_weight, [&](const std::vector<int>& flips) {
          BitWord w = c;
          for (int pos : flips) w.flip(pos);
          for (int i = 1; i <= indices; ++i) {
            Rational success = success_probability(corrector, w, i, c);
            cell.seen = true;
            ++cell.pairs;
            if (success < cell.min_success) {
              cell.min_success = success;
              if (success < Rational(2, 3))
                cell.worst = Counterexample{w, i, success, "success probability below 2/3"};
            }
            std::uint64_t pair_idx =
                (counter * patterns + pattern_idx) * static_cast<std::uint64_t>(indices) +
                static_cast<std::uint64_t>(i - 1);
            CorrectorRun run =
                run_with_queries(corrector, w, i, derive_seed(opts.master_seed, pair_idx));
            cell.max_queries = std::max(cell.max_queries, run.log.count);
          }
          ++pattern_idx;
        });
      });
      return cell;
    };
    for (const SweepCell& cell : parallel_map<SweepCell>(ranges.size(), opts.threads, task))
      fold_cell(total, cell);
    report.sweep_size = total.pairs;
    report.min_success = total.seen ? total.min_success : Rational(1);
  } else {
    if (opts.mc_samples == 0)
      throw std::invalid_argument("soundness_sweep: randomized models need mc_samples");
    report.exhaustive = false;
    CorruptionModel local = model;
    local.weight = std::min(model.weight, max_weight);
    struct TrialCell {
      SweepCell cell;
      bool run_success = false;
    };
    std::function<TrialCell(std::size_t)> task = [&](std::size_t trial) {
      TrialCell out;
      Rng rng(derive_seed(opts.master_seed ^ model.seed, trial));
      BitWord c = code.codeword_at_counter(
          (code.k() >= 62) ? rng.next() : rng.next_below(code.codeword_count()));
      BitWord w = corrupt(c, local, rng, layout);
      int i = 1 + static_cast<int>(rng.next_below(static_cast<std::uint64_t>(indices)));
      Rational success = success_probability(corrector, w, i, c);
      out.cell.seen = true;
      out.cell.pairs = 1;
      out.cell.min_success = success;
      if (success < Rational(2, 3))
        out.cell.worst = Counterexample{w, i, success, "success probability below 2/3"};
      CorrectorRun run = run_with_queries(corrector, w, i, rng.next());
      out.cell.max_queries = run.log.count;
      Out expected;
      if (const auto* dec = dynamic_cast<const MessageDecoder*>(&corrector))
        expected = out_of_bit(c.get(dec->systematic().message_position(i)));
      else
        expected = out_of_bit(c.get(i));
      out.run_success = (run.output == expected || run.output == Out::bot);
      return out;
    };
    std::uint64_t run_successes = 0;
    for (const TrialCell& t :
         parallel_map<TrialCell>(static_cast<std::size_t>(opts.mc_samples), opts.threads, task)) {
      fold_cell(total, t.cell);
      if (t.run_success) ++run_successes;
    }
    report.sweep_size = total.pairs;
    report.min_success = total.seen ? total.min_success : Rational(1);
    report.mc = clopper_pearson(opts.mc_samples, run_successes);
  }

  report.max_queries = total.max_queries;
  report.counterexample = total.worst;
  report.pass = report.min_success >= Rational(2, 3);
  return report;
}

TestabilityReport measure_testability(const Tester& tester, const SweepOptions& opts) {
  TestabilityReport out;
  const LinearCode& code = tester.code();
  bool exact_feasible = code.n() <= 62 && (std::uint64_t{1} << code.n()) <= opts.budget &&
                        code.codeword_count() <= opts.budget;
  if (exact_feasible) {
    out.data = measure_testability_exact(tester, opts.budget);
    out.exhaustive = true;
    out.samples = out.data.words;
  } else {
    if (opts.mc_samples == 0)
      throw budget_error("measure_testability: exact mode exceeds the budget; set mc_samples");
    out.exhaustive = false;
    out.samples = opts.mc_samples;
    std::function<ExactTestability(std::size_t)> task = [&](std::size_t trial) {
      ExactTestability cell;
      Rng rng(derive_seed(opts.master_seed, trial));
      BitWord w(code.n());
      for (int attempt = 0; attempt < 64; ++attempt) {
        for (int pos = 1; pos <= code.n(); ++pos) w.set(pos, rng.next() & 1u);
        if (!code.contains(w)) break;
      }
      if (code.contains(w)) return cell;  // vanishing probability; skip
      LinearCode::Nearest nearest = code.nearest_codeword(w, opts.budget);
      cell.kappa = exact_reject_probability(tester, w) / nearest.distance;
      cell.witness = w;
      cell.words = 1;
      return cell;
    };
    for (const ExactTestability& cell : parallel_map<ExactTestability>(
             static_cast<std::size_t>(opts.mc_samples), opts.threads, task)) {
      if (!cell.kappa) continue;
      if (!out.data.kappa || *cell.kappa < *out.data.kappa) {
        out.data.kappa = cell.kappa;
        out.data.witness = cell.witness;
      }
      out.data.words += cell.words;
    }
  }
  out.kappa_clamped = out.data.kappa ? std::min(*out.data.kappa, Rational(1)) : Rational(1);
  return out;
}

VerificationReport testability_report(const Tester& tester, const TestabilityReport& result,
                                      const SweepOptions& opts) {
  VerificationReport report;
  report.kind = "testability";
  report.code_label = opts.code_label;
  report.n = tester.code().n();
  report.k = tester.code().k();
  report.radius = Rational(0);
  report.sweep_size = result.data.words;
  report.min_success = result.data.kappa ? *result.data.kappa : Rational(1);
  report.max_queries = tester.query_bound();
  report.exhaustive = result.exhaustive;
  report.seed = opts.master_seed;
  report.pass = result.data.completeness_pass;
  if (!result.data.completeness_pass && result.data.completeness_counterexample)
    report.counterexample = Counterexample{*result.data.completeness_counterexample, 0,
                                           Rational(0), "tester rejects a codeword"};
  else if (result.data.witness)
    report.counterexample =
        Counterexample{*result.data.witness, 0, report.min_success, "kappa witness"};
  return report;
}

long double binary_entropy(long double x) {
  if (x < 0.0L || x > 1.0L) throw std::invalid_argument("binary_entropy: x must lie in [0, 1]");
  if (x == 0.0L || x == 1.0L) return 0.0L;
  return -x * std::log2l(x) - (1.0L - x) * std::log2l(1.0L - x);
}

long double gv_epsilon(long double rate, long double delta) {
  if (rate < 0.0L || rate > 1.0L) throw std::invalid_argument("gv_epsilon: rate must lie in [0, 1]");
  return 1.0L - rate - binary_entropy(delta);
}

}  // namespace loccode
