// loccode: build, nest, verify, measure and simulate locally correctable
// code constructions from the command line.
//
// Exit codes: 0 success, 1 verification failure, 2 invalid parameters or
// files, 3 enumeration budget exceeded (rerun with --mc for estimates).

#include "loccode/analysis.hpp"
#include "loccode/codes_io.hpp"
#include "loccode/params.hpp"

#include <CLI11.hpp>

#include <fstream>
#include <iostream>
#include <sstream>

using namespace loccode;

namespace {

struct RunConfig {
  std::uint64_t seed = 0;
  std::uint64_t budget = kDefaultEnumerationBudget;
  int threads = 0;  // 0 = resolve from env/hardware
  std::string constants_path;
  bool mc = false;
  std::uint64_t samples = 10000;

  int resolved_threads() const {
    return resolve_thread_count(threads > 0 ? std::optional<int>(threads) : std::nullopt);
  }
  Constants constants() const {
    return constants_path.empty() ? Constants{} : Constants::from_json_file(constants_path);
  }
};

void add_common_options(CLI::App* cmd, RunConfig& cfg) {
  cmd->add_option("--seed", cfg.seed, "master seed (default 0)");
  cmd->add_option("--budget", cfg.budget, "exact-enumeration budget (default 2^24)");
  cmd->add_option("--threads", cfg.threads,
                  "worker threads (default: LOCCODE_THREADS env or hardware)");
  cmd->add_option("--constants", cfg.constants_path, "JSON file of asymptotic constants");
}

BigInt parse_bigint(const std::string& text) {
  std::size_t caret = text.find('^');
  if (caret != std::string::npos) {
    BigInt base(text.substr(0, caret));
    int exp = std::stoi(text.substr(caret + 1));
    return boost::multiprecision::pow(base, static_cast<unsigned>(exp));
  }
  return BigInt(text);
}

struct ChainBuild {
  NestingChain chain;
  std::vector<ChainSpec> specs;
};

ChainBuild build_chain(const std::string& path, std::uint64_t budget) {
  std::ifstream in(path);
  if (!in) throw std::invalid_argument("cannot open chain descriptor: " + path);
  std::vector<ChainSpec> specs = parse_chain_descriptor(in);
  std::vector<ChainLevelInput> family;
  for (const ChainSpec& spec : specs) {
    auto code = share(resolve_code_ref(spec.code_ref));
    ChainLevelInput input;
    input.tester = make_named_tester(spec.tester_kind, code);
    input.ltc = std::move(code);
    input.delta_ltc = spec.delta;
    input.kappa = spec.kappa;
    family.push_back(std::move(input));
  }
  return ChainBuild{iterate_nesting(family, budget), std::move(specs)};
}

void emit_report(const VerificationReport& report, std::ostream& csv_out,
                 std::ofstream* csv_file, std::ofstream* json_file, bool with_header) {
  if (with_header) {
    csv_out << report_csv_header();
    if (csv_file) *csv_file << report_csv_header();
  }
  csv_out << report_csv_row(report);
  if (csv_file) *csv_file << report_csv_row(report);
  if (json_file) *json_file << report_json(report);
  if (report.counterexample) {
    std::cerr << (report.pass ? "witness" : "counterexample")
              << ": word=" << report.counterexample->word.to_string()
              << " index=" << report.counterexample->index
              << " value=" << format_rational(report.counterexample->success) << " ("
              << report.counterexample->note << ")\n";
  }
}

int cmd_build(const std::string& kind, int n, int r, int rows, int row_weight,
              const std::string& a_ref, const std::string& b_ref, const std::string& out_path,
              const RunConfig& cfg) {
  LinearCode code = [&] {
    if (kind == "parity") return parity_code(n);
    if (kind == "hamming") return hamming_code(r);
    if (kind == "ldpc") return random_ldpc(n, rows, row_weight, cfg.seed);
    if (kind == "tensor") {
      if (a_ref.empty() || b_ref.empty())
        throw std::invalid_argument("build tensor: --a and --b are required");
      return tensor_product(resolve_code_ref(a_ref), resolve_code_ref(b_ref));
    }
    throw std::invalid_argument("unknown constructor: " + kind);
  }();
  if (!out_path.empty()) save_code(out_path, code);
  std::cout << "n=" << code.n() << " k=" << code.k();
  try {
    std::cout << " d=" << format_rational(code.min_distance(cfg.budget)) << "\n";
  } catch (const budget_error&) {
    std::cout << "\n";
    std::cerr << "exact distance exceeds the enumeration budget\n";
    return 3;
  }
  return 0;
}

int cmd_nest(const std::string& chain_path, const std::string& out_path, const RunConfig& cfg) {
  ChainBuild build = build_chain(chain_path, cfg.budget);
  const NestingChain& chain = build.chain;
  if (!out_path.empty()) save_code(out_path, *chain.folded);

  long long n1 = chain.levels.front().query_bound;
  long long repeated = 0;
  for (const ChainLevel& level : chain.levels) {
    std::cout << "LEVEL " << (&level - chain.levels.data() + 1) << " n=" << level.block_length
              << " k=" << level.dimension << " t=" << level.t
              << " tester_q=" << level.tester_queries << " radius=" << format_rational(level.radius)
              << " rate_bound=" << format_rational(Rational(1) - level.eps_bound)
              << " queries=" << level.query_bound << "\n";
    repeated += level.t * level.tester_queries;
  }
  std::cout << "TOTAL n=" << chain.folded->n() << " dimension=" << chain.folded->k()
            << " rate_bound=" << format_rational(chain.rate_bound)
            << " radius=" << format_rational(chain.corrector->radius())
            << " queries=" << chain.query_bound << "\n";
  std::cout << "queries = n1 + sum t_j*q_j = " << n1 << " + " << repeated << " = "
            << (n1 + repeated) << "\n";
  return 0;
}

int cmd_verify(const std::string& procedure, const std::string& code_ref,
               const std::string& chain_path, const std::string& radius_text,
               const std::string& kappa_threshold_text, const std::string& csv_path,
               const std::string& json_path, const RunConfig& cfg) {
  SweepOptions opts;
  opts.budget = cfg.budget;
  opts.threads = cfg.resolved_threads();
  opts.master_seed = cfg.seed;
  opts.mc_samples = cfg.mc ? cfg.samples : 0;

  std::ofstream csv_file, json_file;
  if (!csv_path.empty()) {
    csv_file.open(csv_path, std::ios::binary);
    if (!csv_file) throw std::invalid_argument("cannot write " + csv_path);
  }
  if (!json_path.empty()) {
    json_file.open(json_path, std::ios::binary);
    if (!json_file) throw std::invalid_argument("cannot write " + json_path);
  }
  std::ofstream* csv_ptr = csv_path.empty() ? nullptr : &csv_file;
  std::ofstream* json_ptr = json_path.empty() ? nullptr : &json_file;

  bool tester_kind = procedure == "full-tester" || procedure == "parity-tester" ||
                     procedure == "tensor-tester";
  if (tester_kind) {
    if (code_ref.empty()) throw std::invalid_argument("verify: tester procedures need --code");
    auto code = share(resolve_code_ref(code_ref));
    opts.code_label = code_ref;
    std::string name = procedure.substr(0, procedure.find('-'));
    auto tester = make_named_tester(name, code);
    VerificationReport completeness = verify_tester_completeness(*tester, opts);
    TestabilityReport testability = measure_testability(*tester, opts);
    VerificationReport kappa_row = testability_report(*tester, testability, opts);
    emit_report(completeness, std::cout, csv_ptr, json_ptr, true);
    emit_report(kappa_row, std::cout, csv_ptr, json_ptr, false);
    Rational threshold =
        kappa_threshold_text.empty() ? Rational(0) : parse_rational(kappa_threshold_text);
    bool kappa_ok = !testability.data.kappa || *testability.data.kappa >= threshold;
    return (completeness.pass && kappa_ok) ? 0 : 1;
  }

  std::shared_ptr<const Corrector> corrector;
  if (procedure == "full-corrector") {
    if (code_ref.empty()) throw std::invalid_argument("verify: full-corrector needs --code");
    auto code = share(resolve_code_ref(code_ref));
    corrector = full_read_corrector(code, cfg.budget);
    opts.code_label = code_ref;
  } else if (procedure == "nested-corrector") {
    if (chain_path.empty()) throw std::invalid_argument("verify: nested-corrector needs --chain");
    corrector = build_chain(chain_path, cfg.budget).chain.corrector;
    opts.code_label = chain_path;
  } else {
    throw std::invalid_argument("unknown procedure: " + procedure);
  }

  Rational radius = radius_text.empty() ? corrector->radius() : parse_rational(radius_text);
  VerificationReport completeness = verify_completeness(*corrector, opts);
  CorruptionModel model{CorruptionKind::exhaustive_up_to_weight, 0, 0};
  if (cfg.mc) model.kind = CorruptionKind::uniform_random;
  model.weight = static_cast<int>(
      rational_floor(radius * corrector->code().n()).convert_to<long long>());
  VerificationReport soundness = soundness_sweep(*corrector, radius, model, opts);
  emit_report(completeness, std::cout, csv_ptr, json_ptr, true);
  emit_report(soundness, std::cout, csv_ptr, json_ptr, false);
  if (soundness.mc)
    std::cerr << "mc: samples=" << soundness.mc->samples << " successes=" << soundness.mc->successes
              << " cp99=[" << soundness.mc->cp_low << ", " << soundness.mc->cp_high << "]\n";
  return (completeness.pass && soundness.pass) ? 0 : 1;
}

int cmd_params(const std::string& dellm_eps, const std::string& family_n,
               const std::string& headline_n, const std::vector<std::string>& gv_args,
               int levels, double tester_q, double tester_kappa, double headline_eps,
               const RunConfig& cfg) {
  Constants constants = cfg.constants();
  std::cout << "asymptotic constants = " << constants.summary()
            << " (formula evaluation; constants are configuration, not measured values)\n";
  if (!dellm_eps.empty()) {
    DellmParams d = dellm_params(parse_rational(dellm_eps), constants, levels);
    std::cout << "eps=" << format_rational(d.eps) << " p=" << d.p.str()
              << " delta=" << format_rational(d.delta) << " kappa=" << format_rational(d.kappa)
              << " q=" << format_rational(d.q) << "\n";
    for (std::size_t j = 0; j < d.block_lengths.size(); ++j) {
      std::cout << "j=" << (j + 1) << " n_j=" << format_rational(d.block_lengths[j]);
      if (j > 0)
        std::cout << " ratio=" << format_rational(block_length_ratio(d.p, static_cast<int>(j)));
      std::cout << "\n";
    }
  }
  if (!family_n.empty()) {
    FamilyDescriptor fam = family_params(parse_bigint(family_n), constants);
    std::cout << "N=" << fam.target.str() << " log2N=" << static_cast<double>(fam.log2_target)
              << " p=" << fam.p.str() << " m=" << fam.m
              << " eps_ltc=" << static_cast<double>(fam.epsilon_ltc)
              << " delta_ltc=" << static_cast<double>(fam.delta_ltc)
              << " kappa_ltc=" << static_cast<double>(fam.kappa_ltc)
              << " q_ltc=" << static_cast<double>(fam.q_ltc) << "\n";
    for (std::size_t j = 0; j < fam.block_lengths.size(); ++j) {
      std::cout << "j=" << (j + 1) << " n_j=" << fam.block_lengths[j].str();
      if (j > 0)
        std::cout << " ratio=" << format_rational(block_length_ratio(fam.p, static_cast<int>(j)));
      std::cout << "\n";
    }
  }
  if (!headline_n.empty()) {
    BigInt n = parse_bigint(headline_n);
    HeadlineEvaluation it = headline_iterated(n, constants);
    std::cout << "iterated: queries=" << static_cast<double>(it.queries)
              << " rate_loss=" << static_cast<double>(it.rate_loss)
              << " radius=" << static_cast<double>(it.radius)
              << " block_low=" << static_cast<double>(it.block_low) << "\n";
    if (tester_q > 0 && tester_kappa > 0) {
      HeadlineEvaluation b = headline_boosted(n, tester_q, tester_kappa, constants);
      std::cout << "boosted: queries=" << static_cast<double>(b.queries)
                << " rate_loss=" << static_cast<double>(b.rate_loss) << "\n";
    }
    if (headline_eps > 0) {
      HeadlineEvaluation e = headline_explicit(n, headline_eps, constants);
      std::cout << "explicit: queries=" << static_cast<double>(e.queries)
                << " radius=" << static_cast<double>(e.radius) << "\n";
    }
  }
  if (!gv_args.empty()) {
    if (gv_args.size() != 2) throw std::invalid_argument("--gv needs R and delta");
    long double rate = std::stold(gv_args[0]);
    long double delta = std::stold(gv_args[1]);
    long double eps = gv_epsilon(rate, delta);
    if (eps < 0)
      std::cout << "gv: infeasible pair (eps=" << static_cast<double>(eps) << ")\n";
    else
      std::cout << "gv: eps=" << static_cast<double>(eps) << "\n";
  }
  return 0;
}

int cmd_simulate(const std::string& chain_path, const std::string& code_ref,
                 const std::string& model_name, int weight, std::uint64_t trials, int index,
                 const std::string& out_path, const RunConfig& cfg) {
  std::shared_ptr<const Corrector> corrector;
  const NestedLayout* layout = nullptr;
  if (!chain_path.empty()) {
    corrector = build_chain(chain_path, cfg.budget).chain.corrector;
  } else if (!code_ref.empty()) {
    corrector = full_read_corrector(share(resolve_code_ref(code_ref)), cfg.budget);
  } else {
    throw std::invalid_argument("simulate: need --chain or --code");
  }
  if (const auto* nested = dynamic_cast<const NestedCorrector*>(corrector.get()))
    layout = &nested->nested().layout;

  CorruptionModel model{corruption_kind_from_string(model_name), weight, cfg.seed};
  const LinearCode& code = corrector->code();
  int indices = corrector->index_count();
  if (index > indices) throw std::invalid_argument("simulate: --index out of range");

  std::function<std::string(std::size_t)> trial = [&](std::size_t t) {
    Rng rng(derive_seed(cfg.seed, t));
    BitWord c = code.codeword_at_counter(
        (code.k() >= 62) ? rng.next() : rng.next_below(code.codeword_count()));
    BitWord w = corrupt(c, model, rng, layout);
    int i = index > 0 ? index
                      : 1 + static_cast<int>(rng.next_below(static_cast<std::uint64_t>(indices)));
    QueryLog log;
    Out output = corrector->run(w, i, rng, &log);
    Out truth = out_of_bit(c.get(i));
    std::ostringstream row;
    row << t << ',' << hamming(w, c) << ',' << (output == truth ? 1 : 0) << ','
        << (output == Out::bot ? 1 : 0) << ','
        << (output != truth && output != Out::bot ? 1 : 0) << ',' << log.count << '\n';
    return row.str();
  };
  std::vector<std::string> rows = parallel_map<std::string>(
      static_cast<std::size_t>(trials), cfg.resolved_threads(), trial);

  std::string csv = "trial,weight,corrected,bot,wrong,queries\n";
  for (const std::string& row : rows) csv += row;
  if (out_path.empty()) {
    std::cout << csv;
  } else {
    std::ofstream out(out_path, std::ios::binary);
    if (!out) throw std::invalid_argument("cannot write " + out_path);
    out << csv;
  }
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"locally correctable code construction and verification toolkit"};
  app.require_subcommand(1);
  RunConfig cfg;

  // build
  auto* build = app.add_subcommand("build", "construct a code and write its parity-check file");
  std::string build_kind, build_a, build_b, build_out;
  int build_n = 0, build_r = 0, build_rows = 0, build_row_weight = 0;
  build->add_option("kind", build_kind, "parity|hamming|ldpc|tensor")->required();
  build->add_option("--n", build_n, "block length (parity, ldpc)");
  build->add_option("--r", build_r, "Hamming parameter r");
  build->add_option("--rows", build_rows, "ldpc parity rows");
  build->add_option("--row-weight", build_row_weight, "ldpc row weight");
  build->add_option("--a", build_a, "tensor factor (code ref)");
  build->add_option("--b", build_b, "tensor factor (code ref)");
  build->add_option("-o,--out", build_out, "output .pchk path");
  add_common_options(build, cfg);

  // nest
  auto* nest_cmd = app.add_subcommand("nest", "fold a chain descriptor into a nested code");
  std::string nest_chain, nest_out;
  nest_cmd->add_option("--chain", nest_chain, "chain descriptor file")->required();
  nest_cmd->add_option("-o,--out", nest_out, "output .pchk path for the folded code");
  add_common_options(nest_cmd, cfg);

  // verify
  auto* verify = app.add_subcommand("verify", "check corrector/tester contracts, emit CSV");
  std::string v_proc, v_code, v_chain, v_radius, v_kappa_threshold, v_csv, v_json;
  verify->add_option("--procedure", v_proc,
                     "full-corrector|nested-corrector|full-tester|parity-tester|tensor-tester")
      ->required();
  verify->add_option("--code", v_code, "code ref (.pchk path or shorthand)");
  verify->add_option("--chain", v_chain, "chain descriptor (nested-corrector)");
  verify->add_option("--radius", v_radius, "soundness radius p/q (default: declared)");
  verify->add_option("--kappa-threshold", v_kappa_threshold, "required kappa for testers");
  verify->add_option("--csv", v_csv, "also write the CSV rows here");
  verify->add_option("--json", v_json, "also write JSON reports here");
  verify->add_flag("--mc", cfg.mc, "Monte Carlo mode instead of exhaustive sweeps");
  verify->add_option("--samples", cfg.samples, "MC sample count (default 10000)");
  add_common_options(verify, cfg);

  // params
  auto* params = app.add_subcommand("params", "evaluate the parameter formulas");
  std::string p_dellm, p_family, p_headline;
  std::vector<std::string> p_gv;
  int p_levels = 3;
  double p_q = 0, p_kappa = 0, p_eps = 0;
  params->add_option("--dellm", p_dellm, "rate-eps family at eps (rational)");
  params->add_option("--family", p_family, "LTC family at block-length target N (int or 2^k)");
  params->add_option("--headline", p_headline, "headline bounds at N (int or 2^k)");
  params->add_option("--gv", p_gv, "R delta: Gilbert-Varshamov slack")->expected(2);
  params->add_option("--levels", p_levels, "block lengths to print (default 3)");
  params->add_option("--q", p_q, "tester query count for the boosted bound");
  params->add_option("--kappa", p_kappa, "tester testability for the boosted bound");
  params->add_option("--eps", p_eps, "rate eps for the explicit-family bound");
  add_common_options(params, cfg);

  // simulate
  auto* simulate = app.add_subcommand("simulate", "Monte Carlo corruption trials, CSV per trial");
  std::string s_chain, s_code, s_model = "uniform", s_out;
  int s_weight = 0, s_index = 0;
  std::uint64_t s_trials = 100;
  simulate->add_option("--chain", s_chain, "chain descriptor file");
  simulate->add_option("--code", s_code, "code ref (full-read corrector)");
  simulate->add_option("--model", s_model, "uniform|burst|block");
  simulate->add_option("--weight", s_weight, "corruption weight (positions)");
  simulate->add_option("--trials", s_trials, "number of trials (default 100)");
  simulate->add_option("--index", s_index, "fixed target index (default: random per trial)");
  simulate->add_option("-o,--out", s_out, "output CSV path (default stdout)");
  add_common_options(simulate, cfg);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    if (e.get_exit_code() == 0) return app.exit(e);  // --help
    std::cerr << e.what() << "\n";
    return 2;
  }

  try {
    if (build->parsed())
      return cmd_build(build_kind, build_n, build_r, build_rows, build_row_weight, build_a,
                       build_b, build_out, cfg);
    if (nest_cmd->parsed()) return cmd_nest(nest_chain, nest_out, cfg);
    if (verify->parsed())
      return cmd_verify(v_proc, v_code, v_chain, v_radius, v_kappa_threshold, v_csv, v_json, cfg);
    if (params->parsed())
      return cmd_params(p_dellm, p_family, p_headline, p_gv, p_levels, p_q, p_kappa, p_eps, cfg);
    if (simulate->parsed())
      return cmd_simulate(s_chain, s_code, s_model, s_weight, s_trials, s_index, s_out, cfg);
  } catch (const budget_error& e) {
    std::cerr << "budget exceeded: " << e.what() << "\n";
    return 3;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }
  return 2;
}
