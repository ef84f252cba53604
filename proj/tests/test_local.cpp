#include "loccode/local.hpp"

#include "oracles.hpp"

#include <doctest.h>

using namespace loccode;

namespace {

BitWord word_from_mask(std::uint64_t mask, int n) {
  BitWord w(n);
  for (int pos = 1; pos <= n; ++pos)
    if ((mask >> (pos - 1)) & 1u) w.set(pos, true);
  return w;
}

BitMatrix matrix_from_strings(const std::vector<std::string>& rows, int cols) {
  BitMatrix m(0, cols);
  for (const auto& r : rows) m.append_row(BitWord::from_string(r));
  return m;
}

}  // namespace

TEST_CASE("full_read_tester accepts members, rejects everything else") {
  auto code = share(parity_code(4));
  Tester t = full_read_tester(code);
  CHECK(t.query_bound() == 4);
  CHECK(t.outcomes().size() == 1);
  CHECK(t.outcomes()[0].queries.size() == 4);
  for (std::uint64_t mask = 0; mask < 16; ++mask) {
    BitWord w = word_from_mask(mask, 4);
    Rational reject = exact_reject_probability(t, w);
    CHECK(reject == (code->contains(w) ? Rational(0) : Rational(1)));
  }
}

TEST_CASE("full_read_tester rejection is exactly 1 on every non-codeword (n <= 12)") {
  auto code = share(random_ldpc(11, 4, 3, 8));
  Tester t = full_read_tester(code);
  for (std::uint64_t mask = 0; mask < (std::uint64_t{1} << 11); ++mask) {
    BitWord w = word_from_mask(mask, 11);
    if (!code->contains(w)) CHECK(exact_reject_probability(t, w) == 1);
  }
}

TEST_CASE("parity_sample_tester on the stacked [6,4] fixture") {
  auto code = share(
      LinearCode::from_parity_check(matrix_from_strings({"111111", "111000", "000111"}, 6)));
  Tester t = parity_sample_tester(code);
  CHECK(t.outcomes().size() == 3);
  CHECK(t.query_bound() == 6);  // max row weight
  // e1 violates rows 1 and 2 of the three presented rows.
  BitWord e1(6);
  e1.set(1, true);
  CHECK(exact_reject_probability(t, e1) == Rational(2, 3));
  // members are always accepted
  code->for_each_codeword([&](const BitWord& c) { CHECK(exact_reject_probability(t, c) == 0); });
}

TEST_CASE("parity_sample_tester with a single row is deterministic") {
  auto code = share(parity_code(3));
  Tester t = parity_sample_tester(code);
  CHECK(t.outcomes().size() == 1);
  for (std::uint64_t mask = 0; mask < 8; ++mask) {
    BitWord w = word_from_mask(mask, 3);
    Rational reject = exact_reject_probability(t, w);
    CHECK(reject == (code->contains(w) ? Rational(0) : Rational(1)));
  }
}

TEST_CASE("parity_sample_tester requires at least one row") {
  auto code = share(LinearCode::from_parity_check(BitMatrix(0, 4)));
  CHECK_THROWS_AS(parity_sample_tester(code), std::invalid_argument);
}

TEST_CASE("tensor_tester on the 3x3 grid") {
  auto code = share(tensor_product(parity_code(3), parity_code(3)));
  Tester t = tensor_tester(code);
  CHECK(t.outcomes().size() == 6);
  CHECK(t.query_bound() == 3);

  SUBCASE("single flip hits one row line and one column line") {
    BitWord w(9);
    w.set(1, true);
    CHECK(exact_reject_probability(t, w) == Rational(2, 6));
  }
  SUBCASE("codeword accepted with probability 1") {
    code->for_each_codeword([&](const BitWord& c) { CHECK(exact_reject_probability(t, c) == 0); });
  }
  SUBCASE("all-ones grid rejected by every line") {
    BitWord w(9);
    for (int pos = 1; pos <= 9; ++pos) w.set(pos, true);
    CHECK(exact_reject_probability(t, w) == 1);
  }
  SUBCASE("plain codes cannot make a tensor tester") {
    CHECK_THROWS_AS(tensor_tester(share(parity_code(9))), std::invalid_argument);
  }
}

TEST_CASE("full_read_corrector contract") {
  auto code = share(hamming_code(3));
  auto m = full_read_corrector(code);
  CHECK(m->radius() == Rational(2, 7));  // (d-1)/n with d = 3
  CHECK(m->query_bound() == 7);
  CHECK(m->fixed_query_count() == 7);

  SUBCASE("returns w_i on members, bot otherwise") {
    code->for_each_codeword([&](const BitWord& c) {
      for (int i = 1; i <= 7; ++i) {
        OutputDist dist = m->exact_output_distribution(c, i);
        CHECK(dist.is_point_mass(out_of_bit(c.get(i))));
      }
    });
    BitWord w(7);
    w.set(1, true);  // weight-1 word is not in the Hamming code
    CHECK(m->exact_output_distribution(w, 3).is_point_mass(Out::bot));
  }

  SUBCASE("output in {c_i, bot} for every <=2-error pattern on every codeword") {
    code->for_each_codeword([&](const BitWord& c) {
      for (int p1 = 1; p1 <= 7; ++p1) {
        for (int p2 = p1; p2 <= 7; ++p2) {
          BitWord w = c;
          w.flip(p1);
          if (p2 != p1) w.flip(p2);
          for (int i = 1; i <= 7; ++i) {
            OutputDist dist = m->exact_output_distribution(w, i);
            Out wrong = out_of_bit(!c.get(i));
            CHECK(dist.p(wrong) == 0);
          }
        }
      }
    });
  }
}

TEST_CASE("exact_output_distribution sums to 1 on random inputs") {
  auto code = share(parity_code(5));
  auto m = full_read_corrector(code);
  Rng rng(77);
  for (int trial = 0; trial < 100; ++trial) {
    BitWord w = word_from_mask(rng.next(), 5);
    int i = 1 + static_cast<int>(rng.next_below(5));
    OutputDist dist = m->exact_output_distribution(w, i);
    CHECK(dist.total() == 1);
    CHECK(dist.p_zero >= 0);
    CHECK(dist.p_one >= 0);
    CHECK(dist.p_bot >= 0);
  }
}

TEST_CASE("message decoder passes the corrector through at perm(i)") {
  SystematicCode sys = systematize(hamming_code(3));
  auto corrector = full_read_corrector(share(sys.code()));
  auto decoder = rldc_decoder_from_systematic(sys, corrector);
  CHECK(decoder->index_count() == 4);
  CHECK(decoder->query_bound() == corrector->query_bound());
  CHECK(decoder->radius() == corrector->radius());

  for (std::uint64_t mask = 0; mask < 16; ++mask) {
    BitWord m = word_from_mask(mask, 4);
    BitWord cw = sys.encode(m);
    for (int i = 1; i <= 4; ++i) {
      OutputDist dist = decoder->exact_output_distribution(cw, i);
      CHECK(dist.is_point_mass(out_of_bit(m.get(i))));
    }
  }

  // soundness passthrough: distribution equals the corrector's at perm(i)
  Rng rng(3);
  for (int trial = 0; trial < 50; ++trial) {
    BitWord w = word_from_mask(rng.next(), 7);
    int i = 1 + static_cast<int>(rng.next_below(4));
    OutputDist a = decoder->exact_output_distribution(w, i);
    OutputDist b = corrector->exact_output_distribution(w, sys.message_position(i));
    CHECK(a.p_zero == b.p_zero);
    CHECK(a.p_one == b.p_one);
    CHECK(a.p_bot == b.p_bot);
  }
  CHECK_THROWS_AS(decoder->exact_output_distribution(BitWord(7), 5), std::out_of_range);
}

TEST_CASE("run_with_queries accounts queries and is seed-deterministic") {
  auto code = share(
      LinearCode::from_parity_check(matrix_from_strings({"111111", "111000", "000111"}, 6)));
  Tester t = parity_sample_tester(code);
  BitWord w(6);
  w.set(2, true);

  auto run1 = run_with_queries(t, w, 42);
  auto run2 = run_with_queries(t, w, 42);
  CHECK(run1.accept == run2.accept);
  CHECK(run1.log.positions == run2.log.positions);
  CHECK(run1.log.count == run2.log.count);
  CHECK(run1.log.count <= t.query_bound());
  // count equals the sampled row's weight (3 or 6 here)
  CHECK((run1.log.count == 3 || run1.log.count == 6));

  auto full = run_with_queries(full_read_tester(code), w, 0);
  CHECK(full.log.count == 6);

  auto m = full_read_corrector(share(parity_code(4)));
  auto mrun = run_with_queries(*m, BitWord(4), 2, 9);
  CHECK(mrun.log.count == 4);
  CHECK(mrun.output == Out::zero);
}

TEST_CASE("query plans do not depend on the input word") {
  auto code = share(tensor_product(parity_code(3), parity_code(3)));
  Tester t = tensor_tester(code);
  for (std::uint64_t seed = 0; seed < 16; ++seed) {
    auto a = run_with_queries(t, BitWord(9), seed);
    BitWord ones(9);
    for (int pos = 1; pos <= 9; ++pos) ones.set(pos, true);
    auto b = run_with_queries(t, ones, seed);
    CHECK(a.log.positions == b.log.positions);
    CHECK(a.log.count == b.log.count);
  }
}

TEST_CASE("every outcome respects the declared query bound") {
  auto tensor = share(tensor_product(parity_code(3), parity_code(3)));
  for (const Tester& t : {full_read_tester(tensor), parity_sample_tester(tensor),
                          tensor_tester(tensor)}) {
    for (const auto& o : t.outcomes())
      CHECK(static_cast<long long>(o.queries.size()) <= t.query_bound());
  }
}

TEST_CASE("perfect completeness of testers on every fixture codeword") {
  auto tensor = share(tensor_product(parity_code(3), parity_code(3)));
  std::vector<Tester> testers;
  testers.push_back(full_read_tester(tensor));
  testers.push_back(parity_sample_tester(tensor));
  testers.push_back(tensor_tester(tensor));
  for (const Tester& t : testers) {
    tensor->for_each_codeword([&](const BitWord& c) {
      for (std::size_t o = 0; o < t.outcomes().size(); ++o) CHECK(t.accepts(c, o));
    });
  }
}

TEST_CASE("measure_testability_exact on small testers") {
  SUBCASE("full-read tester: reject probability 1, ratio 1/dist >= 1") {
    auto code = share(parity_code(3));
    auto result = measure_testability_exact(full_read_tester(code));
    REQUIRE(result.kappa);
    CHECK(*result.kappa >= 1);
    CHECK(result.completeness_pass);
  }
  SUBCASE("single-row parity tester on [3,2]: kappa_hat = 3") {
    auto code = share(parity_code(3));
    auto result = measure_testability_exact(parity_sample_tester(code));
    REQUIRE(result.kappa);
    CHECK(*result.kappa == 3);  // odd words have distance 1/3, rejection 1
  }
  SUBCASE("tensor tester kappa_hat = 3/2") {
    auto code = share(tensor_product(parity_code(3), parity_code(3)));
    auto result = measure_testability_exact(tensor_tester(code));
    REQUIRE(result.kappa);
    CHECK(*result.kappa == Rational(3, 2));
    REQUIRE(result.witness);
    // the witness attains the bound: reject = kappa_hat * dist
    Tester t = tensor_tester(code);
    auto near = code->nearest_codeword(*result.witness);
    CHECK(exact_reject_probability(t, *result.witness) == *result.kappa * near.distance);
  }
}
