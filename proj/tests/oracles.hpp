#pragma once

// Test-side oracles, deliberately written against plain integer bit masks
// rather than the library types so they cannot share a failure mode with
// the implementation under test.

#include "loccode/local.hpp"
#include "loccode/rational.hpp"

#include <cstdint>
#include <string>
#include <vector>

namespace loccode::oracles {

// Naive elimination over vectors of 0/1 ints.
int rank_gf2(const std::vector<std::string>& rows);

// All words of length n (as bit masks, bit i-1 = position i) whose syndrome
// against every row string vanishes.
std::vector<std::uint64_t> syndrome_codewords(const std::vector<std::string>& h_rows, int n);

// Minimum weight over nonzero syndrome-checked codewords, as (weight, n).
std::pair<int, int> min_distance_syndrome(const std::vector<std::string>& h_rows, int n);

// Membership of a word in the grid code with all-rows/all-columns parity:
// every grid row and every grid column must have even weight.
bool tensor_parity_member(std::uint64_t word, int grid_rows, int grid_cols);

// Success probability of the two-step boosted corrector by full product
// space enumeration: inner outcome x t-tuples of tester outcomes. Output is
// bot if any tester outcome in the tuple rejects w, otherwise the inner
// outcome's output on (w restricted to [lo, hi], local index). Success means
// output in {reference bit at i, bot}.
Rational product_space_success(const Tester& tester, const PlannedCorrector& inner,
                               int repetitions, const BitWord& w, int i, const BitWord& reference);

// Binary entropy evaluated in 50-decimal-digit floating point.
long double entropy_highprec(long double x);

}  // namespace loccode::oracles
