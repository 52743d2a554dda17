#pragma once

// Finite single-species reverse juggling chain on length-m binary words with
// at most b ones: one-step kernel, product-form stationary law, the enriched
// shift-register chain that projects onto it, and the exact finite-step
// convergence check.

#include <cstddef>
#include <vector>

#include "rjug/numerics.hpp"
#include "rjug/states.hpp"

namespace rjug {

struct RjmcChain {
  int m;
  int b;
  ProbVec x;      // jump weights x_0..x_b
  PrefixSums ps;  // z_i, zbar_i

  RjmcChain(int m, int b, ProbVec x);
};

// One step from w. Writing l for the number of ones among w_1..w_{m-1}:
// with weight x_0 a zero is prepended and w_m dropped; with weight x_i
// (1 <= i <= l) the i-th one among the first m-1 positions is zeroed, a one
// prepended, and w_m dropped; the remaining weight x_{l+1}+...+x_b prepends
// a one without zeroing anything. The last letter never influences weights.
Kernel<BinaryWord> step_distribution(const RjmcChain& chain, const BinaryWord& w);

// Stationary weight of w with ones at n_1 < ... < n_k:
//   prod_{i=0}^{k-1} zbar_i * prod_{i=0}^{k} z_i^{n_{i+1}-n_i-1}
// with n_0 = 0 and n_{k+1} = m+1. Normalized over the full space as is.
Rat stationary(const RjmcChain& chain, const BinaryWord& w);

// For v starting with 0, returns pi(v_2..v_m 0) + pi(v_2..v_m 1) after
// checking it equals pi(v)/z_0 exactly. The second word is skipped when it
// would exceed b ones; the identity holds either way.
Rat sum_pair_identity(const RjmcChain& chain, const BinaryWord& v);

// Enriched chain: prepend symbol t in {1..b+1}, drop the last symbol.
EnrichedWord enriched_step(int t, const EnrichedWord& word);

// Stationary weight of the enriched chain: prod_i x_{tau_i - 1}.
Rat enriched_weight(const RjmcChain& chain, const EnrichedWord& word);

// Projection onto binary words: phi(t_1..t_m) prepends a one for t_1 and
// then zeroes the t_1-th one from the left if it exists, recursing on the
// tail. The result never has more ones than any cap the symbols respect.
BinaryWord lump(const EnrichedWord& word);

// All (b+1)^m enriched words, lexicographic.
std::vector<EnrichedWord> enumerate_enriched_words(int m, int b);

struct UltrafastReport {
  std::size_t states;
  bool idempotent;           // M^{m+1} == M^m exactly
  bool rows_match_formula;   // every row of M^m equals the stationary vector
};

// Exact check that the kernel reaches stationarity in m steps; implies the
// transition spectrum is {1, 0, ..., 0}.
UltrafastReport verify_ultrafast(const RjmcChain& chain, std::size_t cap = 5000);

struct LumpingReport {
  std::size_t enriched_states;
  std::size_t word_states;
  bool kernels_commute;   // M_enriched * Phi == Phi * M exactly
  bool weights_project;   // Pi * Phi == pi exactly
};

// Exact verification that lump() carries the enriched chain onto this one.
LumpingReport verify_lumping(const RjmcChain& chain, std::size_t cap = 5000);

}  // namespace rjug
