#pragma once

// Labeled-ball chain on pairs (tau, n): a multipermutation giving the labels
// in ball order plus a strictly increasing position tuple. Positions move as
// in the single-species infinite chain; the label word reshuffles through
// bumping paths. Stationary law is a product of the label weight alpha^c and
// the positional geometric gaps.

#include <cstdint>
#include <vector>

#include "rjug/irjmc.hpp"
#include "rjug/mrjmc.hpp"
#include "rjug/numerics.hpp"
#include "rjug/states.hpp"

namespace rjug {

struct ImrjmcChain {
  std::vector<int> content;  // multiplicities b_1..b_T
  ProbVec x;                 // jump weights x_0..x_b
  std::vector<Rat> alpha;    // pass-over weights, at least b - b_T of them
  PrefixSums ps;

  ImrjmcChain(std::vector<int> content, ProbVec x, std::vector<Rat> alpha);

  int b() const { return b_; }
  int T() const { return static_cast<int>(content.size()); }

  // Positive recurrence and irreducibility need x_b > 0 and 0 < alpha < 1.
  bool proper() const;

 private:
  int b_ = 0;
};

// Geometric jump weights for modulus q paired with constant alpha = 1/q.
ImrjmcChain knutson_chain(std::vector<int> content, long long q);

// One step: with weight x_0 every position shifts right; with weight x_j ball
// j jumps to position 1 while the rest shift, and its label walks a bumping
// path through the word (gaps in n never enter the bump probabilities).
Kernel<LabeledConfig> step_distribution(const ImrjmcChain& chain, const LabeledConfig& state);

// Stationary probability alpha^c(tau) * prod z_k^{gap_k} / Z.
Rat stationary(const ImrjmcChain& chain, const LabeledConfig& state);

// Z = (sum of alpha^c over words) * (prod_{i<b} 1/zbar_i); the factor list
// holds the per-letter word factors followed by the b positional factors.
Rat partition(const ImrjmcChain& chain);
std::vector<Rat> partition_factors(const ImrjmcChain& chain);

// Incoming stationary flow into the state minus its own mass; sources are
// enumerated exactly, with the unbounded last-coordinate family summed as a
// geometric series. Exactly zero. Requires n_b <= N.
Rat master_residual_truncated(const ImrjmcChain& chain, const LabeledConfig& state,
                              long long N);

// Stationary mass of {(tau, n) : n_b > N}.
Rat tail_mass_beyond(const ImrjmcChain& chain, long long N);

// Trajectory of `steps` one-step draws (initial state included, index 0).
// Degenerate parameters are allowed but warned: the walk may be reducible.
std::vector<LabeledConfig> sample_run(const ImrjmcChain& chain, long long steps,
                                      std::uint64_t seed, const LabeledConfig& init);

// All states with n_b <= maxpos, ordered by word then by position tuple.
std::vector<LabeledConfig> enumerate_states(const std::vector<int>& content,
                                            long long maxpos);

}  // namespace rjug
