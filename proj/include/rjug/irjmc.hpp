#pragma once

// Single-species chain on strictly increasing b-tuples of positions (the
// space is infinite to the right): kernel, product-of-geometrics stationary
// law, closed-form partition function, exact truncated master-equation
// verification with analytic tails, and a seeded sampler.

#include <cstdint>
#include <vector>

#include "rjug/numerics.hpp"
#include "rjug/states.hpp"

namespace rjug {

struct IrjmcChain {
  int b;
  ProbVec x;      // jump weights x_0..x_b
  PrefixSums ps;

  IrjmcChain(int b, ProbVec x);

  // Positive recurrence needs x_b > 0; zbar_i > 0 for i < b follows.
  bool recurrent() const { return x[static_cast<std::size_t>(b)] > 0; }
};

// One step from n: with weight x_0 everything shifts right; with weight x_i
// ball i jumps to the front and the others shift right.
Kernel<BallTuple> step_distribution(const IrjmcChain& chain, const BallTuple& n);

// Unnormalized gap weight prod_{i=0}^{b-1} z_i^{n_{i+1}-n_i-1}, n_0 = 0.
Rat gap_weight(const PrefixSums& ps, const BallTuple& n);

// Sum of gap_weight over all b-tuples: prod_{i=0}^{b-1} 1/zbar_i.
Rat gap_total(const PrefixSums& ps);

// Sum of gap_weight over all b-tuples with n_b > N, in closed form.
Rat gap_tail_beyond(const PrefixSums& ps, long long N);

// Stationary probability gap_weight(n) / Z_b.
Rat stationary(const IrjmcChain& chain, const BallTuple& n);

// Z_b = prod_{i=0}^{b-1} 1/zbar_i.
Rat partition(const IrjmcChain& chain);
std::vector<Rat> partition_factors(const IrjmcChain& chain);

// Geometric jump weights for modulus q: x_0 = q^{-b}, x_i = q^{-b+i}(1-1/q).
ProbVec knutson_weights(long long q, int b);

// Incoming stationary flow into n minus pi(n); the family of sources with an
// unbounded last coordinate is summed as a geometric series. Exactly zero.
Rat master_residual_truncated(const IrjmcChain& chain, const BallTuple& n, long long N);

// Stationary mass of {n : n_b > N}.
Rat tail_mass_beyond(const IrjmcChain& chain, long long N);

// Stationary probability that the first m positions show the word w,
// summing the positions of the remaining balls in closed form.
Rat window_marginal(const IrjmcChain& chain, const BinaryWord& w);

// Trajectory of `steps` one-step draws (initial state included, index 0).
// x_b = 0 is allowed here but the walk is then transient (warned on stderr).
std::vector<BallTuple> sample_run(const IrjmcChain& chain, long long steps,
                                  std::uint64_t seed, const BallTuple& init);

// All b-tuples with n_b <= maxpos, lexicographic.
std::vector<BallTuple> enumerate_tuples(int b, long long maxpos);

}  // namespace rjug
