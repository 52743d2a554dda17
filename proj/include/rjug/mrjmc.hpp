#pragma once

// Multispecies chain on arrangements of a fixed label multiset. A move
// starts at a position drawn from s, and the selected ball walks left,
// bumping strictly smaller labels (each displaced ball continues the walk)
// until some ball lands at the front. The stationary law is the normalized
// inversion-code weight alpha^c.

#include <vector>

#include "rjug/numerics.hpp"
#include "rjug/states.hpp"

namespace rjug {

struct MrjmcChain {
  std::vector<int> content;  // multiplicities of letters 1..T
  ProbVec s;                 // start-position weights s_1..s_b
  std::vector<Rat> alpha;    // pass-over weights alpha_1..alpha_{b - b_T}

  MrjmcChain(std::vector<int> content, ProbVec s, std::vector<Rat> alpha);

  int b() const { return b_; }
  int T() const { return static_cast<int>(content.size()); }

  // Conditions for the closed-form stationary law: s_b > 0, 0 < alpha < 1.
  bool proper() const;

 private:
  int b_;
};

struct BumpPath {
  int start;               // position the move begins at
  std::vector<int> bumps;  // positions bumped, strictly decreasing
  Rat prob;                // product of scan weights, excludes s_start
  Multipermutation result;
};

// Every bumping path from position `start` of tau, depth-first. The path
// weights form a probability distribution for any 0 <= alpha <= 1.
//
// Scan rule for a mover at position p: with r smaller labels strictly right
// of p, the u-th smaller label to the left (nearest first) is bumped with
// weight alpha_{r+1}...alpha_{r+u-1}(1-alpha_{r+u}); the mover passes them
// all and lands at the front with weight alpha_{r+1}...alpha_{r+l}.
std::vector<BumpPath> bump_paths(const Multipermutation& tau, int start,
                                 const std::vector<Rat>& alpha);

// Mixture over starts: sum_j s_j * (paths from j aggregated by result).
Kernel<Multipermutation> step_distribution(const MrjmcChain& chain,
                                           const Multipermutation& tau);

// alpha^c(tau) / Z(content, alpha).
Rat stationary(const MrjmcChain& chain, const Multipermutation& tau);

// Partition function: product over letters i >= 2 of the two-letter factor
// Z_{p,q} = sum_{0 <= i_p <= ... <= i_1 <= q} alpha_1^{i_1}...alpha_p^{i_p}
// with p the number of smaller letters and q the multiplicity of i.
Rat partition(const std::vector<int>& content, const std::vector<Rat>& alpha);
std::vector<Rat> partition_factors(const std::vector<int>& content,
                                   const std::vector<Rat>& alpha);

// Two-letter projections: entry for letter i in {2..T} keeps letters <= i,
// sends i to 2 and the rest to 1. alpha_weight is multiplicative across the
// entries, which drives the partition recursion.
std::vector<Multipermutation> phi_decompose(const Multipermutation& tau);

// Closed form for the stationary flow into tau carried by moves starting at
// position t: s_t * alpha^c(tau).
Rat refined_flow_start(const MrjmcChain& chain, const Multipermutation& tau, int t);

// Closed form for the part of that flow whose final hop leaves from position
// r <= t: s_t * alpha^c(tau) times code-indexed alpha factors over the
// positions below r holding labels larger than tau_1 (and one complementary
// factor at r itself when r < t). Zero when no path can end that way.
Rat refined_flow_final_hop(const MrjmcChain& chain, const Multipermutation& tau, int t,
                           int r);

struct RefineResiduals {
  Rat start_group;  // incoming flow from start t minus refined_flow_start
  Rat last_jump_group;  // same refined by the final hop position r
};

// Exact residuals of the two flow refinements; both are zero.
// Group (t): sum over sources tau' of alpha^c(tau') * s_t * P_t(tau' -> tau)
// equals s_t * alpha^c(tau). Group (r, t): restricting to paths whose final
// hop starts at r, the sum equals s_t * alpha^c(tau) times an explicit
// product of code-indexed alpha factors over positions below r holding
// labels larger than tau_1 (times 1 - alpha_{c_{r+1}+1} when r < t).
RefineResiduals verify_refine_lemmas(const MrjmcChain& chain, const Multipermutation& tau,
                                     int t, int r);

}  // namespace rjug
