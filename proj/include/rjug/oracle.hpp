#pragma once

// Brute-force ground truth, kept independent of the closed-form modules:
// dense kernel matrices, exact stationary solves, exact matrix-power checks,
// and empirical occupancy from seeded simulation.

#include <map>
#include <ostream>
#include <string>
#include <vector>

#include "rjug/numerics.hpp"

namespace rjug {

struct DenseKernel {
  std::vector<std::string> labels;
  std::vector<std::vector<Rat>> rows;

  std::size_t size() const { return rows.size(); }
};

// M[i][j] = P(state_i -> state_j) from the supplied one-step function.
// Every row is checked to sum to exactly 1.
template <class State, class StepFn, class FmtFn>
DenseKernel build_matrix(const std::vector<State>& states, StepFn step, FmtFn fmt,
                         std::size_t cap = 5000) {
  if (states.size() > cap) {
    throw StateSpaceTooLarge("build_matrix: " + std::to_string(states.size()) +
                             " states exceeds cap " + std::to_string(cap));
  }
  std::map<State, std::size_t> index;
  for (std::size_t i = 0; i < states.size(); ++i) index[states[i]] = i;
  DenseKernel M;
  M.labels.reserve(states.size());
  M.rows.assign(states.size(), std::vector<Rat>(states.size(), Rat(0)));
  for (std::size_t i = 0; i < states.size(); ++i) {
    M.labels.push_back(fmt(states[i]));
    Rat total = 0;
    for (const auto& [succ, p] : step(states[i])) {
      auto it = index.find(succ);
      if (it == index.end()) {
        throw std::logic_error("build_matrix: successor outside the state space");
      }
      M.rows[i][it->second] += p;
      total += p;
    }
    if (total != 1) {
      throw std::logic_error("build_matrix: row " + M.labels.back() +
                             " sums to " + rat_to_string(total));
    }
  }
  return M;
}

// Exact solution of pi * M = pi, sum(pi) = 1. One balance equation is
// replaced by the normalization; the system is solved by rational Gaussian
// elimination (first-nonzero pivoting) below kLiftedSolveThreshold states and
// by p-adic lifting with exact rational reconstruction above it. Either way
// the returned vector satisfies the balance system exactly.
std::vector<Rat> solve_stationary(const DenseKernel& M);

// Above a few dozen states the p-adic path wins by a wide margin: modular
// elimination has no coefficient growth, while rational elimination spends
// almost all of its time in gcds on swollen intermediate entries.
inline constexpr std::size_t kLiftedSolveThreshold = 64;

// Float-mode solve: power iteration until the L1 residual drops below tol.
std::vector<double> solve_stationary_float(const DenseKernel& M, double tol = 1e-14);

std::vector<std::vector<Rat>> mat_mul(const std::vector<std::vector<Rat>>& A,
                                      const std::vector<std::vector<Rat>>& B);
std::vector<std::vector<Rat>> mat_pow(const std::vector<std::vector<Rat>>& A, long long k);

struct PowerCheck {
  bool idempotent_at_k;  // M^{k+1} == M^k exactly
  bool rows_equal;       // all rows of M^k coincide
};

PowerCheck matrix_power_check(const DenseKernel& M, long long k);

// CSV export: header row of state labels, then row-major rational strings.
void write_matrix_csv(const DenseKernel& M, std::ostream& os);

// Runs `steps` one-step draws from `init`, discarding the first `burnin`, and
// counts occupancy of every visited state. Deterministic given the rng state.
template <class State, class StepFn>
std::map<State, long long> empirical_occupancy(State init, StepFn step, long long steps,
                                               long long burnin, Rng& rng) {
  if (steps <= burnin) throw std::invalid_argument("empirical_occupancy: steps <= burnin");
  State current = std::move(init);
  std::map<State, long long> counts;
  for (long long t = 1; t <= steps; ++t) {
    current = sample_kernel(step(current), rng);
    if (t > burnin) ++counts[current];
  }
  return counts;
}

// Occupancy frequencies as exact rationals, sorted by state.
template <class State, class StepFn>
std::vector<std::pair<State, Rat>> empirical_distribution(State init, StepFn step,
                                                          long long steps, long long burnin,
                                                          Rng rng) {
  auto counts = empirical_occupancy(std::move(init), step, steps, burnin, rng);
  long long total = steps - burnin;
  std::vector<std::pair<State, Rat>> out;
  out.reserve(counts.size());
  for (const auto& [state, c] : counts) out.emplace_back(state, rat_ll(c, total));
  return out;
}

// Projects empirical counts onto a fixed state order; states outside the
// order are dropped (their mass is the caller's tail).
template <class State>
ProbVec align_empirical(const std::map<State, long long>& counts,
                        const std::vector<State>& order, long long total) {
  ProbVec out;
  out.w.reserve(order.size());
  for (const State& s : order) {
    auto it = counts.find(s);
    out.w.push_back(it == counts.end() ? Rat(0) : rat_ll(it->second, total));
  }
  return out;
}

}  // namespace rjug
