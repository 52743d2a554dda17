#pragma once

// Random b-row matrix over a prime field, grown by prepending uniform
// columns. Two read-outs drive statistical validation of the juggling
// kernels: the positions where the prefix column rank increases, and the
// pivot row labels under leftmost-greedy column reduction.

#include <cstdint>
#include <string>
#include <vector>

#include "rjug/numerics.hpp"
#include "rjug/states.hpp"

namespace rjug {

struct MatrixState {
  long long q = 2;                     // prime modulus
  int b = 1;                           // rows
  std::vector<std::vector<int>> cols;  // newest leftmost; entries in [0, q)
};

// Empty matrix; validates b >= 1 and q prime (trial division, q < 2^31).
MatrixState initial_state(int b, long long q);

// Uniform column over F_q^b at the left, then width truncation: columns
// beyond the last pivot never influence either read-out (they stay inside
// the span of columns to their left forever), so everything past
// last-pivot + 64 is dropped.
MatrixState prepend_random_column(const MatrixState& state, Rng& rng);

struct PivotData {
  BallTuple positions;      // 1-based column indices of rank increases
  std::vector<int> labels;  // 1-based topmost nonzero row of each pivot
};

// One left-to-right greedy elimination pass: reduce each column by the
// pivots already selected; a nonzero remainder becomes a new pivot whose
// topmost nonzero row is its label.
PivotData pivot_scan(const MatrixState& state);

// Positions where the prefix column rank jumps.
BallTuple rank_increase_positions(const MatrixState& state);

// Pivot labels in column order, paired with their positions.
LabeledConfig pivot_labels(const MatrixState& state);

struct MoveClassStat {
  std::string name;  // "shift" or "ball i"
  long long count = 0;
  double expected_p = 0;
  double z = 0;
};

struct KernelCellStat {
  std::string source;
  std::string target;
  long long source_visits = 0;
  long long count = 0;
  double expected_p = 0;
  double z = 0;
};

struct ProjectionReport {
  int b = 0;
  long long q = 0;
  long long steps = 0;
  long long classified_steps = 0;  // steps taken from a full-rank matrix
  long long visit_threshold = 0;
  long long frequent_sources = 0;
  std::vector<MoveClassStat> first_projection;
  std::vector<KernelCellStat> second_projection;
  bool unexpected_transition = false;  // observed move outside the exact kernel
  double max_abs_z = 0;

  bool all_within(double bound) const {
    return !unexpected_transition && max_abs_z <= bound;
  }
};

// Runs the column chain for `steps` prepends and compares both read-outs
// against the exact kernels: move-class frequencies against the geometric
// jump law, and the one-step labeled kernel (sources visited at least 200
// times) against the labeled chain with modulus-q parameters. z-scores are
// binomial.
ProjectionReport empirical_projection_check(int b, long long q, long long steps,
                                            std::uint64_t seed);

}  // namespace rjug
