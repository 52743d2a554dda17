#include "rjug/matrixmodel.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>

#include "rjug/errors.hpp"
#include "rjug/imrjmc.hpp"

namespace rjug {

namespace {

constexpr long long kTruncationMargin = 64;
constexpr long long kVisitThreshold = 200;

bool is_small_prime(long long q) {
  if (q < 2) return false;
  for (long long d = 2; d * d <= q; ++d) {
    if (q % d == 0) return false;
  }
  return true;
}

long long mulmod(long long a, long long b, long long q) { return a * b % q; }

long long inv_mod(long long a, long long q) {
  // Fermat: a^(q-2) mod q, q prime.
  long long r = 1, base = a % q, e = q - 2;
  while (e > 0) {
    if (e & 1) r = mulmod(r, base, q);
    base = mulmod(base, base, q);
    e >>= 1;
  }
  return r;
}

void prepend_column(MatrixState& state, std::vector<int> col) {
  state.cols.insert(state.cols.begin(), std::move(col));
}

std::vector<int> draw_column(int b, long long q, Rng& rng) {
  std::vector<int> col(static_cast<std::size_t>(b));
  for (int r = 0; r < b; ++r) {
    col[static_cast<std::size_t>(r)] = static_cast<int>(rng.next_below(static_cast<std::uint64_t>(q)));
  }
  return col;
}

void truncate_width(MatrixState& state, const PivotData& data) {
  long long last = data.positions.empty() ? 0 : data.positions.back();
  std::size_t cap = static_cast<std::size_t>(last + kTruncationMargin);
  if (state.cols.size() > cap) state.cols.resize(cap);
}

double binomial_z(long long count, long long n, double p) {
  double var = static_cast<double>(n) * p * (1.0 - p);
  double diff = static_cast<double>(count) - static_cast<double>(n) * p;
  if (var <= 0) {
    return diff == 0 ? 0.0 : std::numeric_limits<double>::infinity();
  }
  return diff / std::sqrt(var);
}

}  // namespace

MatrixState initial_state(int b, long long q) {
  if (b < 1) throw std::invalid_argument("initial_state: b < 1");
  if (q >= (1LL << 31) || !is_small_prime(q)) {
    throw std::invalid_argument("initial_state: q must be a prime below 2^31");
  }
  return MatrixState{q, b, {}};
}

MatrixState prepend_random_column(const MatrixState& state, Rng& rng) {
  MatrixState next = state;
  prepend_column(next, draw_column(state.b, state.q, rng));
  truncate_width(next, pivot_scan(next));
  return next;
}

PivotData pivot_scan(const MatrixState& state) {
  const long long q = state.q;
  PivotData data;
  std::vector<int> pivot_rows;
  std::vector<std::vector<int>> reduced;
  std::vector<long long> pivot_inv;

  for (std::size_t idx = 0; idx < state.cols.size(); ++idx) {
    std::vector<int> v = state.cols[idx];
    for (std::size_t k = 0; k < reduced.size(); ++k) {
      int r = pivot_rows[k];
      if (v[static_cast<std::size_t>(r)] == 0) continue;
      long long f = mulmod(v[static_cast<std::size_t>(r)], pivot_inv[k], q);
      const std::vector<int>& P = reduced[k];
      for (int row = r; row < state.b; ++row) {
        long long nv = v[static_cast<std::size_t>(row)] - mulmod(f, P[static_cast<std::size_t>(row)], q);
        if (nv < 0) nv += q;
        v[static_cast<std::size_t>(row)] = static_cast<int>(nv);
      }
    }
    int top = -1;
    for (int row = 0; row < state.b; ++row) {
      if (v[static_cast<std::size_t>(row)] != 0) {
        top = row;
        break;
      }
    }
    if (top < 0) continue;
    data.positions.push_back(static_cast<long long>(idx) + 1);
    data.labels.push_back(top + 1);
    pivot_rows.push_back(top);
    pivot_inv.push_back(inv_mod(v[static_cast<std::size_t>(top)], q));
    reduced.push_back(std::move(v));
    if (static_cast<int>(reduced.size()) == state.b) {
      // Full row rank: every later column reduces to zero.
      break;
    }
  }
  return data;
}

BallTuple rank_increase_positions(const MatrixState& state) {
  return pivot_scan(state).positions;
}

LabeledConfig pivot_labels(const MatrixState& state) {
  PivotData data = pivot_scan(state);
  std::vector<int> word = data.labels;
  return LabeledConfig{Multipermutation{word, content_of(word)}, data.positions};
}

ProjectionReport empirical_projection_check(int b, long long q, long long steps,
                                            std::uint64_t seed) {
  if (steps < 10000) {
    throw std::invalid_argument("empirical_projection_check: steps < 10^4");
  }
  MatrixState state = initial_state(b, q);
  Rng rng(seed);

  ProjectionReport report;
  report.b = b;
  report.q = q;
  report.steps = steps;
  report.visit_threshold = kVisitThreshold;

  std::vector<long long> move_counts(static_cast<std::size_t>(b) + 1, 0);  // [0]=shift
  std::map<LabeledConfig, long long> visits;
  std::map<LabeledConfig, std::map<LabeledConfig, long long>> transitions;

  PivotData old_data = pivot_scan(state);
  for (long long t = 0; t < steps; ++t) {
    prepend_column(state, draw_column(b, q, rng));
    PivotData new_data = pivot_scan(state);
    truncate_width(state, new_data);

    if (static_cast<int>(old_data.labels.size()) == b) {
      ++report.classified_steps;
      const BallTuple& n = old_data.positions;
      const BallTuple& np = new_data.positions;

      // First projection: all positions shift right, or ball j jumps to 1
      // while the rest shift.
      int move = -1;
      bool shift = true;
      for (int k = 0; k < b; ++k) {
        if (np[static_cast<std::size_t>(k)] != n[static_cast<std::size_t>(k)] + 1) {
          shift = false;
          break;
        }
      }
      if (shift) {
        move = 0;
      } else if (np[0] == 1) {
        for (int j = 1; j <= b && move < 0; ++j) {
          bool match = true;
          int out = 1;
          for (int k = 1; k <= b; ++k) {
            if (k == j) continue;
            if (np[static_cast<std::size_t>(out)] != n[static_cast<std::size_t>(k - 1)] + 1) {
              match = false;
              break;
            }
            ++out;
          }
          if (match) move = j;
        }
      }
      if (move < 0) {
        report.unexpected_transition = true;
      } else {
        ++move_counts[static_cast<std::size_t>(move)];
      }

      // Second projection: labeled one-step transition.
      LabeledConfig src{Multipermutation{old_data.labels, content_of(old_data.labels)},
                        old_data.positions};
      LabeledConfig dst{Multipermutation{new_data.labels, content_of(new_data.labels)},
                        new_data.positions};
      ++visits[src];
      ++transitions[src][dst];
    }
    old_data = std::move(new_data);
  }

  // Move classes against the geometric jump law.
  ImrjmcChain chain = knutson_chain(std::vector<int>(static_cast<std::size_t>(b), 1), q);
  long long nc = report.classified_steps;
  for (int j = 0; j <= b; ++j) {
    MoveClassStat stat;
    stat.name = j == 0 ? "shift" : "ball " + std::to_string(j);
    stat.count = move_counts[static_cast<std::size_t>(j)];
    stat.expected_p = to_double(chain.x[static_cast<std::size_t>(j)]);
    stat.z = binomial_z(stat.count, nc, stat.expected_p);
    report.max_abs_z = std::max(report.max_abs_z, std::abs(stat.z));
    report.first_projection.push_back(std::move(stat));
  }

  // Conditional one-step kernels for frequently visited sources.
  for (const auto& [src, nvisits] : visits) {
    if (nvisits < kVisitThreshold) continue;
    ++report.frequent_sources;
    std::map<LabeledConfig, Rat> expected;
    for (const auto& [dst, p] : step_distribution(chain, src)) expected[dst] = p;

    const auto& observed = transitions[src];
    for (const auto& [dst, p] : expected) {
      auto it = observed.find(dst);
      long long count = it == observed.end() ? 0 : it->second;
      KernelCellStat cell;
      cell.source = to_string(src);
      cell.target = to_string(dst);
      cell.source_visits = nvisits;
      cell.count = count;
      cell.expected_p = to_double(p);
      cell.z = binomial_z(count, nvisits, cell.expected_p);
      report.max_abs_z = std::max(report.max_abs_z, std::abs(cell.z));
      report.second_projection.push_back(std::move(cell));
    }
    for (const auto& [dst, count] : observed) {
      if (expected.find(dst) != expected.end()) continue;
      report.unexpected_transition = true;
      KernelCellStat cell;
      cell.source = to_string(src);
      cell.target = to_string(dst);
      cell.source_visits = nvisits;
      cell.count = count;
      cell.expected_p = 0;
      cell.z = std::numeric_limits<double>::infinity();
      report.second_projection.push_back(std::move(cell));
    }
  }
  return report;
}

}  // namespace rjug
