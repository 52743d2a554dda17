#include "rjug/irjmc.hpp"

#include <algorithm>
#include <cstdio>
#include <map>

namespace rjug {

namespace {

void check_tuple(int b, const BallTuple& n) {
  if (static_cast<int>(n.size()) != b) {
    throw std::invalid_argument("ball tuple length != b");
  }
  long long prev = 0;
  for (long long v : n) {
    if (v <= prev) throw std::invalid_argument("ball tuple not strictly increasing from 1");
    prev = v;
  }
}

void require_recurrent(const IrjmcChain& chain, const char* op) {
  if (!chain.recurrent()) {
    throw DegenerateParameters(std::string(op) +
                               ": needs x_b > 0 (otherwise the chain is transient)");
  }
}

}  // namespace

IrjmcChain::IrjmcChain(int b_, ProbVec x_) : b(b_), x(std::move(x_)) {
  if (b < 1) throw std::invalid_argument("IrjmcChain: need b >= 1");
  if (static_cast<int>(x.size()) != b + 1) {
    throw NonDistribution("IrjmcChain: x must have b+1 entries");
  }
  ps = prefix_sums(x);
}

Kernel<BallTuple> step_distribution(const IrjmcChain& chain, const BallTuple& n) {
  check_tuple(chain.b, n);
  std::map<BallTuple, Rat> agg;
  BallTuple shifted(n);
  for (long long& v : shifted) ++v;
  if (chain.x[0] != 0) agg[shifted] += chain.x[0];
  for (int i = 1; i <= chain.b; ++i) {
    if (chain.x[static_cast<std::size_t>(i)] == 0) continue;
    BallTuple next;
    next.reserve(n.size());
    next.push_back(1);
    for (int k = 0; k < chain.b; ++k) {
      if (k != i - 1) next.push_back(n[k] + 1);
    }
    agg[next] += chain.x[static_cast<std::size_t>(i)];
  }
  return Kernel<BallTuple>(agg.begin(), agg.end());
}

Rat gap_weight(const PrefixSums& ps, const BallTuple& n) {
  Rat value = 1;
  long long prev = 0;
  for (std::size_t i = 0; i < n.size(); ++i) {
    value *= rat_pow(ps.z[i], n[i] - prev - 1);
    prev = n[i];
  }
  return value;
}

Rat gap_total(const PrefixSums& ps) {
  Rat value = 1;
  for (std::size_t i = 0; i + 1 < ps.size(); ++i) {
    if (ps.zbar[i] == 0) {
      throw DegenerateParameters("gap_total: zbar_" + std::to_string(i) + " = 0");
    }
    value /= ps.zbar[i];
  }
  return value;
}

namespace {

// Sum of the gap weight over levels k..b with every position unconstrained.
Rat unconstrained_tail(const PrefixSums& ps, int k) {
  int b = static_cast<int>(ps.size()) - 1;
  Rat value = 1;
  for (int i = k - 1; i < b; ++i) {
    if (ps.zbar[static_cast<std::size_t>(i)] == 0) {
      throw DegenerateParameters("tail sum: zbar_" + std::to_string(i) + " = 0");
    }
    value /= ps.zbar[static_cast<std::size_t>(i)];
  }
  return value;
}

// Sum of the gap weight over positions n_k < ... < n_b with n_k > prev and
// the constraint n_b > N, every infinite stretch folded into a closed form.
Rat constrained_tail(const PrefixSums& ps, int k, long long prev, long long N) {
  int b = static_cast<int>(ps.size()) - 1;
  const Rat& zk = ps.z[static_cast<std::size_t>(k - 1)];
  const Rat& zbark = ps.zbar[static_cast<std::size_t>(k - 1)];
  if (zbark == 0) throw DegenerateParameters("tail sum: zbar = 0");
  if (k == b) {
    long long start = std::max(N, prev);
    return rat_pow(zk, start - prev) / zbark;
  }
  if (prev >= N) return unconstrained_tail(ps, k);
  Rat total = 0;
  for (long long t = prev + 1; t <= N; ++t) {
    total += rat_pow(zk, t - prev - 1) * constrained_tail(ps, k + 1, t, N);
  }
  total += rat_pow(zk, N - prev) / zbark * unconstrained_tail(ps, k + 1);
  return total;
}

}  // namespace

Rat gap_tail_beyond(const PrefixSums& ps, long long N) {
  return constrained_tail(ps, 1, 0, N);
}

Rat stationary(const IrjmcChain& chain, const BallTuple& n) {
  require_recurrent(chain, "stationary");
  check_tuple(chain.b, n);
  return gap_weight(chain.ps, n) / partition(chain);
}

Rat partition(const IrjmcChain& chain) {
  require_recurrent(chain, "partition");
  return gap_total(chain.ps);
}

std::vector<Rat> partition_factors(const IrjmcChain& chain) {
  require_recurrent(chain, "partition_factors");
  std::vector<Rat> factors;
  for (int i = 0; i < chain.b; ++i) {
    factors.push_back(1 / chain.ps.zbar[static_cast<std::size_t>(i)]);
  }
  return factors;
}

ProbVec knutson_weights(long long q, int b) {
  if (q < 2) throw std::invalid_argument("knutson_weights: need q >= 2");
  if (b < 1) throw std::invalid_argument("knutson_weights: need b >= 1");
  std::vector<Rat> w;
  w.reserve(static_cast<std::size_t>(b) + 1);
  w.push_back(rat_pow(rat_ll(1, q), b));
  for (int i = 1; i <= b; ++i) {
    // q^{i-b} (1 - 1/q) = (q-1) / q^{b-i+1}
    w.push_back(rat_ll(q - 1) * rat_pow(rat_ll(1, q), b - i + 1));
  }
  return ProbVec(std::move(w));
}

Rat master_residual_truncated(const IrjmcChain& chain, const BallTuple& n, long long N) {
  require_recurrent(chain, "master_residual_truncated");
  check_tuple(chain.b, n);
  if (n.back() > N) throw std::invalid_argument("master_residual_truncated: n_b > N");
  int b = chain.b;
  Rat incoming = 0;

  if (n.front() > 1) {
    BallTuple prev(n);
    for (long long& v : prev) --v;
    incoming += chain.x[0] * stationary(chain, prev);
  } else {
    for (int j = 1; j <= b; ++j) {
      // Source tuple v with ball j jumping: v_k = n_{k+1}-1 below the jump,
      // v_k = n_k-1 above it, and the j-th coordinate free.
      BallTuple v(static_cast<std::size_t>(b), 0);
      for (int k = 1; k < j; ++k) v[static_cast<std::size_t>(k - 1)] = n[static_cast<std::size_t>(k)] - 1;
      for (int k = j + 1; k <= b; ++k) v[static_cast<std::size_t>(k - 1)] = n[static_cast<std::size_t>(k - 1)] - 1;
      const Rat& xj = chain.x[static_cast<std::size_t>(j)];
      if (xj == 0) continue;
      if (j < b) {
        long long lo = (j == 1) ? 1 : n[static_cast<std::size_t>(j - 1)];
        long long hi = n[static_cast<std::size_t>(j)] - 2;
        for (long long t = lo; t <= hi; ++t) {
          v[static_cast<std::size_t>(j - 1)] = t;
          incoming += xj * stationary(chain, v);
        }
      } else {
        // Unbounded last coordinate: geometric series from t = n_b upward.
        v[static_cast<std::size_t>(b - 1)] = n[static_cast<std::size_t>(b - 1)];
        incoming += xj * stationary(chain, v) / chain.ps.zbar[static_cast<std::size_t>(b - 1)];
      }
    }
  }
  return incoming - stationary(chain, n);
}

Rat tail_mass_beyond(const IrjmcChain& chain, long long N) {
  return gap_tail_beyond(chain.ps, N) / partition(chain);
}

Rat window_marginal(const IrjmcChain& chain, const BinaryWord& w) {
  require_recurrent(chain, "window_marginal");
  long long m = static_cast<long long>(w.size());
  BallTuple inside = ones_positions(w);
  int k = static_cast<int>(inside.size());
  if (k > chain.b) return Rat(0);

  Rat value = 1;
  long long prev = 0;
  for (int i = 0; i < k; ++i) {
    value *= rat_pow(chain.ps.z[static_cast<std::size_t>(i)], inside[static_cast<std::size_t>(i)] - prev - 1);
    prev = inside[static_cast<std::size_t>(i)];
  }
  if (k < chain.b) {
    // Remaining balls occupy positions beyond the window; the first one pays
    // z_k^{m-n_k} to clear it and everything after telescopes freely.
    const Rat& zk = chain.ps.z[static_cast<std::size_t>(k)];
    const Rat& zbark = chain.ps.zbar[static_cast<std::size_t>(k)];
    value *= rat_pow(zk, m - prev) / zbark;
    value *= unconstrained_tail(chain.ps, k + 2);
  }
  return value / partition(chain);
}

std::vector<BallTuple> sample_run(const IrjmcChain& chain, long long steps,
                                  std::uint64_t seed, const BallTuple& init) {
  if (steps < 0) throw std::invalid_argument("sample_run: steps < 0");
  check_tuple(chain.b, init);
  if (!chain.recurrent()) {
    std::fprintf(stderr, "warning: x_b = 0, the chain is transient; simulating anyway\n");
  }
  Rng rng(seed);
  std::vector<BallTuple> traj;
  traj.reserve(static_cast<std::size_t>(steps) + 1);
  traj.push_back(init);
  BallTuple current = init;
  for (long long t = 0; t < steps; ++t) {
    current = sample_kernel(step_distribution(chain, current), rng);
    traj.push_back(current);
  }
  return traj;
}

std::vector<BallTuple> enumerate_tuples(int b, long long maxpos) {
  if (b < 0) throw std::invalid_argument("enumerate_tuples: b < 0");
  std::vector<BallTuple> out;
  BallTuple cur;
  auto rec = [&](auto&& self, long long from) -> void {
    if (static_cast<int>(cur.size()) == b) {
      out.push_back(cur);
      return;
    }
    long long remaining = b - static_cast<long long>(cur.size());
    for (long long v = from; v + remaining - 1 <= maxpos; ++v) {
      cur.push_back(v);
      self(self, v + 1);
      cur.pop_back();
    }
  };
  rec(rec, 1);
  return out;
}

}  // namespace rjug
