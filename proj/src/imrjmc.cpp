#include "rjug/imrjmc.hpp"

#include <cstdio>
#include <map>
#include <numeric>
#include <utility>

namespace rjug {

namespace {

void check_state(const ImrjmcChain& chain, const LabeledConfig& state, const char* who) {
  if (state.tau.content != chain.content) {
    throw ContentMismatch(std::string(who) + ": state has different content");
  }
  if (static_cast<int>(state.n.size()) != chain.b()) {
    throw std::invalid_argument(std::string(who) + ": position tuple has wrong length");
  }
  long long prev = 0;
  for (long long v : state.n) {
    if (v <= prev) throw std::invalid_argument(std::string(who) + ": positions not increasing");
    prev = v;
  }
}

void require_proper(const ImrjmcChain& chain, const char* who) {
  if (!chain.proper()) {
    throw DegenerateParameters(std::string(who) +
                               ": needs x_b > 0 and 0 < alpha < 1");
  }
}

}  // namespace

ImrjmcChain::ImrjmcChain(std::vector<int> content_, ProbVec x_, std::vector<Rat> alpha_)
    : content(std::move(content_)), x(std::move(x_)), alpha(std::move(alpha_)) {
  if (content.empty()) throw std::invalid_argument("ImrjmcChain: empty content");
  long long total = 0;
  for (int c : content) {
    if (c < 0) throw std::invalid_argument("ImrjmcChain: negative multiplicity");
    total += c;
  }
  if (total < 1) throw std::invalid_argument("ImrjmcChain: no balls");
  b_ = static_cast<int>(total);
  if (static_cast<int>(x.size()) != b_ + 1) {
    throw NonDistribution("ImrjmcChain: x must have b+1 entries");
  }
  x.validate();
  int needed = b_ - content.back();
  if (static_cast<int>(alpha.size()) < needed) {
    throw InsufficientAlphas("ImrjmcChain: need alpha_1..alpha_" + std::to_string(needed));
  }
  for (const Rat& a : alpha) {
    if (a < 0 || a > 1) throw std::invalid_argument("ImrjmcChain: alpha outside [0, 1]");
  }
  ps = prefix_sums(x);
}

bool ImrjmcChain::proper() const {
  if (x[static_cast<std::size_t>(b_)] <= 0) return false;
  for (const Rat& a : alpha) {
    if (a <= 0 || a >= 1) return false;
  }
  return true;
}

ImrjmcChain knutson_chain(std::vector<int> content, long long q) {
  long long total = 0;
  for (int c : content) total += c;
  int b = static_cast<int>(total);
  int nalpha = b - (content.empty() ? 0 : content.back());
  std::vector<Rat> alpha(static_cast<std::size_t>(nalpha), rat_ll(1, q));
  return ImrjmcChain(std::move(content), knutson_weights(q, b), std::move(alpha));
}

Kernel<LabeledConfig> step_distribution(const ImrjmcChain& chain, const LabeledConfig& state) {
  check_state(chain, state, "step_distribution");
  int b = chain.b();
  std::map<LabeledConfig, Rat> agg;

  if (chain.x[0] != 0) {
    BallTuple shifted = state.n;
    for (long long& v : shifted) ++v;
    agg[LabeledConfig{state.tau, std::move(shifted)}] += chain.x[0];
  }
  for (int j = 1; j <= b; ++j) {
    const Rat& xj = chain.x[static_cast<std::size_t>(j)];
    if (xj == 0) continue;
    BallTuple pos;
    pos.reserve(static_cast<std::size_t>(b));
    pos.push_back(1);
    for (int k = 1; k <= b; ++k) {
      if (k != j) pos.push_back(state.n[static_cast<std::size_t>(k - 1)] + 1);
    }
    for (const BumpPath& path : bump_paths(state.tau, j, chain.alpha)) {
      if (path.prob != 0) agg[LabeledConfig{path.result, pos}] += xj * path.prob;
    }
  }

  Kernel<LabeledConfig> out;
  out.reserve(agg.size());
  for (auto& [s, p] : agg) {
    if (p != 0) out.emplace_back(s, p);
  }
  return out;
}

Rat stationary(const ImrjmcChain& chain, const LabeledConfig& state) {
  check_state(chain, state, "stationary");
  require_proper(chain, "stationary");
  return alpha_weight(state.tau, chain.alpha) * gap_weight(chain.ps, state.n) /
         partition(chain);
}

std::vector<Rat> partition_factors(const ImrjmcChain& chain) {
  require_proper(chain, "partition");
  std::vector<Rat> factors = partition_factors(chain.content, chain.alpha);
  for (int i = 0; i < chain.b(); ++i) {
    const Rat& zbar = chain.ps.zbar[static_cast<std::size_t>(i)];
    if (zbar == 0) throw DegenerateParameters("partition: zbar_i = 0");
    factors.push_back(1 / zbar);
  }
  return factors;
}

Rat partition(const ImrjmcChain& chain) {
  Rat z = 1;
  for (const Rat& f : partition_factors(chain)) z *= f;
  return z;
}

Rat master_residual_truncated(const ImrjmcChain& chain, const LabeledConfig& state,
                              long long N) {
  check_state(chain, state, "master_residual_truncated");
  require_proper(chain, "master_residual_truncated");
  if (state.n.back() > N) {
    throw std::invalid_argument("master_residual_truncated: n_b > N");
  }
  int b = chain.b();
  const BallTuple& n = state.n;
  Rat incoming = 0;  // unnormalized: alpha^c * gap weights, divided by Z at the end

  if (n.front() > 1) {
    BallTuple prev(n);
    for (long long& v : prev) --v;
    incoming = chain.x[0] * alpha_weight(state.tau, chain.alpha) * gap_weight(chain.ps, prev);
  } else {
    std::vector<Multipermutation> words = enumerate_multipermutations(chain.content);
    for (int j = 1; j <= b; ++j) {
      const Rat& xj = chain.x[static_cast<std::size_t>(j)];
      if (xj == 0) continue;

      // Total alpha^c-weighted flow of bumping paths from start j into tau.
      Rat label_flow = 0;
      for (const Multipermutation& sigma : words) {
        Rat weight = alpha_weight(sigma, chain.alpha);
        if (weight == 0) continue;
        for (const BumpPath& path : bump_paths(sigma, j, chain.alpha)) {
          if (path.result == state.tau) label_flow += weight * path.prob;
        }
      }
      if (label_flow == 0) continue;

      // Source tuple v with ball j jumping: v_k = n_{k+1}-1 below the jump,
      // v_k = n_k-1 above it, and the j-th coordinate free.
      BallTuple v(static_cast<std::size_t>(b), 0);
      for (int k = 1; k < j; ++k) v[static_cast<std::size_t>(k - 1)] = n[static_cast<std::size_t>(k)] - 1;
      for (int k = j + 1; k <= b; ++k) v[static_cast<std::size_t>(k - 1)] = n[static_cast<std::size_t>(k - 1)] - 1;
      Rat possum = 0;
      if (j < b) {
        long long lo = (j == 1) ? 1 : n[static_cast<std::size_t>(j - 1)];
        long long hi = n[static_cast<std::size_t>(j)] - 2;
        for (long long t = lo; t <= hi; ++t) {
          v[static_cast<std::size_t>(j - 1)] = t;
          possum += gap_weight(chain.ps, v);
        }
      } else {
        // Unbounded last coordinate: geometric series from t = n_b upward.
        v[static_cast<std::size_t>(b - 1)] = n[static_cast<std::size_t>(b - 1)];
        possum = gap_weight(chain.ps, v) / chain.ps.zbar[static_cast<std::size_t>(b - 1)];
      }
      incoming += xj * possum * label_flow;
    }
  }

  Rat own = alpha_weight(state.tau, chain.alpha) * gap_weight(chain.ps, n);
  return (incoming - own) / partition(chain);
}

Rat tail_mass_beyond(const ImrjmcChain& chain, long long N) {
  require_proper(chain, "tail_mass_beyond");
  return gap_tail_beyond(chain.ps, N) / gap_total(chain.ps);
}

std::vector<LabeledConfig> sample_run(const ImrjmcChain& chain, long long steps,
                                      std::uint64_t seed, const LabeledConfig& init) {
  if (steps < 0) throw std::invalid_argument("sample_run: steps < 0");
  check_state(chain, init, "sample_run");
  if (!chain.proper()) {
    std::fprintf(stderr,
                 "warning: degenerate parameters, the walk may be reducible or "
                 "transient; simulating anyway\n");
  }
  Rng rng(seed);
  std::vector<LabeledConfig> traj;
  traj.reserve(static_cast<std::size_t>(steps) + 1);
  traj.push_back(init);
  LabeledConfig current = init;
  for (long long t = 0; t < steps; ++t) {
    current = sample_kernel(step_distribution(chain, current), rng);
    traj.push_back(current);
  }
  return traj;
}

std::vector<LabeledConfig> enumerate_states(const std::vector<int>& content,
                                            long long maxpos) {
  long long total = 0;
  for (int c : content) total += c;
  std::vector<LabeledConfig> out;
  for (const Multipermutation& tau : enumerate_multipermutations(content)) {
    for (const BallTuple& n : enumerate_tuples(static_cast<int>(total), maxpos)) {
      out.push_back(LabeledConfig{tau, n});
    }
  }
  return out;
}

}  // namespace rjug
