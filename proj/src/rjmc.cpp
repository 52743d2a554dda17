#include "rjug/rjmc.hpp"

#include <algorithm>
#include <map>

#include "rjug/oracle.hpp"

namespace rjug {

RjmcChain::RjmcChain(int m_, int b_, ProbVec x_) : m(m_), b(b_), x(std::move(x_)) {
  if (m < 1 || b < 0 || b > m) {
    throw std::invalid_argument("RjmcChain: need 1 <= m and 0 <= b <= m");
  }
  if (static_cast<int>(x.size()) != b + 1) {
    throw NonDistribution("RjmcChain: x must have b+1 entries");
  }
  ps = prefix_sums(x);
}

namespace {

int ones_in_prefix(const BinaryWord& w) {
  int count = 0;
  for (std::size_t i = 0; i + 1 < w.size(); ++i) count += w[i];
  return count;
}

void check_state(const RjmcChain& chain, const BinaryWord& w) {
  if (static_cast<int>(w.size()) != chain.m) {
    throw std::invalid_argument("rjmc: word length != m");
  }
  int ones = 0;
  for (auto bit : w) ones += bit;
  if (ones > chain.b) throw std::invalid_argument("rjmc: word has more than b ones");
}

}  // namespace

Kernel<BinaryWord> step_distribution(const RjmcChain& chain, const BinaryWord& w) {
  check_state(chain, w);
  int m = chain.m;
  int l = ones_in_prefix(w);
  std::map<BinaryWord, Rat> agg;

  BinaryWord shifted(m);
  shifted[0] = 0;
  std::copy(w.begin(), w.begin() + (m - 1), shifted.begin() + 1);
  if (chain.x[0] != 0) agg[shifted] += chain.x[0];

  int seen = 0;
  for (int pos = 0; pos + 1 < m; ++pos) {
    if (!w[pos]) continue;
    ++seen;
    if (chain.x[seen] == 0) continue;
    BinaryWord next = shifted;
    next[0] = 1;
    next[pos + 1] = 0;
    agg[next] += chain.x[seen];
  }

  Rat rest = chain.ps.zbar[l];  // x_{l+1} + ... + x_b
  if (rest != 0) {
    BinaryWord next = shifted;
    next[0] = 1;
    agg[next] += rest;
  }

  Kernel<BinaryWord> out(agg.begin(), agg.end());
  return out;
}

Rat stationary(const RjmcChain& chain, const BinaryWord& w) {
  check_state(chain, w);
  BallTuple n = ones_positions(w);
  std::size_t k = n.size();
  Rat value = 1;
  for (std::size_t i = 0; i < k; ++i) value *= chain.ps.zbar[i];
  long long prev = 0;
  for (std::size_t i = 0; i <= k; ++i) {
    long long next = (i == k) ? chain.m + 1 : n[i];
    long long gap = next - prev - 1;
    for (long long g = 0; g < gap; ++g) value *= chain.ps.z[i];
    prev = next;
  }
  return value;
}

Rat sum_pair_identity(const RjmcChain& chain, const BinaryWord& v) {
  check_state(chain, v);
  if (v.empty() || v[0] != 0) {
    throw std::invalid_argument("sum_pair_identity: word must start with 0");
  }
  BinaryWord tail0(v.begin() + 1, v.end());
  tail0.push_back(0);
  BinaryWord tail1(v.begin() + 1, v.end());
  tail1.push_back(1);

  int ones_tail1 = 0;
  for (auto bit : tail1) ones_tail1 += bit;

  Rat total = stationary(chain, tail0);
  if (ones_tail1 <= chain.b) total += stationary(chain, tail1);

  if (total * chain.ps.z[0] != stationary(chain, v)) {
    throw std::logic_error("sum_pair_identity: pair sum != pi(v)/z_0 for " + to_string(v));
  }
  return total;
}

EnrichedWord enriched_step(int t, const EnrichedWord& word) {
  if (t < 1) throw std::invalid_argument("enriched_step: symbol must be >= 1");
  EnrichedWord next(word.size());
  if (word.empty()) return next;
  next[0] = t;
  std::copy(word.begin(), word.end() - 1, next.begin() + 1);
  return next;
}

Rat enriched_weight(const RjmcChain& chain, const EnrichedWord& word) {
  Rat w = 1;
  for (int t : word) {
    if (t < 1 || t > chain.b + 1) {
      throw std::invalid_argument("enriched_weight: symbol out of range");
    }
    w *= chain.x[t - 1];
  }
  return w;
}

BinaryWord lump(const EnrichedWord& word) {
  // Unrolled from the right: each symbol t acts on the projection of the
  // tail by prepending a one and zeroing the t-th one from the left.
  BinaryWord w;
  for (std::size_t ii = word.size(); ii-- > 0;) {
    int t = word[ii];
    w.insert(w.begin(), 1);
    int seen = 0;
    for (auto& bit : w) {
      if (bit) {
        ++seen;
        if (seen == t) {
          bit = 0;
          break;
        }
      }
    }
  }
  return w;
}

std::vector<EnrichedWord> enumerate_enriched_words(int m, int b) {
  if (m < 0 || b < 0) throw std::invalid_argument("enumerate_enriched_words: bad sizes");
  std::vector<EnrichedWord> out;
  EnrichedWord cur(m, 1);
  // Mixed-radix counter over {1..b+1}^m, most significant digit first.
  while (true) {
    out.push_back(cur);
    int pos = m - 1;
    while (pos >= 0 && cur[pos] == b + 1) {
      cur[pos] = 1;
      --pos;
    }
    if (pos < 0) break;
    ++cur[pos];
  }
  return out;
}

UltrafastReport verify_ultrafast(const RjmcChain& chain, std::size_t cap) {
  auto states = enumerate_binary_words(chain.m, chain.b);
  if (states.size() > cap) {
    throw StateSpaceTooLarge("verify_ultrafast: " + std::to_string(states.size()) +
                             " states exceeds cap " + std::to_string(cap));
  }
  DenseKernel M = build_matrix(
      states, [&](const BinaryWord& w) { return step_distribution(chain, w); },
      [](const BinaryWord& w) { return to_string(w); }, cap);

  auto Pm = mat_pow(M.rows, chain.m);
  auto Pm1 = mat_mul(Pm, M.rows);

  bool rows_match = true;
  std::vector<Rat> pi(states.size());
  for (std::size_t j = 0; j < states.size(); ++j) pi[j] = stationary(chain, states[j]);
  for (std::size_t i = 0; i < states.size() && rows_match; ++i) {
    rows_match = (Pm[i] == pi);
  }
  return UltrafastReport{states.size(), Pm1 == Pm, rows_match};
}

LumpingReport verify_lumping(const RjmcChain& chain, std::size_t cap) {
  double enriched_count = 1;
  for (int i = 0; i < chain.m; ++i) enriched_count *= chain.b + 1;
  if (enriched_count > static_cast<double>(cap)) {
    throw StateSpaceTooLarge("verify_lumping: (b+1)^m exceeds cap " + std::to_string(cap));
  }
  auto enriched = enumerate_enriched_words(chain.m, chain.b);
  auto words = enumerate_binary_words(chain.m, chain.b);
  std::map<BinaryWord, std::size_t> word_index;
  for (std::size_t j = 0; j < words.size(); ++j) word_index[words[j]] = j;

  DenseKernel M = build_matrix(
      words, [&](const BinaryWord& w) { return step_distribution(chain, w); },
      [](const BinaryWord& w) { return to_string(w); }, cap);

  // Row tau of M_enriched * Phi, computed sparsely, must equal row
  // phi(tau) of M; summing the enriched weights by image must give pi.
  bool commute = true;
  std::vector<Rat> projected_weight(words.size(), Rat(0));
  std::vector<Rat> lumped_row(words.size(), Rat(0));
  for (const auto& tau : enriched) {
    std::fill(lumped_row.begin(), lumped_row.end(), Rat(0));
    for (int t = 1; t <= chain.b + 1; ++t) {
      if (chain.x[t - 1] == 0) continue;
      EnrichedWord succ = enriched_step(t, tau);
      lumped_row[word_index.at(lump(succ))] += chain.x[t - 1];
    }
    std::size_t image = word_index.at(lump(tau));
    if (lumped_row != M.rows[image]) {
      commute = false;
      break;
    }
    projected_weight[image] += enriched_weight(chain, tau);
  }

  bool weights_ok = commute;
  if (weights_ok) {
    for (std::size_t j = 0; j < words.size() && weights_ok; ++j) {
      weights_ok = (projected_weight[j] == stationary(chain, words[j]));
    }
  }
  return LumpingReport{enriched.size(), words.size(), commute, weights_ok};
}

}  // namespace rjug
