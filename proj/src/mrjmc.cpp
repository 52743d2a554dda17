#include "rjug/mrjmc.hpp"

#include <algorithm>
#include <map>
#include <numeric>

namespace rjug {

MrjmcChain::MrjmcChain(std::vector<int> content_, ProbVec s_, std::vector<Rat> alpha_)
    : content(std::move(content_)), s(std::move(s_)), alpha(std::move(alpha_)) {
  if (content.empty()) throw std::invalid_argument("MrjmcChain: empty content");
  long long total = 0;
  for (int c : content) {
    if (c < 0) throw std::invalid_argument("MrjmcChain: negative multiplicity");
    total += c;
  }
  if (total < 1) throw std::invalid_argument("MrjmcChain: no balls");
  b_ = static_cast<int>(total);
  if (static_cast<int>(s.size()) != b_) {
    throw NonDistribution("MrjmcChain: s must have b entries");
  }
  s.validate();
  int needed = b_ - content.back();
  if (static_cast<int>(alpha.size()) < needed) {
    throw InsufficientAlphas("MrjmcChain: need alpha_1..alpha_" + std::to_string(needed));
  }
  for (const Rat& a : alpha) {
    if (a < 0 || a > 1) throw std::invalid_argument("MrjmcChain: alpha outside [0, 1]");
  }
}

bool MrjmcChain::proper() const {
  if (s[static_cast<std::size_t>(b_ - 1)] <= 0) return false;
  for (const Rat& a : alpha) {
    if (a <= 0 || a >= 1) return false;
  }
  return true;
}

namespace {

const Rat& alpha_at(const std::vector<Rat>& alpha, int idx1) {
  if (idx1 < 1 || idx1 > static_cast<int>(alpha.size())) {
    throw InsufficientAlphas("bump path needs alpha_" + std::to_string(idx1));
  }
  return alpha[static_cast<std::size_t>(idx1 - 1)];
}

struct PathSearch {
  const std::vector<Rat>& alpha;
  std::vector<int> occ;  // labels by position; 0 marks the vacated start slot
  int start;
  std::vector<int> bumps;
  std::vector<BumpPath>* out;
  const std::vector<int>* content;

  // Mover at position p walks left; every strictly smaller occupied label is
  // a bump candidate, nearest first. Equal or larger labels are passed for
  // free and never indexed.
  void dfs(int p, int mover, const Rat& acc) {
    int r = 0;
    for (std::size_t q = static_cast<std::size_t>(p); q < occ.size(); ++q) {
      if (occ[q] != 0 && occ[q] < mover) ++r;
    }
    std::vector<int> candidates;  // positions, nearest (largest) first
    for (int q = p - 1; q >= 1; --q) {
      if (occ[q - 1] != 0 && occ[q - 1] < mover) candidates.push_back(q);
    }
    Rat pass = acc;
    for (std::size_t u = 1; u <= candidates.size(); ++u) {
      int q = candidates[u - 1];
      const Rat& au = alpha_at(alpha, r + static_cast<int>(u));
      Rat hit = pass * (1 - au);
      if (hit != 0) {
        int displaced = occ[q - 1];
        occ[q - 1] = mover;
        bumps.push_back(q);
        dfs(q, displaced, hit);
        bumps.pop_back();
        occ[q - 1] = displaced;
      }
      pass *= au;
      if (pass == 0) return;
    }
    // Mover reaches the front: positions before the start slot shift right.
    std::vector<int> word;
    word.reserve(occ.size());
    word.push_back(mover);
    for (int pos = 1; pos <= static_cast<int>(occ.size()); ++pos) {
      if (pos != start) word.push_back(occ[pos - 1]);
    }
    out->push_back(BumpPath{start, bumps, pass, Multipermutation{std::move(word), *content}});
  }
};

}  // namespace

std::vector<BumpPath> bump_paths(const Multipermutation& tau, int start,
                                 const std::vector<Rat>& alpha) {
  int b = static_cast<int>(tau.word.size());
  if (start < 1 || start > b) throw std::invalid_argument("bump_paths: start out of range");
  std::vector<BumpPath> out;
  PathSearch search{alpha, tau.word, start, {}, &out, &tau.content};
  int mover = search.occ[static_cast<std::size_t>(start - 1)];
  search.occ[static_cast<std::size_t>(start - 1)] = 0;
  search.dfs(start, mover, Rat(1));
  return out;
}

Kernel<Multipermutation> step_distribution(const MrjmcChain& chain,
                                           const Multipermutation& tau) {
  if (tau.content != chain.content) {
    throw ContentMismatch("step_distribution: state has different content");
  }
  std::map<Multipermutation, Rat> agg;
  for (int j = 1; j <= chain.b(); ++j) {
    const Rat& sj = chain.s[static_cast<std::size_t>(j - 1)];
    if (sj == 0) continue;
    for (const BumpPath& path : bump_paths(tau, j, chain.alpha)) {
      if (path.prob != 0) agg[path.result] += sj * path.prob;
    }
  }
  Kernel<Multipermutation> out;
  out.reserve(agg.size());
  for (auto& [state, p] : agg) {
    if (p != 0) out.emplace_back(state, p);
  }
  return out;
}

Rat stationary(const MrjmcChain& chain, const Multipermutation& tau) {
  if (tau.content != chain.content) {
    throw ContentMismatch("stationary: state has different content");
  }
  if (!chain.proper()) {
    throw DegenerateParameters("stationary: needs s_b > 0 and 0 < alpha < 1");
  }
  return alpha_weight(tau, chain.alpha) / partition(chain.content, chain.alpha);
}

namespace {

// Z_{p,q} by the weakly-decreasing-exponent sum, evaluated as a running
// prefix recursion over the q+1 possible values of each index.
Rat two_letter_factor(int p, int q, const std::vector<Rat>& alpha) {
  if (p < 0 || q < 0) throw std::invalid_argument("two_letter_factor: bad sizes");
  if (p > static_cast<int>(alpha.size())) {
    throw InsufficientAlphas("partition: need alpha_1..alpha_" + std::to_string(p));
  }
  std::vector<Rat> g(static_cast<std::size_t>(q) + 1, Rat(1));
  for (int j = p; j >= 1; --j) {
    const Rat& aj = alpha[static_cast<std::size_t>(j - 1)];
    std::vector<Rat> h(static_cast<std::size_t>(q) + 1);
    Rat run = 0;
    Rat apow = 1;
    for (int c = 0; c <= q; ++c) {
      run += apow * g[static_cast<std::size_t>(c)];
      h[static_cast<std::size_t>(c)] = run;
      apow *= aj;
    }
    g = std::move(h);
  }
  return g[static_cast<std::size_t>(q)];
}

}  // namespace

std::vector<Rat> partition_factors(const std::vector<int>& content,
                                   const std::vector<Rat>& alpha) {
  if (content.empty()) throw std::invalid_argument("partition: empty content");
  std::vector<Rat> factors;
  int below = content[0];
  for (std::size_t i = 1; i < content.size(); ++i) {
    factors.push_back(two_letter_factor(below, content[i], alpha));
    below += content[i];
  }
  return factors;
}

Rat partition(const std::vector<int>& content, const std::vector<Rat>& alpha) {
  Rat z = 1;
  for (const Rat& f : partition_factors(content, alpha)) z *= f;
  return z;
}

std::vector<Multipermutation> phi_decompose(const Multipermutation& tau) {
  std::vector<Multipermutation> entries;
  for (int letter = 2; letter <= static_cast<int>(tau.content.size()); ++letter) {
    std::vector<int> word;
    for (int v : tau.word) {
      if (v <= letter) word.push_back(v == letter ? 2 : 1);
    }
    entries.push_back(make_multipermutation(std::move(word)));
  }
  return entries;
}

Rat refined_flow_start(const MrjmcChain& chain, const Multipermutation& tau, int t) {
  if (tau.content != chain.content) {
    throw ContentMismatch("refined_flow_start: state has different content");
  }
  if (t < 1 || t > chain.b()) {
    throw std::invalid_argument("refined_flow_start: need 1 <= t <= b");
  }
  return chain.s[static_cast<std::size_t>(t - 1)] * alpha_weight(tau, chain.alpha);
}

Rat refined_flow_final_hop(const MrjmcChain& chain, const Multipermutation& tau, int t,
                           int r) {
  if (tau.content != chain.content) {
    throw ContentMismatch("refined_flow_final_hop: state has different content");
  }
  if (r < 1 || r > t || t > chain.b()) {
    throw std::invalid_argument("refined_flow_final_hop: need 1 <= r <= t <= b");
  }
  const Rat& st = chain.s[static_cast<std::size_t>(t - 1)];
  Rat ac = alpha_weight(tau, chain.alpha);
  std::vector<int> c = code(tau);
  const auto& word = tau.word;

  auto qualifying_product = [&](int limit) {
    // Positions below `limit` holding labels larger than the front label
    // each contribute the alpha factor indexed by their own code entry.
    Rat prod = 1;
    for (int i = 1; i < limit; ++i) {
      if (word[static_cast<std::size_t>(i)] > word[0]) {
        prod *= alpha_at(chain.alpha, c[static_cast<std::size_t>(i)] + 1);
      }
    }
    return prod;
  };

  if (r == t) return st * ac * qualifying_product(t);
  if (word[static_cast<std::size_t>(r)] > word[0]) {
    return st * ac * (1 - alpha_at(chain.alpha, c[static_cast<std::size_t>(r)] + 1)) *
           qualifying_product(r);
  }
  return 0;  // no path can make its final hop from r
}

RefineResiduals verify_refine_lemmas(const MrjmcChain& chain, const Multipermutation& tau,
                                     int t, int r) {
  if (tau.content != chain.content) {
    throw ContentMismatch("verify_refine_lemmas: state has different content");
  }
  if (r < 1 || r > t || t > chain.b()) {
    throw std::invalid_argument("verify_refine_lemmas: need 1 <= r <= t <= b");
  }
  const Rat& st = chain.s[static_cast<std::size_t>(t - 1)];

  Rat lhs_t = 0, lhs_rt = 0;
  for (const Multipermutation& source : enumerate_multipermutations(chain.content)) {
    Rat weight = alpha_weight(source, chain.alpha);
    if (weight == 0) continue;
    for (const BumpPath& path : bump_paths(source, t, chain.alpha)) {
      if (path.result != tau || path.prob == 0) continue;
      lhs_t += weight * path.prob;
      int final_hop = path.bumps.empty() ? path.start : path.bumps.back();
      if (final_hop == r) lhs_rt += weight * path.prob;
    }
  }
  lhs_t *= st;
  lhs_rt *= st;

  return RefineResiduals{lhs_t - refined_flow_start(chain, tau, t),
                         lhs_rt - refined_flow_final_hop(chain, tau, t, r)};
}

}  // namespace rjug
