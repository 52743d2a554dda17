#include "doctest.h"

#include <map>
#include <utility>

#include "rjug/errors.hpp"
#include "rjug/irjmc.hpp"
#include "rjug/oracle.hpp"
#include "rjug/rjmc.hpp"

using namespace rjug;

namespace {

RjmcChain example_chain() {
  return RjmcChain(3, 2, ProbVec{{Rat(1, 2), Rat(1, 3), Rat(1, 6)}});
}

}  // namespace

TEST_SUITE("rjmc") {

TEST_CASE("construction validates shape") {
  CHECK_THROWS_AS(RjmcChain(2, 3, ProbVec{{Rat(1, 2), Rat(1, 2)}}), std::invalid_argument);
  CHECK_THROWS_AS(RjmcChain(3, 1, ProbVec{{Rat(1)}}), NonDistribution);
}

TEST_CASE("step distributions are probability kernels") {
  RjmcChain chain(4, 2, ProbVec{{Rat(1, 2), Rat(1, 3), Rat(1, 6)}});
  for (const auto& w : enumerate_binary_words(4, 2)) {
    auto k = step_distribution(chain, w);
    CHECK(kernel_mass(k) == Rat(1));
    for (const auto& [succ, p] : k) {
      CHECK(p > 0);
      CHECK(succ.size() == 4);
    }
  }
  CHECK_THROWS_AS(step_distribution(chain, binary_word_from_string("00000")),
                  std::invalid_argument);
  CHECK_THROWS_AS(step_distribution(chain, binary_word_from_string("1110")),
                  std::invalid_argument);
}

TEST_CASE("closed form at the worked three-letter point") {
  RjmcChain chain = example_chain();
  CHECK(stationary(chain, binary_word_from_string("100")) == Rat(25, 72));
  Rat total = 0;
  for (const auto& w : enumerate_binary_words(3, 2)) total += stationary(chain, w);
  CHECK(total == Rat(1));
}

TEST_CASE("two-position single-ball table") {
  RjmcChain chain(2, 1, ProbVec{{Rat(1, 2), Rat(1, 2)}});
  CHECK(stationary(chain, binary_word_from_string("00")) == Rat(1, 4));
  CHECK(stationary(chain, binary_word_from_string("01")) == Rat(1, 4));
  CHECK(stationary(chain, binary_word_from_string("10")) == Rat(1, 2));
}

TEST_CASE("closed form equals the balance solve") {
  RjmcChain chain = example_chain();
  auto words = enumerate_binary_words(3, 2);
  DenseKernel M = build_matrix(
      words, [&](const BinaryWord& w) { return step_distribution(chain, w); },
      [](const BinaryWord& w) { return to_string(w); });
  auto pi = solve_stationary(M);
  for (std::size_t i = 0; i < words.size(); ++i) {
    CHECK(pi[i] == stationary(chain, words[i]));
  }
}

TEST_CASE("geometric weights give an l-statistic law within each ball count") {
  // with x_i = (q-1)/q^(b-i+1) (and x_0 = q^-b) the window law restricted to
  // words with a fixed number of visible balls is proportional to q^(-l(w));
  // words with fewer balls carry an extra class factor from the hidden tail
  for (long long q : {2LL, 3LL}) {
    RjmcChain chain(4, 2, knutson_weights(q, 2));
    std::map<std::size_t, Rat> scaled_by_count;
    for (const auto& w : enumerate_binary_words(4, 2)) {
      Rat scaled = stationary(chain, w) * rat_pow(rat_ll(q), l_statistic_word(w));
      auto [it, fresh] = scaled_by_count.try_emplace(ones_positions(w).size(), scaled);
      if (!fresh) CHECK(scaled == it->second);
    }
  }
}

TEST_CASE("tail pair identity holds for words starting with zero") {
  RjmcChain chain(4, 2, ProbVec{{Rat(1, 2), Rat(1, 4), Rat(1, 4)}});
  for (const auto& v : enumerate_binary_words(4, 2)) {
    if (v[0] != 0) continue;
    CHECK_NOTHROW(sum_pair_identity(chain, v));
  }
  CHECK_THROWS_AS(sum_pair_identity(chain, binary_word_from_string("1000")),
                  std::invalid_argument);
}

TEST_CASE("power of the kernel stabilizes at step m") {
  RjmcChain chain = example_chain();
  UltrafastReport r = verify_ultrafast(chain);
  CHECK(r.states == 7);
  CHECK(r.idempotent);
  CHECK(r.rows_match_formula);
}

TEST_CASE("enriched words enumerate the full jump-history cube") {
  auto enriched = enumerate_enriched_words(3, 2);
  CHECK(enriched.size() == 27);
  for (const auto& e : enriched) {
    for (int t : e) {
      CHECK(t >= 1);
      CHECK(t <= 3);
    }
  }
}

TEST_CASE("enriched projection commutes and projects the weights") {
  RjmcChain chain = example_chain();
  LumpingReport r = verify_lumping(chain);
  CHECK(r.enriched_states == 27);
  CHECK(r.word_states == 7);
  CHECK(r.kernels_commute);
  CHECK(r.weights_project);
}

TEST_CASE("lump unrolls jump symbols from the right") {
  // the symbol sequence (1) on a single cell puts the ball in front and
  // then knocks it out: lump(1) over m=1 gives word 0
  EnrichedWord e{1};
  CHECK(to_string(lump(e)) == "0");
  EnrichedWord two{2, 1};
  BinaryWord w = lump(two);
  CHECK(w.size() == 2);
}

TEST_CASE("enriched weight multiplies jump probabilities") {
  RjmcChain chain = example_chain();
  EnrichedWord e{1, 2, 3};
  CHECK(enriched_weight(chain, e) == Rat(1, 2) * Rat(1, 3) * Rat(1, 6));
  CHECK_THROWS_AS(enriched_weight(chain, EnrichedWord{4}), std::invalid_argument);
}

}  // TEST_SUITE
