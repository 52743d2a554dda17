#include "doctest.h"

#include <map>

#include "rjug/errors.hpp"
#include "rjug/imrjmc.hpp"
#include "rjug/irjmc.hpp"
#include "rjug/mrjmc.hpp"
#include "rjug/oracle.hpp"

using namespace rjug;

namespace {

LabeledConfig config(const std::string& word, BallTuple n) {
  return LabeledConfig{make_multipermutation(letters_from_string(word)), std::move(n)};
}

ImrjmcChain pair_chain() {
  return ImrjmcChain({1, 1}, ProbVec{{Rat(1, 2), Rat(1, 3), Rat(1, 6)}}, {Rat(1, 5)});
}

}  // namespace

TEST_SUITE("imrjmc") {

TEST_CASE("construction checks shapes") {
  CHECK_THROWS_AS(ImrjmcChain({1, 1}, ProbVec{{Rat(1, 2), Rat(1, 2)}}, {Rat(1, 5)}),
                  NonDistribution);
  CHECK_THROWS_AS(
      ImrjmcChain({1, 1, 1}, ProbVec{{Rat(1, 4), Rat(1, 4), Rat(1, 4), Rat(1, 4)}},
                  {Rat(1, 5)}),
      InsufficientAlphas);
  CHECK_THROWS_AS(ImrjmcChain({1, 1}, ProbVec{{Rat(1, 2), Rat(1, 3), Rat(1, 6)}},
                              {Rat(3, 2)}),
                  std::invalid_argument);
  CHECK(pair_chain().proper());
}

TEST_CASE("two-ball frozen kernel") {
  ImrjmcChain chain = pair_chain();
  std::map<LabeledConfig, Rat> got;
  for (const auto& [succ, p] : step_distribution(chain, config("21", {1, 2}))) {
    got[succ] += p;
  }
  std::map<LabeledConfig, Rat> expect{
      {config("21", {2, 3}), Rat(1, 2)},   // all balls shift
      {config("21", {1, 3}), Rat(1, 3)},   // front ball jumps, keeps its rank
      {config("12", {1, 2}), Rat(1, 6)},   // back ball (smallest label) jumps
  };
  CHECK(got == expect);
}

TEST_CASE("steps preserve structure") {
  ImrjmcChain chain({2, 1}, ProbVec{{Rat(1, 2), Rat(1, 4), Rat(1, 8), Rat(1, 8)}},
                    {Rat(1, 3), Rat(1, 5)});
  for (const auto& state : enumerate_states(chain.content, 5)) {
    auto k = step_distribution(chain, state);
    CHECK(kernel_mass(k) == Rat(1));
    for (const auto& [succ, p] : k) {
      CHECK(p > 0);
      CHECK(succ.tau.content == chain.content);
      for (std::size_t i = 1; i < succ.n.size(); ++i) CHECK(succ.n[i] > succ.n[i - 1]);
    }
  }
  CHECK_THROWS_AS(step_distribution(chain, config("12", {1, 2})), ContentMismatch);
  CHECK_THROWS_AS(step_distribution(chain, config("112", {2, 1, 3})),
                  std::invalid_argument);
}

TEST_CASE("geometric chain wiring") {
  ImrjmcChain chain = knutson_chain({1, 1}, 2);
  ProbVec expect = knutson_weights(2, 2);
  REQUIRE(chain.x.size() == expect.size());
  for (std::size_t i = 0; i < expect.size(); ++i) CHECK(chain.x[i] == expect[i]);
  REQUIRE(chain.alpha.size() == 1);
  CHECK(chain.alpha[0] == Rat(1, 2));

  CHECK(stationary(chain, config("12", {1, 2})) == Rat(1, 4));
  CHECK(stationary(chain, config("21", {1, 2})) == Rat(1, 8));
}

TEST_CASE("geometric stationary law is q to the minus ell") {
  for (long long q : {2, 3}) {
    for (const auto& content : {std::vector<int>{1, 1}, std::vector<int>{1, 1, 1}}) {
      ImrjmcChain chain(knutson_chain(content, q));
      int b = chain.b();
      Rat base = rat_pow(1 - rat_ll(1, q), b);
      for (const auto& state : enumerate_states(content, b + 3)) {
        CHECK(stationary(chain, state) ==
              base * rat_pow(rat_ll(1, q), l_statistic_labeled(state)));
      }
    }
  }
}

TEST_CASE("partition factors split into word and gap parts") {
  ImrjmcChain chain = knutson_chain({1, 1}, 2);
  auto factors = partition_factors(chain);
  REQUIRE(factors.size() == 3);
  CHECK(factors[0] == Rat(3, 2));
  CHECK(factors[1] == Rat(4, 3));
  CHECK(factors[2] == Rat(2));
  CHECK(partition(chain) == Rat(4));
  // the total is 1 / (1 - 1/q)^b
  CHECK(partition(chain) == 1 / rat_pow(1 - Rat(1, 2), 2));
}

TEST_CASE("truncated master equation residuals vanish") {
  ImrjmcChain chain = pair_chain();
  const long long N = 6;
  for (const auto& state : enumerate_states(chain.content, N)) {
    CHECK(master_residual_truncated(chain, state, N) == Rat(0));
  }
  CHECK_THROWS_AS(master_residual_truncated(chain, config("12", {1, 9}), 6),
                  std::invalid_argument);
}

TEST_CASE("stationary law separates into word and position factors") {
  std::vector<int> content{2, 1};
  ProbVec x{{Rat(1, 2), Rat(1, 4), Rat(1, 8), Rat(1, 8)}};
  std::vector<Rat> alpha{Rat(1, 3), Rat(1, 5)};
  ImrjmcChain joint(content, x, alpha);
  IrjmcChain positions(3, x);
  Rat zword = partition(content, alpha);

  auto words = enumerate_multipermutations(content);
  for (const auto& n : enumerate_tuples(3, 6)) {
    Rat row = 0;
    for (const auto& tau : words) {
      Rat p = stationary(joint, LabeledConfig{tau, n});
      CHECK(p == alpha_weight(tau, alpha) / zword * stationary(positions, n));
      row += p;
    }
    CHECK(row == stationary(positions, n));
  }

  // total mass: window up to N plus the analytic tail
  Rat mass = tail_mass_beyond(joint, 6);
  for (const auto& state : enumerate_states(content, 6)) mass += stationary(joint, state);
  CHECK(mass == Rat(1));
}

TEST_CASE("alpha zero freezes the word and mirrors the position chain") {
  ProbVec x{{Rat(1, 2), Rat(1, 3), Rat(1, 6)}};
  ImrjmcChain joint({1, 1}, x, {Rat(0)});
  IrjmcChain positions(2, x);
  for (const auto& n : enumerate_tuples(2, 5)) {
    LabeledConfig state = config("12", n);
    std::map<BallTuple, Rat> projected;
    for (const auto& [succ, p] : step_distribution(joint, state)) {
      CHECK(to_string(succ.tau) == "12");
      projected[succ.n] += p;
    }
    std::map<BallTuple, Rat> reference;
    for (const auto& [succ, p] : step_distribution(positions, n)) reference[succ] += p;
    CHECK(projected == reference);
  }
}

TEST_CASE("zero shift weight mirrors the word chain") {
  ProbVec s{{Rat(1, 3), Rat(2, 3)}};
  std::vector<Rat> alpha{Rat(1, 5)};
  ImrjmcChain joint({1, 1}, ProbVec{{Rat(0), s[0], s[1]}}, alpha);
  MrjmcChain words({1, 1}, s, alpha);
  for (const auto& tau : enumerate_multipermutations(words.content)) {
    std::map<Multipermutation, Rat> projected;
    for (const auto& [succ, p] : step_distribution(joint, LabeledConfig{tau, {1, 2}})) {
      projected[succ.tau] += p;
    }
    std::map<Multipermutation, Rat> reference;
    for (const auto& [succ, p] : step_distribution(words, tau)) reference[succ] += p;
    CHECK(projected == reference);
  }
}

TEST_CASE("degenerate jump weights block the closed form but not stepping") {
  ImrjmcChain chain({1, 1}, ProbVec{{Rat(1, 2), Rat(1, 2), Rat(0)}}, {Rat(1, 5)});
  CHECK_FALSE(chain.proper());
  CHECK_THROWS_AS(stationary(chain, config("12", {1, 2})), DegenerateParameters);
  CHECK_THROWS_AS(partition(chain), DegenerateParameters);
  CHECK(kernel_mass(step_distribution(chain, config("12", {1, 2}))) == Rat(1));
}

TEST_CASE("state enumeration is word major") {
  auto states = enumerate_states({1, 1}, 3);
  REQUIRE(states.size() == 6);
  CHECK(states[0] == config("12", {1, 2}));
  CHECK(states[1] == config("12", {1, 3}));
  CHECK(states[2] == config("12", {2, 3}));
  CHECK(states[3] == config("21", {1, 2}));
  CHECK(states[5] == config("21", {2, 3}));
}

TEST_CASE("sampling is deterministic in the seed") {
  ImrjmcChain chain = pair_chain();
  LabeledConfig init = config("21", {1, 3});
  auto a = sample_run(chain, 40, 99, init);
  auto b = sample_run(chain, 40, 99, init);
  REQUIRE(a.size() == 41);
  CHECK(a == b);
  CHECK(a[0] == init);
  CHECK(sample_run(chain, 40, 100, init) != a);
}

}  // TEST_SUITE
