#include "doctest.h"

#include <map>

#include "rjug/errors.hpp"
#include "rjug/irjmc.hpp"
#include "rjug/rjmc.hpp"

using namespace rjug;

namespace {

IrjmcChain small_chain() {
  return IrjmcChain(3, ProbVec{{Rat(1, 2), Rat(1, 4), Rat(1, 8), Rat(1, 8)}});
}

}  // namespace

TEST_SUITE("irjmc") {

TEST_CASE("construction validates the weight vector") {
  CHECK_THROWS_AS(IrjmcChain(2, ProbVec{{Rat(1, 2), Rat(1, 2)}}), NonDistribution);
  IrjmcChain transient(1, ProbVec{{Rat(1), Rat(0)}});
  CHECK_FALSE(transient.recurrent());
  CHECK(small_chain().recurrent());
}

TEST_CASE("one step from the packed state") {
  IrjmcChain chain = small_chain();
  auto k = step_distribution(chain, BallTuple{1, 2, 3});
  CHECK(kernel_mass(k) == Rat(1));
  std::map<BallTuple, Rat> got(k.begin(), k.end());
  CHECK(got.at(BallTuple{2, 3, 4}) == Rat(1, 2));   // pure shift
  CHECK(got.at(BallTuple{1, 3, 4}) == Rat(1, 4));   // first ball jumps
  CHECK(got.at(BallTuple{1, 2, 4}) == Rat(1, 8));   // second ball jumps
  CHECK(got.at(BallTuple{1, 2, 3}) == Rat(1, 8));   // last ball jumps
}

TEST_CASE("states must be strictly increasing and positive") {
  IrjmcChain chain = small_chain();
  CHECK_THROWS_AS(step_distribution(chain, BallTuple{2, 2, 3}), std::invalid_argument);
  CHECK_THROWS_AS(step_distribution(chain, BallTuple{0, 1, 2}), std::invalid_argument);
  CHECK_THROWS_AS(step_distribution(chain, BallTuple{1, 2}), std::invalid_argument);
}

TEST_CASE("stationary law satisfies the master equation on a window") {
  IrjmcChain chain = small_chain();
  for (const auto& n : enumerate_tuples(3, 8)) {
    CHECK(master_residual_truncated(chain, n, 8) == Rat(0));
  }
  CHECK_THROWS_AS(master_residual_truncated(chain, BallTuple{1, 2, 9}, 8),
                  std::invalid_argument);
}

TEST_CASE("window mass plus analytic tail is exactly one") {
  for (int b = 1; b <= 3; ++b) {
    std::vector<Rat> w(static_cast<std::size_t>(b), Rat(1, 2 * b));
    w.push_back(Rat(1, 2));
    IrjmcChain chain(b, ProbVec{w});
    Rat mass = 0;
    for (const auto& n : enumerate_tuples(b, 20)) mass += stationary(chain, n);
    CHECK(mass + tail_mass_beyond(chain, 20) == Rat(1));
  }
}

TEST_CASE("geometric weights have the frozen form") {
  ProbVec x = knutson_weights(3, 4);
  REQUIRE(x.size() == 5);
  CHECK(x[0] == Rat(1, 81));
  CHECK(x[1] == Rat(2, 81));
  CHECK(x[2] == Rat(2, 27));
  CHECK(x[3] == Rat(2, 9));
  CHECK(x[4] == Rat(2, 3));
}

TEST_CASE("geometric stationary law is an l-statistic power law") {
  for (long long q : {2LL, 3LL}) {
    for (int b = 1; b <= 3; ++b) {
      IrjmcChain chain(b, knutson_weights(q, b));
      Rat pref = 1;
      for (int i = 1; i <= b; ++i) pref *= 1 - rat_pow(rat_ll(1, q), i);
      for (const auto& n : enumerate_tuples(b, 7)) {
        long long ell = 0;
        for (int i = 0; i < b; ++i) ell += n[static_cast<std::size_t>(i)] - (i + 1);
        CHECK(stationary(chain, n) == rat_pow(rat_ll(1, q), ell) * pref);
      }
    }
  }
}

TEST_CASE("partition factors multiply to the partition function") {
  IrjmcChain chain(3, knutson_weights(3, 3));
  auto factors = partition_factors(chain);
  REQUIRE(factors.size() == 3);
  CHECK(factors[0] == Rat(27, 26));
  CHECK(factors[1] == Rat(9, 8));
  CHECK(factors[2] == Rat(3, 2));
  CHECK(partition(chain) == Rat(729, 416));
}

TEST_CASE("degenerate tail weight blocks the closed form but not stepping") {
  IrjmcChain chain(2, ProbVec{{Rat(1, 2), Rat(1, 2), Rat(0)}});
  CHECK_THROWS_AS(stationary(chain, BallTuple{1, 2}), DegenerateParameters);
  CHECK_THROWS_AS(partition(chain), DegenerateParameters);
  auto k = step_distribution(chain, BallTuple{1, 2});
  CHECK(kernel_mass(k) == Rat(1));
}

TEST_CASE("finite window marginal matches the windowed chain") {
  // the m-cell chain is the window projection of the infinite chain
  IrjmcChain inf = small_chain();
  for (int m : {4, 5, 6}) {
    RjmcChain win(m, 3, inf.x);
    Rat total = 0;
    for (const auto& w : enumerate_binary_words(m, 3)) {
      CHECK(window_marginal(inf, w) == stationary(win, w));
      total += window_marginal(inf, w);
    }
    CHECK(total == Rat(1));
  }
}

TEST_CASE("tuple enumeration is lexicographic and complete") {
  auto tuples = enumerate_tuples(2, 4);
  REQUIRE(tuples.size() == 6);
  CHECK(tuples.front() == BallTuple{1, 2});
  CHECK(tuples.back() == BallTuple{3, 4});
}

TEST_CASE("seeded runs are reproducible") {
  IrjmcChain chain = small_chain();
  auto run1 = sample_run(chain, 50, 99, BallTuple{1, 2, 3});
  auto run2 = sample_run(chain, 50, 99, BallTuple{1, 2, 3});
  REQUIRE(run1.size() == 51);
  CHECK(run1 == run2);
  CHECK(run1.front() == BallTuple{1, 2, 3});
  auto run3 = sample_run(chain, 50, 100, BallTuple{1, 2, 3});
  CHECK(run1 != run3);
}

}  // TEST_SUITE
