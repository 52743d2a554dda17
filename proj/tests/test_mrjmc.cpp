#include "doctest.h"

#include <map>

#include "rjug/errors.hpp"
#include "rjug/mrjmc.hpp"
#include "rjug/oracle.hpp"

using namespace rjug;

namespace {

MrjmcChain three_chain(Rat a1 = Rat(1, 2), Rat a2 = Rat(1, 3)) {
  return MrjmcChain({1, 1, 1}, ProbVec{{Rat(1, 3), Rat(1, 3), Rat(1, 3)}}, {a1, a2});
}

// Sum of bumping-path weights from tau' at start t that land on target.
Rat path_mass(const Multipermutation& src, int t, const std::vector<Rat>& alpha,
              const Multipermutation& target) {
  Rat total = 0;
  for (const auto& path : bump_paths(src, t, alpha)) {
    if (path.result == target) total += path.prob;
  }
  return total;
}

}  // namespace

TEST_SUITE("mrjmc") {

TEST_CASE("construction checks shapes and ranges") {
  CHECK_THROWS_AS(MrjmcChain({1, 1}, ProbVec{{Rat(1)}}, {Rat(1, 2)}),
                  std::invalid_argument);
  CHECK_THROWS_AS(MrjmcChain({-1, 3}, ProbVec{{Rat(1, 2), Rat(1, 2)}}, {Rat(1, 2)}),
                  std::invalid_argument);
  CHECK_THROWS_AS(MrjmcChain({1, 1, 1}, ProbVec{{Rat(1, 3), Rat(1, 3), Rat(1, 3)}},
                             {Rat(1, 2)}),
                  InsufficientAlphas);
  MrjmcChain frozen({1, 1}, ProbVec{{Rat(1), Rat(0)}}, {Rat(1, 2)});
  CHECK(frozen.proper() == false);
}

TEST_CASE("bump path weights from one start form a distribution") {
  std::vector<Rat> alpha{Rat(1, 2), Rat(1, 3), Rat(1, 5), Rat(1, 7)};
  for (const auto& content : {std::vector<int>{1, 1, 1}, std::vector<int>{2, 2, 1}}) {
    for (const auto& tau : enumerate_multipermutations(content)) {
      int b = static_cast<int>(tau.word.size());
      for (int t = 1; t <= b; ++t) {
        Rat total = 0;
        for (const auto& path : bump_paths(tau, t, alpha)) {
          total += path.prob;
          CHECK(path.start == t);
          CHECK(path.result.content == tau.content);
        }
        CHECK(total == Rat(1));
      }
    }
  }
}

TEST_CASE("the eight-letter worked transition") {
  // moving the ball in cell 7 of 12132131 can produce 12213311 by bumping in
  // 5 and then 1, with weight a2(1-a3) a3(1-a4)
  std::vector<Rat> alpha{Rat(1, 2), Rat(1, 3),  Rat(1, 5),
                         Rat(1, 7), Rat(1, 11), Rat(1, 13)};
  Multipermutation src = make_multipermutation(letters_from_string("12132131"));
  Multipermutation dst = make_multipermutation(letters_from_string("12213311"));
  Rat expect = alpha[1] * (1 - alpha[2]) * alpha[2] * (1 - alpha[3]);
  CHECK(path_mass(src, 7, alpha, dst) == expect);
}

TEST_CASE("nine-letter refined flow groups match the worked values") {
  // target 213132141 with moves starting in cell 8: grouping incoming flow by
  // the final hop position r gives four closed-form factors
  std::vector<int> content{4, 2, 2, 1};
  std::vector<Rat> alpha;
  for (int i = 1; i <= 8; ++i) alpha.push_back(Rat(1, i + 1));
  Multipermutation tau = make_multipermutation(letters_from_string("213132141"));
  REQUIRE(tau.content == content);
  CHECK(alpha_weight(tau, alpha) ==
        rat_pow(alpha[0], 5) * rat_pow(alpha[1], 4) * rat_pow(alpha[2], 3) *
            rat_pow(alpha[3], 2));

  const int t = 8;
  std::map<int, Rat> flow_by_r;
  for (const auto& src : enumerate_multipermutations(content)) {
    for (const auto& path : bump_paths(src, t, alpha)) {
      if (path.result != tau) continue;
      int r = path.bumps.empty() ? path.start : path.bumps.back();
      flow_by_r[r] += alpha_weight(src, alpha) * path.prob;
    }
  }

  Rat ac = alpha_weight(tau, alpha);
  std::map<int, Rat> expected{
      {8, ac * alpha[1] * alpha[3] * alpha[4]},
      {7, ac * (1 - alpha[1]) * alpha[3] * alpha[4]},
      {4, ac * (1 - alpha[3]) * alpha[4]},
      {2, ac * (1 - alpha[4])},
  };
  CHECK(flow_by_r == expected);

  // the closed-form helpers carry the extra start weight s_t = 1/9
  MrjmcChain chain(content, ProbVec{std::vector<Rat>(9, Rat(1, 9))}, alpha);
  CHECK(refined_flow_start(chain, tau, t) == ac * Rat(1, 9));
  for (const auto& [r, v] : expected) {
    CHECK(refined_flow_final_hop(chain, tau, t, r) == v * Rat(1, 9));
    RefineResiduals res = verify_refine_lemmas(chain, tau, t, r);
    CHECK(res.start_group == Rat(0));
    CHECK(res.last_jump_group == Rat(0));
  }
}

TEST_CASE("step distribution is stochastic and content preserving") {
  MrjmcChain chain = three_chain();
  for (const auto& tau : enumerate_multipermutations(chain.content)) {
    auto k = step_distribution(chain, tau);
    CHECK(kernel_mass(k) == Rat(1));
    for (const auto& [succ, p] : k) {
      CHECK(p > 0);
      CHECK(succ.content == chain.content);
    }
  }
  CHECK_THROWS_AS(step_distribution(chain, make_multipermutation({1, 2})),
                  ContentMismatch);
}

TEST_CASE("six-state stationary table") {
  MrjmcChain chain = three_chain();
  std::map<std::string, Rat> expect{{"123", Rat(2, 5)},  {"132", Rat(1, 5)},
                                    {"213", Rat(1, 5)},  {"231", Rat(1, 10)},
                                    {"312", Rat(1, 15)}, {"321", Rat(1, 30)}};
  for (const auto& tau : enumerate_multipermutations(chain.content)) {
    CHECK(stationary(chain, tau) == expect.at(to_string(tau)));
  }
}

TEST_CASE("stationary law does not depend on the start weights") {
  std::vector<Rat> alpha{Rat(2, 7), Rat(3, 5)};
  MrjmcChain uniform({1, 1, 1}, ProbVec{{Rat(1, 3), Rat(1, 3), Rat(1, 3)}}, alpha);
  MrjmcChain skewed({1, 1, 1}, ProbVec{{Rat(1, 8), Rat(1, 8), Rat(3, 4)}}, alpha);
  auto words = enumerate_multipermutations(uniform.content);

  for (const auto& tau : words) {
    CHECK(stationary(uniform, tau) == stationary(skewed, tau));
  }
  // and the balance solve of each kernel lands on the same vector
  for (const MrjmcChain* chain : {&uniform, &skewed}) {
    DenseKernel M = build_matrix(
        words, [&](const Multipermutation& t) { return step_distribution(*chain, t); },
        [](const Multipermutation& t) { return to_string(t); });
    auto pi = solve_stationary(M);
    for (std::size_t i = 0; i < words.size(); ++i) {
      CHECK(pi[i] == stationary(uniform, words[i]));
    }
  }
}

TEST_CASE("kernel does not stabilize after finitely many steps") {
  // unlike the single-species window chain, squaring keeps changing the
  // matrix (no finite-step convergence here)
  MrjmcChain chain = three_chain();
  auto words = enumerate_multipermutations(chain.content);
  DenseKernel M = build_matrix(
      words, [&](const Multipermutation& t) { return step_distribution(chain, t); },
      [](const Multipermutation& t) { return to_string(t); });
  PowerCheck pc = matrix_power_check(M, 3);
  CHECK_FALSE(pc.idempotent_at_k);
}

TEST_CASE("partition function factors and value") {
  std::vector<Rat> alpha{Rat(1, 2), Rat(1, 3)};
  auto factors = partition_factors({1, 1, 1}, alpha);
  REQUIRE(factors.size() == 2);
  CHECK(factors[0] == Rat(3, 2));
  CHECK(factors[1] == Rat(5, 3));
  CHECK(partition({1, 1, 1}, alpha) == Rat(5, 2));
  CHECK(partition({1, 1}, {Rat(1, 7)}) == Rat(8, 7));
}

TEST_CASE("partition recursion equals the brute-force weight sum") {
  std::vector<Rat> alpha{Rat(1, 3), Rat(2, 5), Rat(1, 7), Rat(3, 4)};
  for (const auto& content :
       {std::vector<int>{2, 1}, std::vector<int>{1, 2}, std::vector<int>{2, 2},
        std::vector<int>{1, 1, 1}, std::vector<int>{2, 1, 2}}) {
    int b = 0;
    for (int c : content) b += c;
    std::vector<Rat> a(alpha.begin(), alpha.begin() + (b - content.back()));
    Rat brute = 0;
    for (const auto& tau : enumerate_multipermutations(content)) {
      brute += alpha_weight(tau, a);
    }
    CHECK(partition(content, a) == brute);
  }
}

TEST_CASE("distinct-letter partition telescopes into ascending sums") {
  std::vector<Rat> alpha{Rat(1, 2), Rat(1, 3), Rat(1, 5)};
  auto factors = partition_factors({1, 1, 1, 1}, alpha);
  REQUIRE(factors.size() == 3);
  CHECK(factors[0] == 1 + alpha[0]);
  CHECK(factors[1] == 1 + alpha[0] + alpha[0] * alpha[1]);
  CHECK(factors[2] == 1 + alpha[0] + alpha[0] * alpha[1] + alpha[0] * alpha[1] * alpha[2]);
}

TEST_CASE("two-letter projections decompose the weight multiplicatively") {
  Multipermutation tau = make_multipermutation(letters_from_string("3142414232"));
  auto parts = phi_decompose(tau);
  REQUIRE(parts.size() == 3);
  CHECK(to_string(parts[0]) == "12122");
  CHECK(to_string(parts[1]) == "2111121");
  CHECK(to_string(parts[2]) == "1121212111");

  std::vector<Rat> alpha{Rat(1, 2), Rat(1, 3), Rat(1, 5), Rat(1, 7), Rat(1, 11)};
  Rat prod = 1;
  for (const auto& part : parts) prod *= alpha_weight(part, alpha);
  CHECK(prod == alpha_weight(tau, alpha));
}

TEST_CASE("refined balance residuals vanish on small chains") {
  for (const auto& content : {std::vector<int>{1, 1, 1}, std::vector<int>{2, 1}}) {
    int b = 0;
    for (int c : content) b += c;
    std::vector<Rat> alpha;
    for (int i = 1; i <= b - content.back(); ++i) alpha.push_back(Rat(1, i + 2));
    MrjmcChain chain(content, ProbVec{std::vector<Rat>(b, Rat(1, b))}, alpha);
    for (const auto& tau : enumerate_multipermutations(content)) {
      for (int t = 1; t <= b; ++t) {
        for (int r = 1; r <= t; ++r) {
          RefineResiduals res = verify_refine_lemmas(chain, tau, t, r);
          CHECK(res.start_group == Rat(0));
          CHECK(res.last_jump_group == Rat(0));
        }
      }
    }
  }
}

TEST_CASE("degenerate parameters block the closed form but not stepping") {
  MrjmcChain frozen({1, 1}, ProbVec{{Rat(1), Rat(0)}}, {Rat(1, 2)});
  CHECK_THROWS_AS(stationary(frozen, make_multipermutation({1, 2})),
                  DegenerateParameters);
  CHECK(kernel_mass(step_distribution(frozen, make_multipermutation({2, 1}))) == Rat(1));
}

}  // TEST_SUITE
