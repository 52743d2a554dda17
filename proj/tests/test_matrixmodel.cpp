#include "doctest.h"

#include <map>

#include "rjug/errors.hpp"
#include "rjug/matrixmodel.hpp"

using namespace rjug;

namespace {

// Worked four-row matrix over F_3 whose rank jumps at columns 1, 2, 4, 7.
MatrixState worked_rank_state() {
  MatrixState s;
  s.q = 3;
  s.b = 4;
  s.cols = {{1, 0, 0, 0}, {2, 0, 1, 0}, {0, 0, 2, 0}, {0, 1, 0, 0},
            {0, 1, 2, 0}, {2, 1, 0, 0}, {0, 0, 1, 2}};
  return s;
}

// Worked four-row matrix over F_3 with pivots 1324 at columns 1, 2, 4, 5.
MatrixState worked_label_state() {
  MatrixState s;
  s.q = 3;
  s.b = 4;
  s.cols = {{1, 0, 0, 0}, {0, 0, 1, 0}, {1, 0, 2, 0}, {0, 1, 0, 0}, {0, 0, 0, 1}};
  return s;
}

void prepend(MatrixState& s, std::vector<int> col) {
  s.cols.insert(s.cols.begin(), std::move(col));
}

}  // namespace

TEST_SUITE("matrixmodel") {

TEST_CASE("initial state validates its parameters") {
  MatrixState s = initial_state(3, 5);
  CHECK(s.b == 3);
  CHECK(s.q == 5);
  CHECK(s.cols.empty());
  CHECK_THROWS_AS(initial_state(0, 5), std::invalid_argument);
  CHECK_THROWS_AS(initial_state(3, 4), std::invalid_argument);
  CHECK_THROWS_AS(initial_state(3, 1), std::invalid_argument);
}

TEST_CASE("rank increase positions of the worked matrix") {
  MatrixState s = worked_rank_state();
  CHECK(rank_increase_positions(s) == BallTuple{1, 2, 4, 7});

  // a new column dependent on nothing above row 2 sends ball 3 to the front
  prepend(s, {0, 1, 2, 0});
  CHECK(rank_increase_positions(s) == BallTuple{1, 2, 3, 8});
  CHECK(pivot_labels(s).tau.word == std::vector<int>{2, 1, 3, 4});
}

TEST_CASE("pivot labels of the worked matrix") {
  MatrixState s = worked_label_state();
  LabeledConfig before = pivot_labels(s);
  CHECK(before.tau.word == std::vector<int>{1, 3, 2, 4});
  CHECK(before.n == BallTuple{1, 2, 4, 5});

  // the new column starts a bumping path: 4 bumps 3, 3 bumps 1
  prepend(s, {1, 0, 1, 1});
  LabeledConfig after = pivot_labels(s);
  CHECK(after.tau.word == std::vector<int>{1, 3, 4, 2});
  CHECK(after.n == BallTuple{1, 2, 3, 5});
}

TEST_CASE("columns inside the span never become pivots") {
  MatrixState s = worked_label_state();
  PivotData p = pivot_scan(s);
  // tack redundant columns onto the right: every read-out is unchanged
  s.cols.push_back({1, 0, 0, 0});
  s.cols.push_back({2, 2, 2, 2});
  s.cols.push_back({0, 0, 0, 0});
  PivotData q = pivot_scan(s);
  CHECK(q.positions == p.positions);
  CHECK(q.labels == p.labels);
}

TEST_CASE("prepended columns are uniform over the column space") {
  Rng rng(2026);
  std::map<std::vector<int>, long long> counts;
  const long long draws = 18000;
  for (long long i = 0; i < draws; ++i) {
    MatrixState s = initial_state(2, 3);
    s = prepend_random_column(s, rng);
    REQUIRE(s.cols.size() == 1);
    ++counts[s.cols[0]];
  }
  REQUIRE(counts.size() == 9);
  // expected 2000 per pattern, binomial sd ~ 42; allow four sigma
  for (const auto& [col, c] : counts) {
    CHECK(c > 2000 - 170);
    CHECK(c < 2000 + 170);
  }
}

TEST_CASE("the growing matrix keeps a bounded working width") {
  Rng rng(7);
  MatrixState s = initial_state(2, 2);
  for (int i = 0; i < 300; ++i) {
    s = prepend_random_column(s, rng);
    BallTuple pos = rank_increase_positions(s);
    if (!pos.empty()) {
      CHECK(static_cast<long long>(s.cols.size()) <= pos.back() + 64);
    }
  }
  CHECK(rank_increase_positions(s).size() == 2);
}

TEST_CASE("projection statistics stay within binomial noise") {
  ProjectionReport report = empirical_projection_check(2, 2, 10000, 5);
  CHECK(report.b == 2);
  CHECK(report.q == 2);
  CHECK(report.steps == 10000);
  CHECK(report.classified_steps > 9900);
  CHECK_FALSE(report.unexpected_transition);
  REQUIRE(report.first_projection.size() == 3);
  long long classified = 0;
  for (const auto& mc : report.first_projection) classified += mc.count;
  CHECK(classified == report.classified_steps);
  CHECK(report.all_within(4.0));

  CHECK_THROWS_AS(empirical_projection_check(2, 2, 9999, 5), std::invalid_argument);
}

}  // TEST_SUITE
