#pragma once

// State representations for the four chains, with the combinatorial
// statistics their stationary laws are written in.
//
// Conventions used throughout the library:
//   - positions are 1-indexed;
//   - enumerated state spaces are in lexicographic order, and that order
//     defines matrix row/column indices everywhere.

#include <compare>
#include <cstdint>
#include <string>
#include <vector>

#include "rjug/numerics.hpp"

namespace rjug {

// Length-m 0/1 word; the enclosing chain carries the ball cap b.
using BinaryWord = std::vector<std::uint8_t>;

// Strictly increasing tuple of occupied positions, 1-based.
using BallTuple = std::vector<long long>;

// Word over {1, ..., b+1}; symbol values are jump choices, not ball labels.
using EnrichedWord = std::vector<int>;

// Arrangement of the multiset {1^{content[0]}, ..., T^{content[T-1]}}.
struct Multipermutation {
  std::vector<int> word;
  std::vector<int> content;

  auto operator<=>(const Multipermutation&) const = default;
};

// Multipermutation plus the strictly increasing positions its balls occupy.
struct LabeledConfig {
  Multipermutation tau;
  BallTuple n;

  auto operator<=>(const LabeledConfig&) const = default;
};

// All length-m words with at most b ones, lexicographic. Throws if b > m.
std::vector<BinaryWord> enumerate_binary_words(int m, int b);

// Increasing 1-based positions of the ones.
BallTuple ones_positions(const BinaryWord& w);

// Inverse of ones_positions for a word of length m.
BinaryWord word_from_positions(int m, const BallTuple& n);

// c_i = #{k > i : word_i > word_k}, strict inversions to the right.
std::vector<int> code(const Multipermutation& tau);

// Product over i of alpha_1 * ... * alpha_{c_i} (empty product = 1).
Rat alpha_weight(const Multipermutation& tau, const std::vector<Rat>& alpha);

// #{(i, j) : i < j, word_i > word_j}; equals the sum of the code.
long long inversions(const Multipermutation& tau);

// #{(i, j) : i < j, w_i = 0, w_j = 1}; equals sum_k (n_k - k).
long long l_statistic_word(const BinaryWord& w);

// inversions(tau) + sum_i (n_i - i).
long long l_statistic_labeled(const LabeledConfig& c);

// All distinct arrangements of the content multiset, lexicographic.
std::vector<Multipermutation> enumerate_multipermutations(const std::vector<int>& content);

// Letter counts of a word over {1, ..., max letter}.
std::vector<int> content_of(const std::vector<int>& word);

// Builds a multipermutation from a word, deriving and checking its content.
Multipermutation make_multipermutation(std::vector<int> word);

std::string to_string(const BinaryWord& w);
std::string to_string(const BallTuple& n);
std::string to_string(const Multipermutation& tau);
std::string to_string(const LabeledConfig& c);
std::string to_string(const EnrichedWord& w);

BinaryWord binary_word_from_string(const std::string& s);
std::vector<int> letters_from_string(const std::string& s);

}  // namespace rjug
