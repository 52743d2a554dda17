#pragma once

// Arithmetic substrate shared by every chain module.
//
// All verification runs on exact rationals (GMP mpq_class, always canonical:
// lowest terms, positive denominator).  Floating point enters only through
// explicit one-way conversion: simulation draws and the float output mode of
// the CLI.  Nothing ever converts back.

#include <gmpxx.h>

#include <cstdint>
#include <random>
#include <string>
#include <utility>
#include <vector>

#include "rjug/errors.hpp"

namespace rjug {

using Rat = mpq_class;

// Parses "p/q", a decimal string (converted exactly), or a plain integer.
Rat rat_from_string(const std::string& s);

// "p/q" for non-integers, "p" for integers; lowest terms, q > 0.
std::string rat_to_string(const Rat& v);

// Explicit one-way rational -> float64 conversion.
inline double to_double(const Rat& v) { return v.get_d(); }

// Shortest round-trip decimal form of a float64.
std::string double_to_string(double v);

// base^e for e >= 0 (numerator and denominator powered separately).
Rat rat_pow(const Rat& base, long long e);

// Rat from 64-bit integers (the gmpxx constructors stop at long, which this
// code assumes is 64 bits wide).
inline Rat rat_ll(long long num, long long den = 1) {
  static_assert(sizeof(long) == sizeof(long long), "needs an LP64 target");
  if (den == 0) throw std::invalid_argument("rat_ll: zero denominator");
  Rat r(mpz_class(static_cast<long>(num)), mpz_class(static_cast<long>(den)));
  r.canonicalize();
  return r;
}

// Dense finite probability vector: outcome i carries weight w[i].
struct ProbVec {
  std::vector<Rat> w;

  ProbVec() = default;
  explicit ProbVec(std::vector<Rat> weights) : w(std::move(weights)) {}

  std::size_t size() const { return w.size(); }
  const Rat& operator[](std::size_t i) const { return w[i]; }

  // Throws NonDistribution unless all weights >= 0 and they sum to exactly 1.
  void validate() const;
};

// Cumulative sums z_i = x_0 + ... + x_i and complements zbar_i = 1 - z_i.
struct PrefixSums {
  std::vector<Rat> z;
  std::vector<Rat> zbar;

  std::size_t size() const { return z.size(); }
};

PrefixSums prefix_sums(const ProbVec& x);

// Total variation distance (1/2) * sum |p_i - q_i|; requires equal supports.
Rat tv_distance(const ProbVec& p, const ProbVec& q);

// Seeded 64-bit generator (std::mt19937_64: portable, bit-reproducible).
// Independent streams are derived from (master seed, stream id) so that
// concurrent samplers never share a generator.
class Rng {
 public:
  explicit Rng(std::uint64_t seed);

  std::uint64_t seed() const { return seed_; }

  // Derived generator for a named substream of this seed.
  Rng stream(std::uint64_t stream_id) const;

  std::uint64_t next_u64() { return gen_(); }

  // Uniform draw in [0, 1) with 53 random bits.
  double next_unit() { return static_cast<double>(gen_() >> 11) * 0x1.0p-53; }

  // Uniform draw in [0, n) via multiply-shift (deterministic, unbiased to
  // within 2^-64 which is far below every statistical tolerance used here).
  std::uint64_t next_below(std::uint64_t n);

 private:
  Rng(std::uint64_t seed, std::uint64_t derived_state);

  std::uint64_t seed_;
  std::mt19937_64 gen_;
};

// Inverse-CDF draw over the entries of dist in stored order.
std::size_t sample_index(const ProbVec& dist, Rng& rng);

// A finite exact distribution over successor states, sorted by state.
template <class State>
using Kernel = std::vector<std::pair<State, Rat>>;

// Inverse-CDF draw over kernel entries in stored order (by converted weight).
template <class State>
const State& sample_kernel(const Kernel<State>& kernel, Rng& rng) {
  if (kernel.empty()) throw EmptyDistribution("sample_kernel: no outcomes");
  double u = rng.next_unit();
  double cum = 0.0;
  for (const auto& [state, w] : kernel) {
    cum += to_double(w);
    if (u < cum) return state;
  }
  return kernel.back().first;
}

template <class State>
Rat kernel_mass(const Kernel<State>& kernel) {
  Rat total = 0;
  for (const auto& [state, w] : kernel) total += w;
  return total;
}

}  // namespace rjug
