#include "rjug/numerics.hpp"

#include <charconv>
#include <cstdio>

namespace rjug {

Rat rat_from_string(const std::string& s) {
  if (s.empty()) throw ParseError("rat_from_string: empty string");
  auto slash = s.find('/');
  if (slash != std::string::npos) {
    mpz_class num, den;
    if (num.set_str(s.substr(0, slash), 10) != 0 ||
        den.set_str(s.substr(slash + 1), 10) != 0 || den == 0) {
      throw ParseError("rat_from_string: bad rational '" + s + "'");
    }
    Rat v(num, den);
    v.canonicalize();
    return v;
  }
  auto dot = s.find('.');
  if (dot != std::string::npos) {
    std::string digits = s.substr(0, dot) + s.substr(dot + 1);
    std::size_t frac_len = s.size() - dot - 1;
    bool neg = false;
    if (!digits.empty() && (digits[0] == '-' || digits[0] == '+')) {
      neg = digits[0] == '-';
      digits.erase(0, 1);
    }
    if (digits.empty() || digits.find_first_not_of("0123456789") != std::string::npos) {
      throw ParseError("rat_from_string: bad decimal '" + s + "'");
    }
    mpz_class num(digits, 10);
    if (neg) num = -num;
    mpz_class den;
    mpz_ui_pow_ui(den.get_mpz_t(), 10, frac_len);
    Rat v(num, den);
    v.canonicalize();
    return v;
  }
  mpz_class num;
  if (num.set_str(s, 10) != 0) {
    throw ParseError("rat_from_string: bad integer '" + s + "'");
  }
  return Rat(num);
}

std::string rat_to_string(const Rat& v) {
  if (v.get_den() == 1) return v.get_num().get_str();
  return v.get_num().get_str() + "/" + v.get_den().get_str();
}

std::string double_to_string(double v) {
  char buf[64];
  auto res = std::to_chars(buf, buf + sizeof(buf), v);
  return std::string(buf, res.ptr);
}

Rat rat_pow(const Rat& base, long long e) {
  if (e < 0) throw std::invalid_argument("rat_pow: negative exponent");
  Rat out;
  mpz_pow_ui(mpq_numref(out.get_mpq_t()), mpq_numref(base.get_mpq_t()),
             static_cast<unsigned long>(e));
  mpz_pow_ui(mpq_denref(out.get_mpq_t()), mpq_denref(base.get_mpq_t()),
             static_cast<unsigned long>(e));
  return out;  // base is canonical, so num^e/den^e already is
}

void ProbVec::validate() const {
  if (w.empty()) throw NonDistribution("distribution has no entries");
  Rat total = 0;
  for (const Rat& v : w) {
    if (v < 0) throw NonDistribution("negative weight " + rat_to_string(v));
    total += v;
  }
  if (total != 1) {
    throw NonDistribution("weights sum to " + rat_to_string(total) + ", not 1");
  }
}

PrefixSums prefix_sums(const ProbVec& x) {
  x.validate();
  PrefixSums ps;
  ps.z.reserve(x.size());
  ps.zbar.reserve(x.size());
  Rat run = 0;
  for (const Rat& v : x.w) {
    run += v;
    ps.z.push_back(run);
    ps.zbar.push_back(1 - run);
  }
  return ps;
}

Rat tv_distance(const ProbVec& p, const ProbVec& q) {
  if (p.size() != q.size()) {
    throw IndexMismatch("tv_distance: outcome sets of sizes " +
                        std::to_string(p.size()) + " and " + std::to_string(q.size()));
  }
  Rat total = 0;
  for (std::size_t i = 0; i < p.size(); ++i) {
    total += abs(p.w[i] - q.w[i]);
  }
  return total / 2;
}

namespace {

// SplitMix64 finalizer; decorrelates nearby seeds before they enter mt19937_64.
std::uint64_t mix64(std::uint64_t v) {
  v += 0x9e3779b97f4a7c15ULL;
  v = (v ^ (v >> 30)) * 0xbf58476d1ce4e5b9ULL;
  v = (v ^ (v >> 27)) * 0x94d049bb133111ebULL;
  return v ^ (v >> 31);
}

}  // namespace

Rng::Rng(std::uint64_t seed) : seed_(seed), gen_(mix64(seed)) {}

Rng::Rng(std::uint64_t seed, std::uint64_t derived_state) : seed_(seed), gen_(derived_state) {}

Rng Rng::stream(std::uint64_t stream_id) const {
  return Rng(seed_, mix64(mix64(seed_) ^ mix64(stream_id)));
}

std::uint64_t Rng::next_below(std::uint64_t n) {
  return static_cast<std::uint64_t>(
      (static_cast<unsigned __int128>(gen_()) * n) >> 64);
}

std::size_t sample_index(const ProbVec& dist, Rng& rng) {
  if (dist.size() == 0) throw EmptyDistribution("sample_index: no outcomes");
  double u = rng.next_unit();
  double cum = 0.0;
  std::size_t last_positive = 0;
  bool seen_positive = false;
  for (std::size_t i = 0; i < dist.size(); ++i) {
    if (dist.w[i] > 0) {
      last_positive = i;
      seen_positive = true;
    }
    cum += to_double(dist.w[i]);
    if (u < cum && dist.w[i] > 0) return i;
  }
  if (!seen_positive) throw EmptyDistribution("sample_index: all weights zero");
  return last_positive;
}

}  // namespace rjug
