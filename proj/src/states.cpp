#include "rjug/states.hpp"

#include <algorithm>
#include <numeric>
#include <sstream>

namespace rjug {

std::vector<BinaryWord> enumerate_binary_words(int m, int b) {
  if (m < 0 || b < 0 || b > m) {
    throw std::invalid_argument("enumerate_binary_words: need 0 <= b <= m");
  }
  std::vector<BinaryWord> out;
  BinaryWord cur(m, 0);
  // Lexicographic = counting in binary while pruning branches over the cap.
  auto rec = [&](auto&& self, int pos, int ones) -> void {
    if (pos == m) {
      out.push_back(cur);
      return;
    }
    cur[pos] = 0;
    self(self, pos + 1, ones);
    if (ones < b) {
      cur[pos] = 1;
      self(self, pos + 1, ones + 1);
      cur[pos] = 0;
    }
  };
  rec(rec, 0, 0);
  return out;
}

BallTuple ones_positions(const BinaryWord& w) {
  BallTuple n;
  for (std::size_t i = 0; i < w.size(); ++i) {
    if (w[i]) n.push_back(static_cast<long long>(i) + 1);
  }
  return n;
}

BinaryWord word_from_positions(int m, const BallTuple& n) {
  BinaryWord w(m, 0);
  for (long long p : n) {
    if (p < 1 || p > m) throw std::invalid_argument("word_from_positions: position out of range");
    w[p - 1] = 1;
  }
  return w;
}

std::vector<int> code(const Multipermutation& tau) {
  const auto& t = tau.word;
  std::vector<int> c(t.size(), 0);
  for (std::size_t i = 0; i < t.size(); ++i) {
    for (std::size_t k = i + 1; k < t.size(); ++k) {
      if (t[i] > t[k]) ++c[i];
    }
  }
  return c;
}

Rat alpha_weight(const Multipermutation& tau, const std::vector<Rat>& alpha) {
  std::vector<int> c = code(tau);
  int cmax = c.empty() ? 0 : *std::max_element(c.begin(), c.end());
  if (cmax > static_cast<int>(alpha.size())) {
    throw InsufficientAlphas("alpha_weight: word needs alpha_1..alpha_" +
                             std::to_string(cmax) + ", got " +
                             std::to_string(alpha.size()));
  }
  Rat w = 1;
  for (int ci : c) {
    for (int j = 0; j < ci; ++j) w *= alpha[j];
  }
  return w;
}

long long inversions(const Multipermutation& tau) {
  long long total = 0;
  for (int ci : code(tau)) total += ci;
  return total;
}

long long l_statistic_word(const BinaryWord& w) {
  long long total = 0;
  long long k = 0;
  for (long long p : ones_positions(w)) {
    ++k;
    total += p - k;
  }
  return total;
}

long long l_statistic_labeled(const LabeledConfig& c) {
  long long total = inversions(c.tau);
  for (std::size_t i = 0; i < c.n.size(); ++i) {
    total += c.n[i] - static_cast<long long>(i + 1);
  }
  return total;
}

std::vector<Multipermutation> enumerate_multipermutations(const std::vector<int>& content) {
  long long b = std::accumulate(content.begin(), content.end(), 0LL);
  if (content.empty() || b < 1) {
    throw std::invalid_argument("enumerate_multipermutations: empty content");
  }
  std::vector<int> word;
  for (std::size_t letter = 0; letter < content.size(); ++letter) {
    if (content[letter] < 0) throw std::invalid_argument("negative content entry");
    word.insert(word.end(), content[letter], static_cast<int>(letter) + 1);
  }
  std::vector<Multipermutation> out;
  do {
    out.push_back(Multipermutation{word, content});
  } while (std::next_permutation(word.begin(), word.end()));
  return out;
}

std::vector<int> content_of(const std::vector<int>& word) {
  int maxletter = 0;
  for (int v : word) {
    if (v < 1) throw std::invalid_argument("content_of: letters must be >= 1");
    maxletter = std::max(maxletter, v);
  }
  std::vector<int> content(maxletter, 0);
  for (int v : word) ++content[v - 1];
  return content;
}

Multipermutation make_multipermutation(std::vector<int> word) {
  std::vector<int> content = content_of(word);
  return Multipermutation{std::move(word), std::move(content)};
}

std::string to_string(const BinaryWord& w) {
  std::string s;
  s.reserve(w.size());
  for (auto bit : w) s.push_back(bit ? '1' : '0');
  return s;
}

std::string to_string(const BallTuple& n) {
  std::ostringstream os;
  os << '(';
  for (std::size_t i = 0; i < n.size(); ++i) {
    if (i) os << ',';
    os << n[i];
  }
  os << ')';
  return os.str();
}

namespace {

std::string letters_to_string(const std::vector<int>& word) {
  bool compact = std::all_of(word.begin(), word.end(), [](int v) { return v <= 9; });
  std::ostringstream os;
  for (std::size_t i = 0; i < word.size(); ++i) {
    if (!compact && i) os << ',';
    os << word[i];
  }
  return os.str();
}

}  // namespace

std::string to_string(const Multipermutation& tau) { return letters_to_string(tau.word); }

std::string to_string(const LabeledConfig& c) {
  return to_string(c.tau) + "@" + to_string(c.n);
}

std::string to_string(const EnrichedWord& w) { return letters_to_string(w); }

BinaryWord binary_word_from_string(const std::string& s) {
  BinaryWord w;
  w.reserve(s.size());
  for (char ch : s) {
    if (ch != '0' && ch != '1') throw ParseError("binary word: bad character");
    w.push_back(ch == '1');
  }
  return w;
}

std::vector<int> letters_from_string(const std::string& s) {
  std::vector<int> word;
  if (s.find(',') != std::string::npos) {
    std::istringstream is(s);
    std::string part;
    while (std::getline(is, part, ',')) {
      word.push_back(std::stoi(part));
    }
  } else {
    for (char ch : s) {
      if (ch < '1' || ch > '9') throw ParseError("letters: bad character");
      word.push_back(ch - '0');
    }
  }
  return word;
}

}  // namespace rjug
