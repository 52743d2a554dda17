#pragma once

#include <stdexcept>
#include <string>

namespace rjug {

// Input vector is not a probability distribution (negative weight or bad sum).
struct NonDistribution : std::invalid_argument {
  explicit NonDistribution(const std::string& what) : std::invalid_argument(what) {}
};

struct EmptyDistribution : std::invalid_argument {
  explicit EmptyDistribution(const std::string& what) : std::invalid_argument(what) {}
};

// Two distributions indexed over different outcome sets were compared.
struct IndexMismatch : std::invalid_argument {
  explicit IndexMismatch(const std::string& what) : std::invalid_argument(what) {}
};

// An exact dense-matrix operation was requested on a state space above the cap.
struct StateSpaceTooLarge : std::runtime_error {
  explicit StateSpaceTooLarge(const std::string& what) : std::runtime_error(what) {}
};

// Parameters violate the conditions a closed-form expression assumes
// (e.g. a zero tail probability that makes the chain non-recurrent).
struct DegenerateParameters : std::invalid_argument {
  explicit DegenerateParameters(const std::string& what) : std::invalid_argument(what) {}
};

// alpha vector too short for the inversion statistics of the requested word.
struct InsufficientAlphas : std::invalid_argument {
  explicit InsufficientAlphas(const std::string& what) : std::invalid_argument(what) {}
};

// Balance system has no unique normalized solution (reducible kernel).
struct SingularSystem : std::runtime_error {
  explicit SingularSystem(const std::string& what) : std::runtime_error(what) {}
};

// A state was fed to a chain with a different multiset of labels.
struct ContentMismatch : std::invalid_argument {
  explicit ContentMismatch(const std::string& what) : std::invalid_argument(what) {}
};

struct ParseError : std::invalid_argument {
  explicit ParseError(const std::string& what) : std::invalid_argument(what) {}
};

}  // namespace rjug
