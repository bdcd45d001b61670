#pragma once

#include <stdexcept>
#include <string>

namespace partinf {

// Bad argument or violated precondition.
class InvalidArgument : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

// Exhaustive routine asked to run past its enumeration cap.
class SizeLimitError : public std::length_error {
 public:
  using std::length_error::length_error;
};

// Randomized construction ran out of retries.
class ConstructionFailure : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Iterative numerical routine failed to converge or broke an invariant.
class NumericalFailure : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// File parsing or writing problem. Messages carry the path.
class IoError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

namespace detail {

inline void require(bool cond, const std::string& msg) {
  if (!cond) throw InvalidArgument(msg);
}

}  // namespace detail
}  // namespace partinf
