#pragma once

#include <stdexcept>
#include <string>

namespace csk {

// Malformed input or a violated precondition. The CLI maps this to exit code 2.
class InputError : public std::invalid_argument {
 public:
  explicit InputError(const std::string& what) : std::invalid_argument(what) {}
};

// A computation that could not produce a trustworthy number (collision with an
// atom, underflow guard, non-convergent schedule). The CLI maps this to exit 3.
class NumericError : public std::runtime_error {
 public:
  explicit NumericError(const std::string& what) : std::runtime_error(what) {}
};

}  // namespace csk
