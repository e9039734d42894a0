#pragma once

#include <stdexcept>
#include <string>

namespace artauth {

/// Bad input: malformed files, violated preconditions, schema mismatches.
/// The CLI maps this to exit code 1.
class InputError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Numerical failure such as solver non-convergence. CLI exit code 2.
class NumericalError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace artauth
