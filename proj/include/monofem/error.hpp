#pragma once

#include <stdexcept>
#include <string>

namespace monofem {

/// Invalid input: malformed geometry, files, configuration or arguments.
class InputError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// A numerical procedure failed (non-convergence, indefinite operator, non-finite data).
class NumericalError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace monofem
