#pragma once

#include <stdexcept>

namespace harnack {

/// Precondition violation in caller-supplied data (bad dimension, range, file).
class InvalidInput : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// A numerical procedure did not reach its accuracy target.
class NumericalFailure : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace harnack
