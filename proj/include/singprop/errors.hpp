#pragma once

#include <stdexcept>

namespace singprop {

// Numerical failure inside an algorithm: corrector divergence, degenerate
// geometry, failed sampling. The message carries the diagnostic.
struct NumericError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Scenario text could not be parsed.
struct ParseError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Filesystem failure while emitting reports.
struct IoError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

}  // namespace singprop
