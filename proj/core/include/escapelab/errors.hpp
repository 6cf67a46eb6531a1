#pragma once

#include <stdexcept>

namespace escapelab {

// An iterative solver ran past its iteration budget.
class NonConvergenceError : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

// A symbolic return-time lookup ran off the end of the precomputed
// a-sequence; the caller needs a longer sequence.
class TowerDepthError : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

// Fewer usable points than a regression needs.
class InsufficientDataError : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

// A log-scale fit met a value <= 0 inside its window.
class NonPositiveValueError : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

// Experiment configuration diagnostics (file, key and reason in the message).
class ConfigError : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

}  // namespace escapelab
