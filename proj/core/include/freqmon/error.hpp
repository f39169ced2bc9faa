#pragma once

#include <stdexcept>
#include <string>

namespace freqmon {

/// Bad input: unknown symbols, malformed documents, out-of-range positions.
class ValidationError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// A counter monitor reached a (location, event, valuation) with zero or
/// several enabled edges.
class DeterminismError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Broken internal invariant (e.g. a singular stationary system).
class InternalError : public std::logic_error {
 public:
  using std::logic_error::logic_error;
};

}  // namespace freqmon
