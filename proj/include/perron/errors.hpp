#pragma once

#include <stdexcept>
#include <string>
#include <vector>

namespace perron {

/// Base class for all errors raised by this library.
class Error : public std::runtime_error {
 public:
  explicit Error(const std::string& what) : std::runtime_error(what) {}
};

/// Invalid data at construction time (negative coefficient, bad exponent,
/// duplicate index, ...).
class ValidationError : public Error {
 public:
  using Error::Error;
};

/// Mismatched vector/tensor dimensions or out-of-range slot.
class DimensionError : public Error {
 public:
  using Error::Error;
};

/// A solve was requested on a map whose system di-graph is not weakly
/// primitive.  Carries the cyclicity and, when the graph is not even
/// strongly connected, a witness component.
class NotPrimitiveError : public Error {
 public:
  NotPrimitiveError(const std::string& what, bool strongly_connected,
                    long cyclicity, std::vector<int> witness)
      : Error(what),
        strongly_connected(strongly_connected),
        cyclicity(cyclicity),
        witness(std::move(witness)) {}

  bool strongly_connected;
  long cyclicity;
  std::vector<int> witness;
};

/// power_solve was called on a map built in the non-monotone regime
/// (some p_j < d); use multi_start_solve instead.
class NonMonotoneError : public Error {
 public:
  using Error::Error;
};

/// Problem/report file could not be parsed.
class ParseError : public Error {
 public:
  using Error::Error;
};

}  // namespace perron
