#pragma once

#include <stdexcept>
#include <string>

namespace crosslink {

/// Raised when input data is malformed or violates a precondition that
/// depends on the data itself (unknown id, duplicate id, empty graph...).
class DataError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Raised for invalid caller-supplied options (bad parameter values,
/// unknown algorithm names, out-of-range percentiles).
class UsageError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

}  // namespace crosslink
