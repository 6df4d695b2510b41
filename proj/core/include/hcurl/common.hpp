#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

namespace hcurl {

using Index = std::int32_t;
using Vector = std::vector<double>;

inline constexpr Index kNoIndex = -1;

/// Base class for every error raised by the library.
class Error : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

class DimensionMismatch : public Error {
public:
  using Error::Error;
};

class ParseError : public Error {
public:
  using Error::Error;
};

/// Raised when a Cholesky pivot is not positive. `pivot()` is the row in the
/// caller's (unpermuted) numbering.
class FactorizationBreakdown : public Error {
public:
  FactorizationBreakdown(const std::string& what, Index pivot)
      : Error(what), pivot_(pivot) {}
  Index pivot() const noexcept { return pivot_; }

private:
  Index pivot_;
};

} // namespace hcurl
