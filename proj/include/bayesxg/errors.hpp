#pragma once

#include <stdexcept>
#include <string>

namespace bayesxg {

/// Base class for all library errors.
class Error : public std::runtime_error {
public:
  explicit Error(const std::string& what) : std::runtime_error(what) {}
};

struct MissingFileError : Error {
  explicit MissingFileError(const std::string& path)
      : Error("missing file: " + path) {}
};

struct ParseError : Error {
  using Error::Error;
};

struct UnknownPlayerError : Error {
  explicit UnknownPlayerError(const std::string& name)
      : Error("player never appears in the data: " + name) {}
};

struct UnknownPositionError : Error {
  explicit UnknownPositionError(const std::string& label)
      : Error("unmapped position label: " + label) {}
};

struct OutOfBoundsError : Error {
  using Error::Error;
};

struct GoalLineShotError : Error {
  GoalLineShotError()
      : Error("shot on the goal line (x = 120) has no shot angle") {}
};

struct OutsideSupportError : Error {
  using Error::Error;
};

struct ConstantColumnError : Error {
  explicit ConstantColumnError(const std::string& column)
      : Error("design column has zero variance: " + column) {}
};

struct RankDeficientError : Error {
  using Error::Error;
};

struct ColumnMismatchError : Error {
  using Error::Error;
};

struct DimensionMismatchError : Error {
  using Error::Error;
};

struct LengthMismatchError : Error {
  using Error::Error;
};

struct GroupMismatchError : Error {
  using Error::Error;
};

struct EmptyGroupError : Error {
  using Error::Error;
};

struct MissingPlayerError : Error {
  explicit MissingPlayerError(const std::string& name)
      : Error("player not present in shot table: " + name) {}
};

struct InsufficientDrawsError : Error {
  using Error::Error;
};

struct NonFiniteGradientError : Error {
  using Error::Error;
};

}  // namespace bayesxg
