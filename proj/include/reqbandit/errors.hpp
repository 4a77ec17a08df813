#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace reqbandit {

// A declared bound (l, tau, s, c, dimension, reward range) is violated.
class BoundViolation : public std::runtime_error {
 public:
  BoundViolation(std::string field, const std::string& detail)
      : std::runtime_error("bound violation on '" + field + "': " + detail),
        field_(std::move(field)) {}
  const std::string& field() const noexcept { return field_; }

 private:
  std::string field_;
};

// N intersected with {0..L} is empty for some supported L.
class EmptyActionSpace : public std::runtime_error {
 public:
  explicit EmptyActionSpace(std::size_t arms)
      : std::runtime_error("no admissible selection count for a set of " +
                           std::to_string(arms) + " arms"),
        arms_(arms) {}
  std::size_t arms() const noexcept { return arms_; }

 private:
  std::size_t arms_;
};

class SchemaError : public std::runtime_error {
 public:
  SchemaError(std::size_t line, const std::string& detail)
      : std::runtime_error("line " + std::to_string(line) + ": " + detail), line_(line) {}
  std::size_t line() const noexcept { return line_; }

 private:
  std::size_t line_;
};

class EmptyCatalog : public std::runtime_error {
 public:
  EmptyCatalog() : std::runtime_error("catalog contains no arms") {}
};

class EnvelopeExceeded : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class GridBeyondHorizon : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class IoError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace reqbandit
