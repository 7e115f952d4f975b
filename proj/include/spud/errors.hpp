#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace spud {

class InvalidArgument : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// Raised when a pivot falls below the rank tolerance during a solve.
class SingularMatrix : public std::runtime_error {
 public:
  SingularMatrix(const std::string& what, double pivot)
      : std::runtime_error(what), pivot_(pivot) {}
  double pivot() const noexcept { return pivot_; }

 private:
  double pivot_;
};

/// Greedy could not assemble a full-rank coefficient matrix.
class RecoveryFailed : public std::runtime_error {
 public:
  RecoveryFailed(const std::string& what, std::size_t achieved_rank)
      : std::runtime_error(what), achieved_rank_(achieved_rank) {}
  std::size_t achieved_rank() const noexcept { return achieved_rank_; }

 private:
  std::size_t achieved_rank_;
};

class UnsupportedSize : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class IterationLimit : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class ParseError : public std::runtime_error {
 public:
  ParseError(const std::string& what, std::size_t line)
      : std::runtime_error(what + " (line " + std::to_string(line) + ")"), line_(line) {}
  std::size_t line() const noexcept { return line_; }

 private:
  std::size_t line_;
};

}  // namespace spud
