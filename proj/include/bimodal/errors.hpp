#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace bimodal {

class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Parameters outside their documented domain (bad switch window, T too small, ...).
class InvalidParams : public Error {
 public:
  using Error::Error;
};

/// The fixed-step integrator lost pairwise unitarity beyond the configured tolerance.
class ConvergenceError : public Error {
 public:
  ConvergenceError(const std::string& what, double achieved_defect)
      : Error(what), achieved_defect_(achieved_defect) {}
  double achieved_defect() const noexcept { return achieved_defect_; }

 private:
  double achieved_defect_;
};

class FitError : public Error {
 public:
  using Error::Error;
};

class IoError : public Error {
 public:
  using Error::Error;
};

/// Malformed trace input; `line()` is 1-based.
class ParseError : public IoError {
 public:
  ParseError(const std::string& what, std::size_t line)
      : IoError("line " + std::to_string(line) + ": " + what), line_(line) {}
  std::size_t line() const noexcept { return line_; }

 private:
  std::size_t line_;
};

}  // namespace bimodal
