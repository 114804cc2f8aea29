#pragma once

#include <stdexcept>
#include <string>

namespace avs {

class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Action not applicable in the given state.
class LegalityError : public Error {
 public:
  using Error::Error;
};

// The planner cannot produce an action (e.g. the agent is boxed in).
class PlanningError : public Error {
 public:
  using Error::Error;
};

// No state is consistent with what the agent has observed.
class UnsatisfiableError : public Error {
 public:
  using Error::Error;
};

// Pose stage started from a belief that has not finished searching.
class StageOrderError : public Error {
 public:
  using Error::Error;
};

class ComparisonError : public Error {
 public:
  using Error::Error;
};

class ConfigError : public Error {
 public:
  using Error::Error;
};

class MapFormatError : public Error {
 public:
  MapFormatError(int line, const std::string& what)
      : Error("map line " + std::to_string(line) + ": " + what), line_(line) {}
  explicit MapFormatError(const std::string& what) : Error(what) {}

  int line() const noexcept { return line_; }

 private:
  int line_ = 0;
};

}  // namespace avs
