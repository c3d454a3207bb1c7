#pragma once

#include <stdexcept>
#include <string>

namespace aalenfic {

// Error taxonomy mirrors the CLI exit codes and the C API status values:
// validation/parse -> 2, singular matrix -> 3, no feasible candidate -> 4.

class ValidationError : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

class ParseError : public ValidationError {
public:
  ParseError(const std::string& what, long row) : ValidationError(what), row_(row) {}
  long row() const { return row_; }

private:
  long row_;
};

// Thrown when G_n (or one of its blocks) fails the condition test at some
// grid time; carries the offending time.
class SingularityError : public std::runtime_error {
public:
  SingularityError(const std::string& what, double time)
      : std::runtime_error(what), time_(time) {}
  double time() const { return time_; }

private:
  double time_;
};

class InfeasibleError : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

class QuadratureError : public std::runtime_error {
public:
  QuadratureError(const std::string& what, double achieved)
      : std::runtime_error(what), achieved_(achieved) {}
  double achieved_tolerance() const { return achieved_; }

private:
  double achieved_;
};

}  // namespace aalenfic
