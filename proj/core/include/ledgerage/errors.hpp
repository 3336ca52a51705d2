#pragma once

#include <stdexcept>
#include <string>

namespace ledgerage {

class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Argument outside the mathematical domain of an operation.
class DomainError : public Error {
 public:
  using Error::Error;
};

class ConvergenceError : public Error {
 public:
  ConvergenceError(const std::string& what, double last_term)
      : Error(what), last_term_(last_term) {}
  double last_term() const noexcept { return last_term_; }

 private:
  double last_term_;
};

class NumericError : public Error {
 public:
  NumericError(const std::string& what, double error_estimate)
      : Error(what), error_estimate_(error_estimate) {}
  double error_estimate() const noexcept { return error_estimate_; }

 private:
  double error_estimate_;
};

class SingularityError : public Error {
 public:
  using Error::Error;
};

class DegenerateTraceError : public Error {
 public:
  using Error::Error;
};

class NotFoundError : public Error {
 public:
  using Error::Error;
};

class InfiniteLatencyError : public Error {
 public:
  using Error::Error;
};

class InsufficientDataError : public Error {
 public:
  using Error::Error;
};

class RunawayError : public Error {
 public:
  using Error::Error;
};

}  // namespace ledgerage
