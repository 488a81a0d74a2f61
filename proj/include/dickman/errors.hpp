#pragma once

#include <stdexcept>
#include <string>

namespace dickman {

// Parameter-domain violations (theta <= 0, empty schedules, bad weights, ...).
class domain_error : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

// Request exceeds what the implementation can represent or afford
// (iterated-log tower past double range, sieve allocation past budget, ...).
class capability_error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Tolerance not reached within the configured budget; carries the error
// actually achieved so callers can decide whether to accept the result.
class accuracy_error : public std::runtime_error {
 public:
  accuracy_error(const std::string& what, double achieved)
      : std::runtime_error(what), achieved_(achieved) {}
  double achieved() const { return achieved_; }

 private:
  double achieved_;
};

}  // namespace dickman
