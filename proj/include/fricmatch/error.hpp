#pragma once

#include <stdexcept>
#include <string>

namespace fricmatch {

// Bad parameters, malformed files, violated preconditions.
class InvalidInput : public std::invalid_argument {
public:
  using std::invalid_argument::invalid_argument;
};

// An iterative solve stopped at its iteration cap. Carries the last sup-norm
// step so callers can decide whether to retry with more damping.
class NonConvergence : public std::runtime_error {
public:
  NonConvergence(const std::string& what, int iterations, double last_step)
      : std::runtime_error(what), iterations_(iterations), last_step_(last_step) {}

  int iterations() const noexcept { return iterations_; }
  double last_step() const noexcept { return last_step_; }

private:
  int iterations_;
  double last_step_;
};

// A quantity that is mathematically undefined for the given input
// (e.g. the median point of a uniform density).
class Degenerate : public std::domain_error {
public:
  using std::domain_error::domain_error;
};

}  // namespace fricmatch
