#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace semicyclic {

/// Input that violates a documented precondition or type invariant.
class InvalidInput : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// Operation requested for a norm/shape combination that is not implemented.
class UnsupportedCapability : public std::logic_error {
 public:
  using std::logic_error::logic_error;
};

/// An iterative geometric routine ran out of rounds.
class ConvergenceFailure : public std::runtime_error {
 public:
  ConvergenceFailure(const std::string& what, double last_gap)
      : std::runtime_error(what), last_gap_(last_gap) {}

  double last_gap() const noexcept { return last_gap_; }

 private:
  double last_gap_;
};

/// Rejection sampling could not place a point inside a region.
class SamplingFailure : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// An iterate left every region of the partition.
class ImageEscape : public std::runtime_error {
 public:
  ImageEscape(const std::string& what, std::size_t step)
      : std::runtime_error(what), step_(step) {}

  std::size_t step() const noexcept { return step_; }

 private:
  std::size_t step_;
};

}  // namespace semicyclic
