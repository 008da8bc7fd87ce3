#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace setpair {

/// Invalid argument values (NaN coordinates, dimension mismatch, empty sets, ...).
class InputError : public std::runtime_error {
 public:
  explicit InputError(const std::string& what) : std::runtime_error(what) {}
};

/// A point lies outside the domain beyond tolerance.
class DomainError : public std::runtime_error {
 public:
  explicit DomainError(const std::string& what) : std::runtime_error(what) {}
};

/// An operation requiring a strict contraction received a map with lip >= 1.
class ContractViolation : public std::runtime_error {
 public:
  explicit ContractViolation(const std::string& what) : std::runtime_error(what) {}
};

/// Iteration budget exhausted or a numeric procedure failed to converge.
/// Carries the best partial value computed so far.
class NumericError : public std::runtime_error {
 public:
  NumericError(const std::string& what, double partial)
      : std::runtime_error(what), partial_(partial) {}
  double partial() const { return partial_; }

 private:
  double partial_;
};

/// A stated precondition does not hold (e.g. coincident fixed points).
class PreconditionError : public std::runtime_error {
 public:
  explicit PreconditionError(const std::string& what) : std::runtime_error(what) {}
};

/// An outcome the underlying theory excludes was observed; indicates a bug.
class InternalConsistencyError : public std::logic_error {
 public:
  explicit InternalConsistencyError(const std::string& what) : std::logic_error(what) {}
};

/// A constructive procedure could not complete (e.g. trajectory not reproducible).
class ConstructionError : public std::runtime_error {
 public:
  explicit ConstructionError(const std::string& what) : std::runtime_error(what) {}
};

/// A projection tie occurred while the branch rule forbids ties.
class TieError : public std::runtime_error {
 public:
  TieError(const std::string& what, std::size_t step)
      : std::runtime_error(what), step_(step) {}
  std::size_t step() const { return step_; }

 private:
  std::size_t step_;
};

}  // namespace setpair
