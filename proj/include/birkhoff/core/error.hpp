#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>

namespace birkhoff {

/// Base class for every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// A caller violated an operation's documented precondition.
class PreconditionError : public Error {
 public:
  using Error::Error;
};

/// The numerical state is no longer meaningful (non-finite entries, an
/// infeasible Gibbs block, ...). Not recoverable by retrying.
class CorruptedStateError : public Error {
 public:
  using Error::Error;
};

/// An iterative routine stopped before reaching its tolerance.
class ConvergenceError : public Error {
 public:
  ConvergenceError(const std::string& what, double final_violation, std::uint64_t iterations)
      : Error(what), final_violation_(final_violation), iterations_(iterations) {}

  double final_violation() const noexcept { return final_violation_; }
  std::uint64_t iterations() const noexcept { return iterations_; }

 private:
  double final_violation_;
  std::uint64_t iterations_;
};

/// A rejection sampler exhausted its proposal budget.
class ProposalCapError : public Error {
 public:
  ProposalCapError(const std::string& what, std::uint64_t cap, std::uint64_t accepted)
      : Error(what), cap_(cap), accepted_(accepted) {}

  std::uint64_t cap() const noexcept { return cap_; }
  std::uint64_t accepted() const noexcept { return accepted_; }

 private:
  std::uint64_t cap_;
  std::uint64_t accepted_;
};

}  // namespace birkhoff
