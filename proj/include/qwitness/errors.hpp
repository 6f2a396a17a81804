#pragma once

#include <stdexcept>
#include <string>

namespace qwitness {

/// Root of every error thrown by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// An error that carries the numerical margin by which a check failed.
class MarginError : public Error {
 public:
  MarginError(const std::string& what, double margin) : Error(what), margin_(margin) {}
  double margin() const noexcept { return margin_; }

 private:
  double margin_;
};

class DimensionError : public Error {
 public:
  using Error::Error;
};

class CapacityError : public Error {
 public:
  using Error::Error;
};

/// Malformed or non-finite input.
class InvalidInput : public Error {
 public:
  using Error::Error;
};

class HermiticityError : public MarginError {
 public:
  using MarginError::MarginError;
};

class TraceError : public MarginError {
 public:
  using MarginError::MarginError;
};

class PositivityError : public MarginError {
 public:
  using MarginError::MarginError;
};

class ConvergenceError : public Error {
 public:
  ConvergenceError(const std::string& what, int iterations)
      : Error(what), iterations_(iterations) {}
  int iterations() const noexcept { return iterations_; }

 private:
  int iterations_;
};

/// Overlap |<psi1|psi2>| sits on 0 or 1 where the first-order analysis does not apply.
class BoundaryError : public Error {
 public:
  using Error::Error;
};

class DegenerateDenominator : public Error {
 public:
  using Error::Error;
};

class PreconditionError : public Error {
 public:
  using Error::Error;
};

class ProjectorError : public Error {
 public:
  using Error::Error;
};

class CommutingInputs : public Error {
 public:
  using Error::Error;
};

class DegenerateSpectrum : public Error {
 public:
  using Error::Error;
};

class ConditionUnreachable : public Error {
 public:
  using Error::Error;
};

/// Two independent evaluation routes disagree; points at an index-convention bug.
class AgreementError : public MarginError {
 public:
  using MarginError::MarginError;
};

class UnresolvableError : public Error {
 public:
  using Error::Error;
};

/// A measurement outcome with zero probability has no conditional state.
class NullOutcome : public Error {
 public:
  using Error::Error;
};

}  // namespace qwitness
