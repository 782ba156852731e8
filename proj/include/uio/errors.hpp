#pragma once

#include <stdexcept>
#include <string>

namespace uio {

/// Base class for every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Malformed arguments: wrong dimensions, non-finite entries, bad pole sets.
class InputError : public Error {
 public:
  using Error::Error;
};

/// E = 0, i.e. there is no unknown input to decouple.
class DegenerateInputError : public InputError {
 public:
  using InputError::InputError;
};

/// A linear (matrix) equation has no unique solution.
class SingularError : public Error {
 public:
  using Error::Error;
};

/// An iterative scheme hit its iteration cap.
class ConvergenceError : public Error {
 public:
  using Error::Error;
};

/// The existence conditions for an unknown input observer do not hold.
class NoUioError : public Error {
 public:
  NoUioError(const std::string& what, int rank_ce, int rank_e)
      : Error(what), rank_ce_(rank_ce), rank_e_(rank_e) {}

  int rank_ce() const { return rank_ce_; }
  int rank_e() const { return rank_e_; }

 private:
  int rank_ce_;
  int rank_e_;
};

/// (A, B) has an uncontrollable mode with Re >= 0.
class NotStabilizableError : public Error {
 public:
  using Error::Error;
};

/// The simulation produced a non-finite state.
class InstabilityError : public Error {
 public:
  InstabilityError(const std::string& what, double time)
      : Error(what), time_(time) {}

  /// First sample time at which a non-finite value appeared.
  double time() const { return time_; }

 private:
  double time_;
};

}  // namespace uio
