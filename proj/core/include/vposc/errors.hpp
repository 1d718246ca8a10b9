#pragma once

#include <stdexcept>
#include <string>

namespace vposc {

/// Base class of every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// A parameter lies outside its admissible range.
class InvalidArgument : public Error {
 public:
  using Error::Error;
};

/// The reduced potential never reached zero on the integration interval.
class NonCompactSupport : public Error {
 public:
  NonCompactSupport(const std::string& what, double r_max, double y_at_r_max)
      : Error(what), r_max_(r_max), y_at_r_max_(y_at_r_max) {}

  double r_max() const noexcept { return r_max_; }
  double y_at_r_max() const noexcept { return y_at_r_max_; }

 private:
  double r_max_;
  double y_at_r_max_;
};

/// Integrator blow-up, NaN energies, a particle pushed to negative radius.
class NumericalFailure : public Error {
 public:
  using Error::Error;
};

/// The phase-space function vanishes on the whole tiling box.
class EmptySupport : public Error {
 public:
  using Error::Error;
};

/// The analysed series does not oscillate above its noise floor.
class NoOscillation : public Error {
 public:
  using Error::Error;
};

/// Malformed file or config content.
class FormatError : public Error {
 public:
  using Error::Error;
};

}  // namespace vposc
