#pragma once

#include <stdexcept>
#include <string>

namespace sensel {

/// Operand shapes do not agree (vector length, matrix rows/cols, horizon).
class DimensionError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// A factorization failed or a covariance left the PSD cone beyond tolerance.
class NumericalError : public std::runtime_error {
 public:
  NumericalError(const std::string& what, double condition_estimate)
      : std::runtime_error(what), condition_estimate_(condition_estimate) {}

  double condition_estimate() const noexcept { return condition_estimate_; }

 private:
  double condition_estimate_;
};

/// An exhaustive search would visit more nodes than the enumeration guard.
class SearchSpaceError : public std::length_error {
 public:
  SearchSpaceError(const std::string& what, double size)
      : std::length_error(what), size_(size) {}

  /// The refused search size (N^K or N^d), as a double since it may overflow.
  double size() const noexcept { return size_; }

 private:
  double size_;
};

/// Malformed scenario or schedule file.
class FormatError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// File could not be opened, read, or written.
class IoError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Sensor index outside [1, N], or time index outside the horizon.
class IndexError : public std::out_of_range {
 public:
  using std::out_of_range::out_of_range;
};

}  // namespace sensel
