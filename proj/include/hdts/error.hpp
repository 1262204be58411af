#pragma once

#include <stdexcept>
#include <string>

namespace hdts {

/// Error categories raised by the library. The CLI maps each kind to an
/// exit code: data problems (bad input, shapes, files) exit 2, numerical
/// failures (degenerate spectra, singular systems) exit 3.
enum class ErrorKind {
  InvalidData,
  LagOutOfRange,
  DegenerateColumn,
  InvalidThreshold,
  BandwidthUndefined,
  ShapeError,
  NotSymmetric,
  DegenerateSpectrum,
  SingularMatrix,
  RankDeficientPencil,
  DimensionTooSmall,
  SingularDesign,
  InvalidPair,
  InvalidCoefficients,
  InvalidRanks,
  DegenerateXi,
  RefinementSingular,
  DataError,
  NumericalFailure,
  InvalidArgument,
};

class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& message)
      : std::runtime_error(message), kind_(kind) {}

  ErrorKind kind() const noexcept { return kind_; }

  /// True for errors caused by malformed or out-of-contract input
  /// (as opposed to numerical breakdown on valid input).
  bool is_data_error() const noexcept {
    switch (kind_) {
      case ErrorKind::InvalidData:
      case ErrorKind::LagOutOfRange:
      case ErrorKind::InvalidThreshold:
      case ErrorKind::ShapeError:
      case ErrorKind::DimensionTooSmall:
      case ErrorKind::InvalidPair:
      case ErrorKind::InvalidCoefficients:
      case ErrorKind::InvalidRanks:
      case ErrorKind::DataError:
      case ErrorKind::InvalidArgument:
        return true;
      default:
        return false;
    }
  }

 private:
  ErrorKind kind_;
};

[[noreturn]] inline void fail(ErrorKind kind, const std::string& message) {
  throw Error(kind, message);
}

}  // namespace hdts
