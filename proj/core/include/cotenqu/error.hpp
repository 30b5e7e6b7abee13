#pragma once

#include <stdexcept>
#include <cstddef>
#include <string>
#include <utility>

namespace cotenqu {

/// Base class for every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Register sizes outside the supported range.
class SizeError : public Error {
 public:
  using Error::Error;
};

/// Qubit indices out of range or repeated.
class IndexError : public Error {
 public:
  using Error::Error;
};

/// Bad scalar arguments (shots = 0, empty inputs, unknown classes...).
class ArgumentError : public Error {
 public:
  using Error::Error;
};

/// Values outside a function's mathematical domain.
class DomainError : public Error {
 public:
  using Error::Error;
};

/// Gate constructed with a missing or superfluous angle.
class ConstructionError : public Error {
 public:
  using Error::Error;
};

/// Feature dimension does not fit the qubit layout.
class LayoutError : public Error {
 public:
  using Error::Error;
};

/// Parameter vector length does not match the ansatz.
class ParameterError : public Error {
 public:
  using Error::Error;
};

/// Tensor shapes that do not chain.
class ShapeError : public Error {
 public:
  using Error::Error;
};

/// Malformed input file. `field()` names the offending header field.
class FormatError : public Error {
 public:
  FormatError(std::string field, const std::string& what)
      : Error(what), field_(std::move(field)) {}
  const std::string& field() const noexcept { return field_; }

 private:
  std::string field_;
};

/// Non-finite cost during training, with the position where it happened.
class TrainingError : public Error {
 public:
  TrainingError(std::size_t epoch, std::size_t sample, const std::string& what)
      : Error(what), epoch_(epoch), sample_(sample) {}
  std::size_t epoch() const noexcept { return epoch_; }
  std::size_t sample() const noexcept { return sample_; }

 private:
  std::size_t epoch_;
  std::size_t sample_;
};

/// Invalid run configuration.
class ConfigError : public Error {
 public:
  using Error::Error;
};

/// Checkpoint could not be loaded (corrupt, wrong version, bad dimensions).
class LoadError : public Error {
 public:
  using Error::Error;
};

}  // namespace cotenqu
