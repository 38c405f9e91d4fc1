#pragma once

#include <stdexcept>
#include <string>

namespace coil {

/// Root of every exception thrown by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class InvalidConfigError : public Error {
 public:
  using Error::Error;
};

class BoundsError : public Error {
 public:
  using Error::Error;
};

class PreconditionError : public Error {
 public:
  using Error::Error;
};

class ShapeError : public Error {
 public:
  using Error::Error;
};

/// Raised when a GA evaluation callback fails; carries where it failed.
class EvaluationError : public Error {
 public:
  using Error::Error;
};

/// Every VAE training restart produced a non-finite loss.
class DivergenceError : public Error {
 public:
  using Error::Error;
};

/// A required on-disk artifact is missing and building it is disabled.
class MissingArtifactError : public Error {
 public:
  MissingArtifactError(const std::string& what, std::string path)
      : Error(what), path_(std::move(path)) {}
  const std::string& path() const noexcept { return path_; }

 private:
  std::string path_;
};

// I/O error classes. Each failure mode is a distinct type so callers can
// tell a tampered file from a truncated or foreign one.
class IoError : public Error {
 public:
  using Error::Error;
};

class HashMismatchError : public IoError {
 public:
  using IoError::IoError;
};

class SchemaVersionError : public IoError {
 public:
  using IoError::IoError;
};

class TruncatedFileError : public IoError {
 public:
  using IoError::IoError;
};

class FormatError : public IoError {
 public:
  using IoError::IoError;
};

}  // namespace coil
