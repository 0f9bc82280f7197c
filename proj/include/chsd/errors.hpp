#pragma once

#include <stdexcept>
#include <string>

namespace chsd {

/// Root of every error thrown by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Bad user input: malformed configuration, invalid mesh parameters.
/// The CLI maps these to exit code 2.
class InputError : public Error {
 public:
  using Error::Error;
};

/// A numerical solve failed. The CLI maps these to exit code 3.
class SolverError : public Error {
 public:
  using Error::Error;
};

class MisalignedSplit : public InputError {
 public:
  using InputError::InputError;
};

class DegenerateBox : public InputError {
 public:
  using InputError::InputError;
};

class UnsupportedDegree : public InputError {
 public:
  using InputError::InputError;
};

class MeshMismatch : public Error {
 public:
  using Error::Error;
};

class ArityMismatch : public Error {
 public:
  using Error::Error;
};

class DimensionMismatch : public Error {
 public:
  using Error::Error;
};

class SingularMatrix : public SolverError {
 public:
  using SolverError::SolverError;
};

class SingularSystem : public SolverError {
 public:
  using SolverError::SolverError;
};

class SingularMass : public SolverError {
 public:
  using SolverError::SolverError;
};

class NewtonDiverged : public SolverError {
 public:
  using SolverError::SolverError;
};

class NonFiniteState : public SolverError {
 public:
  using SolverError::SolverError;
};

class ProjectionFailed : public SolverError {
 public:
  using SolverError::SolverError;
};

class NotMeanZero : public Error {
 public:
  using Error::Error;
};

class ZeroField : public Error {
 public:
  using Error::Error;
};

class ParseError : public InputError {
 public:
  ParseError(int line, const std::string& reason)
      : InputError("line " + std::to_string(line) + ": " + reason), line_(line) {}
  int line() const { return line_; }

 private:
  int line_;
};

class ValidationError : public InputError {
 public:
  ValidationError(std::string key, const std::string& constraint)
      : InputError(key + ": " + constraint), key_(std::move(key)) {}
  const std::string& key() const { return key_; }

 private:
  std::string key_;
};

class IoError : public Error {
 public:
  using Error::Error;
};

}  // namespace chsd
