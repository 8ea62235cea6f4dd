#pragma once

#include <stdexcept>
#include <string>

namespace contigforge {

/// Base class for every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Configuration rejected before a run starts (bad grid size, even k, t < k, ...).
class ConfigError : public Error {
 public:
  using Error::Error;
};

class NonSquareGrid : public ConfigError {
 public:
  using ConfigError::ConfigError;
};

class ParseError : public Error {
 public:
  using Error::Error;
};

/// A sequence contains a symbol outside {A,C,G,T}.
class AlphabetError : public Error {
 public:
  using Error::Error;
};

class OutOfBounds : public Error {
 public:
  using Error::Error;
};

class DimensionMismatch : public Error {
 public:
  using Error::Error;
};

class LengthMismatch : public Error {
 public:
  using Error::Error;
};

class KTooLarge : public Error {
 public:
  using Error::Error;
};

/// Transitive reduction did not reach a fixpoint within the iteration cap.
class NonConvergence : public Error {
 public:
  using Error::Error;
};

class UnassignedRead : public Error {
 public:
  using Error::Error;
};

/// Both endpoints of an edge resolved to different destination ranks.
class InconsistentAssignment : public Error {
 public:
  using Error::Error;
};

/// A local walk revisited a vertex without closing at a root.
class BrokenChain : public Error {
 public:
  using Error::Error;
};

/// Wraps any error thrown by a pipeline stage with the stage name.
class StageError : public Error {
 public:
  StageError(const std::string& stage, const std::string& what)
      : Error("stage '" + stage + "': " + what), stage_(stage) {}

  const std::string& stage() const { return stage_; }

 private:
  std::string stage_;
};

}  // namespace contigforge
